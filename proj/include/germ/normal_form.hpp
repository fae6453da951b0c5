#ifndef GERM_NORMAL_FORM_HPP
#define GERM_NORMAL_FORM_HPP

// Normal form x - alpha x^{r+1} + beta x^{2r+1} of a formal change of
// variable, computed by successive elementary conjugations, plus the
// conjugacy test and the iteration asymptotics the normal form predicts.

#include <algorithm>
#include <cmath>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "germ/error.hpp"
#include "germ/field.hpp"
#include "germ/series.hpp"

namespace germ {

template <class Field>
struct NormalForm {
  using value_type = typename Field::value_type;

  int r;
  value_type alpha;
  /// Zero by convention when the x^{2r+1} term lies beyond the precision.
  value_type beta;
  /// True iff 2r + 1 <= N.
  bool beta_significant;
  /// g with conjugate(f, g) == normalized.
  TruncSeries<Field> conjugator;
  TruncSeries<Field> normalized;
};

/// The canonical representative x - alpha x^{r+1} + beta x^{2r+1} at precision N.
template <class Field>
TruncSeries<Field> normal_form_series(const Field& field, int precision, int r,
                                      const typename Field::value_type& alpha,
                                      const typename Field::value_type& beta) {
  auto f = TruncSeries<Field>::identity(field, precision);
  if (r + 1 <= precision) f.set_coeff(r + 1, -alpha);
  if (2 * r + 1 <= precision) f.set_coeff(2 * r + 1, beta);
  return f;
}

/// Throws UnsupportedPrecision when the field has characteristic p and N > p + 2.
template <class Field>
void check_normal_form_precision(const TruncSeries<Field>& f) {
  const auto p = static_cast<long long>(f.field().characteristic());
  if (p != 0 && f.precision() > p + 2) {
    throw Error(ErrorKind::UnsupportedPrecision,
                "precision " + std::to_string(f.precision()) + " exceeds p+2 = " + std::to_string(p + 2) +
                    " over F_" + std::to_string(p));
  }
}

/// One elimination step: conjugates h = x - alpha x^{r+1} + ... by
/// g = x + c x^s with c = b / (alpha (r + 1 - s)), where b is the current
/// coefficient of x^{r+s}. Returns (g, g^{-1} o h o g). Requires s != r + 1
/// and r + 1 - s invertible in the field.
template <class Field>
std::pair<TruncSeries<Field>, TruncSeries<Field>> eliminate_term(const TruncSeries<Field>& h, int r,
                                                                 const typename Field::value_type& alpha,
                                                                 int s) {
  const auto& field = h.field();
  const auto divisor = alpha * field.from_int(r + 1 - s);
  const auto c = h.coeff(r + s) / divisor;
  auto g = TruncSeries<Field>::elementary(field, h.precision(), s, c);
  auto next = conjugate(h, g);
  return {std::move(g), std::move(next)};
}

/// Successive-approximation normal form. Returns nullopt for the identity.
///
/// For s = 2, 3, ..., N - r (skipping s = r + 1) the x^{r+s} term is cleared
/// by an elementary conjugation; the coefficient left at degree 2r + 1 is
/// beta. Each step is checked not to disturb lower degrees.
template <class Field>
std::optional<NormalForm<Field>> takens_normal_form(const TruncSeries<Field>& f) {
  check_normal_form_precision(f);
  const auto val = valuation_data(f);
  if (!val) return std::nullopt;

  const int n = f.precision();
  const int r = val->r;
  const auto& alpha = val->alpha;
  const auto& field = f.field();

  auto h = f;
  auto conjugator = TruncSeries<Field>::identity(field, n);
  for (int s = 2; s <= n - r; ++s) {
    if (s == r + 1) continue;
    if (is_zero(h.coeff(r + s))) continue;
    auto [g, next] = eliminate_term(h, r, alpha, s);
    if (!(next.coeff(r + 1) == -alpha)) throw std::logic_error("elimination changed the leading term");
    for (int d = r + 2; d <= r + s; ++d) {
      if (d != 2 * r + 1 && !is_zero(next.coeff(d))) {
        throw std::logic_error("elimination step s=" + std::to_string(s) + " left degree " + std::to_string(d));
      }
    }
    h = std::move(next);
    conjugator = compose(conjugator, g);
  }

  const bool beta_significant = 2 * r + 1 <= n;
  auto beta = beta_significant ? h.coeff(2 * r + 1) : field.zero();
  if (!(h == normal_form_series(field, n, r, alpha, beta))) {
    throw std::logic_error("elimination did not reach the normal form");
  }
  return NormalForm<Field>{r, alpha, std::move(beta), beta_significant, std::move(conjugator), std::move(h)};
}

template <class Field>
struct ConjugacyResult {
  bool conjugate;
  /// w with conjugate(f1, w) == f2; present iff `conjugate`.
  std::optional<TruncSeries<Field>> witness;
};

/// Decides whether f2 = w^{-1} o f1 o w for some w, and returns a verified w.
template <class Field>
ConjugacyResult<Field> is_conjugate(const TruncSeries<Field>& f1, const TruncSeries<Field>& f2) {
  detail::check_compatible(f1, f2);
  const auto nf1 = takens_normal_form(f1);
  const auto nf2 = takens_normal_form(f2);
  if (!nf1 || !nf2) {
    if (nf1 || nf2) return {false, std::nullopt};
    return {true, TruncSeries<Field>::identity(f1.field(), f1.precision())};
  }
  if (nf1->r != nf2->r || !(nf1->alpha == nf2->alpha) || !(nf1->beta == nf2->beta)) {
    return {false, std::nullopt};
  }
  auto witness = compose(nf1->conjugator, invert(nf2->conjugator));
  if (!(conjugate(f1, witness) == f2)) throw std::logic_error("conjugacy witness failed verification");
  return {true, std::move(witness)};
}

/// x_n ~ C n^{-b} (1 + gamma log(n)/n + ...), with C = (alpha r)^{-1/r}.
struct AsymptoticPrediction {
  Rational b;
  /// C = c_base^{-1/c_root}, kept exact.
  Rational c_base;
  int c_root;
  double c_value;
  /// Absent when beta was truncated away.
  std::optional<Rational> gamma;
  int r;
  /// Exponents j/r (stored as j) of the n^{-j/r} correction terms a fit of
  /// x_n / (C n^{-b}) - 1 must carry besides log(n)/n. Always contains r
  /// (the 1/n term, which depends on x_0); when the normalizing conjugator
  /// has a term of degree k <= r, the terms n^{-j/r}, j = k-1 .. r+k-1,
  /// appear too.
  std::vector<int> correction_orders;
  /// Present alongside the fractional terms: j for a log(n) n^{-j/r} term.
  std::optional<int> log_correction_order;
};

inline AsymptoticPrediction predicted_asymptotics(const NormalForm<Rationals>& nf) {
  if (nf.alpha.sign() <= 0) {
    throw Error(ErrorKind::NegativeAlpha, "alpha = " + nf.alpha.to_string() + " is not positive");
  }
  AsymptoticPrediction out;
  out.r = nf.r;
  out.b = Rational(1) / Rational(nf.r);
  out.c_base = nf.alpha * Rational(nf.r);
  out.c_root = nf.r;
  out.c_value = std::pow(out.c_base.to_double(), -1.0 / nf.r);
  if (nf.beta_significant) {
    const Rational r2 = Rational(nf.r) * Rational(nf.r);
    out.gamma = (nf.beta / (nf.alpha * nf.alpha) - Rational(nf.r + 1) / Rational(2)) / r2;
  }

  int lowest = 0;
  for (int k = 2; k <= std::min(nf.r, nf.conjugator.precision()); ++k) {
    if (!nf.conjugator.coeff(k).is_zero()) {
      lowest = k;
      break;
    }
  }
  if (lowest == 0) {
    out.correction_orders = {nf.r};
  } else {
    for (int j = lowest - 1; j <= nf.r + lowest - 1; ++j) out.correction_orders.push_back(j);
    out.log_correction_order = nf.r + lowest - 1;
  }
  return out;
}

}  // namespace germ

#endif  // GERM_NORMAL_FORM_HPP
