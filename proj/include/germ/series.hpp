#ifndef GERM_SERIES_HPP
#define GERM_SERIES_HPP

// Truncated formal changes of variable x + a_2 x^2 + ... + a_N x^N, taken
// modulo x^{N+1}, under composition.

#include <cstdint>
#include <optional>
#include <span>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "germ/error.hpp"
#include "germ/field.hpp"

namespace germ {

/// Group element x + a_2 x^2 + ... + a_N x^N over `Field`, N = precision.
///
/// The linear coefficient is fixed to 1 and the constant term to 0 by
/// construction; only a_2..a_N are stored.
template <class Field>
class TruncSeries {
 public:
  using field_type = Field;
  using value_type = typename Field::value_type;

  /// The identity x at precision `precision` (>= 1).
  TruncSeries(Field field, int precision)
      : field_(std::move(field)), precision_(precision) {
    if (precision < 1) throw Error(ErrorKind::PrecisionMismatch, "precision must be >= 1");
    coeffs_.assign(static_cast<std::size_t>(precision - 1), field_.zero());
  }

  /// From the coefficients a_2..a_N; precision is 1 + coeffs.size().
  TruncSeries(Field field, std::vector<value_type> coeffs)
      : field_(std::move(field)), precision_(static_cast<int>(coeffs.size()) + 1), coeffs_(std::move(coeffs)) {
    const auto probe = field_.zero();
    for (const auto& c : coeffs_) (void)(c == probe);  // FieldMismatch on foreign elements
  }

  static TruncSeries identity(Field field, int precision) { return TruncSeries(std::move(field), precision); }

  /// x + c x^degree, the elementary change of variable.
  static TruncSeries elementary(Field field, int precision, int degree, value_type c) {
    TruncSeries g(std::move(field), precision);
    if (degree <= precision) g.set_coeff(degree, std::move(c));
    return g;
  }

  const Field& field() const noexcept { return field_; }
  int precision() const noexcept { return precision_; }

  /// Coefficient of x^degree for 0 <= degree <= N.
  value_type coeff(int degree) const {
    if (degree == 0) return field_.zero();
    if (degree == 1) return field_.one();
    if (degree < 0 || degree > precision_) {
      throw Error(ErrorKind::OutOfRange, "degree " + std::to_string(degree) + " outside [0, N]");
    }
    return coeffs_[static_cast<std::size_t>(degree - 2)];
  }

  void set_coeff(int degree, value_type value) {
    if (degree < 2 || degree > precision_) {
      throw Error(ErrorKind::OutOfRange, "only degrees 2..N are free coefficients");
    }
    coeffs_[static_cast<std::size_t>(degree - 2)] = std::move(value);
  }

  /// a_2..a_N.
  std::span<const value_type> higher_coeffs() const noexcept { return coeffs_; }

  bool is_identity() const {
    for (const auto& c : coeffs_) {
      if (!is_zero(c)) return false;
    }
    return true;
  }

  /// Dense coefficients of degrees 0..N.
  std::vector<value_type> dense() const {
    std::vector<value_type> out;
    out.reserve(static_cast<std::size_t>(precision_) + 1);
    out.push_back(field_.zero());
    out.push_back(field_.one());
    out.insert(out.end(), coeffs_.begin(), coeffs_.end());
    return out;
  }

  friend bool operator==(const TruncSeries& a, const TruncSeries& b) {
    return a.field_ == b.field_ && a.precision_ == b.precision_ && a.coeffs_ == b.coeffs_;
  }

 private:
  Field field_;
  int precision_;
  std::vector<value_type> coeffs_;
};

/// Lowest nontrivial term: f(x) = x - alpha x^{r+1} + O(x^{r+2}).
template <class Value>
struct Valuation {
  int r;
  Value alpha;

  friend bool operator==(const Valuation&, const Valuation&) = default;
};

namespace detail {

template <class Field>
void check_compatible(const TruncSeries<Field>& f, const TruncSeries<Field>& g) {
  if (!(f.field() == g.field())) {
    throw Error(ErrorKind::FieldMismatch, f.field().name() + " vs " + g.field().name());
  }
  if (f.precision() != g.precision()) {
    throw Error(ErrorKind::PrecisionMismatch,
                std::to_string(f.precision()) + " vs " + std::to_string(g.precision()));
  }
}

// a * b truncated to degree <= n; both inputs dense.
template <class Value>
std::vector<Value> mul_trunc(const std::vector<Value>& a, const std::vector<Value>& b, int n, const Value& zero) {
  std::vector<Value> out(static_cast<std::size_t>(n) + 1, zero);
  for (std::size_t i = 0; i < a.size() && static_cast<int>(i) <= n; ++i) {
    if (is_zero(a[i])) continue;
    for (std::size_t j = 0; j < b.size() && static_cast<int>(i + j) <= n; ++j) {
      if (is_zero(b[j])) continue;
      out[i + j] += a[i] * b[j];
    }
  }
  return out;
}

}  // namespace detail

/// f(g(x)) mod x^{N+1}, by Horner's scheme over truncated products.
template <class Field>
TruncSeries<Field> compose(const TruncSeries<Field>& f, const TruncSeries<Field>& g) {
  detail::check_compatible(f, g);
  const int n = f.precision();
  const auto zero = f.field().zero();
  const auto fa = f.dense();
  const auto gd = g.dense();

  std::vector<typename Field::value_type> acc{fa[static_cast<std::size_t>(n)]};
  for (int d = n - 1; d >= 0; --d) {
    acc = detail::mul_trunc(acc, gd, n, zero);
    acc[0] += fa[static_cast<std::size_t>(d)];
  }
  return TruncSeries<Field>(f.field(), std::vector(acc.begin() + 2, acc.end()));
}

/// Compositional inverse, solved one degree at a time.
///
/// With g correct through degree d-1 and g_d = 0, the coefficient of x^d in
/// f(g(x)) is g_d + (terms in g_2..g_{d-1}); setting g_d to minus that value
/// clears degree d without disturbing lower degrees.
template <class Field>
TruncSeries<Field> invert(const TruncSeries<Field>& f) {
  auto g = TruncSeries<Field>::identity(f.field(), f.precision());
  for (int d = 2; d <= f.precision(); ++d) {
    const auto h = compose(f, g);
    g.set_coeff(d, -h.coeff(d));
  }
  return g;
}

/// g^{-1} o f o g.
template <class Field>
TruncSeries<Field> conjugate(const TruncSeries<Field>& f, const TruncSeries<Field>& g) {
  detail::check_compatible(f, g);
  return compose(invert(g), compose(f, g));
}

/// (r, alpha) from the lowest nonzero a_j, j >= 2; nullopt when f is the
/// identity modulo x^{N+1} (flat at this precision).
template <class Field>
std::optional<Valuation<typename Field::value_type>> valuation_data(const TruncSeries<Field>& f) {
  for (int j = 2; j <= f.precision(); ++j) {
    auto a = f.coeff(j);
    if (!is_zero(a)) return Valuation<typename Field::value_type>{j - 1, -a};
  }
  return std::nullopt;
}

/// k-fold composite by repeated squaring.
template <class Field>
TruncSeries<Field> power_compose(const TruncSeries<Field>& f, std::uint64_t k) {
  auto result = TruncSeries<Field>::identity(f.field(), f.precision());
  auto base = f;
  while (k > 0) {
    if (k & 1U) result = compose(result, base);
    k >>= 1U;
    if (k > 0) base = compose(base, base);
  }
  return result;
}

/// Reduce to precision m <= N.
template <class Field>
TruncSeries<Field> truncate(const TruncSeries<Field>& f, int m) {
  if (m < 1 || m > f.precision()) throw Error(ErrorKind::PrecisionMismatch, "cannot truncate upward");
  const auto c = f.higher_coeffs();
  return TruncSeries<Field>(f.field(), std::vector(c.begin(), c.begin() + (m - 1)));
}

/// Comma-separated a_2,...,a_N; the empty string is the identity at N = 1.
template <class Field>
TruncSeries<Field> parse_series(std::string_view text, const Field& field) {
  std::vector<typename Field::value_type> coeffs;
  if (text.empty()) return TruncSeries<Field>(field, std::move(coeffs));
  std::size_t pos = 0;
  while (true) {
    const auto comma = text.find(',', pos);
    auto token = text.substr(pos, comma == std::string_view::npos ? std::string_view::npos : comma - pos);
    std::size_t start = pos;
    while (!token.empty() && token.front() == ' ') {
      token.remove_prefix(1);
      ++start;
    }
    while (!token.empty() && token.back() == ' ') token.remove_suffix(1);
    if (token.empty()) throw ParseError(start, "empty coefficient");
    coeffs.push_back(field.parse(token, start));
    if (comma == std::string_view::npos) break;
    pos = comma + 1;
  }
  return TruncSeries<Field>(field, std::move(coeffs));
}

template <class Field>
std::string format_series(const TruncSeries<Field>& f) {
  std::string out;
  bool first = true;
  for (const auto& c : f.higher_coeffs()) {
    if (!first) out += ',';
    out += f.field().format(c);
    first = false;
  }
  return out;
}

/// Human-readable polynomial, e.g. "x - 1/6*x^3 + 1/120*x^5".
template <class Field>
std::string to_polynomial_string(const TruncSeries<Field>& f) {
  std::ostringstream os;
  os << "x";
  for (int d = 2; d <= f.precision(); ++d) {
    const auto c = f.coeff(d);
    if (is_zero(c)) continue;
    std::string s = f.field().format(c);
    if (s.front() == '-') {
      os << " - ";
      s.erase(0, 1);
    } else {
      os << " + ";
    }
    if (s != "1") os << s << '*';
    os << "x^" << d;
  }
  os << " + O(x^" << f.precision() + 1 << ")";
  return os.str();
}

}  // namespace germ

#endif  // GERM_SERIES_HPP
