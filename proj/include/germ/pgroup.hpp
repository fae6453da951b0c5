#ifndef GERM_PGROUP_HPP
#define GERM_PGROUP_HPP

// The finite p-group G_p(F_p): polynomials x + a_2 x^2 + ... + a_{p+2} x^{p+2}
// over F_p under composition modulo x^{p+3}, of order p^{p+1}.
//
// Besides element arithmetic this header provides the exhaustive
// conjugacy-class census, the class list predicted by the normal form,
// the q(N) witness and the enumeration of class-equation solutions.

#include <algorithm>
#include <array>
#include <atomic>
#include <cstdint>
#include <map>
#include <random>
#include <stdexcept>
#include <string>
#include <thread>
#include <tuple>
#include <utility>
#include <vector>

#include "germ/error.hpp"
#include "germ/field.hpp"
#include "germ/normal_form.hpp"
#include "germ/series.hpp"

namespace germ {

/// p^{p+1}; only defined while it fits comfortably in 64 bits (p <= 13).
inline std::uint64_t group_order(std::uint32_t p) {
  if (!is_prime(p)) throw Error(ErrorKind::InvalidPrime, std::to_string(p) + " is not prime");
  if (p > 13) throw Error(ErrorKind::UnsupportedPrime, "p^(p+1) overflows for p = " + std::to_string(p));
  std::uint64_t order = 1;
  for (std::uint32_t i = 0; i <= p; ++i) order *= p;
  return order;
}

/// Element of G_p(F_p) as its coefficients (a_2, ..., a_{p+2}).
class PElement {
 public:
  PElement(std::uint32_t p, std::vector<std::uint32_t> coeffs) : p_(p), coeffs_(std::move(coeffs)) {
    (void)group_order(p);
    if (coeffs_.size() != p + 1) throw Error(ErrorKind::OutOfRange, "expected p+1 coefficients");
    for (auto c : coeffs_) {
      if (c >= p) throw Error(ErrorKind::OutOfRange, "coefficient not reduced mod p");
    }
  }

  static PElement identity(std::uint32_t p) { return PElement(p, std::vector<std::uint32_t>(p + 1, 0)); }

  /// Inverse of index(): digit j-2 in base p is a_j.
  static PElement from_index(std::uint32_t p, std::uint64_t index) {
    if (index >= group_order(p)) throw Error(ErrorKind::OutOfRange, "index beyond group order");
    std::vector<std::uint32_t> coeffs(p + 1);
    for (auto& c : coeffs) {
      c = static_cast<std::uint32_t>(index % p);
      index /= p;
    }
    return PElement(p, std::move(coeffs));
  }

  static PElement from_series(const TruncSeries<PrimeField>& f) {
    const std::uint32_t p = f.field().prime();
    if (f.precision() != static_cast<int>(p) + 2) {
      throw Error(ErrorKind::PrecisionMismatch, "G_p(F_p) elements have precision p+2");
    }
    std::vector<std::uint32_t> coeffs;
    for (const auto& c : f.higher_coeffs()) coeffs.push_back(c.residue());
    return PElement(p, std::move(coeffs));
  }

  std::uint32_t prime() const noexcept { return p_; }
  const std::vector<std::uint32_t>& coeffs() const noexcept { return coeffs_; }

  /// Mixed-radix index sum_j a_j p^{j-2}.
  std::uint64_t index() const {
    std::uint64_t idx = 0;
    for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) idx = idx * p_ + *it;
    return idx;
  }

  TruncSeries<PrimeField> to_series() const {
    const PrimeField field(p_);
    std::vector<ModInt> c;
    c.reserve(coeffs_.size());
    for (auto a : coeffs_) c.emplace_back(a, p_);
    return TruncSeries<PrimeField>(field, std::move(c));
  }

  friend bool operator==(const PElement&, const PElement&) = default;

 private:
  std::uint32_t p_;
  std::vector<std::uint32_t> coeffs_;
};

inline PElement pg_compose(const PElement& a, const PElement& b) {
  if (a.prime() != b.prime()) {
    throw Error(ErrorKind::PrimeMismatch, std::to_string(a.prime()) + " vs " + std::to_string(b.prime()));
  }
  return PElement::from_series(compose(a.to_series(), b.to_series()));
}

inline PElement pg_invert(const PElement& a) { return PElement::from_series(invert(a.to_series())); }

/// Writes e as g_2 o g_3 o ... o g_{p+2} with g_j = x + t_j x^j (t_j = 0
/// meaning the factor is omitted), peeling one degree at a time. Returns
/// the (degree, t) factors in composition order.
inline std::vector<std::pair<int, std::uint32_t>> elementary_factorization(const PElement& e) {
  auto rest = e.to_series();
  const int n = rest.precision();
  std::vector<std::pair<int, std::uint32_t>> factors;
  for (int j = 2; j <= n; ++j) {
    const auto c = rest.coeff(j);
    if (c.is_zero()) continue;
    const auto g = TruncSeries<PrimeField>::elementary(rest.field(), n, j, c);
    rest = compose(invert(g), rest);
    factors.emplace_back(j, c.residue());
  }
  if (!rest.is_identity()) throw std::logic_error("elementary factorization left a remainder");
  return factors;
}

/// Rebuilds `samples` random elements from their elementary factorizations;
/// returns false if any product disagrees with the original element.
inline bool elementary_elements_generate(std::uint32_t p, int samples, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<std::uint64_t> pick(0, group_order(p) - 1);
  const PrimeField field(p);
  for (int i = 0; i < samples; ++i) {
    const auto e = PElement::from_index(p, pick(rng));
    auto product = TruncSeries<PrimeField>::identity(field, static_cast<int>(p) + 2);
    for (const auto& [degree, t] : elementary_factorization(e)) {
      product = compose(product, TruncSeries<PrimeField>::elementary(field, static_cast<int>(p) + 2, degree,
                                                                     ModInt(t, p)));
    }
    if (!(PElement::from_series(product) == e)) return false;
  }
  return true;
}

namespace detail {

inline constexpr int kMaxCensusDegree = 9;  // p = 7
using Dense = std::array<std::uint32_t, kMaxCensusDegree + 1>;

// g o f o g^{-1} for the elementary generators g = x + t x^j, on raw
// coefficient arrays. f o g^{-1} is linear in f given the powers of g^{-1};
// g o q = q + t q^j, and q^j = x^j u^j only needs u^j mod x^{N-j+1}.
class ElementaryAction {
 public:
  explicit ElementaryAction(std::uint32_t p) : p_(p), n_(static_cast<int>(p) + 2) {
    if (n_ > kMaxCensusDegree) throw Error(ErrorKind::UnsupportedPrime, "census kernel supports p <= 7");
    const PrimeField field(p);
    for (int j = 2; j <= n_; ++j) {
      for (std::uint32_t t = 1; t < p; ++t) {
        const auto g = TruncSeries<PrimeField>::elementary(field, n_, j, ModInt(t, p));
        const auto ginv = invert(g).dense();
        Generator gen{j, t, {}};
        auto power = ginv;
        gen.inverse_powers.push_back(to_dense(power));
        for (int k = 2; k <= n_; ++k) {
          power = mul_trunc(power, ginv, n_, field.zero());
          gen.inverse_powers.push_back(to_dense(power));
        }
        generators_.push_back(std::move(gen));
      }
    }
  }

  std::size_t generator_count() const noexcept { return generators_.size(); }
  int degree() const noexcept { return n_; }

  Dense decode(std::uint64_t index) const {
    Dense a{};
    a[1] = 1;
    for (int d = 2; d <= n_; ++d) {
      a[static_cast<std::size_t>(d)] = static_cast<std::uint32_t>(index % p_);
      index /= p_;
    }
    return a;
  }

  std::uint64_t encode(const Dense& a) const {
    std::uint64_t idx = 0;
    for (int d = n_; d >= 2; --d) idx = idx * p_ + a[static_cast<std::size_t>(d)];
    return idx;
  }

  Dense apply(std::size_t gen_index, const Dense& f) const {
    const Generator& gen = generators_[gen_index];
    Dense q{};
    for (int d = 1; d <= n_; ++d) {
      std::uint64_t acc = 0;
      for (int k = 1; k <= d; ++k) {
        acc += std::uint64_t{f[static_cast<std::size_t>(k)]} *
               gen.inverse_powers[static_cast<std::size_t>(k - 1)][static_cast<std::size_t>(d)];
      }
      q[static_cast<std::size_t>(d)] = static_cast<std::uint32_t>(acc % p_);
    }

    const int j = gen.degree;
    const int len = n_ - j + 1;
    Dense u{};
    for (int i = 0; i < len; ++i) u[static_cast<std::size_t>(i)] = q[static_cast<std::size_t>(i + 1)];
    Dense pw = u;
    for (int e = 1; e < j; ++e) {
      Dense next{};
      for (int a = 0; a < len; ++a) {
        if (pw[static_cast<std::size_t>(a)] == 0) continue;
        for (int b = 0; a + b < len; ++b) {
          next[static_cast<std::size_t>(a + b)] += pw[static_cast<std::size_t>(a)] * u[static_cast<std::size_t>(b)];
        }
      }
      for (int a = 0; a < len; ++a) next[static_cast<std::size_t>(a)] %= p_;
      pw = next;
    }
    for (int d = j; d <= n_; ++d) {
      q[static_cast<std::size_t>(d)] =
          (q[static_cast<std::size_t>(d)] + gen.t * pw[static_cast<std::size_t>(d - j)]) % p_;
    }
    return q;
  }

  std::uint64_t apply_index(std::size_t gen_index, std::uint64_t index) const {
    return encode(apply(gen_index, decode(index)));
  }

  std::pair<int, std::uint32_t> generator(std::size_t gen_index) const {
    return {generators_[gen_index].degree, generators_[gen_index].t};
  }

 private:
  struct Generator {
    int degree;
    std::uint32_t t;
    std::vector<Dense> inverse_powers;  // (g^{-1})^k, k = 1..N
  };

  static Dense to_dense(const std::vector<ModInt>& v) {
    Dense out{};
    for (std::size_t i = 0; i < v.size(); ++i) out[i] = v[i].residue();
    return out;
  }

  std::uint32_t p_;
  int n_;
  std::vector<Generator> generators_;
};

class AtomicBitset {
 public:
  explicit AtomicBitset(std::uint64_t bits) : words_((bits + 63) / 64) {}

  /// Sets the bit; returns true if it was already set.
  bool test_and_set(std::uint64_t i) {
    const std::uint64_t mask = std::uint64_t{1} << (i % 64);
    return (words_[i / 64].fetch_or(mask, std::memory_order_relaxed) & mask) != 0;
  }

  bool test(std::uint64_t i) const {
    return (words_[i / 64].load(std::memory_order_relaxed) >> (i % 64)) & 1U;
  }

 private:
  std::vector<std::atomic<std::uint64_t>> words_;
};

}  // namespace detail

struct ConjugacyClass {
  PElement representative;  // minimal index in the class
  std::uint64_t size;
};

struct ClassCensus {
  std::uint32_t p;
  std::uint64_t order;
  std::vector<ConjugacyClass> classes;  // sorted by representative index
};

/// Partition of G_p(F_p) into conjugacy classes.
///
/// Each class is the closure of its seed under conjugation by the elementary
/// generators x + t x^j; seeds are taken in increasing index order, so the
/// seed is the class minimum. Frontiers of a breadth-first sweep are split
/// across `threads` workers; the result does not depend on the thread count.
/// p = 7 (5764801 elements) requires `allow_large`.
inline ClassCensus class_census(std::uint32_t p, unsigned threads = 1, bool allow_large = false) {
  if (!(p == 2 || p == 3 || p == 5 || (p == 7 && allow_large))) {
    throw Error(ErrorKind::UnsupportedPrime,
                "census supports p in {2, 3, 5}" + std::string(p == 7 ? " (p = 7 needs the large flag)" : ""));
  }
  if (!elementary_elements_generate(p, 100, 0x5eed0000U + p)) {
    throw std::logic_error("elementary elements failed to generate G_p(F_p)");
  }
  threads = std::max(1U, threads);
  const detail::ElementaryAction action(p);
  const std::uint64_t order = group_order(p);
  detail::AtomicBitset visited(order);
  constexpr std::size_t kParallelFrontier = 2048;

  auto expand = [&](const std::uint64_t* begin, const std::uint64_t* end, std::vector<std::uint64_t>& next) {
    for (const auto* it = begin; it != end; ++it) {
      const auto f = action.decode(*it);
      for (std::size_t g = 0; g < action.generator_count(); ++g) {
        const auto image = action.encode(action.apply(g, f));
        if (!visited.test_and_set(image)) next.push_back(image);
      }
    }
  };

  ClassCensus census{p, order, {}};
  for (std::uint64_t seed = 0; seed < order; ++seed) {
    if (visited.test_and_set(seed)) continue;
    std::uint64_t size = 1;
    std::vector<std::uint64_t> frontier{seed};
    while (!frontier.empty()) {
      std::vector<std::uint64_t> next;
      if (threads == 1 || frontier.size() < kParallelFrontier) {
        expand(frontier.data(), frontier.data() + frontier.size(), next);
      } else {
        std::vector<std::vector<std::uint64_t>> parts(threads);
        {
          std::vector<std::jthread> workers;
          const std::size_t chunk = (frontier.size() + threads - 1) / threads;
          for (unsigned w = 0; w < threads; ++w) {
            const std::size_t lo = std::min(frontier.size(), w * chunk);
            const std::size_t hi = std::min(frontier.size(), lo + chunk);
            workers.emplace_back([&, lo, hi, w] { expand(frontier.data() + lo, frontier.data() + hi, parts[w]); });
          }
        }
        for (auto& part : parts) next.insert(next.end(), part.begin(), part.end());
      }
      size += next.size();
      frontier = std::move(next);
    }
    census.classes.push_back({PElement::from_index(p, seed), size});
  }
  return census;
}

/// Number of classes predicted by the normal form over F_p:
/// 1 + (p-1) (p u + (p+1-u)) with u = floor((p+1)/2).
constexpr std::uint64_t class_count_formula(std::uint64_t p) {
  const std::uint64_t u = (p + 1) / 2;
  return 1 + (p - 1) * (p * u + (p + 1 - u));
}

/// One normal-form element per predicted class: the identity, then
/// x - alpha x^{r+1} + beta x^{2r+1} by increasing r, alpha, beta, where beta
/// only ranges over F_p while 2r + 1 <= p + 2.
inline std::vector<PElement> representative_list(std::uint32_t p) {
  const PrimeField field(p);
  const int n = static_cast<int>(p) + 2;
  std::vector<PElement> reps{PElement::identity(p)};
  for (int r = 1; r <= static_cast<int>(p) + 1; ++r) {
    const std::uint32_t betas = (2 * r + 1 <= n) ? p : 1;
    for (std::uint32_t a = 1; a < p; ++a) {
      for (std::uint32_t b = 0; b < betas; ++b) {
        reps.push_back(PElement::from_series(normal_form_series(field, n, r, ModInt(a, p), ModInt(b, p))));
      }
    }
  }
  return reps;
}

struct CensusReport {
  std::uint32_t p = 0;
  std::uint64_t expected_classes = 0;
  std::uint64_t observed_classes = 0;
  bool class_count_ok = false;
  bool bijection_ok = false;
  bool class_equation_ok = false;
  /// |G| / |class|, in census order.
  std::vector<std::uint64_t> centralizer_orders;
  Rational class_equation_sum;
  std::vector<std::string> failures;

  bool ok() const { return class_count_ok && bijection_ok && class_equation_ok; }
};

namespace detail {

// (r, alpha, beta) of an element of G_p(F_p); r = 0 for the identity.
inline std::tuple<int, std::uint32_t, std::uint32_t> invariant_key(const PElement& e) {
  const auto nf = takens_normal_form(e.to_series());
  if (!nf) return {0, 0, 0};
  return {nf->r, nf->alpha.residue(), nf->beta.residue()};
}

}  // namespace detail

/// Compares a census against the predicted class list: class count, a
/// bijection between census representatives and predicted normal forms, and
/// the class equation sum 1/m_i = 1 in exact arithmetic.
inline CensusReport verify_census_vs_theory(const ClassCensus& census) {
  CensusReport report;
  const std::uint32_t p = census.p;
  report.p = p;
  report.expected_classes = class_count_formula(p);
  report.observed_classes = census.classes.size();
  report.class_count_ok = report.expected_classes == report.observed_classes;
  if (!report.class_count_ok) {
    report.failures.push_back("class count " + std::to_string(report.observed_classes) + " != predicted " +
                              std::to_string(report.expected_classes));
  }

  std::map<std::tuple<int, std::uint32_t, std::uint32_t>, std::uint64_t> predicted;
  for (const auto& rep : representative_list(p)) predicted.emplace(detail::invariant_key(rep), rep.index());
  std::map<std::tuple<int, std::uint32_t, std::uint32_t>, std::uint64_t> seen;
  bool bijective = true;
  for (const auto& cls : census.classes) {
    const auto key = detail::invariant_key(cls.representative);
    const auto name = "class of rep_index " + std::to_string(cls.representative.index());
    if (!predicted.contains(key)) {
      bijective = false;
      report.failures.push_back(name + ": normal form (r=" + std::to_string(std::get<0>(key)) +
                                ") is not in the predicted list");
    }
    if (auto [it, inserted] = seen.emplace(key, cls.representative.index()); !inserted) {
      bijective = false;
      report.failures.push_back(name + ": same normal form as class of rep_index " + std::to_string(it->second));
    }
  }
  if (seen.size() != predicted.size()) {
    bijective = false;
    report.failures.push_back("census covers " + std::to_string(seen.size()) + " of " +
                              std::to_string(predicted.size()) + " predicted normal forms");
  }
  report.bijection_ok = bijective;

  bool equation_ok = true;
  Rational sum;
  for (const auto& cls : census.classes) {
    if (cls.size == 0 || census.order % cls.size != 0) {
      equation_ok = false;
      report.failures.push_back("class of rep_index " + std::to_string(cls.representative.index()) + ": size " +
                                std::to_string(cls.size) + " does not divide the group order");
      report.centralizer_orders.push_back(0);
      continue;
    }
    const std::uint64_t m = census.order / cls.size;
    report.centralizer_orders.push_back(m);
    sum += Rational(1) / Rational(static_cast<long long>(m));
  }
  report.class_equation_sum = sum;
  if (!(sum == Rational(1))) {
    equation_ok = false;
    report.failures.push_back("class equation sums to " + sum.to_string() + ", not 1");
  }
  report.class_equation_ok = equation_ok;
  return report;
}

struct QBound {
  std::uint32_t p;
  BigInt order;                       // p^{p+1} >= N
  std::uint64_t class_count;          // exact number of classes of G_p(F_p)
  std::uint64_t representative_count; // p (p-1) (p+1), the cruder count
  std::uint64_t crude_bound;          // p^3
};

/// Smallest prime p with N <= p^{p+1}, with the class count of G_p(F_p)
/// as a witness bound for q(N).
inline QBound qN_bound(const BigInt& n) {
  if (n < 2) throw Error(ErrorKind::OutOfRange, "N must be >= 2");
  for (std::uint32_t p = 2;; ++p) {
    if (!is_prime(p)) continue;
    const BigInt order = boost::multiprecision::pow(BigInt(p), p + 1);
    if (n <= order) {
      const std::uint64_t pp = p;
      return QBound{p, order, class_count_formula(pp), pp * (pp - 1) * (pp + 1), pp * pp * pp};
    }
  }
}

struct LandauSolution {
  std::vector<std::uint64_t> parts;  // m_1 >= m_2 >= ... >= m_k

  friend bool operator==(const LandauSolution&, const LandauSolution&) = default;
  friend auto operator<=>(const LandauSolution&, const LandauSolution&) = default;
};

struct LandauResult {
  int k;
  std::vector<LandauSolution> solutions;  // lexicographic order
  std::uint64_t max_order;
};

namespace detail {

// Parts m_1..m_n (n = remaining) with sum 1/m_i = target and all parts
// >= lower. The smallest part satisfies lower <= m_n <= n / target, and for
// n > 1 also 1/m_n < target.
inline void landau_recurse(int remaining, const Rational& target, std::uint64_t lower,
                           std::vector<std::uint64_t>& tail, std::vector<LandauSolution>& out) {
  const BigInt num = target.numerator();
  const BigInt den = target.denominator();
  if (remaining == 1) {
    if (num == 1 && den >= lower) {
      LandauSolution s;
      s.parts.push_back(den.convert_to<std::uint64_t>());
      s.parts.insert(s.parts.end(), tail.rbegin(), tail.rend());
      out.push_back(std::move(s));
    }
    return;
  }
  const BigInt hi = (BigInt(remaining) * den) / num;
  const BigInt lo_strict = den / num + 1;
  BigInt lo = std::max(BigInt(lower), lo_strict);
  for (BigInt m = lo; m <= hi; ++m) {
    const auto mv = m.convert_to<std::uint64_t>();
    tail.push_back(mv);
    landau_recurse(remaining - 1, target - Rational(1) / Rational(m, 1), mv, tail, out);
    tail.pop_back();
  }
}

}  // namespace detail

/// All nonincreasing (m_1, ..., m_k) with sum 1/m_i = 1, for 1 <= k <= 6.
inline LandauResult landau_enumerate(int k) {
  if (k < 1 || k > 6) throw Error(ErrorKind::OutOfRange, "k must be in [1, 6]");
  LandauResult result{k, {}, 0};
  std::vector<std::uint64_t> tail;
  detail::landau_recurse(k, Rational(1), 1, tail, result.solutions);
  std::sort(result.solutions.begin(), result.solutions.end());
  for (const auto& s : result.solutions) result.max_order = std::max(result.max_order, s.parts.front());
  return result;
}

}  // namespace germ

#endif  // GERM_PGROUP_HPP
