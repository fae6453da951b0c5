#ifndef GERM_TESTS_ORACLES_HPP
#define GERM_TESTS_ORACLES_HPP

// Independent reference computations used only by the tests. None of these
// share code paths with the library routines they check.

#include <cstdint>
#include <map>
#include <random>
#include <set>
#include <vector>

#include "germ/field.hpp"
#include "germ/series.hpp"

namespace germ::oracle {

// f(g) as sum_k a_k g^k with g^k formed by explicit repeated products of
// dense coefficient vectors (no Horner, no library composition).
template <class Field>
std::vector<typename Field::value_type> compose_by_powers(const TruncSeries<Field>& f, const TruncSeries<Field>& g) {
  using V = typename Field::value_type;
  const int n = f.precision();
  const auto& field = f.field();
  std::vector<V> gd(static_cast<std::size_t>(n) + 1, field.zero());
  gd[1] = field.one();
  for (int d = 2; d <= n; ++d) gd[static_cast<std::size_t>(d)] = g.coeff(d);

  std::vector<V> result(static_cast<std::size_t>(n) + 1, field.zero());
  std::vector<V> power = gd;  // g^1
  for (int k = 1; k <= n; ++k) {
    const V a = f.coeff(k);
    for (int d = 0; d <= n; ++d) result[static_cast<std::size_t>(d)] += a * power[static_cast<std::size_t>(d)];
    std::vector<V> next(static_cast<std::size_t>(n) + 1, field.zero());
    for (int i = 0; i <= n; ++i) {
      for (int j = 0; i + j <= n; ++j) {
        next[static_cast<std::size_t>(i + j)] += power[static_cast<std::size_t>(i)] * gd[static_cast<std::size_t>(j)];
      }
    }
    power = std::move(next);
  }
  return result;
}

template <class Field>
TruncSeries<Field> compose_naive(const TruncSeries<Field>& f, const TruncSeries<Field>& g) {
  auto dense = compose_by_powers(f, g);
  return TruncSeries<Field>(f.field(), std::vector(dense.begin() + 2, dense.end()));
}

// All elements of G over F_p at precision n, enumerated as coefficient tuples.
inline std::vector<TruncSeries<PrimeField>> all_elements(std::uint32_t p, int n) {
  std::vector<TruncSeries<PrimeField>> out;
  const PrimeField field(p);
  std::uint64_t total = 1;
  for (int i = 2; i <= n; ++i) total *= p;
  for (std::uint64_t idx = 0; idx < total; ++idx) {
    std::vector<ModInt> c;
    std::uint64_t v = idx;
    for (int i = 2; i <= n; ++i) {
      c.emplace_back(v % p, p);
      v /= p;
    }
    out.emplace_back(field, std::move(c));
  }
  return out;
}

// Conjugacy partition by exhaustive search: f ~ h iff g o h = f o g for some
// group element g. Returns a class id per element.
inline std::vector<int> brute_force_classes(const std::vector<TruncSeries<PrimeField>>& elems) {
  std::vector<int> cls(elems.size(), -1);
  int next = 0;
  for (std::size_t i = 0; i < elems.size(); ++i) {
    if (cls[i] >= 0) continue;
    cls[i] = next;
    for (std::size_t j = i + 1; j < elems.size(); ++j) {
      for (const auto& g : elems) {
        if (compose_naive(g, elems[j]) == compose_naive(elems[i], g)) {
          cls[j] = next;
          break;
        }
      }
    }
    ++next;
  }
  return cls;
}

// Egyptian-fraction solutions by nested enumeration with a fixed bound on
// the parts (exact rational sum), for k <= 4.
inline std::set<std::vector<std::uint64_t>> landau_brute_force(int k, std::uint64_t bound) {
  std::set<std::vector<std::uint64_t>> out;
  std::vector<std::uint64_t> parts(static_cast<std::size_t>(k));
  auto rec = [&](auto&& self, int i, std::uint64_t max_part) -> void {
    if (i == k) {
      Rational s;
      for (auto m : parts) s += Rational(1) / Rational(static_cast<long long>(m));
      if (s == Rational(1)) out.insert(parts);
      return;
    }
    for (std::uint64_t m = 1; m <= max_part; ++m) {
      parts[static_cast<std::size_t>(i)] = m;
      self(self, i + 1, m);
    }
  };
  rec(rec, 0, bound);
  return out;
}

// Sylvester's sequence s_1 = 2, s_{k+1} = s_k^2 - s_k + 1; the largest part
// of a k-term solution is s_k - 1.
inline std::uint64_t sylvester_max_part(int k) {
  if (k == 1) return 1;
  std::uint64_t s = 2;
  for (int i = 1; i < k - 1; ++i) s = s * s - s + 1;
  return s * (s - 1);
}

template <class Field, class Rng>
TruncSeries<Field> random_series(const Field& field, int n, Rng& rng, int spread = 3) {
  std::uniform_int_distribution<int> dist(-spread, spread);
  std::vector<typename Field::value_type> c;
  for (int d = 2; d <= n; ++d) c.push_back(field.from_int(dist(rng)));
  return TruncSeries<Field>(field, std::move(c));
}

}  // namespace germ::oracle

#endif  // GERM_TESTS_ORACLES_HPP
