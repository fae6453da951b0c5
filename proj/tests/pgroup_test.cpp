#include <algorithm>
#include <chrono>
#include <random>
#include <set>

#include <gtest/gtest.h>

#include "germ/pgroup.hpp"
#include "oracles.hpp"

namespace germ {
namespace {

PElement el(std::uint32_t p, std::vector<std::uint32_t> c) { return PElement(p, std::move(c)); }

TEST(PElementTest, IndexRoundTrip) {
  for (std::uint32_t p : {2U, 3U, 5U}) {
    const auto order = group_order(p);
    for (std::uint64_t i = 0; i < order; i += 1 + order / 500) {
      ASSERT_EQ(PElement::from_index(p, i).index(), i);
    }
  }
  EXPECT_EQ(PElement::identity(3).index(), 0U);
  EXPECT_EQ(el(2, {1, 0, 0}).index(), 1U);
  EXPECT_EQ(el(2, {0, 0, 1}).index(), 4U);
  EXPECT_THROW((void)PElement::from_index(2, 8), Error);
  EXPECT_THROW(el(3, {3, 0, 0, 0}), Error);
}

TEST(PElementTest, ComposeAndInvertOverF2) {
  EXPECT_EQ(pg_compose(el(2, {1, 0, 0}), el(2, {1, 0, 0})), el(2, {0, 0, 1}));
  EXPECT_EQ(pg_invert(PElement::identity(2)), PElement::identity(2));
  const auto inv = pg_invert(el(2, {1, 0, 0}));
  EXPECT_EQ(inv, el(2, {1, 0, 1}));
  EXPECT_EQ(pg_compose(inv, el(2, {1, 0, 0})), PElement::identity(2));
  EXPECT_EQ(pg_compose(el(2, {1, 0, 0}), inv), PElement::identity(2));
}

TEST(PElementTest, PrimeMismatch) {
  try {
    (void)pg_compose(PElement::identity(2), PElement::identity(3));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::PrimeMismatch);
  }
}

TEST(PElementTest, ElementaryFactorization) {
  for (std::uint32_t p : {2U, 3U, 5U, 7U}) EXPECT_TRUE(elementary_elements_generate(p, 100, p));
  const auto factors = elementary_factorization(el(3, {2, 1, 0, 1}));
  ASSERT_FALSE(factors.empty());
  EXPECT_EQ(factors.front(), (std::pair<int, std::uint32_t>{2, 2}));
}

TEST(ElementaryActionTest, MatchesSeriesConjugation) {
  // apply(g, f) must be g o f o g^{-1} = conjugate(f, g^{-1}).
  for (std::uint32_t p : {2U, 3U, 5U, 7U}) {
    const detail::ElementaryAction action(p);
    const PrimeField field(p);
    std::mt19937_64 rng(300 + p);
    std::uniform_int_distribution<std::uint64_t> pick(0, group_order(p) - 1);
    for (int i = 0; i < 200; ++i) {
      const auto f = PElement::from_index(p, pick(rng));
      const std::size_t gi = rng() % action.generator_count();
      const auto [j, t] = action.generator(gi);
      const auto g = TruncSeries<PrimeField>::elementary(field, static_cast<int>(p) + 2, j, ModInt(t, p));
      const auto expected = PElement::from_series(conjugate(f.to_series(), invert(g)));
      ASSERT_EQ(action.apply_index(gi, f.index()), expected.index()) << "p=" << p;
    }
  }
}

std::multiset<std::uint64_t> sizes(const ClassCensus& c) {
  std::multiset<std::uint64_t> out;
  for (const auto& cls : c.classes) out.insert(cls.size);
  return out;
}

TEST(ClassCensusTest, P2) {
  const auto c = class_census(2);
  EXPECT_EQ(c.order, 8U);
  EXPECT_EQ(c.classes.size(), 5U);
  EXPECT_EQ(sizes(c), (std::multiset<std::uint64_t>{1, 1, 2, 2, 2}));
}

TEST(ClassCensusTest, P2MatchesBruteForce) {
  const auto c = class_census(2);
  const auto elems = oracle::all_elements(2, 4);
  const auto brute = oracle::brute_force_classes(elems);
  std::map<int, std::uint64_t> brute_sizes;
  std::map<int, std::uint64_t> brute_min;
  for (std::size_t i = 0; i < elems.size(); ++i) {
    brute_sizes[brute[i]]++;
    const auto idx = PElement::from_series(elems[i]).index();
    if (!brute_min.contains(brute[i]) || idx < brute_min[brute[i]]) brute_min[brute[i]] = idx;
  }
  ASSERT_EQ(brute_sizes.size(), c.classes.size());
  for (const auto& cls : c.classes) {
    const auto idx = cls.representative.index();
    const auto it = std::find_if(brute_min.begin(), brute_min.end(), [&](const auto& kv) { return kv.second == idx; });
    ASSERT_NE(it, brute_min.end());
    EXPECT_EQ(brute_sizes[it->first], cls.size);
  }
}

TEST(ClassCensusTest, P3AndP5MatchFormula) {
  for (std::uint32_t p : {3U, 5U}) {
    const auto c = class_census(p);
    EXPECT_EQ(c.classes.size(), class_count_formula(p));
    std::uint64_t total = 0;
    for (std::size_t i = 0; i < c.classes.size(); ++i) {
      total += c.classes[i].size;
      EXPECT_EQ(c.order % c.classes[i].size, 0U);
      if (i > 0) {
        EXPECT_LT(c.classes[i - 1].representative.index(), c.classes[i].representative.index());
      }
    }
    EXPECT_EQ(total, group_order(p));
  }
  EXPECT_EQ(class_census(3).classes.size(), 17U);
  EXPECT_EQ(class_census(5).classes.size(), 73U);
}

TEST(ClassCensusTest, UnsupportedPrimes) {
  for (std::uint32_t p : {7U, 11U, 4U}) {
    try {
      (void)class_census(p);
      FAIL() << p;
    } catch (const Error& e) {
      EXPECT_EQ(e.kind(), ErrorKind::UnsupportedPrime);
    }
  }
}

TEST(ClassCountFormulaTest, Values) {
  EXPECT_EQ(class_count_formula(2), 5U);
  EXPECT_EQ(class_count_formula(3), 17U);
  EXPECT_EQ(class_count_formula(5), 73U);
  EXPECT_EQ(class_count_formula(7), 193U);
}

TEST(RepresentativeListTest, P2) {
  const std::vector<PElement> expected{el(2, {0, 0, 0}), el(2, {1, 0, 0}), el(2, {1, 1, 0}), el(2, {0, 1, 0}),
                                       el(2, {0, 0, 1})};
  EXPECT_EQ(representative_list(2), expected);
}

TEST(RepresentativeListTest, LengthsAndFixedPoints) {
  for (std::uint32_t p : {2U, 3U, 5U, 7U}) {
    const auto reps = representative_list(p);
    EXPECT_EQ(reps.size(), class_count_formula(p));
    for (const auto& rep : reps) {
      const auto nf = takens_normal_form(rep.to_series());
      if (!nf) continue;
      ASSERT_EQ(PElement::from_series(nf->normalized), rep);
      ASSERT_TRUE(nf->conjugator.is_identity());
    }
  }
}

TEST(VerifyCensusTest, P2CentralizersAndClassEquation) {
  const auto report = verify_census_vs_theory(class_census(2));
  EXPECT_TRUE(report.ok()) << (report.failures.empty() ? "" : report.failures.front());
  std::multiset<std::uint64_t> m(report.centralizer_orders.begin(), report.centralizer_orders.end());
  EXPECT_EQ(m, (std::multiset<std::uint64_t>{8, 8, 4, 4, 4}));
  EXPECT_EQ(report.class_equation_sum, Rational(1));
}

TEST(VerifyCensusTest, P3AndP5Pass) {
  for (std::uint32_t p : {3U, 5U}) {
    const auto report = verify_census_vs_theory(class_census(p));
    EXPECT_TRUE(report.class_count_ok);
    EXPECT_TRUE(report.bijection_ok);
    EXPECT_TRUE(report.class_equation_ok);
    EXPECT_TRUE(report.failures.empty());
  }
}

TEST(VerifyCensusTest, CorruptedCensusFailsClassEquation) {
  auto census = class_census(2);
  for (auto& cls : census.classes) {
    if (cls.size == 2) {
      cls.size = 1;
      break;
    }
  }
  const auto report = verify_census_vs_theory(census);
  EXPECT_FALSE(report.ok());
  EXPECT_FALSE(report.class_equation_ok);
  ASSERT_FALSE(report.failures.empty());
}

TEST(QBoundTest, Examples) {
  const auto a = qN_bound(10);
  EXPECT_EQ(a.p, 3U);
  EXPECT_EQ(a.order, 81);
  EXPECT_EQ(a.class_count, 17U);

  const auto b = qN_bound(1000000);
  EXPECT_EQ(b.p, 7U);
  EXPECT_EQ(b.order, 5764801);
  EXPECT_EQ(b.class_count, 193U);
  EXPECT_EQ(b.crude_bound, 343U);
  EXPECT_EQ(b.representative_count, 336U);

  const auto c = qN_bound(2);
  EXPECT_EQ(c.p, 2U);
  EXPECT_EQ(c.order, 8);
  EXPECT_EQ(c.class_count, 5U);

  EXPECT_EQ(qN_bound(8).p, 2U);
  EXPECT_EQ(qN_bound(9).p, 3U);
  EXPECT_THROW((void)qN_bound(1), Error);
}

TEST(QBoundTest, MonotoneAndMinimal) {
  std::uint32_t last = 0;
  for (BigInt n = 2; n <= BigInt("1000000000000"); n = n * 3 + 1) {
    const auto q = qN_bound(n);
    EXPECT_GE(q.p, last);
    EXPECT_GE(q.order, n);
    // No smaller prime works.
    for (std::uint32_t s = 2; s < q.p; ++s) {
      if (is_prime(s)) {
        EXPECT_LT(boost::multiprecision::pow(BigInt(s), s + 1), n);
      }
    }
    last = q.p;
  }
}

std::set<std::vector<std::uint64_t>> as_set(const LandauResult& r) {
  std::set<std::vector<std::uint64_t>> out;
  for (const auto& s : r.solutions) out.insert(s.parts);
  return out;
}

TEST(LandauTest, SmallK) {
  const auto k1 = landau_enumerate(1);
  EXPECT_EQ(as_set(k1), (std::set<std::vector<std::uint64_t>>{{1}}));
  EXPECT_EQ(k1.max_order, 1U);

  const auto k3 = landau_enumerate(3);
  EXPECT_EQ(as_set(k3), (std::set<std::vector<std::uint64_t>>{{3, 3, 3}, {4, 4, 2}, {6, 3, 2}}));
  EXPECT_EQ(k3.max_order, 6U);
  EXPECT_EQ(landau_enumerate(2).solutions.size(), 1U);
}

TEST(LandauTest, MatchesBruteForceAndSylvester) {
  for (int k = 1; k <= 4; ++k) {
    const auto r = landau_enumerate(k);
    EXPECT_EQ(r.max_order, oracle::sylvester_max_part(k)) << k;
    EXPECT_EQ(as_set(r), oracle::landau_brute_force(k, oracle::sylvester_max_part(k))) << k;
  }
  const auto k4 = landau_enumerate(4);
  EXPECT_EQ(k4.max_order, 42U);
  EXPECT_EQ(k4.solutions.size(), 14U);
  const auto k5 = landau_enumerate(5);
  EXPECT_EQ(k5.max_order, 1806U);
  EXPECT_EQ(k5.max_order, oracle::sylvester_max_part(5));
  EXPECT_EQ(k5.solutions.size(), 147U);
}

TEST(LandauTest, RangeAndOrdering) {
  EXPECT_THROW((void)landau_enumerate(0), Error);
  EXPECT_THROW((void)landau_enumerate(7), Error);
  const auto r = landau_enumerate(5);
  EXPECT_TRUE(std::is_sorted(r.solutions.begin(), r.solutions.end()));
  for (const auto& s : r.solutions) EXPECT_TRUE(std::is_sorted(s.parts.rbegin(), s.parts.rend()));
}

// ---- properties -----------------------------------------------------------

TEST(PGroupPropertyTest, ExponentIsAPowerOfP) {
  std::mt19937_64 rng(301);
  for (int i = 0; i < 200; ++i) {
    const std::uint32_t p = std::array<std::uint32_t, 4>{2, 3, 5, 7}[static_cast<std::size_t>(i % 4)];
    const auto e = PElement::from_index(p, rng() % group_order(p)).to_series();
    ASSERT_TRUE(power_compose(e, group_order(p)).is_identity());
    // The order is p^m for some m: the first p-power that kills e is found
    // and no smaller positive exponent that is not a p-power kills it.
    std::uint64_t order = 1;
    while (!power_compose(e, order).is_identity()) order *= p;
    for (std::uint64_t k = 1; k < order && k < 64; ++k) ASSERT_FALSE(power_compose(e, k).is_identity());
  }
}

TEST(PGroupPropertyTest, CensusIndependentOfThreadCount) {
  for (std::uint32_t p : {2U, 3U, 5U}) {
    const auto one = class_census(p, 1);
    for (unsigned t : {2U, 4U, 7U}) {
      const auto many = class_census(p, t);
      ASSERT_EQ(one.classes.size(), many.classes.size());
      for (std::size_t i = 0; i < one.classes.size(); ++i) {
        ASSERT_EQ(one.classes[i].representative, many.classes[i].representative);
        ASSERT_EQ(one.classes[i].size, many.classes[i].size);
      }
    }
  }
}

TEST(PGroupPropertyTest, CenterMatchesSingletonClasses) {
  for (std::uint32_t p : {2U, 3U, 5U}) {
    const auto census = class_census(p);
    const auto singletons =
        std::count_if(census.classes.begin(), census.classes.end(), [](const auto& c) { return c.size == 1; });
    // Center computed directly: elements commuting with every elementary generator.
    const PrimeField field(p);
    const int n = static_cast<int>(p) + 2;
    std::vector<TruncSeries<PrimeField>> gens;
    for (int j = 2; j <= n; ++j) {
      for (std::uint32_t t = 1; t < p; ++t) gens.push_back(TruncSeries<PrimeField>::elementary(field, n, j, ModInt(t, p)));
    }
    std::uint64_t center = 0;
    for (std::uint64_t i = 0; i < census.order; ++i) {
      const auto f = PElement::from_index(p, i).to_series();
      const bool central = std::all_of(gens.begin(), gens.end(), [&](const auto& g) {
        return oracle::compose_naive(f, g) == oracle::compose_naive(g, f);
      });
      if (central) ++center;
    }
    EXPECT_EQ(static_cast<std::uint64_t>(singletons), center) << p;
  }
}

TEST(PGroupPropertyTest, ElementsShareInvariantsWithTheirRepresentative) {
  for (std::uint32_t p : {2U, 3U, 5U}) {
    const auto census = class_census(p);
    const detail::ElementaryAction action(p);
    std::mt19937_64 rng(302 + p);
    for (const auto& cls : census.classes) {
      const auto rep_key = detail::invariant_key(cls.representative);
      // Random walk inside the class.
      auto idx = cls.representative.index();
      for (int step = 0; step < 200 / static_cast<int>(census.classes.size()) + 3; ++step) {
        idx = action.apply_index(rng() % action.generator_count(), idx);
        ASSERT_EQ(detail::invariant_key(PElement::from_index(p, idx)), rep_key);
      }
    }
  }
}

TEST(PGroupPropertyTest, CensusInducesALandauSolution) {
  for (std::uint32_t p : {2U, 3U}) {
    const auto census = class_census(p);
    const auto report = verify_census_vs_theory(census);
    std::vector<std::uint64_t> parts = report.centralizer_orders;
    std::sort(parts.rbegin(), parts.rend());
    Rational sum;
    for (auto m : parts) sum += Rational(1) / Rational(static_cast<long long>(m));
    EXPECT_EQ(sum, Rational(1));
    if (parts.size() <= 6) {
      const auto landau = landau_enumerate(static_cast<int>(parts.size()));
      EXPECT_TRUE(as_set(landau).contains(parts));
    }
  }
}

TEST(PGroupPropertyTest, LandauSumsAreExactlyOne) {
  for (int k = 1; k <= 5; ++k) {
    for (const auto& s : landau_enumerate(k).solutions) {
      Rational sum;
      for (auto m : s.parts) sum += Rational(1) / Rational(static_cast<long long>(m));
      ASSERT_EQ(sum, Rational(1));
      ASSERT_EQ(s.parts.size(), static_cast<std::size_t>(k));
    }
  }
}

}  // namespace
}  // namespace germ
