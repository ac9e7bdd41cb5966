#include <gtest/gtest.h>

#include "oracles.hpp"
#include "transversal/cyclotomic.hpp"
#include "transversal/errors.hpp"
#include "transversal/random.hpp"

using namespace transversal;

namespace {

std::vector<long> as_longs(const std::vector<mpz_class>& v) {
  std::vector<long> out;
  for (const auto& c : v) out.push_back(c.get_si());
  return out;
}

CyclotomicInteger random_value(Rng& rng, std::int64_t level) {
  std::vector<mpz_class> coeffs(cyclotomic_level(level).degree);
  for (auto& c : coeffs) c = static_cast<long>(uniform_below(rng, 21)) - 10;
  return CyclotomicInteger(level, std::move(coeffs));
}

}  // namespace

TEST(CyclotomicPoly, Examples) {
  EXPECT_EQ(as_longs(cyclotomic_poly(3)), (std::vector<long>{1, 1, 1}));
  EXPECT_EQ(as_longs(cyclotomic_poly(1)), (std::vector<long>{-1, 1}));
  EXPECT_EQ(as_longs(cyclotomic_poly(12)), (std::vector<long>{1, 0, -1, 0, 1}));
  EXPECT_THROW(cyclotomic_poly(0), DomainError);
  EXPECT_THROW(cyclotomic_poly(20000), RefusalError);
}

TEST(CyclotomicPoly, MatchesMobiusProduct) {
  for (std::int64_t L = 1; L <= 210; ++L) {
    const auto expected = oracle::cyclotomic_by_mobius(L);
    const auto& got = cyclotomic_poly(L);
    ASSERT_EQ(got.size(), expected.size()) << L;
    for (std::size_t i = 0; i < got.size(); ++i) ASSERT_EQ(got[i], expected[i]) << "L=" << L << " i=" << i;
    EXPECT_EQ(static_cast<std::int64_t>(got.size()) - 1, euler_phi(L));
  }
  // 105 is the first level with a coefficient outside {-1, 0, 1}.
  EXPECT_EQ(cyclotomic_poly(105)[7], -2);
}

TEST(CyclotomicArithmetic, Examples) {
  const auto z3 = root_of_unity(3, 1);
  EXPECT_EQ(as_longs((z3 * z3).coeffs()), (std::vector<long>{-1, -1}));
  const auto z4 = root_of_unity(4, 1);
  EXPECT_EQ(z4 * z4, CyclotomicInteger::from_integer(4, -1));
  EXPECT_EQ(z3 + CyclotomicInteger(3), z3);
  EXPECT_EQ(root_of_unity(3, 0), CyclotomicInteger::from_integer(3, 1));
  EXPECT_EQ(root_of_unity(3, 4), z3);
  EXPECT_EQ(root_of_unity(5, 2) * root_of_unity(5, 3), CyclotomicInteger::from_integer(5, 1));
  EXPECT_EQ(root_of_unity(6, -1), root_of_unity(6, 5));
  EXPECT_EQ(cyc_neg(cyc_add(z3, z3)), cyc_mul(CyclotomicInteger::from_integer(3, -2), z3));
  EXPECT_THROW(root_of_unity(3, 1) + root_of_unity(5, 1), StructuralError);
}

TEST(CyclotomicArithmetic, ZeroTestIsExact) {
  CyclotomicInteger sum(3);
  sum.add_root(0).add_root(1).add_root(2);
  EXPECT_TRUE(sum.is_zero());
  CyclotomicInteger partial(3);
  partial.add_root(1).add_root(2);
  EXPECT_FALSE(partial.is_zero());
  EXPECT_EQ(partial, CyclotomicInteger::from_integer(3, -1));
}

TEST(CyclotomicArithmetic, BigCoefficientsStayExact) {
  CyclotomicInteger x = CyclotomicInteger::from_integer(35, 1) + root_of_unity(35, 1);
  CyclotomicInteger p = CyclotomicInteger::from_integer(35, 1);
  for (int i = 0; i < 200; ++i) p *= x;
  CyclotomicInteger q = CyclotomicInteger::from_integer(35, 1);
  for (int i = 0; i < 100; ++i) q *= x;
  EXPECT_EQ(p, q * q);
  bool wide = false;
  for (const auto& c : p.coeffs()) wide = wide || !c.fits_slong_p();
  EXPECT_TRUE(wide);
}

TEST(CyclotomicProperties, RingAxioms) {
  Rng rng(11);
  for (std::int64_t L = 1; L <= 36; ++L) {
    for (int t = 0; t < 5; ++t) {
      const auto a = random_value(rng, L), b = random_value(rng, L), c = random_value(rng, L);
      EXPECT_EQ((a * b) * c, a * (b * c)) << L;
      EXPECT_EQ(a * (b + c), a * b + a * c) << L;
      EXPECT_EQ(a * b, b * a) << L;
      EXPECT_EQ(a + b, b + a) << L;
      EXPECT_TRUE((a - a).is_zero());
      EXPECT_EQ(a * CyclotomicInteger::from_integer(L, 1), a);
    }
  }
}

TEST(CyclotomicProperties, RootsMultiplyAndSumToZero) {
  for (std::int64_t L = 1; L <= 24; ++L) {
    for (std::int64_t a = 0; a < L; ++a) {
      for (std::int64_t b = 0; b < L; ++b) ASSERT_EQ(root_of_unity(L, a) * root_of_unity(L, b), root_of_unity(L, a + b));
    }
    CyclotomicInteger sum(L);
    for (std::int64_t e = 0; e < L; ++e) sum += root_of_unity(L, e);
    if (L > 1) {
      EXPECT_TRUE(sum.is_zero()) << L;
    } else {
      EXPECT_EQ(sum, CyclotomicInteger::from_integer(1, 1));
    }
  }
}

TEST(CyclotomicProperties, FloatCrossCheck) {
  Rng rng(5);
  for (std::int64_t L : {5, 12, 35}) {
    for (int t = 0; t < 20; ++t) {
      const auto a = random_value(rng, L), b = random_value(rng, L);
      const auto za = oracle::evaluate(L, a.coeffs()), zb = oracle::evaluate(L, b.coeffs());
      EXPECT_LT(std::abs(oracle::evaluate(L, (a * b).coeffs()) - za * zb), 1e-6);
    }
  }
}

TEST(VanishingSums, Examples) {
  EXPECT_TRUE(vanishing_sum_feasible(35, 24));
  EXPECT_FALSE(vanishing_sum_feasible(35, 6));
  EXPECT_FALSE(vanishing_sum_feasible(25, 6));
  EXPECT_TRUE(vanishing_sum_feasible(25, 0));
  EXPECT_THROW(vanishing_sum_feasible(5, -1), DomainError);
}

TEST(VanishingSums, MatchesBruteForce) {
  for (std::int64_t n = 2; n <= 60; ++n) {
    const auto primes = prime_divisors(n);
    for (std::int64_t total = 0; total <= 130; ++total) {
      // Two-prime brute force is enough below 60 only when there are <= 3 primes.
      std::vector<bool> reach(static_cast<std::size_t>(total) + 1, false);
      reach[0] = true;
      for (std::int64_t t = 1; t <= total; ++t) {
        for (auto p : primes) {
          if (p <= t && reach[static_cast<std::size_t>(t - p)]) reach[static_cast<std::size_t>(t)] = true;
        }
      }
      ASSERT_EQ(vanishing_sum_feasible(n, total), reach[static_cast<std::size_t>(total)]) << n << " " << total;
    }
  }
}

// k! roots of unity of order dividing n cannot cancel when k! is not a
// nonnegative combination of the primes of n.
TEST(VanishingSums, InfeasibleSumsNeverVanish) {
  Rng rng(3);
  for (std::int64_t n : {5, 7, 25, 35}) {
    for (std::int64_t k = 1; k <= 4; ++k) {
      const std::int64_t total = factorial(k);
      if (vanishing_sum_feasible(n, total)) continue;
      for (int t = 0; t < 200; ++t) {
        CyclotomicInteger sum(n);
        for (std::int64_t i = 0; i < total; ++i) sum.add_root(static_cast<std::int64_t>(uniform_below(rng, static_cast<std::uint64_t>(n))));
        ASSERT_FALSE(sum.is_zero()) << n << " " << k;
      }
    }
  }
  // The feasible case really can vanish: five 5th roots.
  CyclotomicInteger five(35);
  for (int e = 0; e < 5; ++e) five.add_root(7 * e);
  EXPECT_TRUE(five.is_zero());
}
