#include <gtest/gtest.h>

#include "oracles.hpp"
#include "transversal/errors.hpp"
#include "transversal/exterior.hpp"
#include "transversal/random.hpp"
#include "transversal/serialize.hpp"

using namespace transversal;

namespace {

struct Setting {
  GroupSpec g;
  Backend b;
  std::vector<GroupElement> elems;
  std::vector<Character> chars;
  explicit Setting(const std::string& text, const std::string& backend = "cyclotomic")
      : g(GroupSpec::parse(text)),
        b(Backend::for_group(g, BackendChoice::parse(backend))),
        elems(enumerate_elements(g)),
        chars(all_characters(g)) {}

  MultiVector e(std::int64_t i) const { return MultiVector::basis(g, b, elems[static_cast<std::size_t>(i)]); }

  MultiVector random_vector(Rng& rng, std::size_t grade) const {
    MultiVector x(g, b, grade);
    for (int t = 0; t < 3; ++t) {
      std::vector<GroupElement> pick;
      for (auto i : sample_distinct(rng, g.order(), static_cast<std::int64_t>(grade))) pick.push_back(elems[static_cast<std::size_t>(i)]);
      const auto coeff = b.from_integer(static_cast<std::int64_t>(uniform_below(rng, 7)) - 3) +
                         b.root(static_cast<std::int64_t>(uniform_below(rng, static_cast<std::uint64_t>(b.level()))));
      x += MultiVector::wedge_of(g, b, pick).scaled(coeff);
    }
    return x;
  }

  std::vector<GroupElement> random_elems(Rng& rng, std::size_t k, bool distinct) const {
    std::vector<GroupElement> out;
    if (distinct) {
      for (auto i : sample_distinct(rng, g.order(), static_cast<std::int64_t>(k))) out.push_back(elems[static_cast<std::size_t>(i)]);
    } else {
      for (std::size_t i = 0; i < k; ++i) out.push_back(elems[uniform_below(rng, elems.size())]);
    }
    return out;
  }

  std::vector<Character> random_chars(Rng& rng, std::size_t k) const {
    std::vector<Character> out;
    for (std::size_t i = 0; i < k; ++i) out.push_back(chars[uniform_below(rng, chars.size())]);
    return out;
  }
};

RingValue lemma_sign(const Backend& b, std::size_t k) {
  return b.from_integer((k * (k - 1) / 2) % 2 == 0 ? 1 : -1);
}

const char* kSmallGroups[] = {"c3", "c5", "c7", "c2xc2", "c8", "c3xc3", "c2xc4", "c10", "c12", "c2xc6"};

}  // namespace

TEST(Wedge, Examples) {
  const Setting s("c5");
  EXPECT_TRUE(wedge(s.e(2), s.e(2)).is_zero());
  EXPECT_EQ(wedge(s.e(1), s.e(3)), -wedge(s.e(3), s.e(1)));
  EXPECT_EQ(wedge(s.e(1) + s.e(2), s.e(2)), wedge(s.e(1), s.e(2)));
  const auto blade = wedge(s.e(1), s.e(2));
  ASSERT_EQ(blade.terms().size(), 1u);
  EXPECT_EQ(blade.terms().begin()->first, (Blade{1, 2}));
  EXPECT_EQ(wedge(s.e(2), s.e(1)).terms().begin()->second, s.b.from_integer(-1));
  const Setting other("c7");
  EXPECT_THROW(wedge(s.e(1), other.e(1)), StructuralError);
}

TEST(Wedge, GradeOverflowIsZero) {
  const Setting s("c2");
  const auto top = wedge(s.e(0), s.e(1));
  EXPECT_FALSE(top.is_zero());
  EXPECT_TRUE(wedge(top, s.e(0)).is_zero());
}

TEST(Wedge, MergeSign) {
  Blade merged;
  EXPECT_EQ(merge_sign({0, 2}, {1}, merged), -1);
  EXPECT_EQ(merged, (Blade{0, 1, 2}));
  EXPECT_EQ(merge_sign({1, 2}, {0}, merged), 1);
  EXPECT_EQ(merge_sign({1}, {1}, merged), 0);
}

TEST(Wedge, AlternatingOnBasisUpTo8) {
  for (const auto& g : oracle::all_groups(8)) {
    const Setting s(g.to_string());
    for (std::int64_t i = 0; i < g.order(); ++i) {
      for (std::int64_t j = 0; j < g.order(); ++j) {
        const auto ij = wedge(s.e(i), s.e(j));
        if (i == j) {
          EXPECT_TRUE(ij.is_zero());
        } else {
          EXPECT_EQ(ij, -wedge(s.e(j), s.e(i)));
          EXPECT_EQ(ij.terms().size(), 1u);
        }
      }
    }
  }
}

TEST(Wedge, AssociativeAndBilinear) {
  Rng rng(7);
  const Setting s("c3xc3");
  for (int t = 0; t < 30; ++t) {
    const auto x = s.random_vector(rng, 1), y = s.random_vector(rng, 2), z = s.random_vector(rng, 2);
    const auto w = s.random_vector(rng, 2);
    EXPECT_EQ(wedge(wedge(x, y), z), wedge(x, wedge(y, z)));
    EXPECT_EQ(wedge(x, y + w), wedge(x, y) + wedge(x, w));
    // Graded commutativity.
    EXPECT_EQ(wedge(x, y), wedge(y, x));
    EXPECT_EQ(wedge(x, x), MultiVector(s.g, s.b, 2));
  }
}

TEST(SkewDerivation, Examples) {
  const Setting s("c3");
  const Character chi(s.g, {1});
  const auto d1 = skew_derivation(chi, s.e(2));
  EXPECT_EQ(d1.grade(), 0u);
  EXPECT_EQ(d1.scalar_part(), s.b.root(2));

  const auto d2 = skew_derivation(chi, wedge(s.e(1), s.e(2)));
  const auto expected = s.e(2).scaled(s.b.root(1)) - s.e(1).scaled(s.b.root(2));
  EXPECT_EQ(d2, expected);

  const auto scalar = MultiVector::scalar(s.g, s.b, s.b.one());
  EXPECT_TRUE(skew_derivation(chi, scalar).is_zero());
}

TEST(SkewDerivation, Leibniz) {
  Rng rng(13);
  for (const auto* gs : {"c5", "c7", "c3xc3", "c8", "c2xc4"}) {
    const Setting s(gs);
    for (int t = 0; t < 20; ++t) {
      const std::size_t n = 1 + uniform_below(rng, 3);
      const std::size_t m = 1 + uniform_below(rng, 3);
      const auto x = s.random_vector(rng, n), y = s.random_vector(rng, m);
      const auto chi = s.random_chars(rng, 1).front();
      const auto lhs = skew_derivation(chi, wedge(x, y));
      auto rhs = wedge(skew_derivation(chi, x), y);
      const auto tail = wedge(x, skew_derivation(chi, y));
      rhs += (n % 2 == 0) ? tail : -tail;
      EXPECT_EQ(lhs, rhs) << gs << " " << n << " " << m;
    }
  }
}

TEST(SkewDerivation, SquaresToZero) {
  Rng rng(3);
  const Setting s("c7");
  for (int t = 0; t < 20; ++t) {
    const auto x = s.random_vector(rng, 3);
    const auto chi = s.random_chars(rng, 1).front();
    EXPECT_TRUE(skew_derivation(chi, skew_derivation(chi, x)).is_zero());
  }
}

TEST(ComposeDerivations, Examples) {
  const Setting s("c5");
  const Character c1(s.g, {1}), c2(s.g, {2});
  const std::vector<Character> one{c1};
  EXPECT_EQ(compose_derivations(one, s.e(3)), s.b.root(3));

  const std::vector<Character> two{c1, c2};
  const auto blade = wedge(s.e(1), s.e(4));
  const RingValue x = s.b.root(1) * s.b.root(8) - s.b.root(4) * s.b.root(2);
  EXPECT_EQ(compose_derivations(two, blade), -x);
  EXPECT_THROW(compose_derivations(one, blade), StructuralError);
}

TEST(ComposeDerivations, SignedDeterminantOfABlade) {
  Rng rng(21);
  int instances = 0;
  for (const auto* gs : kSmallGroups) {
    for (const auto* backend : {"cyclotomic", "field"}) {
      const Setting s(gs, backend);
      for (int t = 0; t < 10; ++t) {
        const std::size_t k = 1 + uniform_below(rng, std::min<std::uint64_t>(4, static_cast<std::uint64_t>(s.g.order())));
        const auto elems = s.random_elems(rng, k, true);
        const auto chars = s.random_chars(rng, k);
        const auto blade = MultiVector::wedge_of(s.g, s.b, elems);
        EXPECT_EQ(compose_derivations(chars, blade),
                  lemma_sign(s.b, k) * determinant(char_matrix(s.g, chars, elems, s.b)))
            << gs << " k=" << k;
        ++instances;
      }
    }
  }
  EXPECT_GE(instances, 200);
}

TEST(QPi, Examples) {
  const Setting s("c3");
  const std::vector<GroupElement> a{s.elems[0], s.elems[1]}, zeros{s.elems[0], s.elems[0]};
  EXPECT_EQ(q_pi(s.g, s.b, a, zeros, Permutation::identity(2)), wedge(s.e(0), s.e(1)));
  const std::vector<GroupElement> b{s.elems[1], s.elems[0]};
  EXPECT_TRUE(q_pi(s.g, s.b, a, b, Permutation::identity(2)).is_zero());
  EXPECT_EQ(q_pi(s.g, s.b, a, b, Permutation({1, 0})), wedge(s.e(0), s.e(2)));

  const std::vector<GroupElement> a1{s.elems[1]}, b1{s.elems[2]};
  EXPECT_EQ(sum_q_pi(s.g, s.b, a1, b1), s.e(0));

  const Setting z5("c5");
  const std::vector<GroupElement> a3{z5.elems[0], z5.elems[1], z5.elems[2]}, b3(3, z5.elems[0]);
  const auto sum = sum_q_pi(z5.g, z5.b, a3, b3);
  EXPECT_FALSE(sum.is_zero());
  EXPECT_EQ(sum, MultiVector::wedge_of(z5.g, z5.b, a3).scaled(z5.b.from_integer(6)));
  EXPECT_THROW(sum_q_pi(z5.g, z5.b, a3, b3, 2), RefusalError);
}

TEST(MasterIdentity, SinglePermutation) {
  Rng rng(31);
  for (const auto* gs : kSmallGroups) {
    const Setting s(gs);
    for (int t = 0; t < 10; ++t) {
      const std::size_t k = 1 + uniform_below(rng, std::min<std::uint64_t>(4, static_cast<std::uint64_t>(s.g.order())));
      const auto a = s.random_elems(rng, k, true), b = s.random_elems(rng, k, false);
      const auto chars = s.random_chars(rng, k);
      std::vector<int> images(k);
      for (std::size_t i = 0; i < k; ++i) images[i] = static_cast<int>(i);
      for (std::size_t i = k; i > 1; --i) std::swap(images[i - 1], images[uniform_below(rng, i)]);
      const Permutation pi(images);
      std::vector<GroupElement> prods;
      for (std::size_t j = 0; j < k; ++j) prods.push_back(group_mul(s.g, a[j], b[static_cast<std::size_t>(pi.images()[j])]));
      EXPECT_EQ(compose_derivations(chars, q_pi(s.g, s.b, a, b, pi)),
                lemma_sign(s.b, k) * determinant(char_matrix(s.g, chars, prods, s.b)));
    }
  }
}

TEST(MasterIdentity, SumOverPermutations) {
  Rng rng(37);
  for (const auto* gs : kSmallGroups) {
    for (const auto* backend : {"cyclotomic", "field"}) {
      const Setting s(gs, backend);
      for (int t = 0; t < 8; ++t) {
        const std::size_t k = 1 + uniform_below(rng, std::min<std::uint64_t>(4, static_cast<std::uint64_t>(s.g.order())));
        const auto a = s.random_elems(rng, k, true), b = s.random_elems(rng, k, false);
        const auto chars = s.random_chars(rng, k);
        EXPECT_EQ(compose_derivations(chars, sum_q_pi(s.g, s.b, a, b)),
                  lemma_sign(s.b, k) * determinant(char_matrix(s.g, chars, a, s.b)) *
                      permanent(char_matrix(s.g, chars, b, s.b)))
            << gs << " " << backend << " k=" << k;
      }
    }
  }
}

TEST(MasterIdentity, NonzeroSumHasDistinctProducts) {
  Rng rng(41);
  const Setting s("c7");
  for (int t = 0; t < 50; ++t) {
    const std::size_t k = 1 + uniform_below(rng, 4);
    const auto a = s.random_elems(rng, k, true), b = s.random_elems(rng, k, false);
    if (sum_q_pi(s.g, s.b, a, b).is_zero()) continue;
    bool found = false;
    Permutation pi = Permutation::identity(k);
    do {
      found = found || !q_pi(s.g, s.b, a, b, pi).is_zero();
    } while (pi.next());
    EXPECT_TRUE(found);
  }
}

TEST(MultiSetIdentity, ProductOfDeterminants) {
  Rng rng(43);
  for (const auto* gs : {"c3", "c4", "c5", "c7", "c9"}) {
    const Setting s(gs);
    for (std::size_t m : {1u, 3u, 5u}) {
      for (std::size_t k = 1; k <= std::min<std::size_t>(3, static_cast<std::size_t>(s.g.order())); ++k) {
        if (m == 5 && k == 3) continue;  // 6^4 terms; covered by the campaign
        std::vector<std::vector<GroupElement>> sets;
        for (std::size_t i = 0; i < m; ++i) sets.push_back(s.random_elems(rng, k, true));
        const auto chars = s.random_chars(rng, k);
        RingValue expected = lemma_sign(s.b, k);
        for (const auto& set : sets) expected *= determinant(char_matrix(s.g, chars, set, s.b));
        EXPECT_EQ(compose_derivations(chars, sum_multi_q(s.g, s.b, sets)), expected) << gs << " m=" << m << " k=" << k;
      }
    }
  }
}

TEST(MultiSetIdentity, Errors) {
  const Setting s("c5");
  std::vector<std::vector<GroupElement>> sets(3, std::vector<GroupElement>{s.elems[0], s.elems[1]});
  EXPECT_THROW(sum_multi_q(s.g, s.b, sets, 3), RefusalError);
  const std::vector<Permutation> perms{Permutation::identity(2)};
  EXPECT_THROW(multi_q(s.g, s.b, sets, perms), StructuralError);
}

TEST(Derivation, ZThreeExample) {
  // Delta_chi Delta_chi on e_0 ^ e_1 vanishes; Delta_1 Delta_2 gives -det.
  const Setting s("c3");
  const std::vector<Character> same{Character(s.g, {1}), Character(s.g, {1})};
  EXPECT_TRUE(compose_derivations(same, wedge(s.e(0), s.e(1))).is_zero());
  const std::vector<Character> pair{Character(s.g, {1}), Character(s.g, {2})};
  const RingValue det = s.b.one() * s.b.root(2) - s.b.one() * s.b.root(1);
  EXPECT_EQ(compose_derivations(pair, wedge(s.e(0), s.e(1))), -det);
}

TEST(MultiVectorJson, Shape) {
  const Setting s("c3");
  const auto x = wedge(s.e(0), s.e(2)).scaled(s.b.root(1));
  const json j = to_json(x);
  ASSERT_TRUE(j.is_array());
  ASSERT_EQ(j.size(), 1u);
  EXPECT_EQ(j[0]["blade"], json::array({"(0)", "(2)"}));
  EXPECT_EQ(j[0]["coeff"]["level"], 3);
  EXPECT_EQ(j[0]["coeff"]["coeffs"], json::array({0, 1}));
  EXPECT_EQ(to_json(MultiVector(s.g, s.b, 2)), json::array());
}
