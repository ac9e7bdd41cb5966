#include "transversal/suites.hpp"

#include <chrono>
#include <functional>

#include "transversal/campaign.hpp"
#include "transversal/errors.hpp"
#include "transversal/exterior.hpp"
#include "transversal/matrix_algorithms.hpp"
#include "transversal/random.hpp"

namespace transversal {

namespace {

class Recorder {
 public:
  explicit Recorder(std::string name) { result_.name = std::move(name); }

  void check(bool ok, const std::function<std::string()>& describe) {
    ++result_.checks;
    if (ok) return;
    ++result_.failures;
    if (result_.messages.size() < 10) result_.messages.push_back(describe());
  }

  SuiteResult finish() {
    result_.millis = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start_).count();
    return std::move(result_);
  }

 private:
  SuiteResult result_;
  std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

const std::vector<GroupSpec>& groups_up_to_12() {
  static const std::vector<GroupSpec> groups = enumerate_group_family({"all", 12});
  return groups;
}

std::vector<Character> random_characters(Rng& rng, const GroupSpec& spec, std::size_t k) {
  std::vector<Character> out;
  for (std::size_t i = 0; i < k; ++i) out.emplace_back(element_at(spec, static_cast<std::int64_t>(uniform_below(rng, static_cast<std::uint64_t>(spec.order())))));
  return out;
}

std::vector<GroupElement> random_distinct(Rng& rng, const GroupSpec& spec, std::size_t k) {
  std::vector<GroupElement> out;
  for (auto i : sample_distinct(rng, spec.order(), static_cast<std::int64_t>(k))) out.push_back(element_at(spec, i));
  return out;
}

std::vector<GroupElement> random_elements(Rng& rng, const GroupSpec& spec, std::size_t k) {
  std::vector<GroupElement> out;
  for (std::size_t i = 0; i < k; ++i) {
    out.push_back(element_at(spec, static_cast<std::int64_t>(uniform_below(rng, static_cast<std::uint64_t>(spec.order())))));
  }
  return out;
}

RingValue sign_k(const RingValue& v, std::size_t k) { return (k * (k - 1) / 2) % 2 == 0 ? v : -v; }

std::string describe(const GroupSpec& spec, std::span<const Character> chars, std::span<const GroupElement> elems) {
  std::string s = spec.to_string() + " chars";
  for (const auto& c : chars) s += " " + c.to_string();
  return s + " elems " + format_element_list(elems);
}

CyclotomicInteger random_cyclotomic(Rng& rng, std::int64_t level, std::int64_t bound) {
  std::vector<mpz_class> coeffs(cyclotomic_level(level).degree);
  for (auto& c : coeffs) c = static_cast<long>(uniform_below(rng, static_cast<std::uint64_t>(2 * bound + 1))) - bound;
  return CyclotomicInteger(level, std::move(coeffs));
}

}  // namespace

SuiteResult suite_lemma21(const SuiteOptions& options) {
  Recorder rec("lemma21");
  Rng rng(options.seed);
  const auto& groups = groups_up_to_12();
  for (std::int64_t t = 0; t < options.trials; ++t) {
    const GroupSpec& spec = groups[uniform_below(rng, groups.size())];
    const std::size_t k = 1 + uniform_below(rng, std::min<std::uint64_t>(4, static_cast<std::uint64_t>(spec.order())));
    const Backend backend = Backend::cyclotomic(spec.exponent());
    const auto elems = random_distinct(rng, spec, k);
    const auto chars = random_characters(rng, spec, k);
    const RingValue lhs = compose_derivations(chars, MultiVector::wedge_of(spec, backend, elems));
    const RingValue rhs = sign_k(determinant(char_matrix(spec, chars, elems, backend)), k);
    rec.check(lhs == rhs, [&] { return describe(spec, chars, elems) + ": " + lhs.to_string() + " vs " + rhs.to_string(); });
  }
  return rec.finish();
}

SuiteResult suite_eq22(const SuiteOptions& options) {
  Recorder rec("eq22");
  Rng rng(options.seed);
  const auto& groups = groups_up_to_12();
  for (std::int64_t t = 0; t < options.trials; ++t) {
    const GroupSpec& spec = groups[uniform_below(rng, groups.size())];
    const std::size_t k = 1 + uniform_below(rng, std::min<std::uint64_t>(4, static_cast<std::uint64_t>(spec.order())));
    const Backend backend = Backend::cyclotomic(spec.exponent());
    const auto a = random_distinct(rng, spec, k);
    const auto b = random_elements(rng, spec, k);
    const auto chars = random_characters(rng, spec, k);

    // Single Q_pi against the matrix of products.
    Permutation pi = Permutation::identity(k);
    const auto steps = uniform_below(rng, static_cast<std::uint64_t>(factorial(static_cast<std::int64_t>(k))));
    for (std::uint64_t s = 0; s < steps; ++s) pi.next();
    std::vector<GroupElement> products;
    for (std::size_t i = 0; i < k; ++i) products.push_back(group_mul(spec, a[i], b[static_cast<std::size_t>(pi(i))]));
    const RingValue single = compose_derivations(chars, q_pi(spec, backend, a, b, pi));
    const RingValue single_rhs = sign_k(determinant(char_matrix(spec, chars, products, backend)), k);
    rec.check(single == single_rhs, [&] { return "Q_pi: " + describe(spec, chars, products); });

    const RingValue lhs = compose_derivations(chars, sum_q_pi(spec, backend, a, b));
    const RingValue rhs = sign_k(determinant(char_matrix(spec, chars, a, backend)) *
                                     permanent(char_matrix(spec, chars, b, backend)),
                                 k);
    rec.check(lhs == rhs, [&] {
      return "sum: " + describe(spec, chars, a) + " B " + format_element_list(b) + ": " + lhs.to_string() + " vs " +
             rhs.to_string();
    });
  }
  return rec.finish();
}

SuiteResult suite_thm19(const SuiteOptions& options) {
  Recorder rec("thm19");
  Rng rng(options.seed);
  for (std::int64_t t = 0; t < options.trials; ++t) {
    const GroupSpec spec({static_cast<std::int64_t>(2 + uniform_below(rng, 8))});
    const std::size_t m = 1 + 2 * uniform_below(rng, 3);
    const std::size_t k = 1 + uniform_below(rng, std::min<std::uint64_t>(3, static_cast<std::uint64_t>(spec.order())));
    const Backend backend = Backend::cyclotomic(spec.exponent());
    std::vector<std::vector<GroupElement>> sets;
    for (std::size_t i = 0; i < m; ++i) sets.push_back(random_distinct(rng, spec, k));
    const auto chars = random_characters(rng, spec, k);
    const RingValue lhs = compose_derivations(chars, sum_multi_q(spec, backend, sets, 1000000));
    RingValue product = backend.one();
    for (const auto& s : sets) product *= determinant(char_matrix(spec, chars, s, backend));
    const RingValue rhs = sign_k(product, k);
    rec.check(lhs == rhs, [&] {
      return spec.to_string() + " m=" + std::to_string(m) + " " + describe(spec, chars, sets[0]) + ": " +
             lhs.to_string() + " vs " + rhs.to_string();
    });
  }
  return rec.finish();
}

SuiteResult suite_chebotarev(const SuiteOptions& options) {
  Recorder rec("chebotarev");
  for (std::int64_t p = 2; p <= options.max_p; ++p) {
    if (!is_prime(p)) continue;
    const auto report = chebotarev_check(p, options.seed);
    rec.check(report.minors_checked > 0 && report.zero_minors == 0, [&] {
      std::string s = "p=" + std::to_string(p) + ": " + std::to_string(report.zero_minors) + " zero minors";
      for (const auto& f : report.failures) s += "; " + f;
      return s;
    });
  }
  return rec.finish();
}

SuiteResult suite_rings(const SuiteOptions& options) {
  Recorder rec("rings");
  Rng rng(options.seed);
  for (std::int64_t t = 0; t < options.trials; ++t) {
    const std::int64_t L = 1 + static_cast<std::int64_t>(uniform_below(rng, 36));
    const auto a = random_cyclotomic(rng, L, 5);
    const auto b = random_cyclotomic(rng, L, 5);
    const auto c = random_cyclotomic(rng, L, 5);
    rec.check((a * b) * c == a * (b * c), [&] { return "associativity at level " + std::to_string(L); });
    rec.check(a * (b + c) == a * b + a * c, [&] { return "distributivity at level " + std::to_string(L); });
    rec.check(a * b == b * a, [&] { return "commutativity at level " + std::to_string(L); });

    // Z[zeta_L] -> F_{q^d} is a ring homomorphism and never maps zero to nonzero.
    const auto field = field_with_order(L);
    const auto fa = cyc_to_field(a, field);
    const auto fb = cyc_to_field(b, field);
    rec.check(cyc_to_field(a * b, field) == fa * fb && cyc_to_field(a + b, field) == fa + fb,
              [&] { return "transfer homomorphism at level " + std::to_string(L); });
    rec.check(fa.is_zero() || !a.is_zero(), [&] { return "nonzero transfer at level " + std::to_string(L); });
  }
  for (std::int64_t L = 1; L <= 24; ++L) {
    for (std::int64_t x = 0; x < L; ++x) {
      for (std::int64_t y = 0; y < L; ++y) {
        rec.check(root_of_unity(L, x) * root_of_unity(L, y) == root_of_unity(L, x + y),
                  [&] { return "root product at level " + std::to_string(L); });
      }
    }
    CyclotomicInteger sum(L);
    for (std::int64_t e = 0; e < L; ++e) sum.add_root(e);
    rec.check(L == 1 || sum.is_zero(), [&] { return "root sum at level " + std::to_string(L); });
  }
  // Sums of k! roots of unity of order dividing n cannot vanish when k! is not
  // a nonnegative combination of the primes of n.
  for (std::int64_t n : {5, 7, 25, 35}) {
    for (std::int64_t k = 1; k <= 4; ++k) {
      const std::int64_t total = factorial(k);
      if (vanishing_sum_feasible(n, total)) continue;
      for (std::int64_t t = 0; t < std::min<std::int64_t>(options.trials, 200); ++t) {
        CyclotomicInteger sum(n);
        for (std::int64_t i = 0; i < total; ++i) sum.add_root(static_cast<std::int64_t>(uniform_below(rng, static_cast<std::uint64_t>(n))));
        rec.check(!sum.is_zero(), [&] { return "vanishing root sum n=" + std::to_string(n) + " k=" + std::to_string(k); });
      }
    }
  }
  // per = det in characteristic 2.
  for (std::int64_t t = 0; t < std::min<std::int64_t>(options.trials, 100); ++t) {
    const std::int64_t m = 1 + 2 * static_cast<std::int64_t>(uniform_below(rng, 8));
    const auto field = field_with_order(m, 2);
    const std::size_t k = 1 + uniform_below(rng, 5);
    std::vector<FiniteFieldElement> grid;
    for (std::size_t i = 0; i < k * k; ++i) {
      grid.emplace_back(field, field->from_index(uniform_below(rng, field->size())));
    }
    rec.check(permanent(std::span<const FiniteFieldElement>(grid), k) ==
                  determinant(std::span<const FiniteFieldElement>(grid), k),
              [&] { return "per != det over " + field->descriptor(); });
  }
  return rec.finish();
}

const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names = {"lemma21", "eq22", "thm19", "chebotarev", "rings"};
  return names;
}

SuiteResult run_suite(std::string_view name, const SuiteOptions& options) {
  if (name == "lemma21") return suite_lemma21(options);
  if (name == "eq22") return suite_eq22(options);
  if (name == "thm19") return suite_thm19(options);
  if (name == "chebotarev") return suite_chebotarev(options);
  if (name == "rings") return suite_rings(options);
  throw ParseError("unknown suite '" + std::string(name) + "'");
}

}  // namespace transversal
