#pragma once

// Seeded identity suites over random instances, all checked by exact equality.

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace transversal {

struct SuiteOptions {
  std::uint64_t seed = 1;
  std::int64_t trials = 200;
  std::int64_t max_p = 7;  // chebotarev only
};

struct SuiteResult {
  std::string name;
  std::int64_t checks = 0;
  std::int64_t failures = 0;
  std::vector<std::string> messages;  // first few failures
  double millis = 0.0;

  bool passed() const { return failures == 0 && checks > 0; }
};

// Sign and determinant of composed skew derivations on random blades,
// |G| <= 12, k <= 4.
SuiteResult suite_lemma21(const SuiteOptions& options);
// Derivations applied to single Q_pi and to their sum over S_k.
SuiteResult suite_eq22(const SuiteOptions& options);
// Multi-set sums for odd m on cyclic groups of order <= 9.
SuiteResult suite_thm19(const SuiteOptions& options);
// All character-table minors of Z_p for primes p <= max_p.
SuiteResult suite_chebotarev(const SuiteOptions& options);
// Ring axioms, root-of-unity sums, field transfer and the vanishing-sum bound.
SuiteResult suite_rings(const SuiteOptions& options);

const std::vector<std::string>& suite_names();
// Throws ParseError for an unknown name.
SuiteResult run_suite(std::string_view name, const SuiteOptions& options);

}  // namespace transversal
