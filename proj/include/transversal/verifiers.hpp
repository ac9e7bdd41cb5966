#pragma once

// Verifiers for distinct-product permutation problems in finite abelian groups.
//
// Every theorem instance is checked twice: by brute-force backtracking (the
// independent oracle) and by replaying the character/determinant argument to
// produce a certificate. The two paths must agree; a disagreement or a missing
// witness where one is guaranteed marks the report inconsistent.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "transversal/characters.hpp"
#include "transversal/group.hpp"
#include "transversal/ring_value.hpp"

namespace transversal {

enum class InstanceKind { snevily, dkss, hall, chi_det, sun_multi, powers, unique_product };

std::string to_string(InstanceKind kind);
InstanceKind parse_instance_kind(std::string_view text);
// Kinds whose predicted witness is a proven theorem (as opposed to a conjecture).
bool is_theorem_kind(InstanceKind kind);

struct Instance {
  InstanceKind kind = InstanceKind::dkss;
  GroupSpec group{{2}};
  std::vector<GroupElement> a;
  std::vector<GroupElement> b;
  std::optional<std::vector<GroupElement>> h_generators;  // subgroup H (dkss); absent means H = G
  std::vector<std::vector<GroupElement>> sets;            // sun-multi: A_1..A_m
  std::optional<GroupElement> base;                       // powers: the element a
  std::vector<std::int64_t> exponents;                    // powers: i_1..i_k
  std::optional<std::int64_t> prime;                      // powers: chosen p | order(a)
};

enum class Outcome { witness_found, certificate_found, no_witness, no_witness_as_predicted, refused };

std::string to_string(Outcome outcome);
Outcome parse_outcome(std::string_view text);

// One character tuple and the matrix functions it makes nonzero. Value names:
// "det_a", "per_a", "det_b", "per_b" for the A/B matrices and "det_s<i>" for
// the i-th set of a multi-set instance.
struct CertificateTuple {
  std::string role;
  std::vector<Character> chars;
  std::vector<std::pair<std::string, RingValue>> values;
};

struct Certificate {
  std::string backend;  // Backend::descriptor()
  std::vector<CertificateTuple> tuples;
  nlohmann::json details = nlohmann::json::object();
};

struct VerificationReport {
  Instance instance;
  Outcome outcome = Outcome::refused;
  std::optional<Permutation> witness;
  std::vector<Permutation> witness_perms;  // sun-multi: pi_2..pi_m
  std::optional<Certificate> certificate;
  bool consistent = true;
  std::vector<std::string> notes;
  std::string reason;  // refusal reason
  std::string backend = "cyclotomic";
  std::string strategy = "auto";
  std::uint64_t seed = 0;
  double millis = 0.0;

  // A predicted witness is missing or the two verification paths disagree.
  bool is_failure() const { return !consistent || outcome == Outcome::no_witness; }
};

struct VerifyOptions {
  SearchOptions search;
  BackendChoice backend;
  std::size_t max_k = 10;                  // brute-force and matrix size cap
  std::size_t max_permutation_k = 7;
  std::int64_t multi_cap = 1000000;        // (k!)^(m-1) for sun-multi
  std::int64_t exterior_replay_cap = 5000;  // sun-multi exterior identity replay
  std::int64_t sigma_replay_cap = 200000;   // |G|^k for the unique-product sum
  bool transfer_check = true;              // cyclotomic -> field homomorphism on certificates
};

// Lexicographically least pi with a_i b_pi(i) pairwise distinct, by
// backtracking over positions with candidates in increasing index order.
std::optional<Permutation> find_distinct_permutation(const GroupSpec& spec, std::span<const GroupElement> a,
                                                     std::span<const GroupElement> b, std::size_t max_k = 10);

bool products_distinct(const GroupSpec& spec, std::span<const GroupElement> a, std::span<const GroupElement> b,
                       const Permutation& pi);

VerificationReport verify_hall(const GroupSpec& spec, std::span<const GroupElement> b_list,
                               const VerifyOptions& options = {});
VerificationReport verify_theorem_main(const Instance& instance, const VerifyOptions& options = {});
VerificationReport verify_powers_instance(const Instance& instance, const VerifyOptions& options = {});
VerificationReport search_chi_det_witness(const Instance& instance, const VerifyOptions& options = {});
VerificationReport verify_snevily(const Instance& instance, const VerifyOptions& options = {});
VerificationReport verify_unique_product_condition(const Instance& instance, const VerifyOptions& options = {});
VerificationReport verify_sun_multi(const Instance& instance, const VerifyOptions& options = {});

// Dispatch on instance.kind; never throws for hypothesis violations (those are refusals).
VerificationReport verify_instance(const Instance& instance, const VerifyOptions& options = {});

// Witness for sun-multi by nested backtracking over positions; perms[i] acts on sets[i + 1].
std::optional<std::vector<Permutation>> find_multi_permutations(const GroupSpec& spec,
                                                                std::span<const std::vector<GroupElement>> sets);

struct MinorSweepReport {
  std::int64_t p = 0;
  std::int64_t minors_checked = 0;
  std::int64_t zero_minors = 0;
  bool sampled = false;
  std::vector<std::string> failures;  // first few zero minors, for diagnostics
};

// Minors of the character table of Z_p in Z[zeta_p]: full sweep for p <= 7,
// `samples_per_k` random row/column subset pairs per size above that. Minors
// larger than kMaxMatrixSize are mapped into a prime field F_q (q = 1 mod p,
// q > 2^40); a nonzero image certifies a nonzero minor, a zero image counts
// as a zero minor.
MinorSweepReport chebotarev_check(std::int64_t p, std::uint64_t seed = 1, std::int64_t samples_per_k = 200);

struct BoundaryReport {
  std::int64_t p = 0;
  std::int64_t assignments = 0;    // b-tuples with product != e
  std::int64_t witnesses_found = 0;  // must be zero
};

// A = Z_p and every b in Z_p^p with prod b != e: no distinct-product permutation exists.
BoundaryReport dkss_boundary_check(std::int64_t p);

// Re-checks a report from scratch: witness distinctness and every certificate
// value recomputed and nonzero. Returns the list of problems (empty when valid).
std::vector<std::string> revalidate(const VerificationReport& report);

}  // namespace transversal
