#pragma once

// Seeded campaigns: group family x instance kind x k x samples, each instance
// verified independently. Results come back in definition order whatever the
// worker count, and every instance seed is derived from the campaign seed.

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "transversal/verifiers.hpp"

namespace transversal {

struct GroupCell {
  std::string group;
  std::optional<std::int64_t> k_max;  // per-group override of the campaign k_max
};

struct GroupFamily {
  std::string type;  // "odd-order" or "all"
  std::int64_t max_order = 0;
};

struct CampaignConfig {
  std::string name = "campaign";
  std::vector<GroupCell> groups;
  std::optional<GroupFamily> family;
  std::vector<InstanceKind> kinds;
  std::int64_t k_min = 1;
  std::int64_t k_max = 3;
  std::int64_t samples = 100;
  std::uint64_t seed = 1;
  std::string backend = "cyclotomic";
  std::string strategy = "auto";
  std::int64_t m = 3;  // sun-multi set count
  VerifyOptions caps;
  int workers = 1;
  std::string out;
  bool include_timing = true;
  bool revalidate = true;
};

// Throws ParseError on malformed configs.
CampaignConfig campaign_from_json(const nlohmann::json& j);
// Seed and every cap are always written.
nlohmann::json to_json(const CampaignConfig& config);

// Every presentation c n_1 x ... x n_r with 2 <= n_1 <= ... <= n_r and product
// at most max_order, ordered by order and then factor list.
std::vector<GroupSpec> enumerate_group_family(const GroupFamily& family);

// Samples one instance of the given kind; nullopt when the cell admits none
// (e.g. k > |G|, or no k-large subgroup for dkss).
std::optional<Instance> sample_instance(InstanceKind kind, const GroupSpec& spec, std::int64_t k, std::int64_t m,
                                        std::uint64_t seed);

struct CampaignResult {
  std::vector<VerificationReport> reports;
  std::int64_t failures = 0;
  std::int64_t skipped_cells = 0;
  bool aborted = false;
  std::optional<std::filesystem::path> reproducer;

  std::int64_t count(Outcome outcome) const;
  std::string summary(const std::string& name) const;
};

// Runs the campaign; writes JSONL (and a reproducer on failure) when config.out is set.
CampaignResult run_campaign(const CampaignConfig& config);

}  // namespace transversal
