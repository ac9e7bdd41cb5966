// transversal: verify single instances, run identity suites and campaigns.
//
// Exit status: 0 success, 1 counterexample or inconsistency, 2 refusal or usage error.

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

#include "transversal/campaign.hpp"
#include "transversal/errors.hpp"
#include "transversal/serialize.hpp"
#include "transversal/suites.hpp"

using namespace transversal;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitCounterexample = 1;
constexpr int kExitUsage = 2;

int exit_code(const VerificationReport& r) {
  if (r.outcome == Outcome::refused) return kExitUsage;
  return r.is_failure() ? kExitCounterexample : kExitOk;
}

std::vector<std::int64_t> parse_int_list(const std::string& text) {
  std::vector<std::int64_t> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      out.push_back(std::stoll(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::logic_error&) {
      throw ParseError("bad integer '" + item + "'");
    }
  }
  return out;
}

struct VerifyArgs {
  std::string kind;
  std::string group;
  std::string a_list;
  std::string b_list;
  std::string h_list;
  std::string base;
  std::string exponents;
  std::optional<std::int64_t> prime;
  std::string sets;
  std::string backend = "cyclotomic";
  std::string strategy = "auto";
  std::uint64_t seed = 1;
  int workers = 1;
};

Instance build_instance(const VerifyArgs& args) {
  Instance inst;
  inst.kind = parse_instance_kind(args.kind);
  if (args.group.empty()) throw ParseError("--group is required");
  inst.group = GroupSpec::parse(args.group);
  const GroupSpec& g = inst.group;
  if (!args.a_list.empty()) inst.a = parse_element_list(g, args.a_list);
  if (!args.b_list.empty()) inst.b = parse_element_list(g, args.b_list);
  if (!args.h_list.empty()) inst.h_generators = parse_element_list(g, args.h_list);
  if (!args.base.empty()) inst.base = parse_element(g, args.base);
  if (!args.exponents.empty()) inst.exponents = parse_int_list(args.exponents);
  inst.prime = args.prime;
  if (!args.sets.empty()) {
    std::stringstream ss(args.sets);
    std::string part;
    while (std::getline(ss, part, ';')) inst.sets.push_back(parse_element_list(g, part));
  }
  if (inst.kind == InstanceKind::hall && inst.a.empty()) inst.a = enumerate_elements(g);
  if (inst.kind == InstanceKind::sun_multi && inst.a.empty() && !inst.sets.empty()) inst.a = inst.sets[0];
  return inst;
}

int emit(const VerificationReport& r) {
  std::cout << to_jsonl(r) << '\n';
  std::cerr << to_string(r.instance.kind) << " " << r.instance.group.to_string() << ": " << to_string(r.outcome);
  if (r.witness) {
    std::cerr << " pi =";
    for (auto v : r.witness->one_based()) std::cerr << ' ' << v;
  }
  if (!r.reason.empty()) std::cerr << " (" << r.reason << ")";
  if (!r.consistent) std::cerr << " INCONSISTENT";
  std::cerr << '\n';
  for (const auto& n : r.notes) std::cerr << "  note: " << n << '\n';
  return exit_code(r);
}

int cmd_verify(const VerifyArgs& args) {
  const Instance inst = build_instance(args);
  VerifyOptions options;
  options.backend = BackendChoice::parse(args.backend);
  options.search.strategy = parse_strategy(args.strategy);
  options.search.seed = args.seed;
  options.search.workers = args.workers;
  VerificationReport r = verify_instance(inst, options);
  for (auto& problem : revalidate(r)) {
    r.consistent = false;
    r.notes.push_back("revalidation: " + problem);
  }
  return emit(r);
}

int cmd_replay(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw ParseError("cannot read " + path);
  std::string line;
  std::getline(f, line, '\0');
  nlohmann::json j = nlohmann::json::parse(line);
  VerifyOptions options;
  if (j.contains("config")) {
    options = campaign_from_json(j["config"]).caps;
    j = j["report"];
  }
  const VerificationReport stored = report_from_json(j);
  options.backend = BackendChoice::parse(stored.backend == "none" ? "cyclotomic" : stored.backend);
  options.search.strategy = parse_strategy(stored.strategy);
  options.search.seed = stored.seed;
  VerificationReport r = verify_instance(stored.instance, options);
  r.seed = stored.seed;
  return emit(r);
}

int cmd_suite(const std::string& name, const SuiteOptions& options) {
  const SuiteResult r = run_suite(name, options);
  std::cout << "suite " << r.name << ": " << r.checks << " checks, " << r.failures << " failures, "
            << static_cast<long>(r.millis) << " ms\n";
  for (const auto& m : r.messages) std::cout << "  " << m << '\n';
  return r.passed() ? kExitOk : kExitCounterexample;
}

int cmd_campaign(const std::string& path, std::optional<int> workers, std::optional<std::string> out,
                 std::optional<std::uint64_t> seed) {
  std::ifstream f(path);
  if (!f) throw ParseError("cannot read " + path);
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(f);
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(path + ": " + e.what());
  }
  CampaignConfig config = campaign_from_json(j);
  if (workers) config.workers = *workers;
  if (out) config.out = *out;
  if (seed) config.seed = *seed;
  if (config.out.empty()) config.out = config.name + ".jsonl";
  const CampaignResult result = run_campaign(config);
  std::cout << result.summary(config.name) << '\n';
  std::cout << "reports written to " << config.out << '\n';
  if (result.reproducer) std::cout << "reproducer written to " << result.reproducer->string() << '\n';
  return result.failures > 0 ? kExitCounterexample : kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Distinct-product permutations in finite abelian groups"};
  app.require_subcommand(1);

  VerifyArgs vargs;
  auto* verify = app.add_subcommand("verify", "verify one instance");
  verify->add_option("kind", vargs.kind, "snevily | dkss | hall | chi-det | sun-multi | powers | unique-product")
      ->required();
  verify->add_option("--group", vargs.group, "group, e.g. c3xc9 or 27")->required();
  verify->add_option("--A", vargs.a_list, "elements, e.g. \"(0),(1)\"");
  verify->add_option("--B", vargs.b_list, "elements, e.g. \"(0),(1)\"");
  verify->add_option("--H", vargs.h_list, "generators of the subgroup H (dkss)");
  verify->add_option("--a", vargs.base, "the element a (powers)");
  verify->add_option("--exponents", vargs.exponents, "comma-separated exponents (powers)");
  verify->add_option("--prime", vargs.prime, "prime p dividing the order of a (powers)");
  verify->add_option("--sets", vargs.sets, "A_1;A_2;... (sun-multi)");
  verify->add_option("--backend", vargs.backend, "cyclotomic | field | field:q[:totient]");
  verify->add_option("--strategy", vargs.strategy, "auto | vandermonde-first | random | exhaustive");
  verify->add_option("--seed", vargs.seed);
  verify->add_option("--workers", vargs.workers)->check(CLI::PositiveNumber);

  std::string suite_name;
  SuiteOptions suite_options;
  auto* suite = app.add_subcommand("suite", "run an identity suite");
  suite->add_option("name", suite_name, "lemma21 | eq22 | thm19 | chebotarev | rings")->required();
  suite->add_option("--seed", suite_options.seed);
  suite->add_option("--trials", suite_options.trials)->check(CLI::NonNegativeNumber);
  suite->add_option("--max-p", suite_options.max_p)->check(CLI::Range(2, 13));

  std::string config_path;
  std::optional<int> c_workers;
  std::optional<std::string> c_out;
  std::optional<std::uint64_t> c_seed;
  auto* campaign = app.add_subcommand("campaign", "run a campaign from a JSON config");
  campaign->add_option("config", config_path)->required();
  campaign->add_option("--workers", c_workers)->check(CLI::PositiveNumber);
  campaign->add_option("--out", c_out, "JSONL output path");
  campaign->add_option("--seed", c_seed);

  std::int64_t kl_n = 0, kl_k = 0;
  auto* klarge = app.add_subcommand("klarge", "is n k-large?");
  klarge->add_option("n", kl_n)->required();
  klarge->add_option("k", kl_k)->required();

  std::string replay_path;
  auto* replay = app.add_subcommand("replay", "re-verify a reproducer file or a JSONL report line");
  replay->add_option("file", replay_path)->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*verify) return cmd_verify(vargs);
    if (*suite) return cmd_suite(suite_name, suite_options);
    if (*campaign) return cmd_campaign(config_path, c_workers, c_out, c_seed);
    if (*replay) return cmd_replay(replay_path);
    if (*klarge) {
      std::cout << (is_k_large(kl_n, kl_k) ? "true" : "false") << '\n';
      return kExitOk;
    }
  } catch (const ParseError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const StructuralError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const DomainError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const RefusalError& e) {
    std::cerr << "refused: " << e.what() << '\n';
    return kExitUsage;
  } catch (const nlohmann::json::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  }
  return kExitUsage;
}
