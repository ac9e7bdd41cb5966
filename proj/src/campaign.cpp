#include "transversal/campaign.hpp"

#include <atomic>
#include <fstream>
#include <functional>
#include <limits>
#include <mutex>
#include <thread>

#include "transversal/errors.hpp"
#include "transversal/random.hpp"
#include "transversal/serialize.hpp"

namespace transversal {

using nlohmann::json;

namespace {

template <class T>
void read_opt(const json& j, const char* key, T& out) {
  if (j.contains(key)) out = j.at(key).get<T>();
}

}  // namespace

CampaignConfig campaign_from_json(const json& j) {
  try {
    if (!j.is_object()) throw ParseError("campaign config must be a JSON object");
    CampaignConfig c;
    read_opt(j, "name", c.name);
    if (j.contains("groups")) {
      for (const auto& g : j.at("groups")) {
        if (g.is_string()) {
          c.groups.push_back({g.get<std::string>(), std::nullopt});
        } else {
          GroupCell cell{g.at("group").get<std::string>(), std::nullopt};
          if (g.contains("k_max")) cell.k_max = g.at("k_max").get<std::int64_t>();
          c.groups.push_back(cell);
        }
        GroupSpec::parse(c.groups.back().group);
      }
    }
    if (j.contains("family")) {
      GroupFamily f{j["family"].at("type").get<std::string>(), j["family"].at("max_order").get<std::int64_t>()};
      if (f.type != "odd-order" && f.type != "all") throw ParseError("family type must be 'odd-order' or 'all'");
      c.family = f;
    }
    if (j.contains("kinds")) {
      for (const auto& k : j.at("kinds")) c.kinds.push_back(parse_instance_kind(k.get<std::string>()));
    }
    read_opt(j, "k_min", c.k_min);
    read_opt(j, "k_max", c.k_max);
    read_opt(j, "samples", c.samples);
    read_opt(j, "seed", c.seed);
    read_opt(j, "backend", c.backend);
    read_opt(j, "strategy", c.strategy);
    read_opt(j, "m", c.m);
    read_opt(j, "workers", c.workers);
    read_opt(j, "out", c.out);
    read_opt(j, "include_timing", c.include_timing);
    read_opt(j, "revalidate", c.revalidate);
    c.caps.backend = BackendChoice::parse(c.backend);
    c.caps.search.strategy = parse_strategy(c.strategy);
    if (j.contains("caps")) {
      const json& caps = j["caps"];
      read_opt(caps, "max_k", c.caps.max_k);
      read_opt(caps, "max_permutation_k", c.caps.max_permutation_k);
      read_opt(caps, "multi_cap", c.caps.multi_cap);
      read_opt(caps, "exterior_replay_cap", c.caps.exterior_replay_cap);
      read_opt(caps, "sigma_replay_cap", c.caps.sigma_replay_cap);
      read_opt(caps, "random_trials", c.caps.search.random_trials);
      read_opt(caps, "exhaustive_cap", c.caps.search.exhaustive_cap);
      read_opt(caps, "transfer_check", c.caps.transfer_check);
    }
    if (c.k_min < 1 || c.k_max < c.k_min - 1) throw ParseError("k range is invalid");
    if (c.samples < 0) throw ParseError("samples must be nonnegative");
    if (c.workers < 1) throw ParseError("workers must be at least 1");
    return c;
  } catch (const json::exception& e) {
    throw ParseError(std::string("campaign config: ") + e.what());
  } catch (const StructuralError& e) {
    throw ParseError(std::string("campaign config: ") + e.what());
  }
}

json to_json(const CampaignConfig& c) {
  json groups = json::array();
  for (const auto& g : c.groups) {
    if (g.k_max) {
      groups.push_back({{"group", g.group}, {"k_max", *g.k_max}});
    } else {
      groups.push_back(g.group);
    }
  }
  json kinds = json::array();
  for (auto k : c.kinds) kinds.push_back(to_string(k));
  json j = {{"name", c.name},
            {"groups", groups},
            {"kinds", kinds},
            {"k_min", c.k_min},
            {"k_max", c.k_max},
            {"samples", c.samples},
            {"seed", c.seed},
            {"backend", c.backend},
            {"strategy", c.strategy},
            {"m", c.m},
            {"workers", c.workers},
            {"out", c.out},
            {"include_timing", c.include_timing},
            {"revalidate", c.revalidate},
            {"caps",
             {{"max_k", c.caps.max_k},
              {"max_permutation_k", c.caps.max_permutation_k},
              {"multi_cap", c.caps.multi_cap},
              {"exterior_replay_cap", c.caps.exterior_replay_cap},
              {"sigma_replay_cap", c.caps.sigma_replay_cap},
              {"random_trials", c.caps.search.random_trials},
              {"exhaustive_cap", c.caps.search.exhaustive_cap},
              {"transfer_check", c.caps.transfer_check}}}};
  if (c.family) j["family"] = {{"type", c.family->type}, {"max_order", c.family->max_order}};
  return j;
}

std::vector<GroupSpec> enumerate_group_family(const GroupFamily& family) {
  const bool odd = family.type == "odd-order";
  std::vector<std::vector<std::int64_t>> lists;
  std::vector<std::int64_t> current;
  std::function<void(std::int64_t, std::int64_t)> extend = [&](std::int64_t min_factor, std::int64_t product) {
    if (!current.empty()) lists.push_back(current);
    for (std::int64_t n = min_factor; product * n <= family.max_order; ++n) {
      if (odd && n % 2 == 0) continue;
      current.push_back(n);
      extend(n, product * n);
      current.pop_back();
    }
  };
  extend(2, 1);
  auto product = [](const std::vector<std::int64_t>& v) {
    std::int64_t p = 1;
    for (auto n : v) p *= n;
    return p;
  };
  std::sort(lists.begin(), lists.end(), [&](const auto& x, const auto& y) {
    const auto px = product(x), py = product(y);
    return px != py ? px < py : x > y;
  });
  std::vector<GroupSpec> out;
  for (auto& l : lists) out.emplace_back(std::move(l));
  return out;
}

namespace {

std::vector<GroupElement> random_subset(Rng& rng, std::span<const GroupElement> pool, std::int64_t k) {
  std::vector<GroupElement> out;
  for (auto i : sample_distinct(rng, static_cast<std::int64_t>(pool.size()), k)) {
    out.push_back(pool[static_cast<std::size_t>(i)]);
  }
  return out;
}

std::vector<GroupElement> random_tuple(Rng& rng, std::span<const GroupElement> pool, std::int64_t k) {
  std::vector<GroupElement> out;
  for (std::int64_t i = 0; i < k; ++i) out.push_back(pool[uniform_below(rng, pool.size())]);
  return out;
}

// Largest subgroup of the form "all elements of order dividing a product of
// some primes of |G|" whose order is k-large; G itself when possible.
std::optional<SubgroupSpec> k_large_hall_subgroup(const GroupSpec& spec, std::int64_t k) {
  const auto primes = prime_divisors(spec.order());
  std::optional<SubgroupSpec> best;
  for (std::uint32_t mask = (1u << primes.size()) - 1; mask > 0; --mask) {
    std::vector<std::int64_t> chosen;
    for (std::size_t i = 0; i < primes.size(); ++i) {
      if (mask & (1u << i)) chosen.push_back(primes[i]);
    }
    SubgroupSpec h = hall_subgroup(spec, chosen);
    if (h.order() > 1 && is_k_large(h.order(), k) && (!best || h.order() > best->order())) best = std::move(h);
  }
  return best;
}

}  // namespace

std::optional<Instance> sample_instance(InstanceKind kind, const GroupSpec& spec, std::int64_t k, std::int64_t m,
                                        std::uint64_t seed) {
  Rng rng(seed);
  const auto elems = enumerate_elements(spec);
  const auto n = static_cast<std::int64_t>(elems.size());
  Instance inst;
  inst.kind = kind;
  inst.group = spec;
  switch (kind) {
    case InstanceKind::hall:
      inst.a = elems;
      inst.b = random_tuple(rng, elems, n);
      return inst;
    case InstanceKind::snevily:
      if (spec.order() % 2 == 0 || k > n) return std::nullopt;
      inst.a = random_subset(rng, elems, k);
      inst.b = random_subset(rng, elems, k);
      return inst;
    case InstanceKind::chi_det:
    case InstanceKind::unique_product:
      if (k > n) return std::nullopt;
      inst.a = random_subset(rng, elems, k);
      inst.b = random_subset(rng, elems, k);
      return inst;
    case InstanceKind::dkss: {
      const auto h = k_large_hall_subgroup(spec, k);
      if (!h || k > h->order()) return std::nullopt;
      if (h->order() == n) {
        inst.a = random_subset(rng, elems, k);
        inst.b = random_tuple(rng, elems, k);
        return inst;
      }
      inst.h_generators = h->generators();
      if (uniform_below(rng, 2) == 0) {
        inst.a = random_subset(rng, h->elements(), k);
        inst.b = random_tuple(rng, elems, k);
      } else {
        inst.a = random_subset(rng, elems, k);
        inst.b = random_tuple(rng, h->elements(), k);
      }
      return inst;
    }
    case InstanceKind::sun_multi:
      if (spec.exponent() != spec.order() || k > n || m < 1) return std::nullopt;
      for (std::int64_t i = 0; i < m; ++i) inst.sets.push_back(random_subset(rng, elems, k));
      inst.a = inst.sets[0];
      return inst;
    case InstanceKind::powers: {
      // Elements whose order has a prime divisor above k.
      std::vector<std::pair<GroupElement, std::int64_t>> bases;
      for (const auto& g : elems) {
        if (g.is_identity()) continue;
        for (auto p : prime_divisors(element_order(spec, g))) {
          if (p > k) {
            bases.emplace_back(g, p);
            break;
          }
        }
      }
      if (bases.empty()) return std::nullopt;
      const auto& [a, p] = bases[uniform_below(rng, bases.size())];
      const std::int64_t ord = element_order(spec, a);
      inst.base = a;
      inst.prime = p;
      for (auto r : sample_distinct(rng, p, k)) {
        inst.exponents.push_back(r + p * static_cast<std::int64_t>(uniform_below(rng, static_cast<std::uint64_t>(ord / p))));
      }
      for (auto e : inst.exponents) inst.a.push_back(group_pow(spec, a, e));
      inst.b = random_tuple(rng, elems, k);
      return inst;
    }
  }
  return std::nullopt;
}

std::int64_t CampaignResult::count(Outcome outcome) const {
  std::int64_t c = 0;
  for (const auto& r : reports) c += r.outcome == outcome ? 1 : 0;
  return c;
}

std::string CampaignResult::summary(const std::string& name) const {
  std::string s = "campaign " + name + ": " + std::to_string(reports.size()) + " instances";
  for (auto o : {Outcome::witness_found, Outcome::certificate_found, Outcome::no_witness_as_predicted,
                 Outcome::no_witness, Outcome::refused}) {
    s += ", " + to_string(o) + " " + std::to_string(count(o));
  }
  s += ", failures " + std::to_string(failures);
  if (skipped_cells > 0) s += ", skipped cells " + std::to_string(skipped_cells);
  if (aborted) s += ", ABORTED";
  return s;
}

namespace {

struct PlannedInstance {
  Instance instance;
  std::uint64_t seed;
};

std::vector<PlannedInstance> plan(const CampaignConfig& config, std::int64_t& skipped_cells) {
  std::vector<std::pair<GroupSpec, std::int64_t>> groups;
  for (const auto& g : config.groups) groups.emplace_back(GroupSpec::parse(g.group), g.k_max.value_or(config.k_max));
  if (config.family) {
    for (auto& g : enumerate_group_family(*config.family)) groups.emplace_back(std::move(g), config.k_max);
  }
  std::vector<PlannedInstance> out;
  for (std::size_t gi = 0; gi < groups.size(); ++gi) {
    const auto& [spec, k_max] = groups[gi];
    for (auto kind : config.kinds) {
      const std::int64_t k_hi = kind == InstanceKind::hall ? config.k_min : k_max;
      for (std::int64_t k = config.k_min; k <= k_hi; ++k) {
        bool any = false;
        for (std::int64_t s = 0; s < config.samples; ++s) {
          const std::uint64_t seed =
              derive_seed(config.seed, {gi, static_cast<std::uint64_t>(kind), static_cast<std::uint64_t>(k),
                                        static_cast<std::uint64_t>(s)});
          auto inst = sample_instance(kind, spec, k, config.m, seed);
          if (!inst) break;
          any = true;
          out.push_back({std::move(*inst), seed});
        }
        if (!any && config.samples > 0) ++skipped_cells;
      }
    }
  }
  return out;
}

VerificationReport run_one(const CampaignConfig& config, const PlannedInstance& planned) {
  VerifyOptions options = config.caps;
  options.search.seed = planned.seed;
  options.search.workers = 1;
  VerificationReport r = verify_instance(planned.instance, options);
  r.seed = planned.seed;
  if (config.revalidate) {
    for (auto& problem : revalidate(r)) {
      r.consistent = false;
      r.notes.push_back("revalidation: " + problem);
    }
  }
  return r;
}

}  // namespace

CampaignResult run_campaign(const CampaignConfig& config) {
  CampaignResult result;
  const auto planned = plan(config, result.skipped_cells);
  const auto total = planned.size();
  std::vector<std::optional<VerificationReport>> slots(total);
  std::atomic<std::size_t> next{0};
  std::atomic<std::size_t> first_failure{std::numeric_limits<std::size_t>::max()};
  std::mutex error_mutex;
  std::exception_ptr error;

  auto worker = [&] {
    while (true) {
      const std::size_t idx = next++;
      if (idx >= total || idx > first_failure.load()) return;
      try {
        VerificationReport r = run_one(config, planned[idx]);
        if (r.is_failure()) {
          std::size_t cur = first_failure.load();
          while (idx < cur && !first_failure.compare_exchange_weak(cur, idx)) {
          }
        }
        slots[idx] = std::move(r);
      } catch (...) {
        std::lock_guard lock(error_mutex);
        if (!error) error = std::current_exception();
        first_failure = 0;
        return;
      }
    }
  };
  const int w = std::max(1, config.workers);
  if (w == 1) {
    worker();
  } else {
    std::vector<std::thread> threads;
    for (int t = 0; t < w; ++t) threads.emplace_back(worker);
    for (auto& th : threads) th.join();
  }
  if (error) std::rethrow_exception(error);

  const std::size_t stop = first_failure.load();
  for (std::size_t i = 0; i < total && i <= stop; ++i) result.reports.push_back(std::move(*slots[i]));
  for (const auto& r : result.reports) result.failures += r.is_failure() ? 1 : 0;
  result.aborted = stop < total && stop + 1 < total;

  if (!config.out.empty()) {
    const std::filesystem::path out(config.out);
    if (out.has_parent_path()) std::filesystem::create_directories(out.parent_path());
    std::ofstream f(out);
    if (!f) throw RefusalError("cannot write " + config.out);
    for (const auto& r : result.reports) f << to_jsonl(r, config.include_timing) << '\n';
  }
  if (result.failures > 0) {
    const auto& bad = result.reports.back();
    json repro = {{"config", to_json(config)}, {"index", result.reports.size() - 1}, {"report", to_json(bad, false)}};
    std::filesystem::path path = config.out.empty() ? std::filesystem::path(config.name + ".reproducer.json")
                                                    : std::filesystem::path(config.out + ".reproducer.json");
    std::ofstream f(path);
    f << repro.dump(2) << '\n';
    result.reproducer = path;
  }
  return result;
}

}  // namespace transversal
