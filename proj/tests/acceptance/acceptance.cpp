// One [PASS]/[FAIL] line per acceptance criterion. Exit status is nonzero if
// any criterion fails. Time limits are wall-clock and pinned below.

#include <chrono>
#include <cstdio>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <thread>

#include "oracles.hpp"
#include "transversal/campaign.hpp"
#include "transversal/errors.hpp"
#include "transversal/matrix_algorithms.hpp"
#include "transversal/random.hpp"
#include "transversal/serialize.hpp"
#include "transversal/suites.hpp"
#include "transversal/verifiers.hpp"

using namespace transversal;

namespace {

constexpr double kLimitDerivation = 30;
constexpr double kLimitMasterIdentity = 60;
constexpr double kLimitHall = 120;
constexpr double kLimitDkss = 600;
constexpr double kLimitBoundary = 60;
constexpr double kLimitSnevily = 600;
constexpr double kLimitChiDet = 900;
constexpr double kLimitSunMulti = 300;
constexpr double kLimitChebotarev = 300;
constexpr double kLimitOracles = 60;

int g_failed = 0;

struct Outcome_ {
  bool ok = true;
  std::string detail;
};

void report(int id, const std::string& name, double limit, const std::function<Outcome_()>& body) {
  const auto t0 = std::chrono::steady_clock::now();
  Outcome_ o;
  try {
    o = body();
  } catch (const std::exception& e) {
    o = {false, std::string("exception: ") + e.what()};
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  const bool in_time = limit <= 0 || secs < limit;
  const bool pass = o.ok && in_time;
  if (!pass) ++g_failed;
  char timing[64];
  if (limit > 0) {
    std::snprintf(timing, sizeof timing, "%.1f s, limit %.0f s", secs, limit);
  } else {
    std::snprintf(timing, sizeof timing, "%.1f s", secs);
  }
  std::cout << (pass ? "[PASS] " : "[FAIL] ") << id << " " << name << ": " << o.detail << " (" << timing << ")"
            << (in_time ? "" : " TIME LIMIT EXCEEDED") << std::endl;
}

int workers() { return static_cast<int>(std::max(1u, std::thread::hardware_concurrency())); }

CampaignConfig load(const std::string& name) {
  std::ifstream f(std::string(TRANSVERSAL_CONFIGS) + "/" + name);
  if (!f) throw ParseError("cannot read config " + name);
  return campaign_from_json(json::parse(f));
}

std::string lines(const CampaignResult& r) {
  std::string out;
  for (const auto& rep : r.reports) out += to_jsonl(rep, false) + "\n";
  return out;
}

// Campaign results shared between criteria.
CampaignResult g_dkss, g_snevily, g_sun;

Outcome_ suite_check(const char* name, std::int64_t trials) {
  SuiteOptions opts;
  opts.seed = 1;
  opts.trials = trials;
  const auto r = run_suite(name, opts);
  std::ostringstream s;
  s << r.checks << " exact checks, " << r.failures << " failures";
  if (!r.messages.empty()) s << "; first: " << r.messages.front();
  return {r.passed(), s.str()};
}

// Witness exists iff prod b = e, cross-checked against an independent product.
bool hall_agrees(const GroupSpec& g, const std::vector<GroupElement>& b, std::string& why) {
  GroupElement prod = GroupElement::identity(g);
  for (const auto& x : b) prod = group_mul(g, prod, x);
  const auto r = verify_hall(g, b);
  const bool expect_witness = prod.is_identity();
  const bool ok = r.consistent && (expect_witness ? r.outcome == Outcome::witness_found
                                                  : r.outcome == Outcome::no_witness_as_predicted);
  if (!ok) why = g.to_string() + " b=" + format_element_list(b) + " outcome " + to_string(r.outcome);
  return ok;
}

Outcome_ criterion_hall() {
  std::int64_t checked = 0;
  std::string why;
  for (const auto& g : oracle::all_groups(6)) {
    const auto elems = enumerate_elements(g);
    const auto n = static_cast<std::size_t>(g.order());
    std::vector<std::size_t> digits(n, 0);
    std::vector<GroupElement> b(n, elems[0]);
    while (true) {
      for (std::size_t i = 0; i < n; ++i) b[i] = elems[digits[i]];
      ++checked;
      if (!hall_agrees(g, b, why)) return {false, why};
      std::size_t i = 0;
      while (i < n && ++digits[i] == n) digits[i++] = 0;
      if (i == n) break;
    }
  }
  const std::int64_t exhaustive = checked;
  Rng rng(derive_seed(1, {3}));
  for (const auto& g : oracle::all_groups(8)) {
    if (g.order() != 8) continue;
    const auto elems = enumerate_elements(g);
    std::vector<GroupElement> b(8, elems[0]);
    for (int s = 0; s < 100000; ++s) {
      for (auto& x : b) x = elems[uniform_below(rng, 8)];
      ++checked;
      if (!hall_agrees(g, b, why)) return {false, why};
    }
  }
  return {true, std::to_string(exhaustive) + " exhaustive assignments (order <= 6), " +
                    std::to_string(checked - exhaustive) + " sampled at order 8, 0 violations"};
}

// Every instance: brute-force witness and a nonzero certificate, no refusals.
Outcome_ theorem_campaign(const CampaignResult& r, const std::string& what) {
  std::int64_t bad = 0;
  std::string first;
  for (const auto& rep : r.reports) {
    const bool ok = rep.outcome == Outcome::witness_found && rep.consistent && rep.certificate &&
                    !rep.certificate->tuples.empty();
    if (!ok) {
      ++bad;
      if (first.empty()) first = to_jsonl(rep, false);
    }
  }
  std::ostringstream s;
  s << r.reports.size() << " " << what << " instances, " << r.count(Outcome::witness_found) << " witnesses, "
    << r.failures << " failures, " << bad << " without witness+certificate";
  if (r.skipped_cells) s << ", " << r.skipped_cells << " cells outside hypotheses";
  if (!first.empty()) s << "; first: " << first.substr(0, 300);
  if (r.reproducer) s << "; reproducer " << r.reproducer->string();
  return {bad == 0 && r.failures == 0 && !r.aborted && !r.reports.empty(), s.str()};
}

Outcome_ criterion_dkss() {
  auto c = load("dkss-theorem.json");
  c.workers = workers();
  c.include_timing = false;
  g_dkss = run_campaign(c);
  const std::size_t expected = 28 * 500;
  auto o = theorem_campaign(g_dkss, "DKSS");
  if (g_dkss.reports.size() != expected) {
    o.ok = false;
    o.detail += "; expected " + std::to_string(expected) + " instances";
  }
  return o;
}

Outcome_ criterion_boundary() {
  std::ostringstream s;
  bool ok = true;
  for (std::int64_t p : {2, 3, 5}) {
    const auto r = dkss_boundary_check(p);
    std::int64_t total = 1;
    for (std::int64_t i = 0; i < p; ++i) total *= p;
    ok = ok && r.witnesses_found == 0 && r.assignments == total - total / p;
    s << "p=" << p << ": " << r.assignments << " assignments, " << r.witnesses_found << " witnesses; ";
  }
  return {ok, s.str()};
}

Outcome_ criterion_snevily() {
  auto c = load("snevily-odd-small.json");
  c.workers = workers();
  c.include_timing = false;
  g_snevily = run_campaign(c);
  std::int64_t bad = 0;
  for (const auto& rep : g_snevily.reports) bad += rep.outcome == Outcome::witness_found && rep.consistent ? 0 : 1;
  std::ostringstream s;
  s << g_snevily.reports.size() << " instances over " << enumerate_group_family({"odd-order", 27}).size()
    << " odd-order presentations, " << bad << " without witness, " << g_snevily.failures << " failures";
  if (g_snevily.skipped_cells) s << ", " << g_snevily.skipped_cells << " cells with k > |G|";
  return {bad == 0 && g_snevily.failures == 0 && !g_snevily.reports.empty(), s.str()};
}

Outcome_ criterion_chi_det() {
  const auto g = GroupSpec::parse("c3xc3");
  const auto elems = enumerate_elements(g);
  std::int64_t pairs = 0, found = 0;
  for (const char* backend : {"cyclotomic", "field"}) {
    VerifyOptions opts;
    opts.backend = BackendChoice::parse(backend);
    for (std::size_t k : {2u, 3u}) {
      std::vector<std::vector<GroupElement>> subsets;
      for (std::uint32_t mask = 0; mask < (1u << 9); ++mask) {
        if (static_cast<std::size_t>(std::popcount(mask)) != k) continue;
        std::vector<GroupElement> s;
        for (std::size_t i = 0; i < 9; ++i) {
          if (mask & (1u << i)) s.push_back(elems[i]);
        }
        subsets.push_back(std::move(s));
      }
      for (const auto& a : subsets) {
        for (const auto& b : subsets) {
          Instance inst;
          inst.kind = InstanceKind::chi_det;
          inst.group = g;
          inst.a = a;
          inst.b = b;
          const auto r = search_chi_det_witness(inst, opts);
          ++pairs;
          if (r.outcome == Outcome::certificate_found && r.consistent && revalidate(r).empty()) {
            ++found;
            continue;
          }
          const std::string path = "chi-det-counterexample.json";
          std::ofstream(path) << to_json(r, false).dump(2) << '\n';
          return {false, "pair " + std::to_string(pairs) + " (" + backend + ", k=" + std::to_string(k) +
                             ") outcome " + to_string(r.outcome) + "; serialized to " + path};
        }
      }
    }
  }
  return {true, std::to_string(found) + "/" + std::to_string(pairs) +
                    " (A, B) pairs with a det/det tuple, k in {2,3}, cyclotomic and field backends"};
}

Outcome_ criterion_sun_multi() {
  auto c = load("sun-multi-cyclic.json");
  c.workers = workers();
  c.include_timing = false;
  g_sun = run_campaign(c);
  return theorem_campaign(g_sun, "multi-set");
}

Outcome_ criterion_chebotarev() {
  std::ostringstream s;
  bool ok = true;
  for (std::int64_t p : {2, 3, 5, 7}) {
    const auto r = chebotarev_check(p);
    ok = ok && r.zero_minors == 0 && !r.sampled && r.minors_checked > 0;
    s << "p=" << p << ": " << r.minors_checked << " minors, " << r.zero_minors << " zero; ";
  }
  return {ok, s.str()};
}

template <class T>
std::span<const T> view(const std::vector<T>& v) {
  return std::span<const T>(v);
}

// Cyclotomic certificate values map to the field image of the same matrix.
bool transfer_ok(const VerificationReport& rep, std::int64_t& values, std::string& why) {
  if (!rep.certificate || rep.certificate->backend != "cyclotomic") return true;
  const Instance& inst = rep.instance;
  const GroupSpec& g = inst.group;
  const Backend cyc = Backend::cyclotomic(g.exponent());
  const auto field = field_with_order(g.order());
  for (const auto& tuple : rep.certificate->tuples) {
    for (const auto& [name, stored] : tuple.values) {
      std::span<const GroupElement> elems;
      if (name.size() > 4 && name[4] == 's') {
        elems = inst.sets.at(std::stoul(name.substr(5)) - 1);
      } else {
        elems = name.back() == 'a' ? view(inst.a) : view(inst.b);
      }
      const auto m = char_matrix(g, tuple.chars, elems, cyc);
      std::vector<FiniteFieldElement> image;
      for (const auto& v : m.entries) image.push_back(cyc_to_field(v.cyclotomic(), field));
      const bool per = name.rfind("per", 0) == 0;
      const auto in_field = per ? permanent(view(image), m.size()) : determinant(view(image), m.size());
      ++values;
      if (!(in_field == cyc_to_field(stored.cyclotomic(), field))) {
        why = "field image of " + name + " disagrees: " + to_jsonl(rep, false).substr(0, 200);
        return false;
      }
      if (!in_field.is_zero() && stored.is_zero()) {
        why = "nonzero in the field but zero in Z[zeta]: " + name;
        return false;
      }
    }
  }
  return true;
}

Outcome_ criterion_oracles() {
  Rng rng(derive_seed(1, {10}));
  std::int64_t matrices = 0;
  // Cyclotomic backend.
  for (int t = 0; t < 100; ++t) {
    const std::int64_t L = 3 + static_cast<std::int64_t>(uniform_below(rng, 34));
    const std::size_t k = 1 + uniform_below(rng, 5);
    std::vector<CyclotomicInteger> grid;
    for (std::size_t i = 0; i < k * k; ++i) {
      grid.push_back(root_of_unity(L, static_cast<std::int64_t>(uniform_below(rng, static_cast<std::uint64_t>(L)))) +
                     CyclotomicInteger::from_integer(L, static_cast<std::int64_t>(uniform_below(rng, 5)) - 2));
    }
    const CyclotomicInteger zero(L);
    if (!(determinant(view(grid), k) == oracle::naive_determinant(view(grid), k, zero)) ||
        !(permanent(view(grid), k) == oracle::naive_permanent(view(grid), k, zero))) {
      return {false, "cyclotomic matrix disagrees with the k! expansion"};
    }
    ++matrices;
  }
  // Finite-field backend, then characteristic 2.
  for (int pass = 0; pass < 2; ++pass) {
    for (int t = 0; t < 100; ++t) {
      const std::int64_t m = 3 + 2 * static_cast<std::int64_t>(uniform_below(rng, 8));
      const auto f = pass == 0 ? field_with_order(m) : field_with_order(m, 2);
      const std::size_t k = 1 + uniform_below(rng, 5);
      std::vector<FiniteFieldElement> grid;
      for (std::size_t i = 0; i < k * k; ++i) grid.emplace_back(f, f->from_index(uniform_below(rng, f->size())));
      const auto zero = FiniteFieldElement::zero(f);
      const auto det = determinant(view(grid), k), per = permanent(view(grid), k);
      if (pass == 0 && (!(det == oracle::naive_determinant(view(grid), k, zero)) ||
                        !(per == oracle::naive_permanent(view(grid), k, zero)))) {
        return {false, "field matrix disagrees with the k! expansion over " + f->descriptor()};
      }
      if (pass == 1 && !(det == per)) return {false, "per != det over " + f->descriptor()};
      ++matrices;
    }
  }
  std::int64_t values = 0, reports = 0;
  std::string why;
  for (const auto* campaign : {&g_dkss, &g_snevily, &g_sun}) {
    for (const auto& rep : campaign->reports) {
      ++reports;
      if (!transfer_ok(rep, values, why)) return {false, why};
    }
  }
  const bool have_campaigns = reports > 0;
  return {have_campaigns && values > 0,
          std::to_string(matrices) + " random matrices match the k! oracle or per = det in characteristic 2; " +
              std::to_string(values) + " certificate values from " + std::to_string(reports) +
              " campaign reports transfer to the field image"};
}

Outcome_ criterion_determinism() {
  std::ostringstream s;
  bool ok = true;
  const int n = std::max(4, workers());
  auto rerun = [&](const char* name, const CampaignResult* first_run) {
    auto c = load(name);
    c.include_timing = false;
    c.workers = 1;
    const std::string a = first_run ? lines(*first_run) : lines(run_campaign(c));
    c.workers = n;
    const std::string b = lines(run_campaign(c));
    const bool same = a == b;
    ok = ok && same;
    s << name << " " << (same ? "identical" : "DIFFERS") << " (" << a.size() << " bytes); ";
  };
  rerun("dkss-k3.json", nullptr);
  rerun("dkss-theorem.json", &g_dkss);
  rerun("snevily-odd-small.json", &g_snevily);
  rerun("sun-multi-cyclic.json", &g_sun);
  rerun("empty.json", nullptr);
  return {ok, s.str() + "workers " + std::to_string(workers()) + " vs " + std::to_string(n)};
}

}  // namespace

int main() {
  report(1, "derivation determinant identity", kLimitDerivation, [] { return suite_check("lemma21", 200); });
  report(2, "master identity det(M_a) per(M_b)", kLimitMasterIdentity, [] { return suite_check("eq22", 200); });
  report(3, "Hall equivalence", kLimitHall, criterion_hall);
  report(4, "DKSS campaign", kLimitDkss, criterion_dkss);
  report(5, "DKSS boundary k = p", kLimitBoundary, criterion_boundary);
  report(6, "Snevily campaign", kLimitSnevily, criterion_snevily);
  report(7, "det/det character witnesses on Z_3 x Z_3", kLimitChiDet, criterion_chi_det);
  report(8, "multi-set permutations on cyclic groups", kLimitSunMulti, criterion_sun_multi);
  report(9, "character table minors", kLimitChebotarev, criterion_chebotarev);
  report(10, "oracle equivalences and field transfer", kLimitOracles, criterion_oracles);
  report(11, "campaign determinism", 0, criterion_determinism);
  std::cout << (g_failed == 0 ? "all criteria passed" : std::to_string(g_failed) + " criteria failed") << std::endl;
  return g_failed == 0 ? 0 : 1;
}
