#include "transversal/verifiers.hpp"

#include <algorithm>
#include <chrono>
#include <map>
#include <set>

#include "transversal/errors.hpp"
#include "transversal/exterior.hpp"
#include "transversal/matrix_algorithms.hpp"
#include "transversal/random.hpp"

namespace transversal {

std::string to_string(InstanceKind kind) {
  switch (kind) {
    case InstanceKind::snevily: return "snevily";
    case InstanceKind::dkss: return "dkss";
    case InstanceKind::hall: return "hall";
    case InstanceKind::chi_det: return "chi-det";
    case InstanceKind::sun_multi: return "sun-multi";
    case InstanceKind::powers: return "powers";
    case InstanceKind::unique_product: return "unique-product";
  }
  return "dkss";
}

InstanceKind parse_instance_kind(std::string_view text) {
  for (auto kind : {InstanceKind::snevily, InstanceKind::dkss, InstanceKind::hall, InstanceKind::chi_det,
                    InstanceKind::sun_multi, InstanceKind::powers, InstanceKind::unique_product}) {
    if (text == to_string(kind)) return kind;
  }
  throw ParseError("unknown instance kind '" + std::string(text) + "'");
}

bool is_theorem_kind(InstanceKind kind) {
  switch (kind) {
    case InstanceKind::dkss:
    case InstanceKind::hall:
    case InstanceKind::sun_multi:
    case InstanceKind::powers:
    case InstanceKind::unique_product:
      return true;
    case InstanceKind::snevily:
    case InstanceKind::chi_det:
      return false;
  }
  return false;
}

std::string to_string(Outcome outcome) {
  switch (outcome) {
    case Outcome::witness_found: return "witness-found";
    case Outcome::certificate_found: return "certificate-found";
    case Outcome::no_witness: return "no-witness";
    case Outcome::no_witness_as_predicted: return "no-witness-as-predicted";
    case Outcome::refused: return "refused";
  }
  return "refused";
}

Outcome parse_outcome(std::string_view text) {
  for (auto o : {Outcome::witness_found, Outcome::certificate_found, Outcome::no_witness,
                 Outcome::no_witness_as_predicted, Outcome::refused}) {
    if (text == to_string(o)) return o;
  }
  throw ParseError("unknown outcome '" + std::string(text) + "'");
}

namespace {

class Stopwatch {
 public:
  double millis() const {
    return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start_).count();
  }

 private:
  std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

VerificationReport start_report(const Instance& instance, const VerifyOptions& options) {
  VerificationReport r;
  r.instance = instance;
  r.backend = options.backend.to_string();
  r.strategy = to_string(options.search.strategy);
  r.seed = options.search.seed;
  return r;
}

VerificationReport refuse(VerificationReport r, std::string reason) {
  r.outcome = Outcome::refused;
  r.reason = std::move(reason);
  r.witness.reset();
  r.certificate.reset();
  return r;
}

std::vector<std::int64_t> product_indices(const GroupSpec& spec, std::span<const GroupElement> a,
                                          std::span<const GroupElement> b) {
  const std::size_t k = a.size();
  std::vector<std::int64_t> out(k * k);
  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t j = 0; j < k; ++j) out[i * k + j] = element_index(spec, group_mul(spec, a[i], b[j]));
  }
  return out;
}

bool backtrack(const std::vector<std::int64_t>& prod, std::size_t k, std::size_t row, std::uint32_t used_cols,
               std::vector<std::int64_t>& used_values, std::vector<int>& images) {
  if (row == k) return true;
  for (std::size_t j = 0; j < k; ++j) {
    if (used_cols & (1u << j)) continue;
    const std::int64_t v = prod[row * k + j];
    if (std::find(used_values.begin(), used_values.end(), v) != used_values.end()) continue;
    used_values.push_back(v);
    images[row] = static_cast<int>(j);
    if (backtrack(prod, k, row + 1, used_cols | (1u << j), used_values, images)) return true;
    used_values.pop_back();
  }
  return false;
}

RingValue matrix_value(const GroupSpec& spec, std::span<const Character> chars, std::span<const GroupElement> elems,
                       const Backend& backend, bool use_permanent) {
  const auto m = char_matrix(spec, chars, elems, backend);
  return use_permanent ? permanent(m) : determinant(m);
}

// Compares the certificate value against its image under Z[zeta_L] -> F and
// checks that a nonzero field value has a nonzero cyclotomic preimage.
std::optional<std::string> transfer_problem(const GroupSpec& spec, std::span<const Character> chars,
                                            std::span<const GroupElement> elems, bool use_permanent,
                                            const Backend& used, nlohmann::json& details) {
  FieldSpecPtr field = used.field_spec();
  if (!field) {
    try {
      field = field_with_order(spec.order());
    } catch (const RefusalError&) {
      details["transfer"] = "skipped";
      return std::nullopt;
    }
  }
  const Backend cyc = Backend::cyclotomic(spec.exponent());
  const Backend fb = Backend::field(field, spec.exponent());
  const RingValue vc = matrix_value(spec, chars, elems, cyc, use_permanent);
  const RingValue vf = matrix_value(spec, chars, elems, fb, use_permanent);
  details["transfer"] = field->descriptor();
  if (!(cyc_to_field(vc.cyclotomic(), field) == vf.field())) {
    return "field value is not the image of the cyclotomic value";
  }
  if (!vf.is_zero() && vc.is_zero()) return "nonzero field value with zero cyclotomic value";
  return std::nullopt;
}

bool check_transfer(const GroupSpec& spec, const CertificateTuple& tuple, std::span<const GroupElement> a,
                    std::span<const GroupElement> b, const Backend& used, Certificate& cert,
                    VerificationReport& report) {
  for (const auto& [name, value] : tuple.values) {
    const bool per = name.rfind("per", 0) == 0;
    const bool on_a = name.back() == 'a';
    auto problem = transfer_problem(spec, tuple.chars, on_a ? a : b, per, used, cert.details);
    if (problem) {
      report.consistent = false;
      report.notes.push_back("transfer check failed for " + name + ": " + *problem);
      return false;
    }
  }
  return true;
}

std::vector<std::string> element_strings(std::span<const GroupElement> elems) {
  std::vector<std::string> out;
  for (const auto& g : elems) out.push_back(g.to_string());
  return out;
}

}  // namespace

// ---------------------------------------------------------------------------

std::optional<Permutation> find_distinct_permutation(const GroupSpec& spec, std::span<const GroupElement> a,
                                                     std::span<const GroupElement> b, std::size_t max_k) {
  if (a.size() != b.size()) throw StructuralError("find_distinct_permutation needs |A| = |B|");
  if (a.size() > max_k || a.size() > 31) {
    throw RefusalError("permutation search of size " + std::to_string(a.size()) + " exceeds the cap");
  }
  const std::size_t k = a.size();
  if (k == 0) return Permutation::identity(0);
  const auto prod = product_indices(spec, a, b);
  std::vector<std::int64_t> used;
  used.reserve(k);
  std::vector<int> images(k, 0);
  if (!backtrack(prod, k, 0, 0, used, images)) return std::nullopt;
  return Permutation(std::move(images));
}

bool products_distinct(const GroupSpec& spec, std::span<const GroupElement> a, std::span<const GroupElement> b,
                       const Permutation& pi) {
  if (a.size() != b.size() || pi.size() != a.size()) return false;
  std::set<GroupElement> seen;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (!seen.insert(group_mul(spec, a[i], b[static_cast<std::size_t>(pi(i))])).second) return false;
  }
  return true;
}

VerificationReport verify_hall(const GroupSpec& spec, std::span<const GroupElement> b_list,
                               const VerifyOptions& options) {
  Stopwatch clock;
  Instance inst;
  inst.kind = InstanceKind::hall;
  inst.group = spec;
  inst.b.assign(b_list.begin(), b_list.end());
  VerificationReport r = start_report(inst, options);
  if (spec.order() > static_cast<std::int64_t>(options.max_k)) {
    return refuse(std::move(r), "Hall check enumerates S_|G|; |G| exceeds the cap " + std::to_string(options.max_k));
  }
  r.instance.a = enumerate_elements(spec);
  if (b_list.size() != r.instance.a.size()) {
    return refuse(std::move(r), "Hall check needs exactly |G| b-values");
  }
  GroupElement product = GroupElement::identity(spec);
  for (const auto& g : b_list) product = group_mul(spec, product, g);
  const bool predicted = product.is_identity();
  r.witness = find_distinct_permutation(spec, r.instance.a, inst.b, options.max_k);
  Certificate cert;
  cert.backend = "none";
  cert.details["b_product"] = product.to_string();
  cert.details["witness_predicted"] = predicted;
  r.certificate = std::move(cert);
  if (r.witness) {
    r.outcome = Outcome::witness_found;
    if (!predicted) {
      r.consistent = false;
      r.notes.push_back("witness exists although the product of the b's is not the identity");
    }
  } else if (predicted) {
    r.outcome = Outcome::no_witness;
    r.consistent = false;
    r.notes.push_back("no witness although the product of the b's is the identity");
  } else {
    r.outcome = Outcome::no_witness_as_predicted;
  }
  r.millis = clock.millis();
  return r;
}

VerificationReport verify_theorem_main(const Instance& inst, const VerifyOptions& options) {
  Stopwatch clock;
  VerificationReport r = start_report(inst, options);
  r.backend = "cyclotomic";
  const GroupSpec& G = inst.group;
  const std::size_t k = inst.a.size();
  if (k == 0 || inst.b.size() != k) return refuse(std::move(r), "need |A| = |B| = k >= 1");
  if (k > options.max_k) return refuse(std::move(r), "k exceeds the cap " + std::to_string(options.max_k));
  if (!all_distinct(inst.a)) return refuse(std::move(r), "A must consist of distinct elements");

  std::vector<GroupElement> gens;
  if (inst.h_generators) {
    gens = *inst.h_generators;
  } else {
    for (std::size_t i = 0; i < G.rank(); ++i) {
      std::vector<std::int64_t> unit(G.rank(), 0);
      unit[i] = 1;
      gens.emplace_back(G, std::move(unit));
    }
  }
  const SubgroupSpec H(G, gens);
  const bool b_in_h = H.contains_all(inst.b);
  const bool a_in_h = H.contains_all(inst.a);
  if (!a_in_h && !b_in_h) return refuse(std::move(r), "neither A nor B lies in H");
  if (H.order() < 2) return refuse(std::move(r), "H is trivial");
  if (!is_k_large(H.order(), static_cast<std::int64_t>(k))) {
    return refuse(std::move(r), "|H| = " + std::to_string(H.order()) + " is not " + std::to_string(k) + "-large");
  }

  // Path 1: brute force.
  r.witness = find_distinct_permutation(G, inst.a, inst.b, options.max_k);

  // Path 2: det(M_a) != 0 from a Vandermonde-first search, per(M_b) != 0 from the
  // roots-of-unity bound. B in H uses all of G^; otherwise characters are taken
  // trivial on the Sylow subgroups for primes not dividing |H|.
  const auto primes = prime_divisors(H.order());
  const int case_no = b_in_h ? 1 : 2;
  std::vector<Character> candidates;
  std::int64_t h1_order = H.order();
  if (case_no == 1) {
    candidates = all_characters(G);
  } else {
    const SubgroupSpec H1 = hall_subgroup(G, primes);
    h1_order = H1.order();
    candidates = characters_supported_on(G, primes);
  }
  const Backend cyc = Backend::cyclotomic(G.exponent());
  const std::int64_t kf = factorial(static_cast<std::int64_t>(k));

  Certificate cert;
  cert.backend = cyc.descriptor();
  cert.details["case"] = case_no;
  cert.details["h_order"] = H.order();
  cert.details["h1_order"] = h1_order;
  const bool feasible = vanishing_sum_feasible(h1_order, kf);
  cert.details["vanishing_sum_feasible"] = feasible;
  if (feasible || !is_k_large(h1_order, static_cast<std::int64_t>(k))) {
    r.consistent = false;
    r.notes.push_back("k! is a nonnegative combination of the primes of |H1|; roots-of-unity bound unavailable");
  }

  auto search = search_character_tuples(G, candidates, k, options.search, [&](std::span<const Character> t) {
    return !matrix_value(G, t, inst.a, cyc, false).is_zero();
  });
  cert.details["found_by"] = search.found_by;
  cert.details["tuples_tried"] = search.tuples_tried;
  bool certified = false;
  if (search.tuple) {
    CertificateTuple tuple{"det-per", *search.tuple, {}};
    RingValue det_a = matrix_value(G, tuple.chars, inst.a, cyc, false);
    RingValue per_b = matrix_value(G, tuple.chars, inst.b, cyc, true);
    // Every character value on B must be an |H1|-th root of unity.
    for (const auto& chi : tuple.chars) {
      for (const auto& g : inst.b) {
        if (char_exponent(G, chi, g) * h1_order % G.exponent() != 0) {
          r.consistent = false;
          r.notes.push_back("character value on B is not an |H1|-th root of unity");
        }
      }
    }
    cert.details["distinct_characters"] = all_distinct(std::span<const Character>(tuple.chars));
    const bool per_nonzero = !per_b.is_zero();
    tuple.values.emplace_back("det_a", std::move(det_a));
    if (per_nonzero) {
      tuple.values.emplace_back("per_b", std::move(per_b));
      certified = true;
    } else {
      r.consistent = false;
      r.notes.push_back("per(M_b) vanished despite the roots-of-unity bound");
    }
    if (options.transfer_check) check_transfer(G, tuple, inst.a, inst.b, cyc, cert, r);
    cert.tuples.push_back(std::move(tuple));
  } else if (search.exhausted) {
    r.consistent = false;
    r.notes.push_back("no character tuple with det(M_a) != 0 after a full sweep");
  } else {
    r.notes.push_back("certificate search inconclusive within the configured caps");
  }
  r.certificate = std::move(cert);

  if (certified && !r.witness) {
    r.consistent = false;
    r.notes.push_back("certificate found but brute force found no witness");
  }
  if (!r.witness) {
    r.consistent = false;
    r.notes.push_back("no witness for a k-large instance");
  }
  r.outcome = r.witness ? Outcome::witness_found : Outcome::no_witness;
  r.millis = clock.millis();
  return r;
}

VerificationReport verify_powers_instance(const Instance& inst, const VerifyOptions& options) {
  Stopwatch clock;
  VerificationReport r = start_report(inst, options);
  r.backend = "cyclotomic";
  const GroupSpec& G = inst.group;
  if (!inst.base) return refuse(std::move(r), "powers instance needs the element a");
  const GroupElement& a = *inst.base;
  const std::size_t k = inst.exponents.size();
  if (k == 0 || inst.b.size() != k) return refuse(std::move(r), "need k exponents and k b-values");
  if (a.is_identity()) return refuse(std::move(r), "a must not be the identity");
  const std::int64_t ord = element_order(G, a);
  const std::int64_t p = inst.prime.value_or(smallest_prime_divisor(ord));
  if (!is_prime(p) || ord % p != 0) {
    return refuse(std::move(r), "p = " + std::to_string(p) + " is not a prime divisor of the order of a");
  }
  r.instance.prime = p;
  if (static_cast<std::int64_t>(k) >= p) return refuse(std::move(r), "k must be smaller than p");
  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t j = i + 1; j < k; ++j) {
      if ((inst.exponents[i] - inst.exponents[j]) % p == 0) {
        return refuse(std::move(r), "exponents must be pairwise incongruent modulo p");
      }
    }
  }

  std::vector<GroupElement> powers;
  for (auto e : inst.exponents) powers.push_back(group_pow(G, a, e));
  r.instance.a = powers;

  auto sylow = sylow_decomposition(G);
  const SylowPart& part = sylow.at(p);
  const std::int64_t cofactor = part.cofactor;
  const GroupElement a_tilde = group_pow(G, a, cofactor);
  if (a_tilde.is_identity()) {
    r.consistent = false;
    r.notes.push_back("projection of a into the Sylow subgroup is trivial");
  }
  Instance projected;
  projected.kind = InstanceKind::dkss;
  projected.group = G;
  projected.h_generators = part.subgroup.generators();
  for (auto e : inst.exponents) projected.a.push_back(group_pow(G, a_tilde, e));
  for (const auto& g : inst.b) projected.b.push_back(group_pow(G, g, cofactor));

  VerificationReport sub = verify_theorem_main(projected, options);
  if (sub.outcome == Outcome::refused) {
    r.consistent = false;
    r.notes.push_back("projected instance refused: " + sub.reason);
  }
  r.consistent = r.consistent && sub.consistent;
  for (const auto& n : sub.notes) r.notes.push_back("projected: " + n);
  if (sub.certificate) {
    Certificate cert = *sub.certificate;
    cert.details["projected_A"] = element_strings(projected.a);
    cert.details["projected_B"] = element_strings(projected.b);
    cert.details["sylow_prime"] = p;
    cert.details["sylow_order"] = part.subgroup.order();
    r.certificate = std::move(cert);
  }

  const auto direct = find_distinct_permutation(G, powers, inst.b, options.max_k);
  if (sub.witness) {
    if (products_distinct(G, powers, inst.b, *sub.witness)) {
      r.witness = sub.witness;
    } else {
      r.consistent = false;
      r.notes.push_back("projected witness does not lift");
    }
  }
  if (!r.witness && direct) {
    r.witness = direct;
    r.consistent = false;
    r.notes.push_back("only direct brute force found a witness");
  }
  if (r.witness && !direct) {
    r.consistent = false;
    r.notes.push_back("direct brute force disagrees with the lifted witness");
  }
  r.outcome = r.witness ? Outcome::witness_found : Outcome::no_witness;
  r.millis = clock.millis();
  return r;
}

namespace {

// Shared by the chi-det and Snevily verifiers: a tuple with det(M_a), det(M_b) != 0.
struct DetDetSearch {
  std::optional<CertificateTuple> tuple;
  TupleSearchResult search;
};

DetDetSearch search_det_det(const GroupSpec& G, std::span<const GroupElement> a, std::span<const GroupElement> b,
                            const Backend& backend, const SearchOptions& options) {
  const auto chars = all_characters(G);
  DetDetSearch out;
  out.search = search_character_tuples(G, chars, a.size(), options, [&](std::span<const Character> t) {
    return !matrix_value(G, t, a, backend, false).is_zero() && !matrix_value(G, t, b, backend, false).is_zero();
  });
  if (out.search.tuple) {
    CertificateTuple tuple{"det-det", *out.search.tuple, {}};
    tuple.values.emplace_back("det_a", matrix_value(G, tuple.chars, a, backend, false));
    tuple.values.emplace_back("det_b", matrix_value(G, tuple.chars, b, backend, false));
    out.tuple = std::move(tuple);
  }
  return out;
}

}  // namespace

VerificationReport search_chi_det_witness(const Instance& inst, const VerifyOptions& options) {
  Stopwatch clock;
  VerificationReport r = start_report(inst, options);
  const GroupSpec& G = inst.group;
  const std::size_t k = inst.a.size();
  if (k == 0 || inst.b.size() != k) return refuse(std::move(r), "need |A| = |B| = k >= 1");
  if (k > options.max_k) return refuse(std::move(r), "k exceeds the cap");
  if (!all_distinct(inst.a) || !all_distinct(inst.b)) return refuse(std::move(r), "A and B must be k-subsets");
  std::optional<Backend> backend;
  try {
    backend = Backend::for_group(G, options.backend);
  } catch (const DomainError& e) {
    return refuse(std::move(r), e.what());
  } catch (const RefusalError& e) {
    return refuse(std::move(r), e.what());
  }
  r.backend = backend->descriptor();

  auto found = search_det_det(G, inst.a, inst.b, *backend, options.search);
  r.witness = find_distinct_permutation(G, inst.a, inst.b, options.max_k);
  Certificate cert;
  cert.backend = backend->descriptor();
  cert.details["found_by"] = found.search.found_by;
  cert.details["tuples_tried"] = found.search.tuples_tried;
  if (backend->field_spec()) cert.details["field"] = backend->field_descriptor();

  if (found.tuple) {
    CertificateTuple tuple = std::move(*found.tuple);
    cert.details["distinct_characters"] = all_distinct(std::span<const Character>(tuple.chars));
    RingValue per_b = matrix_value(G, tuple.chars, inst.b, *backend, true);
    if (backend->characteristic_two()) {
      const RingValue& det_b = tuple.values[1].second;
      if (!(per_b == det_b)) {
        r.consistent = false;
        r.notes.push_back("per(M_b) != det(M_b) in characteristic 2");
      }
    }
    const bool implies_witness = !per_b.is_zero();
    if (implies_witness) tuple.values.emplace_back("per_b", std::move(per_b));
    if (options.transfer_check) check_transfer(G, tuple, inst.a, inst.b, *backend, cert, r);
    if (implies_witness && !r.witness) {
      r.consistent = false;
      r.notes.push_back("det(M_a) and per(M_b) are nonzero but brute force found no witness");
    }
    cert.tuples.push_back(std::move(tuple));
    r.certificate = std::move(cert);
    r.outcome = Outcome::certificate_found;
  } else if (found.search.exhausted) {
    r.certificate = std::move(cert);
    r.outcome = Outcome::no_witness;
    r.notes.push_back("full sweep found no character tuple with both determinants nonzero");
  } else {
    return refuse(std::move(r), "character search inconclusive within the configured caps");
  }
  r.millis = clock.millis();
  return r;
}

VerificationReport verify_snevily(const Instance& inst, const VerifyOptions& options) {
  Stopwatch clock;
  VerificationReport r = start_report(inst, options);
  const GroupSpec& G = inst.group;
  const std::size_t k = inst.a.size();
  if (G.order() % 2 == 0) return refuse(std::move(r), "Snevily instances need a group of odd order");
  if (k == 0 || inst.b.size() != k) return refuse(std::move(r), "need |A| = |B| = k >= 1");
  if (k > options.max_k) return refuse(std::move(r), "k exceeds the cap");
  if (!all_distinct(inst.a) || !all_distinct(inst.b)) return refuse(std::move(r), "A and B must be k-subsets");

  r.witness = find_distinct_permutation(G, inst.a, inst.b, options.max_k);

  // Certificate in characteristic 2, where per = det.
  BackendChoice choice;
  choice.kind = BackendKind::field;
  choice.characteristic = 2;
  choice.totient_degree = options.backend.kind == BackendKind::field && options.backend.totient_degree;
  std::optional<Backend> backend;
  try {
    backend = Backend::for_group(G, choice);
  } catch (const RefusalError& e) {
    r.notes.push_back(std::string("characteristic-2 certificate skipped: ") + e.what());
  }
  r.backend = backend ? backend->descriptor() : "none";
  if (backend) {
    auto found = search_det_det(G, inst.a, inst.b, *backend, options.search);
    Certificate cert;
    cert.backend = backend->descriptor();
    cert.details["field"] = backend->field_descriptor();
    cert.details["found_by"] = found.search.found_by;
    cert.details["tuples_tried"] = found.search.tuples_tried;
    if (found.tuple) {
      CertificateTuple tuple = std::move(*found.tuple);
      RingValue per_b = matrix_value(G, tuple.chars, inst.b, *backend, true);
      if (!(per_b == tuple.values[1].second)) {
        r.consistent = false;
        r.notes.push_back("per(M_b) != det(M_b) in characteristic 2");
      }
      tuple.values.emplace_back("per_b", std::move(per_b));
      if (options.transfer_check) check_transfer(G, tuple, inst.a, inst.b, *backend, cert, r);
      if (!r.witness) {
        r.consistent = false;
        r.notes.push_back("characteristic-2 certificate found but brute force found no witness");
      }
      cert.tuples.push_back(std::move(tuple));
      r.certificate = std::move(cert);
    } else if (found.search.exhausted) {
      r.consistent = false;
      r.notes.push_back("chi-det counterexample: no character tuple with both determinants nonzero");
    } else {
      r.notes.push_back("characteristic-2 certificate search inconclusive");
    }
  }
  r.outcome = r.witness ? Outcome::witness_found : Outcome::no_witness;
  r.millis = clock.millis();
  return r;
}

VerificationReport verify_unique_product_condition(const Instance& inst, const VerifyOptions& options) {
  Stopwatch clock;
  VerificationReport r = start_report(inst, options);
  const GroupSpec& G = inst.group;
  const std::size_t k = inst.a.size();
  if (k == 0 || inst.b.size() != k) return refuse(std::move(r), "need |A| = |B| = k >= 1");
  if (k > options.max_permutation_k) return refuse(std::move(r), "k! exceeds the permutation cap");
  if (!all_distinct(inst.a)) return refuse(std::move(r), "A must consist of distinct elements");

  // Group permutations by the product set they realise.
  std::map<std::vector<std::int64_t>, std::vector<Permutation>> by_set;
  Permutation tau = Permutation::identity(k);
  do {
    std::vector<std::int64_t> products;
    for (std::size_t i = 0; i < k; ++i) {
      products.push_back(element_index(G, group_mul(G, inst.a[i], inst.b[static_cast<std::size_t>(tau(i))])));
    }
    std::sort(products.begin(), products.end());
    if (std::adjacent_find(products.begin(), products.end()) != products.end()) continue;
    by_set[products].push_back(tau);
  } while (tau.next());
  std::optional<Permutation> unique;
  // Lexicographically least pi whose product set no other tau realises.
  for (const auto& [set, perms] : by_set) {
    if (perms.size() == 1 && (!unique || std::lexicographical_compare(perms[0].images().begin(),
                                                                       perms[0].images().end(),
                                                                       unique->images().begin(),
                                                                       unique->images().end()))) {
      unique = perms[0];
    }
  }
  if (!unique) return refuse(std::move(r), "not applicable: no product set is realised by a unique permutation");

  std::optional<Backend> backend;
  try {
    backend = Backend::for_group(G, options.backend);
  } catch (const DomainError& e) {
    return refuse(std::move(r), e.what());
  } catch (const RefusalError& e) {
    return refuse(std::move(r), e.what());
  }
  r.backend = backend->descriptor();
  r.witness = unique;
  if (!products_distinct(G, inst.a, inst.b, *unique)) {
    r.consistent = false;
    r.notes.push_back("unique permutation does not give distinct products");
  }

  Certificate cert;
  cert.backend = backend->descriptor();
  cert.details["pi"] = unique->one_based();
  const auto chars = all_characters(G);
  struct Role {
    const char* name;
    bool per_a;
    bool per_b;
  };
  for (const Role role : {Role{"det-det", false, false}, Role{"det-per", false, true}, Role{"per-per", true, true}}) {
    auto search = search_character_tuples(G, chars, k, options.search, [&](std::span<const Character> t) {
      return !matrix_value(G, t, inst.a, *backend, role.per_a).is_zero() &&
             !matrix_value(G, t, inst.b, *backend, role.per_b).is_zero();
    });
    if (!search.tuple) {
      if (search.exhausted) {
        r.consistent = false;
        r.notes.push_back(std::string("no ") + role.name + " tuple after a full sweep");
      } else {
        r.notes.push_back(std::string(role.name) + " search inconclusive");
      }
      continue;
    }
    CertificateTuple tuple{role.name, *search.tuple, {}};
    tuple.values.emplace_back(role.per_a ? "per_a" : "det_a", matrix_value(G, tuple.chars, inst.a, *backend, role.per_a));
    tuple.values.emplace_back(role.per_b ? "per_b" : "det_b", matrix_value(G, tuple.chars, inst.b, *backend, role.per_b));
    cert.tuples.push_back(std::move(tuple));
  }

  // Replay of the orthogonality sum: over all chi-tuples,
  // prod_i chi_i^{-1}(a_i b_pi(i)) det(M_a) det(M_b) = sgn(pi) |G|^k.
  std::int64_t sweep = 1;
  bool small = true;
  for (std::size_t i = 0; i < k && small; ++i) {
    if (sweep > options.sigma_replay_cap / G.order()) small = false;
    sweep *= G.order();
  }
  if (small && backend->kind() == BackendKind::cyclotomic) {
    const Backend& cyc = *backend;
    RingValue sigma = cyc.zero();
    std::vector<Character> tuple(k, chars[0]);
    std::vector<std::size_t> idx(k, 0);
    while (true) {
      for (std::size_t i = 0; i < k; ++i) tuple[i] = chars[idx[i]];
      RingValue term = matrix_value(G, tuple, inst.a, cyc, false);
      if (!term.is_zero()) {
        term *= matrix_value(G, tuple, inst.b, cyc, false);
        for (std::size_t i = 0; i < k; ++i) {
          const auto c = group_mul(G, inst.a[i], inst.b[static_cast<std::size_t>((*unique)(i))]);
          term *= cyc.root(-char_exponent(G, tuple[i], c));
        }
        sigma += term;
      }
      std::size_t pos = k;
      while (pos > 0 && ++idx[pos - 1] == chars.size()) idx[--pos] = 0;
      if (pos == 0) break;
    }
    mpz_class expected = 1;
    for (std::size_t i = 0; i < k; ++i) expected *= G.order();
    if (unique->sign() < 0) expected = -expected;
    const bool matches = sigma == RingValue(CyclotomicInteger::from_integer(G.exponent(), expected));
    cert.details["sigma"] = expected.get_str();
    cert.details["sigma_replayed"] = matches;
    if (!matches) {
      r.consistent = false;
      r.notes.push_back("orthogonality sum does not equal sgn(pi)|G|^k: " + sigma.to_string());
    }
  } else {
    cert.details["sigma_replayed"] = "skipped";
  }
  r.certificate = std::move(cert);
  r.outcome = Outcome::certificate_found;
  r.millis = clock.millis();
  return r;
}

namespace {

bool multi_backtrack(const GroupSpec& G, std::span<const std::vector<GroupElement>> sets, std::size_t k,
                     std::size_t position, std::vector<std::uint32_t>& used, std::vector<std::vector<int>>& images,
                     std::vector<std::int64_t>& products, std::size_t set_index, const GroupElement& partial) {
  const std::size_t m = sets.size();
  if (position == k) return true;
  if (set_index == m) {
    const std::int64_t v = element_index(G, partial);
    if (std::find(products.begin(), products.end(), v) != products.end()) return false;
    products.push_back(v);
    if (multi_backtrack(G, sets, k, position + 1, used, images, products, 1, sets[0][position + 1 < k ? position + 1 : 0]))
      return true;
    products.pop_back();
    return false;
  }
  for (std::size_t j = 0; j < k; ++j) {
    if (used[set_index] & (1u << j)) continue;
    used[set_index] |= 1u << j;
    images[set_index - 1][position] = static_cast<int>(j);
    if (multi_backtrack(G, sets, k, position, used, images, products, set_index + 1,
                        group_mul(G, partial, sets[set_index][j]))) {
      return true;
    }
    used[set_index] &= ~(1u << j);
  }
  return false;
}

}  // namespace

std::optional<std::vector<Permutation>> find_multi_permutations(const GroupSpec& spec,
                                                                std::span<const std::vector<GroupElement>> sets) {
  if (sets.empty()) throw DomainError("need at least one set");
  const std::size_t k = sets[0].size();
  if (k > 31) throw RefusalError("set size exceeds the cap");
  for (const auto& s : sets) {
    if (s.size() != k) throw StructuralError("all sets must have the same size");
  }
  if (k == 0) return std::vector<Permutation>(sets.size() - 1, Permutation::identity(0));
  std::vector<std::uint32_t> used(sets.size(), 0);
  std::vector<std::vector<int>> images(sets.size() - 1, std::vector<int>(k, 0));
  std::vector<std::int64_t> products;
  if (!multi_backtrack(spec, sets, k, 0, used, images, products, 1, sets[0][0])) return std::nullopt;
  std::vector<Permutation> out;
  for (auto& im : images) out.emplace_back(std::move(im));
  return out;
}

VerificationReport verify_sun_multi(const Instance& inst, const VerifyOptions& options) {
  Stopwatch clock;
  VerificationReport r = start_report(inst, options);
  r.backend = "cyclotomic";
  const GroupSpec& G = inst.group;
  const auto& sets = inst.sets;
  const std::size_t m = sets.size();
  if (G.exponent() != G.order()) return refuse(std::move(r), "the group must be cyclic");
  if (m == 0 || m % 2 == 0) return refuse(std::move(r), "m must be odd");
  const std::size_t k = sets[0].size();
  if (k == 0) return refuse(std::move(r), "sets must be nonempty");
  for (const auto& s : sets) {
    if (s.size() != k || !all_distinct(s)) return refuse(std::move(r), "every A_i must be a k-subset");
  }
  if (k > options.max_k) return refuse(std::move(r), "k exceeds the cap");
  std::int64_t terms = 1;
  for (std::size_t i = 1; i < m; ++i) {
    terms *= factorial(static_cast<std::int64_t>(k));
    if (terms > options.multi_cap) return refuse(std::move(r), "(k!)^(m-1) exceeds the cap");
  }
  r.instance.a = sets[0];

  if (auto perms = find_multi_permutations(G, sets)) r.witness_perms = std::move(*perms);

  // Vandermonde certificate: chi_l = chi^(l-1) for a generator chi of G^.
  const Backend cyc = Backend::cyclotomic(G.exponent());
  const auto chars = all_characters(G);
  const auto gen = cyclic_generator(G, chars);
  if (!gen) throw InternalError("cyclic group without a generating character");
  CertificateTuple tuple{"vandermonde", {}, {}};
  for (std::size_t l = 0; l < k; ++l) tuple.chars.emplace_back(group_pow(G, gen->dual(), static_cast<std::int64_t>(l)));
  bool all_nonzero = true;
  std::optional<RingValue> product;
  for (std::size_t i = 0; i < m; ++i) {
    RingValue d = matrix_value(G, tuple.chars, sets[i], cyc, false);
    all_nonzero = all_nonzero && !d.is_zero();
    product = product ? *product * d : d;
    tuple.values.emplace_back("det_s" + std::to_string(i + 1), std::move(d));
  }
  Certificate cert;
  cert.backend = cyc.descriptor();
  if (!all_nonzero) {
    r.consistent = false;
    r.notes.push_back("a Vandermonde determinant vanished");
  }
  if (terms <= options.exterior_replay_cap) {
    const MultiVector total = sum_multi_q(G, cyc, sets, options.exterior_replay_cap);
    RingValue lhs = compose_derivations(tuple.chars, total);
    RingValue rhs = (k * (k - 1) / 2) % 2 == 0 ? *product : -*product;
    const bool holds = lhs == rhs;
    cert.details["exterior_identity"] = holds;
    if (!holds) {
      r.consistent = false;
      r.notes.push_back("derivation identity for the multi-set sum failed");
    }
  } else {
    cert.details["exterior_identity"] = "skipped";
  }
  cert.tuples.push_back(std::move(tuple));
  r.certificate = std::move(cert);
  if (all_nonzero && r.witness_perms.empty()) {
    r.consistent = false;
    r.notes.push_back("Vandermonde certificate nonzero but no permutations found");
  }
  r.outcome = r.witness_perms.empty() ? Outcome::no_witness : Outcome::witness_found;
  r.millis = clock.millis();
  return r;
}

VerificationReport verify_instance(const Instance& inst, const VerifyOptions& options) {
  try {
    switch (inst.kind) {
      case InstanceKind::hall: {
        VerificationReport r = verify_hall(inst.group, inst.b, options);
        return r;
      }
      case InstanceKind::dkss: return verify_theorem_main(inst, options);
      case InstanceKind::powers: return verify_powers_instance(inst, options);
      case InstanceKind::chi_det: return search_chi_det_witness(inst, options);
      case InstanceKind::snevily: return verify_snevily(inst, options);
      case InstanceKind::unique_product: return verify_unique_product_condition(inst, options);
      case InstanceKind::sun_multi: return verify_sun_multi(inst, options);
    }
  } catch (const RefusalError& e) {
    return refuse(start_report(inst, options), e.what());
  } catch (const DomainError& e) {
    return refuse(start_report(inst, options), e.what());
  } catch (const StructuralError& e) {
    return refuse(start_report(inst, options), e.what());
  }
  throw InternalError("unhandled instance kind");
}

// ---------------------------------------------------------------------------

namespace {

// Z[zeta_p] -> F_q with zeta_p -> w, q prime, q = 1 mod p. Minors above the
// exact determinant cap are evaluated there: a nonzero image proves the
// cyclotomic minor nonzero.
struct PrimeFieldImage {
  std::uint64_t q = 0;
  std::uint64_t w = 0;

  static std::uint64_t mul(std::uint64_t a, std::uint64_t b, std::uint64_t q) {
    return static_cast<std::uint64_t>(static_cast<unsigned __int128>(a) * b % q);
  }
  static std::uint64_t power(std::uint64_t a, std::uint64_t e, std::uint64_t q) {
    std::uint64_t r = 1;
    for (; e; e >>= 1, a = mul(a, a, q)) {
      if (e & 1) r = mul(r, a, q);
    }
    return r;
  }

  explicit PrimeFieldImage(std::int64_t p) {
    const auto pp = static_cast<std::uint64_t>(p);
    for (std::uint64_t t = (1ULL << 40) / pp;; ++t) {
      const std::uint64_t cand = 1 + pp * t;
      const mpz_class z(std::to_string(cand));
      if (mpz_probab_prime_p(z.get_mpz_t(), 40) == 0) continue;
      q = cand;
      break;
    }
    for (std::uint64_t x = 2;; ++x) {
      w = power(x, (q - 1) / pp, q);
      if (w != 1) break;
    }
  }

  // Gaussian elimination; entries are exponents of zeta_p.
  bool determinant_nonzero(const std::vector<std::int64_t>& exps, std::size_t k) const {
    std::vector<std::uint64_t> m(exps.size());
    for (std::size_t i = 0; i < exps.size(); ++i) m[i] = power(w, static_cast<std::uint64_t>(exps[i]), q);
    for (std::size_t c = 0; c < k; ++c) {
      std::size_t piv = c;
      while (piv < k && m[piv * k + c] == 0) ++piv;
      if (piv == k) return false;
      if (piv != c) {
        for (std::size_t j = 0; j < k; ++j) std::swap(m[piv * k + j], m[c * k + j]);
      }
      const std::uint64_t inv = power(m[c * k + c], q - 2, q);
      for (std::size_t r = c + 1; r < k; ++r) {
        const std::uint64_t f = mul(m[r * k + c], inv, q);
        if (f == 0) continue;
        for (std::size_t j = c; j < k; ++j) m[r * k + j] = (m[r * k + j] + q - mul(f, m[c * k + j], q)) % q;
      }
    }
    return true;
  }
};

}  // namespace

MinorSweepReport chebotarev_check(std::int64_t p, std::uint64_t seed, std::int64_t samples_per_k) {
  if (!is_prime(p)) throw DomainError("chebotarev_check needs a prime");
  MinorSweepReport report;
  report.p = p;
  report.sampled = p > 7;
  const std::size_t n = static_cast<std::size_t>(p);
  std::vector<CyclotomicInteger> table;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) table.push_back(root_of_unity(p, static_cast<std::int64_t>(i * j)));
  }
  std::optional<PrimeFieldImage> image;
  auto check = [&](const std::vector<std::size_t>& rows, const std::vector<std::size_t>& cols) {
    const std::size_t k = rows.size();
    std::vector<CyclotomicInteger> minor;
    minor.reserve(k * k);
    for (auto i : rows) {
      for (auto j : cols) minor.push_back(table[i * n + j]);
    }
    ++report.minors_checked;
    bool zero;
    if (k <= kMaxMatrixSize) {
      zero = determinant(std::span<const CyclotomicInteger>(minor), k).is_zero();
    } else {
      if (!image) image.emplace(p);
      std::vector<std::int64_t> exps;
      for (auto i : rows) {
        for (auto j : cols) exps.push_back(static_cast<std::int64_t>(i * j) % p);
      }
      zero = !image->determinant_nonzero(exps, k);
    }
    if (zero) {
      ++report.zero_minors;
      if (report.failures.size() < 10) {
        std::string s = "rows";
        for (auto i : rows) s += " " + std::to_string(i);
        s += " cols";
        for (auto j : cols) s += " " + std::to_string(j);
        report.failures.push_back(s);
      }
    }
  };
  auto subsets = [n](std::size_t k) {
    std::vector<std::vector<std::size_t>> out;
    for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
      if (static_cast<std::size_t>(std::popcount(mask)) != k) continue;
      std::vector<std::size_t> s;
      for (std::size_t i = 0; i < n; ++i) {
        if (mask & (1u << i)) s.push_back(i);
      }
      out.push_back(std::move(s));
    }
    return out;
  };
  Rng rng(seed);
  for (std::size_t k = 1; k <= n; ++k) {
    const auto all = subsets(k);
    if (!report.sampled) {
      for (const auto& rows : all) {
        for (const auto& cols : all) check(rows, cols);
      }
    } else {
      for (std::int64_t s = 0; s < samples_per_k; ++s) {
        check(all[uniform_below(rng, all.size())], all[uniform_below(rng, all.size())]);
      }
    }
  }
  return report;
}

BoundaryReport dkss_boundary_check(std::int64_t p) {
  if (!is_prime(p)) throw DomainError("dkss_boundary_check needs a prime");
  const GroupSpec G({p});
  const auto elems = enumerate_elements(G);
  BoundaryReport report;
  report.p = p;
  std::vector<std::int64_t> digits(static_cast<std::size_t>(p), 0);
  std::vector<GroupElement> b(static_cast<std::size_t>(p), elems[0]);
  while (true) {
    std::int64_t sum = 0;
    for (auto d : digits) sum += d;
    if (sum % p != 0) {
      for (std::size_t i = 0; i < digits.size(); ++i) b[i] = elems[static_cast<std::size_t>(digits[i])];
      ++report.assignments;
      if (find_distinct_permutation(G, elems, b, static_cast<std::size_t>(p))) ++report.witnesses_found;
    }
    std::size_t pos = digits.size();
    while (pos > 0 && ++digits[pos - 1] == p) digits[--pos] = 0;
    if (pos == 0) break;
  }
  return report;
}

// ---------------------------------------------------------------------------

std::vector<std::string> revalidate(const VerificationReport& report) {
  std::vector<std::string> problems;
  const Instance& inst = report.instance;
  const GroupSpec& G = inst.group;

  if (report.outcome == Outcome::witness_found && !report.witness && report.witness_perms.empty()) {
    problems.push_back("outcome witness-found without a witness");
  }
  if (report.witness) {
    if (inst.kind == InstanceKind::hall) {
      const auto elems = enumerate_elements(G);
      if (!products_distinct(G, elems, inst.b, *report.witness)) problems.push_back("Hall witness has a collision");
    } else if (!products_distinct(G, inst.a, inst.b, *report.witness)) {
      problems.push_back("witness permutation does not give distinct products");
    }
  }
  if (!report.witness_perms.empty()) {
    const auto& sets = inst.sets;
    if (report.witness_perms.size() + 1 != sets.size()) {
      problems.push_back("multi-set witness has the wrong number of permutations");
    } else {
      std::set<GroupElement> seen;
      for (std::size_t j = 0; j < sets[0].size(); ++j) {
        GroupElement c = sets[0][j];
        for (std::size_t i = 0; i < report.witness_perms.size(); ++i) {
          c = group_mul(G, c, sets[i + 1][static_cast<std::size_t>(report.witness_perms[i](j))]);
        }
        if (!seen.insert(c).second) {
          problems.push_back("multi-set witness has a collision");
          break;
        }
      }
    }
  }

  if (report.certificate && !report.certificate->tuples.empty()) {
    const Certificate& cert = *report.certificate;
    std::vector<GroupElement> a = inst.a;
    std::vector<GroupElement> b = inst.b;
    if (cert.details.contains("projected_A")) {
      a.clear();
      b.clear();
      for (const auto& s : cert.details["projected_A"]) a.push_back(parse_element(G, s.get<std::string>()));
      for (const auto& s : cert.details["projected_B"]) b.push_back(parse_element(G, s.get<std::string>()));
    }
    const Backend backend = Backend::for_group(G, BackendChoice::parse(cert.backend));
    for (const auto& tuple : cert.tuples) {
      for (const auto& [name, stored] : tuple.values) {
        std::span<const GroupElement> elems;
        if (name.size() > 4 && name.substr(4, 1) == "s") {
          const std::size_t idx = std::stoul(name.substr(5)) - 1;
          if (idx >= inst.sets.size()) {
            problems.push_back("certificate value " + name + " refers to a missing set");
            continue;
          }
          elems = inst.sets[idx];
        } else {
          elems = name.back() == 'a' ? std::span<const GroupElement>(a) : std::span<const GroupElement>(b);
        }
        const bool per = name.rfind("per", 0) == 0;
        const RingValue value = matrix_value(G, tuple.chars, elems, backend, per);
        if (!(value == stored)) problems.push_back("certificate value " + name + " does not recompute");
        if (value.is_zero()) problems.push_back("certificate value " + name + " is zero");
      }
    }
  }
  return problems;
}

}  // namespace transversal
