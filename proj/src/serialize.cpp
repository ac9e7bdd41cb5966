#include "transversal/serialize.hpp"

#include "transversal/errors.hpp"

namespace transversal {

namespace {

json coeff_json(const mpz_class& c) {
  if (c.fits_slong_p()) return static_cast<std::int64_t>(c.get_si());
  return c.get_str();
}

mpz_class coeff_from_json(const json& j) {
  if (j.is_string()) return mpz_class(j.get<std::string>());
  if (j.is_number_integer()) return mpz_class(static_cast<long>(j.get<std::int64_t>()));
  throw ParseError("cyclotomic coefficient must be an integer or a decimal string");
}

json elements_json(std::span<const GroupElement> elems) {
  json out = json::array();
  for (const auto& g : elems) out.push_back(g.to_string());
  return out;
}

std::vector<GroupElement> elements_from_json(const GroupSpec& spec, const json& j) {
  std::vector<GroupElement> out;
  for (const auto& s : j) out.push_back(parse_element(spec, s.get<std::string>()));
  return out;
}

json permutation_json(const Permutation& pi) { return pi.one_based(); }

Permutation permutation_from_json(const json& j) { return Permutation::from_one_based(j.get<std::vector<int>>()); }

}  // namespace

json to_json(const CyclotomicInteger& a) {
  json coeffs = json::array();
  for (const auto& c : a.coeffs()) coeffs.push_back(coeff_json(c));
  return {{"level", a.level()}, {"coeffs", coeffs}};
}

CyclotomicInteger cyclotomic_from_json(const json& j) {
  std::vector<mpz_class> coeffs;
  for (const auto& c : j.at("coeffs")) coeffs.push_back(coeff_from_json(c));
  return CyclotomicInteger(j.at("level").get<std::int64_t>(), std::move(coeffs));
}

json to_json(const FieldSpec& spec) {
  return {{"q", spec.characteristic()},
          {"d", spec.degree()},
          {"modulus", spec.modulus()},
          {"omega", spec.omega()},
          {"order", spec.omega_order()}};
}

json to_json(const RingValue& v) {
  if (v.kind() == BackendKind::cyclotomic) return to_json(v.cyclotomic());
  const auto& f = v.field();
  return {{"q", f.spec()->characteristic()}, {"d", f.spec()->degree()}, {"coeffs", f.coeffs()}};
}

RingValue ring_value_from_json(const json& j, const Backend& backend) {
  if (j.contains("level")) {
    if (backend.kind() != BackendKind::cyclotomic) throw StructuralError("cyclotomic value for a field backend");
    return cyclotomic_from_json(j);
  }
  const auto& spec = backend.field_spec();
  if (!spec) throw StructuralError("field value for the cyclotomic backend");
  if (j.at("q").get<std::int64_t>() != spec->characteristic() || j.at("d").get<std::int64_t>() != spec->degree()) {
    throw StructuralError("field value does not belong to the backend field");
  }
  return FiniteFieldElement(spec, j.at("coeffs").get<FqPolynomial>());
}

json to_json(const MultiVector& x) {
  json out = json::array();
  for (const auto& [blade, coeff] : x.terms()) {
    json names = json::array();
    for (auto idx : blade) names.push_back(element_at(x.spec(), idx).to_string());
    out.push_back({{"blade", names}, {"coeff", to_json(coeff)}});
  }
  return out;
}

json to_json(const VerificationReport& r, bool include_timing) {
  const Instance& in = r.instance;
  json j;
  j["kind"] = to_string(in.kind);
  j["group"] = in.group.to_string();
  j["A"] = elements_json(in.a);
  j["B"] = elements_json(in.b);
  if (in.h_generators) j["H"] = elements_json(*in.h_generators);
  if (!in.sets.empty()) {
    json sets = json::array();
    for (const auto& s : in.sets) sets.push_back(elements_json(s));
    j["sets"] = sets;
  }
  if (in.base) j["base"] = in.base->to_string();
  if (!in.exponents.empty()) j["exponents"] = in.exponents;
  if (in.prime) j["prime"] = *in.prime;
  j["outcome"] = to_string(r.outcome);
  j["witness"] = r.witness ? permutation_json(*r.witness) : json(nullptr);
  if (!r.witness_perms.empty()) {
    json perms = json::array();
    for (const auto& p : r.witness_perms) perms.push_back(permutation_json(p));
    j["witness_perms"] = perms;
  }
  if (r.certificate) {
    const Certificate& c = *r.certificate;
    json tuples = json::array();
    for (const auto& t : c.tuples) {
      json chars = json::array();
      for (const auto& chi : t.chars) chars.push_back(chi.to_string());
      json values = json::object();
      for (const auto& [name, value] : t.values) values[name] = to_json(value);
      tuples.push_back({{"role", t.role}, {"chars", chars}, {"values", values}});
    }
    j["certificate"] = {{"backend", c.backend}, {"tuples", tuples}, {"details", c.details}};
  } else {
    j["certificate"] = nullptr;
  }
  j["backend"] = r.backend;
  j["strategy"] = r.strategy;
  j["seed"] = r.seed;
  j["consistent"] = r.consistent;
  j["notes"] = r.notes;
  if (!r.reason.empty()) j["reason"] = r.reason;
  if (include_timing) j["millis"] = r.millis;
  return j;
}

VerificationReport report_from_json(const json& j) {
  VerificationReport r;
  Instance& in = r.instance;
  in.kind = parse_instance_kind(j.at("kind").get<std::string>());
  in.group = GroupSpec::parse(j.at("group").get<std::string>());
  in.a = elements_from_json(in.group, j.at("A"));
  in.b = elements_from_json(in.group, j.at("B"));
  if (j.contains("H")) in.h_generators = elements_from_json(in.group, j["H"]);
  if (j.contains("sets")) {
    for (const auto& s : j["sets"]) in.sets.push_back(elements_from_json(in.group, s));
  }
  if (j.contains("base")) in.base = parse_element(in.group, j["base"].get<std::string>());
  if (j.contains("exponents")) in.exponents = j["exponents"].get<std::vector<std::int64_t>>();
  if (j.contains("prime")) in.prime = j["prime"].get<std::int64_t>();
  r.outcome = parse_outcome(j.at("outcome").get<std::string>());
  if (!j.at("witness").is_null()) r.witness = permutation_from_json(j["witness"]);
  if (j.contains("witness_perms")) {
    for (const auto& p : j["witness_perms"]) r.witness_perms.push_back(permutation_from_json(p));
  }
  if (!j.at("certificate").is_null()) {
    const json& c = j["certificate"];
    Certificate cert;
    cert.backend = c.at("backend").get<std::string>();
    cert.details = c.value("details", json::object());
    std::optional<Backend> backend;
    for (const auto& t : c.at("tuples")) {
      if (!backend) backend = Backend::for_group(in.group, BackendChoice::parse(cert.backend));
      CertificateTuple tuple;
      tuple.role = t.at("role").get<std::string>();
      for (const auto& s : t.at("chars")) tuple.chars.emplace_back(parse_element(in.group, s.get<std::string>()));
      for (const auto& [name, value] : t.at("values").items()) {
        tuple.values.emplace_back(name, ring_value_from_json(value, *backend));
      }
      cert.tuples.push_back(std::move(tuple));
    }
    r.certificate = std::move(cert);
  }
  r.backend = j.value("backend", std::string("cyclotomic"));
  r.strategy = j.value("strategy", std::string("auto"));
  r.seed = j.value("seed", std::uint64_t{0});
  r.consistent = j.value("consistent", true);
  r.notes = j.value("notes", std::vector<std::string>{});
  r.reason = j.value("reason", std::string());
  r.millis = j.value("millis", 0.0);
  return r;
}

std::string to_jsonl(const VerificationReport& r, bool include_timing) { return to_json(r, include_timing).dump(); }

}  // namespace transversal
