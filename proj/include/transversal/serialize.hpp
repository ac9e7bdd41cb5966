#pragma once

// JSON encodings for values and reports. Reports are written one per line.

#include <string>

#include <json.hpp>

#include "transversal/exterior.hpp"
#include "transversal/verifiers.hpp"

namespace transversal {

using nlohmann::json;

// {"level": L, "coeffs": [...]}; coefficients outside int64 become decimal strings.
json to_json(const CyclotomicInteger& a);
CyclotomicInteger cyclotomic_from_json(const json& j);

// {"q", "d", "modulus", "omega", "order"}.
json to_json(const FieldSpec& spec);

// Cyclotomic values as above; field values as {"q", "d", "coeffs"}.
json to_json(const RingValue& v);
// Field values are rebuilt against `backend` and must match its field.
RingValue ring_value_from_json(const json& j, const Backend& backend);

// [{"blade": ["(0)", "(2)"], "coeff": ...}, ...]
json to_json(const MultiVector& x);

json to_json(const VerificationReport& r, bool include_timing = true);
VerificationReport report_from_json(const json& j);

// Single-line JSON with sorted keys.
std::string to_jsonl(const VerificationReport& r, bool include_timing = true);

}  // namespace transversal
