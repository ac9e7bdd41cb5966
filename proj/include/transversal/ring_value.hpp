#pragma once

// A coefficient value tagged by backend: either an exact cyclotomic integer
// or an element of a finite field. Mixing backends is always an error; a
// silent coercion would invalidate nonzero certificates.

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "transversal/cyclotomic.hpp"
#include "transversal/finite_field.hpp"

namespace transversal {

class GroupSpec;

enum class BackendKind { cyclotomic, field };

class RingValue {
 public:
  RingValue(CyclotomicInteger v) : value_(std::move(v)) {}  // NOLINT(implicit)
  RingValue(FiniteFieldElement v) : value_(std::move(v)) {}  // NOLINT(implicit)

  BackendKind kind() const {
    return std::holds_alternative<CyclotomicInteger>(value_) ? BackendKind::cyclotomic : BackendKind::field;
  }
  const CyclotomicInteger& cyclotomic() const;
  const FiniteFieldElement& field() const;

  bool is_zero() const;

  RingValue& operator+=(const RingValue& other);
  RingValue& operator-=(const RingValue& other);
  RingValue& operator*=(const RingValue& other);
  friend RingValue operator+(RingValue a, const RingValue& b) { return a += b; }
  friend RingValue operator-(RingValue a, const RingValue& b) { return a -= b; }
  friend RingValue operator*(RingValue a, const RingValue& b) { return a *= b; }
  RingValue operator-() const;

  bool operator==(const RingValue& other) const;
  std::string to_string() const;

 private:
  std::variant<CyclotomicInteger, FiniteFieldElement> value_;
};

// What the user asked for, before it is bound to a particular group.
struct BackendChoice {
  BackendKind kind = BackendKind::cyclotomic;
  std::optional<std::int64_t> characteristic;  // field only; default: smallest admissible prime
  bool totient_degree = false;                 // field only; use F_{q^phi(|G|)}

  // "cyclotomic", "field", "field:2", "field:2:totient".
  static BackendChoice parse(std::string_view text);
  std::string to_string() const;
};

// A coefficient ring together with the root of unity zeta_L used for
// character values, L being the exponent of the group.
class Backend {
 public:
  static Backend cyclotomic(std::int64_t level);
  // The field must contain a distinguished root whose order is a multiple of level.
  static Backend field(FieldSpecPtr spec, std::int64_t level);
  // Cyclotomic: Z[zeta_e]. Field: a field with an element of order |G|.
  static Backend for_group(const GroupSpec& group, const BackendChoice& choice);

  BackendKind kind() const { return kind_; }
  std::int64_t level() const { return level_; }
  const FieldSpecPtr& field_spec() const { return field_; }
  bool characteristic_two() const { return field_ && field_->characteristic() == 2; }

  RingValue zero() const;
  RingValue one() const;
  RingValue from_integer(std::int64_t value) const;
  // Image of zeta_L^exponent.
  const RingValue& root(std::int64_t exponent) const;

  // "cyclotomic" or "field:q" (":totient" suffix when built with that rule).
  std::string descriptor() const;
  // Field structure for reports; empty for the cyclotomic backend.
  std::string field_descriptor() const;

  bool same_ring(const Backend& other) const;

 private:
  Backend(BackendKind kind, std::int64_t level, FieldSpecPtr field, bool totient);

  BackendKind kind_;
  std::int64_t level_;
  FieldSpecPtr field_;
  bool totient_ = false;
  std::shared_ptr<const std::vector<RingValue>> roots_;
};

}  // namespace transversal
