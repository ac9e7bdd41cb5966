#include "transversal/ring_value.hpp"

#include "transversal/errors.hpp"
#include "transversal/group.hpp"

namespace transversal {

namespace {

[[noreturn]] void backend_mismatch() {
  throw StructuralError("mixed-backend arithmetic between cyclotomic and finite-field values");
}

}  // namespace

const CyclotomicInteger& RingValue::cyclotomic() const {
  if (auto* v = std::get_if<CyclotomicInteger>(&value_)) return *v;
  backend_mismatch();
}

const FiniteFieldElement& RingValue::field() const {
  if (auto* v = std::get_if<FiniteFieldElement>(&value_)) return *v;
  backend_mismatch();
}

bool RingValue::is_zero() const {
  return std::visit([](const auto& v) { return v.is_zero(); }, value_);
}

RingValue& RingValue::operator+=(const RingValue& other) {
  if (kind() != other.kind()) backend_mismatch();
  if (auto* v = std::get_if<CyclotomicInteger>(&value_)) {
    *v += other.cyclotomic();
  } else {
    std::get<FiniteFieldElement>(value_) += other.field();
  }
  return *this;
}

RingValue& RingValue::operator-=(const RingValue& other) {
  if (kind() != other.kind()) backend_mismatch();
  if (auto* v = std::get_if<CyclotomicInteger>(&value_)) {
    *v -= other.cyclotomic();
  } else {
    std::get<FiniteFieldElement>(value_) -= other.field();
  }
  return *this;
}

RingValue& RingValue::operator*=(const RingValue& other) {
  if (kind() != other.kind()) backend_mismatch();
  if (auto* v = std::get_if<CyclotomicInteger>(&value_)) {
    *v = *v * other.cyclotomic();
  } else {
    std::get<FiniteFieldElement>(value_) *= other.field();
  }
  return *this;
}

RingValue RingValue::operator-() const {
  return std::visit([](const auto& v) { return RingValue(-v); }, value_);
}

bool RingValue::operator==(const RingValue& other) const {
  if (kind() != other.kind()) return false;
  if (kind() == BackendKind::cyclotomic) return cyclotomic() == other.cyclotomic();
  return field() == other.field();
}

std::string RingValue::to_string() const {
  return std::visit([](const auto& v) { return v.to_string(); }, value_);
}

// ---------------------------------------------------------------------------

BackendChoice BackendChoice::parse(std::string_view text) {
  BackendChoice choice;
  if (text == "cyclotomic") return choice;
  if (text.substr(0, 5) != "field") throw ParseError("unknown backend '" + std::string(text) + "'");
  choice.kind = BackendKind::field;
  text.remove_prefix(5);
  if (text.empty()) return choice;
  if (text.front() != ':') throw ParseError("backend must look like field:q");
  text.remove_prefix(1);
  const auto colon = text.find(':');
  const std::string q(text.substr(0, colon));
  try {
    std::size_t used = 0;
    choice.characteristic = std::stoll(q, &used);
    if (used != q.size()) throw ParseError("bad field characteristic '" + q + "'");
  } catch (const std::logic_error&) {
    throw ParseError("bad field characteristic '" + q + "'");
  }
  if (colon != std::string_view::npos) {
    if (text.substr(colon + 1) != "totient") throw ParseError("unknown field backend option");
    choice.totient_degree = true;
  }
  return choice;
}

std::string BackendChoice::to_string() const {
  if (kind == BackendKind::cyclotomic) return "cyclotomic";
  std::string out = "field";
  if (characteristic) out += ":" + std::to_string(*characteristic);
  if (totient_degree) out += characteristic ? ":totient" : "";
  return out;
}

Backend::Backend(BackendKind kind, std::int64_t level, FieldSpecPtr field, bool totient)
    : kind_(kind), level_(level), field_(std::move(field)), totient_(totient) {
  if (level_ < 1) throw DomainError("backend level must be >= 1");
  auto roots = std::make_shared<std::vector<RingValue>>();
  roots->reserve(static_cast<std::size_t>(level_));
  for (std::int64_t e = 0; e < level_; ++e) {
    if (kind_ == BackendKind::cyclotomic) {
      roots->emplace_back(root_of_unity(level_, e));
    } else {
      roots->emplace_back(field_root_of_unity(field_, level_, e));
    }
  }
  roots_ = std::move(roots);
}

Backend Backend::cyclotomic(std::int64_t level) {
  return Backend(BackendKind::cyclotomic, level, nullptr, false);
}

Backend Backend::field(FieldSpecPtr spec, std::int64_t level) {
  if (!spec) throw StructuralError("field backend without a field");
  return Backend(BackendKind::field, level, std::move(spec), false);
}

Backend Backend::for_group(const GroupSpec& group, const BackendChoice& choice) {
  if (choice.kind == BackendKind::cyclotomic) return cyclotomic(group.exponent());
  FieldOptions options;
  options.totient_degree = choice.totient_degree;
  auto spec = field_with_order(group.order(), choice.characteristic, options);
  return Backend(BackendKind::field, group.exponent(), std::move(spec), choice.totient_degree);
}

RingValue Backend::zero() const {
  if (kind_ == BackendKind::cyclotomic) return CyclotomicInteger(level_);
  return FiniteFieldElement::zero(field_);
}

RingValue Backend::one() const { return (*roots_)[0]; }

RingValue Backend::from_integer(std::int64_t value) const {
  if (kind_ == BackendKind::cyclotomic) return CyclotomicInteger::from_integer(level_, value);
  return FiniteFieldElement::from_integer(field_, value);
}

const RingValue& Backend::root(std::int64_t exponent) const {
  std::int64_t e = exponent % level_;
  if (e < 0) e += level_;
  return (*roots_)[static_cast<std::size_t>(e)];
}

std::string Backend::descriptor() const {
  if (kind_ == BackendKind::cyclotomic) return "cyclotomic";
  return "field:" + std::to_string(field_->characteristic()) + (totient_ ? ":totient" : "");
}

std::string Backend::field_descriptor() const { return field_ ? field_->descriptor() : std::string(); }

bool Backend::same_ring(const Backend& other) const {
  return kind_ == other.kind_ && level_ == other.level_ && field_ == other.field_;
}

}  // namespace transversal
