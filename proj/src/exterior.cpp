#include "transversal/exterior.hpp"

#include <algorithm>

#include "transversal/errors.hpp"

namespace transversal {

MultiVector::MultiVector(GroupSpec spec, Backend backend, std::size_t grade)
    : spec_(std::move(spec)), backend_(std::move(backend)), grade_(grade) {
  if (backend_.level() != spec_.exponent()) {
    throw StructuralError("multivector backend level does not match the group exponent");
  }
}

MultiVector MultiVector::scalar(GroupSpec spec, Backend backend, RingValue value) {
  MultiVector out(std::move(spec), std::move(backend), 0);
  out.add_term({}, value);
  return out;
}

MultiVector MultiVector::basis(GroupSpec spec, Backend backend, const GroupElement& g) {
  const std::int64_t idx = element_index(spec, g);
  MultiVector out(std::move(spec), std::move(backend), 1);
  out.add_term({idx}, out.backend_.one());
  return out;
}

MultiVector MultiVector::wedge_of(GroupSpec spec, Backend backend, std::span<const GroupElement> ordered) {
  Blade blade;
  blade.reserve(ordered.size());
  for (const auto& g : ordered) blade.push_back(element_index(spec, g));
  MultiVector out(std::move(spec), std::move(backend), ordered.size());
  int sign = 1;
  for (std::size_t i = 0; i < blade.size(); ++i) {
    for (std::size_t j = i + 1; j < blade.size(); ++j) {
      if (blade[i] == blade[j]) return out;
      if (blade[i] > blade[j]) sign = -sign;
    }
  }
  std::sort(blade.begin(), blade.end());
  out.add_term(blade, sign > 0 ? out.backend_.one() : -out.backend_.one());
  return out;
}

RingValue MultiVector::scalar_part() const {
  if (grade_ == 0) {
    if (auto it = terms_.find(Blade{}); it != terms_.end()) return it->second;
  }
  return backend_.zero();
}

void MultiVector::add_term(const Blade& blade, const RingValue& coeff) {
  if (blade.size() != grade_) throw StructuralError("blade grade does not match the multivector grade");
  if (coeff.is_zero()) return;
  auto [it, inserted] = terms_.try_emplace(blade, coeff);
  if (!inserted) {
    it->second += coeff;
    if (it->second.is_zero()) terms_.erase(it);
  }
}

void MultiVector::require_compatible(const MultiVector& other) const {
  if (!(spec_ == other.spec_)) throw StructuralError("multivectors over different groups");
  if (!backend_.same_ring(other.backend_)) throw StructuralError("multivectors over different backends");
}

MultiVector& MultiVector::operator+=(const MultiVector& other) {
  require_compatible(other);
  if (other.is_zero()) return *this;
  if (is_zero()) grade_ = other.grade_;
  if (grade_ != other.grade_) throw StructuralError("sum of multivectors of different grades");
  for (const auto& [blade, coeff] : other.terms_) add_term(blade, coeff);
  return *this;
}

MultiVector& MultiVector::operator-=(const MultiVector& other) { return *this += -other; }

MultiVector MultiVector::operator-() const {
  MultiVector out(spec_, backend_, grade_);
  for (const auto& [blade, coeff] : terms_) out.terms_.emplace(blade, -coeff);
  return out;
}

MultiVector MultiVector::scaled(const RingValue& factor) const {
  MultiVector out(spec_, backend_, grade_);
  for (const auto& [blade, coeff] : terms_) out.add_term(blade, coeff * factor);
  return out;
}

bool MultiVector::operator==(const MultiVector& other) const {
  if (!(spec_ == other.spec_) || !backend_.same_ring(other.backend_)) return false;
  if (is_zero() || other.is_zero()) return is_zero() && other.is_zero();
  return grade_ == other.grade_ && terms_ == other.terms_;
}

// ---------------------------------------------------------------------------

int merge_sign(const Blade& x, const Blade& y, Blade& merged) {
  merged.clear();
  merged.reserve(x.size() + y.size());
  // Each y element passing over a remaining x element is one transposition.
  int sign = 1;
  std::size_t i = 0, j = 0;
  while (i < x.size() || j < y.size()) {
    if (j == y.size() || (i < x.size() && x[i] < y[j])) {
      merged.push_back(x[i++]);
    } else if (i == x.size() || y[j] < x[i]) {
      if ((x.size() - i) % 2 != 0) sign = -sign;
      merged.push_back(y[j++]);
    } else {
      return 0;
    }
  }
  return sign;
}

MultiVector wedge(const MultiVector& x, const MultiVector& y) {
  if (!(x.spec() == y.spec())) throw StructuralError("wedge of multivectors over different groups");
  if (!x.backend().same_ring(y.backend())) throw StructuralError("wedge of multivectors over different backends");
  MultiVector out(x.spec(), x.backend(), x.grade() + y.grade());
  if (static_cast<std::int64_t>(x.grade() + y.grade()) > x.spec().order()) return out;
  Blade merged;
  for (const auto& [bx, cx] : x.terms()) {
    for (const auto& [by, cy] : y.terms()) {
      const int sign = merge_sign(bx, by, merged);
      if (sign == 0) continue;
      RingValue c = cx * cy;
      out.add_term(merged, sign > 0 ? c : -c);
    }
  }
  return out;
}

MultiVector skew_derivation(const Character& chi, const MultiVector& x) {
  const auto& spec = x.spec();
  if (x.grade() == 0) return MultiVector(spec, x.backend(), 0);
  MultiVector out(spec, x.backend(), x.grade() - 1);
  Blade struck;
  for (const auto& [blade, coeff] : x.terms()) {
    for (std::size_t i = 0; i < blade.size(); ++i) {
      struck.assign(blade.begin(), blade.end());
      struck.erase(struck.begin() + static_cast<std::ptrdiff_t>(i));
      const RingValue& value = char_eval(spec, chi, element_at(spec, blade[i]), x.backend());
      RingValue term = coeff * value;
      out.add_term(struck, i % 2 == 0 ? term : -term);
    }
  }
  return out;
}

RingValue compose_derivations(std::span<const Character> chars, const MultiVector& x) {
  if (chars.size() != x.grade() && !x.is_zero()) {
    throw StructuralError("derivation count " + std::to_string(chars.size()) + " does not match grade " +
                          std::to_string(x.grade()));
  }
  MultiVector current = x;
  for (std::size_t i = chars.size(); i-- > 0;) current = skew_derivation(chars[i], current);
  return current.scalar_part();
}

MultiVector q_pi(const GroupSpec& spec, const Backend& backend, std::span<const GroupElement> a,
                 std::span<const GroupElement> b, const Permutation& pi) {
  if (a.size() != b.size() || pi.size() != a.size()) throw StructuralError("q_pi needs |A| = |B| = |pi|");
  std::vector<GroupElement> products;
  products.reserve(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    products.push_back(group_mul(spec, a[i], b[static_cast<std::size_t>(pi(i))]));
  }
  return MultiVector::wedge_of(spec, backend, products);
}

MultiVector sum_q_pi(const GroupSpec& spec, const Backend& backend, std::span<const GroupElement> a,
                     std::span<const GroupElement> b, std::size_t max_k) {
  if (a.size() != b.size()) throw StructuralError("sum_q_pi needs |A| = |B|");
  if (a.size() > max_k) {
    throw RefusalError("sum over S_" + std::to_string(a.size()) + " exceeds the permutation cap");
  }
  MultiVector total(spec, backend, a.size());
  Permutation pi = Permutation::identity(a.size());
  do {
    total += q_pi(spec, backend, a, b, pi);
  } while (pi.next());
  return total;
}

MultiVector multi_q(const GroupSpec& spec, const Backend& backend, std::span<const std::vector<GroupElement>> sets,
                    std::span<const Permutation> perms) {
  if (sets.empty()) throw DomainError("multi_q needs at least one set");
  if (perms.size() + 1 != sets.size()) throw StructuralError("multi_q needs one permutation per set after the first");
  const std::size_t k = sets[0].size();
  int sign = 1;
  for (std::size_t i = 0; i < perms.size(); ++i) {
    if (sets[i + 1].size() != k || perms[i].size() != k) throw StructuralError("multi_q sets must share size k");
    sign *= perms[i].sign();
  }
  std::vector<GroupElement> products;
  for (std::size_t j = 0; j < k; ++j) {
    GroupElement c = sets[0][j];
    for (std::size_t i = 0; i < perms.size(); ++i) {
      c = group_mul(spec, c, sets[i + 1][static_cast<std::size_t>(perms[i](j))]);
    }
    products.push_back(std::move(c));
  }
  MultiVector out = MultiVector::wedge_of(spec, backend, products);
  return sign > 0 ? out : -out;
}

MultiVector sum_multi_q(const GroupSpec& spec, const Backend& backend, std::span<const std::vector<GroupElement>> sets,
                        std::int64_t max_terms) {
  if (sets.empty()) throw DomainError("sum_multi_q needs at least one set");
  const std::size_t k = sets[0].size();
  const std::size_t m = sets.size();
  std::int64_t terms = 1;
  for (std::size_t i = 1; i < m; ++i) {
    terms *= factorial(static_cast<std::int64_t>(k));
    if (terms > max_terms) throw RefusalError("sum_multi_q exceeds the term cap");
  }
  MultiVector total(spec, backend, k);
  std::vector<Permutation> perms(m - 1, Permutation::identity(k));
  while (true) {
    total += multi_q(spec, backend, sets, perms);
    // Odometer over (pi_2, ..., pi_m), last permutation fastest.
    std::size_t pos = perms.size();
    while (pos > 0) {
      if (perms[pos - 1].next()) break;
      --pos;
    }
    if (pos == 0) break;
  }
  return total;
}

}  // namespace transversal
