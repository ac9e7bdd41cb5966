#pragma once

// Homogeneous elements of the exterior algebra of the group algebra KG.
//
// The basis of the k-th exterior power is indexed by k-subsets of G; a blade
// is stored as the strictly increasing list of element indices (see
// element_index), with the sign of the sorting permutation folded into the
// coefficient. Grade-0 scalars use the empty blade.

#include <cstdint>
#include <map>
#include <span>
#include <vector>

#include "transversal/characters.hpp"
#include "transversal/group.hpp"
#include "transversal/ring_value.hpp"

namespace transversal {

using Blade = std::vector<std::int64_t>;

inline constexpr std::size_t kDefaultPermutationSizeCap = 7;  // k! <= 5040

class MultiVector {
 public:
  MultiVector(GroupSpec spec, Backend backend, std::size_t grade);

  static MultiVector scalar(GroupSpec spec, Backend backend, RingValue value);
  static MultiVector basis(GroupSpec spec, Backend backend, const GroupElement& g);
  // e_{g_1} ^ ... ^ e_{g_k} in the given order; zero when two elements coincide.
  static MultiVector wedge_of(GroupSpec spec, Backend backend, std::span<const GroupElement> ordered);

  const GroupSpec& spec() const { return spec_; }
  const Backend& backend() const { return backend_; }
  std::size_t grade() const { return grade_; }
  const std::map<Blade, RingValue>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }

  // Coefficient of the grade-0 blade; zero for any other grade.
  RingValue scalar_part() const;

  void add_term(const Blade& blade, const RingValue& coeff);

  MultiVector& operator+=(const MultiVector& other);
  MultiVector& operator-=(const MultiVector& other);
  MultiVector operator-() const;
  MultiVector scaled(const RingValue& factor) const;
  friend MultiVector operator+(MultiVector a, const MultiVector& b) { return a += b; }
  friend MultiVector operator-(MultiVector a, const MultiVector& b) { return a -= b; }

  // Zero multivectors compare equal regardless of grade.
  bool operator==(const MultiVector& other) const;

 private:
  void require_compatible(const MultiVector& other) const;

  GroupSpec spec_;
  Backend backend_;
  std::size_t grade_;
  std::map<Blade, RingValue> terms_;
};

// Sign of the shuffle merging two sorted blades, or 0 if they share an index.
int merge_sign(const Blade& x, const Blade& y, Blade& merged);

MultiVector wedge(const MultiVector& x, const MultiVector& y);

// Delta_chi(m_1 ^ ... ^ m_n) = sum_i (-1)^(i+1) chi(m_i) (m_1 ^ .. m_i omitted .. ^ m_n).
// Scalars are annihilated: a grade-0 input yields the zero scalar.
MultiVector skew_derivation(const Character& chi, const MultiVector& x);

// (Delta_{chi_1} o ... o Delta_{chi_k})(x) for x of grade k; Delta_{chi_k} acts first.
RingValue compose_derivations(std::span<const Character> chars, const MultiVector& x);

// a_1 b_pi(1) ^ ... ^ a_k b_pi(k).
MultiVector q_pi(const GroupSpec& spec, const Backend& backend, std::span<const GroupElement> a,
                 std::span<const GroupElement> b, const Permutation& pi);

// Sum of q_pi over S_k in lexicographic order.
MultiVector sum_q_pi(const GroupSpec& spec, const Backend& backend, std::span<const GroupElement> a,
                     std::span<const GroupElement> b, std::size_t max_k = kDefaultPermutationSizeCap);

// prod_{i>=2} sgn(pi_i) * (c_1 ^ ... ^ c_k) with c_j = a_{1j} a_{2 pi_2(j)} ... a_{m pi_m(j)}.
// perms[i] applies to sets[i + 1].
MultiVector multi_q(const GroupSpec& spec, const Backend& backend, std::span<const std::vector<GroupElement>> sets,
                    std::span<const Permutation> perms);

// Sum of multi_q over all (pi_2, ..., pi_m); refuses when (k!)^(m-1) > max_terms.
MultiVector sum_multi_q(const GroupSpec& spec, const Backend& backend,
                        std::span<const std::vector<GroupElement>> sets, std::int64_t max_terms = 100000);

}  // namespace transversal
