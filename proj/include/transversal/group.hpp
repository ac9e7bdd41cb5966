#pragma once

// Finite abelian groups presented as direct products of cyclic groups.
//
// A group is written multiplicatively in the mathematics but stored as a
// residue vector: the product of two elements is componentwise addition
// modulo the factor orders. Elements are also addressed by a mixed-radix
// index whose ordering coincides with lexicographic residue order, so that
// index 0 is the identity and enumerate_elements(spec)[i] has index i.

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace transversal {

inline constexpr std::int64_t kDefaultEnumerationCap = 10000;

class GroupSpec {
 public:
  // Throws DomainError unless every order is >= 2 and there is at least one factor.
  explicit GroupSpec(std::vector<std::int64_t> orders);

  // Accepts "c3xc9" or a bare integer "27" (one cyclic factor).
  static GroupSpec parse(std::string_view text);
  std::string to_string() const;

  const std::vector<std::int64_t>& orders() const { return orders_; }
  std::size_t rank() const { return orders_.size(); }
  std::int64_t order() const { return order_; }
  std::int64_t exponent() const { return exponent_; }
  bool is_cyclic_presentation() const { return orders_.size() == 1; }

  bool operator==(const GroupSpec&) const = default;

 private:
  std::vector<std::int64_t> orders_;
  std::int64_t order_ = 1;
  std::int64_t exponent_ = 1;
};

class GroupElement {
 public:
  GroupElement() = default;
  // Residues are reduced into [0, n_i). Throws StructuralError on a length mismatch.
  GroupElement(const GroupSpec& spec, std::vector<std::int64_t> residues);

  static GroupElement identity(const GroupSpec& spec);

  const std::vector<std::int64_t>& residues() const { return residues_; }
  bool is_identity() const;

  std::string to_string() const;

  bool operator==(const GroupElement&) const = default;
  auto operator<=>(const GroupElement&) const = default;

 private:
  std::vector<std::int64_t> residues_;
};

GroupElement parse_element(const GroupSpec& spec, std::string_view text);
// "(0),(1),(2)" -> three elements. An empty string yields an empty list.
std::vector<GroupElement> parse_element_list(const GroupSpec& spec, std::string_view text);
std::string format_element_list(std::span<const GroupElement> elems);

// Structural check used by every binary operation.
void require_member(const GroupSpec& spec, const GroupElement& g);

GroupElement group_mul(const GroupSpec& spec, const GroupElement& g, const GroupElement& h);
GroupElement group_inv(const GroupSpec& spec, const GroupElement& g);
GroupElement group_pow(const GroupSpec& spec, const GroupElement& g, std::int64_t m);
std::int64_t element_order(const GroupSpec& spec, const GroupElement& g);

// Lexicographic mixed-radix index, last factor varying fastest.
std::int64_t element_index(const GroupSpec& spec, const GroupElement& g);
GroupElement element_at(const GroupSpec& spec, std::int64_t index);

// Throws RefusalError when spec.order() exceeds cap.
std::vector<GroupElement> enumerate_elements(const GroupSpec& spec,
                                             std::int64_t cap = kDefaultEnumerationCap);

class Permutation {
 public:
  Permutation() = default;
  // Zero-based images; throws DomainError unless they form a bijection of {0..k-1}.
  explicit Permutation(std::vector<int> images);

  static Permutation identity(std::size_t k);

  const std::vector<int>& images() const { return images_; }
  std::size_t size() const { return images_.size(); }
  int operator()(std::size_t i) const { return images_[i]; }
  int sign() const { return sign_; }

  // One-based images, as permutations are conventionally written.
  std::vector<int> one_based() const;
  static Permutation from_one_based(const std::vector<int>& images);

  // Advances to the lexicographic successor; returns false after the last one.
  bool next();

  bool operator==(const Permutation& other) const { return images_ == other.images_; }

 private:
  std::vector<int> images_;
  int sign_ = 1;
};

int permutation_sign(std::span<const int> images);

class SubgroupSpec {
 public:
  // Subgroup generated by `generators`; elements are closed eagerly up to cap.
  SubgroupSpec(GroupSpec parent, std::vector<GroupElement> generators,
               std::int64_t cap = kDefaultEnumerationCap);

  const GroupSpec& parent() const { return parent_; }
  const std::vector<GroupElement>& generators() const { return generators_; }
  // Sorted by parent index.
  const std::vector<GroupElement>& elements() const { return elements_; }
  std::int64_t order() const { return static_cast<std::int64_t>(elements_.size()); }
  bool contains(const GroupElement& g) const;
  bool contains_all(std::span<const GroupElement> elems) const;

 private:
  GroupSpec parent_;
  std::vector<GroupElement> generators_;
  std::vector<GroupElement> elements_;
  std::vector<std::int64_t> indices_;
};

std::int64_t smallest_prime_divisor(std::int64_t n);
// Distinct primes in increasing order. Throws DomainError for n <= 1.
std::vector<std::int64_t> prime_divisors(std::int64_t n);
bool is_prime(std::int64_t n);

// Smallest prime divisor exceeds k and every other prime divisor exceeds k!.
bool is_k_large(std::int64_t n, std::int64_t k);

struct SylowPart {
  SubgroupSpec subgroup;
  std::int64_t cofactor;  // |G| / |Syl_p(G)|
};

std::map<std::int64_t, SylowPart> sylow_decomposition(const GroupSpec& spec,
                                                      std::int64_t cap = kDefaultEnumerationCap);

// Product of the Sylow subgroups for the given primes (a Hall subgroup).
SubgroupSpec hall_subgroup(const GroupSpec& spec, std::span<const std::int64_t> primes,
                           std::int64_t cap = kDefaultEnumerationCap);

std::int64_t gcd64(std::int64_t a, std::int64_t b);
std::int64_t lcm64(std::int64_t a, std::int64_t b);
std::int64_t factorial(std::int64_t k);
std::int64_t euler_phi(std::int64_t n);

}  // namespace transversal
