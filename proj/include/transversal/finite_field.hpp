#pragma once

// Finite fields F_{q^d} = F_q[x] / (modulus) together with a distinguished
// element omega of prescribed multiplicative order m.

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "transversal/cyclotomic.hpp"

namespace transversal {

// d * log2(q) may not exceed this many bits.
inline constexpr int kDefaultFieldBitsCap = 32;

using FqPolynomial = std::vector<std::uint32_t>;  // coefficient i multiplies x^i

struct FieldOptions {
  // Use degree phi(m) instead of the minimal ord_m(q); q^phi(m) = 1 mod m by Euler.
  bool totient_degree = false;
  int bits_cap = kDefaultFieldBitsCap;
};

class FieldSpec {
 public:
  FieldSpec(std::int64_t q, std::int64_t d, FqPolynomial modulus, FqPolynomial generator,
            FqPolynomial omega, std::int64_t omega_order);

  std::int64_t characteristic() const { return q_; }
  std::int64_t degree() const { return d_; }
  std::uint64_t size() const;  // q^d
  const FqPolynomial& modulus() const { return modulus_; }
  // Lexicographically first element of order q^d - 1.
  const FqPolynomial& generator() const { return generator_; }
  const FqPolynomial& omega() const { return omega_; }
  std::int64_t omega_order() const { return omega_order_; }

  // Arithmetic on raw coefficient vectors of length d.
  FqPolynomial mul(const FqPolynomial& a, const FqPolynomial& b) const;
  FqPolynomial pow(FqPolynomial a, std::uint64_t e) const;
  FqPolynomial one() const;
  bool is_one(const FqPolynomial& a) const;
  FqPolynomial from_index(std::uint64_t index) const;  // base-q digits, x^0 least significant

  std::string descriptor() const;  // e.g. "F_2^6"

 private:
  std::int64_t q_;
  std::int64_t d_;
  FqPolynomial modulus_;
  FqPolynomial generator_;
  FqPolynomial omega_;
  std::int64_t omega_order_;
};

using FieldSpecPtr = std::shared_ptr<const FieldSpec>;

// q = preferred_char or the smallest prime not dividing m; d = ord_m(q) unless
// options.totient_degree. Memoised per (m, q, degree rule).
FieldSpecPtr field_with_order(std::int64_t m, std::optional<std::int64_t> preferred_char = std::nullopt,
                              FieldOptions options = {});

// Deterministic irreducibility certificate (Rabin's test) for a monic polynomial.
bool is_irreducible(const FqPolynomial& monic, std::int64_t q);

class FiniteFieldElement {
 public:
  FiniteFieldElement(FieldSpecPtr spec, FqPolynomial coeffs);
  static FiniteFieldElement zero(FieldSpecPtr spec);
  static FiniteFieldElement one(FieldSpecPtr spec);
  static FiniteFieldElement from_integer(FieldSpecPtr spec, std::int64_t value);

  const FieldSpecPtr& spec() const { return spec_; }
  const FqPolynomial& coeffs() const { return coeffs_; }
  bool is_zero() const;

  FiniteFieldElement& operator+=(const FiniteFieldElement& other);
  FiniteFieldElement& operator-=(const FiniteFieldElement& other);
  FiniteFieldElement& operator*=(const FiniteFieldElement& other);
  friend FiniteFieldElement operator+(FiniteFieldElement a, const FiniteFieldElement& b) { return a += b; }
  friend FiniteFieldElement operator-(FiniteFieldElement a, const FiniteFieldElement& b) { return a -= b; }
  friend FiniteFieldElement operator*(FiniteFieldElement a, const FiniteFieldElement& b) { return a *= b; }
  FiniteFieldElement operator-() const;
  FiniteFieldElement pow(std::uint64_t e) const;

  bool operator==(const FiniteFieldElement& other) const;
  std::string to_string() const;

 private:
  void require_same_field(const FiniteFieldElement& other) const;

  FieldSpecPtr spec_;
  FqPolynomial coeffs_;
};

// omega^(m / order * exponent): the image of zeta_order^exponent. Requires order | m.
FiniteFieldElement field_root_of_unity(const FieldSpecPtr& spec, std::int64_t order, std::int64_t exponent);

// Ring homomorphism Z[zeta_L] -> F_{q^d} sending zeta_L to omega^(m/L).
// Throws StructuralError unless L divides the order of omega.
FiniteFieldElement cyc_to_field(const CyclotomicInteger& a, const FieldSpecPtr& spec);

}  // namespace transversal
