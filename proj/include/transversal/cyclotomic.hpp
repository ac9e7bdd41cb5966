#pragma once

// Exact arithmetic in Z[zeta_L] = Z[x] / (Phi_L).
//
// Values are stored as integer coefficient vectors of length phi(L) and are
// always fully reduced modulo the L-th cyclotomic polynomial. Because Phi_L
// is irreducible the quotient is an integral domain, so a value is zero
// exactly when every coefficient is zero.

#include <gmpxx.h>

#include <cstdint>
#include <string>
#include <vector>

namespace transversal {

inline constexpr std::int64_t kDefaultLevelCap = 10000;

// Dense integer polynomial, coefficient i multiplies x^i.
using IntPolynomial = std::vector<mpz_class>;

// Phi_L by exact recursive division (x^L - 1) / prod_{d | L, d < L} Phi_d.
// Results are memoised process-wide. Throws RefusalError above the cap.
const IntPolynomial& cyclotomic_poly(std::int64_t level, std::int64_t cap = kDefaultLevelCap);

// Shared per-level data; instances live for the whole process.
struct CyclotomicLevel {
  std::int64_t level;
  std::size_t degree;                 // phi(level)
  std::vector<long> modulus;          // Phi_L coefficients, monic, length degree + 1
  std::vector<std::vector<long>> power_basis;  // x^e mod Phi_L for e in [0, L)
};

const CyclotomicLevel& cyclotomic_level(std::int64_t level);

class CyclotomicInteger {
 public:
  // The zero of Z[zeta_L].
  explicit CyclotomicInteger(std::int64_t level);
  // Coefficients are reduced modulo Phi_L (any length is accepted).
  CyclotomicInteger(std::int64_t level, std::vector<mpz_class> coeffs);

  static CyclotomicInteger from_integer(std::int64_t level, const mpz_class& value);

  std::int64_t level() const { return ring_->level; }
  const std::vector<mpz_class>& coeffs() const { return coeffs_; }
  bool is_zero() const;

  CyclotomicInteger& operator+=(const CyclotomicInteger& other);
  CyclotomicInteger& operator-=(const CyclotomicInteger& other);
  CyclotomicInteger& operator*=(const CyclotomicInteger& other);
  // Adds zeta_L^e in place without materialising the root.
  CyclotomicInteger& add_root(std::int64_t exponent, long multiplicity = 1);

  friend CyclotomicInteger operator+(CyclotomicInteger a, const CyclotomicInteger& b) { return a += b; }
  friend CyclotomicInteger operator-(CyclotomicInteger a, const CyclotomicInteger& b) { return a -= b; }
  friend CyclotomicInteger operator*(const CyclotomicInteger& a, const CyclotomicInteger& b);
  CyclotomicInteger operator-() const;

  bool operator==(const CyclotomicInteger& other) const;

  // "a0 + a1*z + ..." in the power basis, for diagnostics.
  std::string to_string() const;

 private:
  void require_same_level(const CyclotomicInteger& other) const;

  const CyclotomicLevel* ring_;
  std::vector<mpz_class> coeffs_;
};

CyclotomicInteger cyc_add(const CyclotomicInteger& a, const CyclotomicInteger& b);
CyclotomicInteger cyc_mul(const CyclotomicInteger& a, const CyclotomicInteger& b);
CyclotomicInteger cyc_neg(const CyclotomicInteger& a);

// zeta_L^(exponent mod L).
CyclotomicInteger root_of_unity(std::int64_t level, std::int64_t exponent);

// True iff total is a nonnegative integer combination of the prime divisors of n.
bool vanishing_sum_feasible(std::int64_t n, std::int64_t total);

}  // namespace transversal
