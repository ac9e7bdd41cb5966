#include "transversal/cyclotomic.hpp"

#include <map>
#include <memory>
#include <mutex>

#include "transversal/errors.hpp"
#include "transversal/group.hpp"

namespace transversal {

namespace {

std::mutex& registry_mutex() {
  static std::mutex m;
  return m;
}

// Exact quotient of monic-divisor long division; throws if a remainder is left.
IntPolynomial exact_divide(IntPolynomial num, const IntPolynomial& den) {
  const std::size_t dn = den.size() - 1;
  if (num.size() < den.size()) throw InternalError("cyclotomic division degree underflow");
  IntPolynomial quot(num.size() - dn, 0);
  for (std::size_t i = num.size(); i-- > dn;) {
    const mpz_class c = num[i];
    if (c == 0) continue;
    quot[i - dn] = c;
    for (std::size_t j = 0; j <= dn; ++j) num[i - dn + j] -= c * den[j];
  }
  for (const auto& r : num) {
    if (r != 0) throw InternalError("cyclotomic division left a remainder");
  }
  return quot;
}

const IntPolynomial& cyclotomic_poly_locked(std::int64_t level) {
  static std::map<std::int64_t, std::unique_ptr<IntPolynomial>> cache;
  if (auto it = cache.find(level); it != cache.end()) return *it->second;
  IntPolynomial num(static_cast<std::size_t>(level) + 1, 0);
  num[0] = -1;
  num[static_cast<std::size_t>(level)] = 1;
  for (std::int64_t d = 1; d < level; ++d) {
    if (level % d == 0) num = exact_divide(std::move(num), cyclotomic_poly_locked(d));
  }
  auto [it, inserted] = cache.emplace(level, std::make_unique<IntPolynomial>(std::move(num)));
  return *it->second;
}

void reduce_in_place(std::vector<mpz_class>& r, const CyclotomicLevel& ring) {
  const std::size_t deg = ring.degree;
  for (std::size_t i = r.size(); i-- > deg;) {
    if (r[i] == 0) continue;
    const mpz_class c = r[i];
    for (std::size_t j = 0; j < deg; ++j) {
      const long m = ring.modulus[j];
      if (m > 0) {
        mpz_submul_ui(r[i - deg + j].get_mpz_t(), c.get_mpz_t(), static_cast<unsigned long>(m));
      } else if (m < 0) {
        mpz_addmul_ui(r[i - deg + j].get_mpz_t(), c.get_mpz_t(), static_cast<unsigned long>(-m));
      }
    }
    r[i] = 0;
  }
  r.resize(deg);
}

}  // namespace

const IntPolynomial& cyclotomic_poly(std::int64_t level, std::int64_t cap) {
  if (level < 1) throw DomainError("cyclotomic level must be >= 1");
  if (level > cap) {
    throw RefusalError("cyclotomic level " + std::to_string(level) + " exceeds cap " +
                       std::to_string(cap));
  }
  std::lock_guard lock(registry_mutex());
  return cyclotomic_poly_locked(level);
}

const CyclotomicLevel& cyclotomic_level(std::int64_t level) {
  const IntPolynomial& phi = cyclotomic_poly(level);
  std::lock_guard lock(registry_mutex());
  static std::map<std::int64_t, std::unique_ptr<CyclotomicLevel>> levels;
  if (auto it = levels.find(level); it != levels.end()) return *it->second;

  auto ring = std::make_unique<CyclotomicLevel>();
  ring->level = level;
  ring->degree = phi.size() - 1;
  for (const auto& c : phi) {
    if (!c.fits_slong_p()) throw RefusalError("cyclotomic coefficient exceeds machine width");
    ring->modulus.push_back(c.get_si());
  }
  // Power basis tables are only kept while they stay small.
  if (static_cast<std::int64_t>(ring->degree) * level <= (1 << 20)) {
    ring->power_basis.reserve(static_cast<std::size_t>(level));
    for (std::int64_t e = 0; e < level; ++e) {
      std::vector<mpz_class> x(static_cast<std::size_t>(e) + 1, 0);
      x[static_cast<std::size_t>(e)] = 1;
      if (x.size() < ring->degree) x.resize(ring->degree, 0);
      reduce_in_place(x, *ring);
      std::vector<long> row;
      row.reserve(ring->degree);
      for (const auto& c : x) row.push_back(c.get_si());
      ring->power_basis.push_back(std::move(row));
    }
  }
  auto [it, inserted] = levels.emplace(level, std::move(ring));
  return *it->second;
}

// ---------------------------------------------------------------------------

CyclotomicInteger::CyclotomicInteger(std::int64_t level)
    : ring_(&cyclotomic_level(level)), coeffs_(ring_->degree, 0) {}

CyclotomicInteger::CyclotomicInteger(std::int64_t level, std::vector<mpz_class> coeffs)
    : ring_(&cyclotomic_level(level)), coeffs_(std::move(coeffs)) {
  if (coeffs_.size() < ring_->degree) coeffs_.resize(ring_->degree, 0);
  reduce_in_place(coeffs_, *ring_);
}

CyclotomicInteger CyclotomicInteger::from_integer(std::int64_t level, const mpz_class& value) {
  CyclotomicInteger out(level);
  out.coeffs_[0] = value;
  return out;
}

bool CyclotomicInteger::is_zero() const {
  for (const auto& c : coeffs_) {
    if (c != 0) return false;
  }
  return true;
}

void CyclotomicInteger::require_same_level(const CyclotomicInteger& other) const {
  if (ring_ != other.ring_) {
    throw StructuralError("cyclotomic level mismatch: " + std::to_string(level()) + " vs " +
                          std::to_string(other.level()));
  }
}

CyclotomicInteger& CyclotomicInteger::operator+=(const CyclotomicInteger& other) {
  require_same_level(other);
  for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] += other.coeffs_[i];
  return *this;
}

CyclotomicInteger& CyclotomicInteger::operator-=(const CyclotomicInteger& other) {
  require_same_level(other);
  for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] -= other.coeffs_[i];
  return *this;
}

CyclotomicInteger& CyclotomicInteger::operator*=(const CyclotomicInteger& other) {
  *this = *this * other;
  return *this;
}

CyclotomicInteger operator*(const CyclotomicInteger& a, const CyclotomicInteger& b) {
  a.require_same_level(b);
  const std::size_t deg = a.ring_->degree;
  CyclotomicInteger out(a.level());
  std::vector<mpz_class> prod(deg == 0 ? 1 : 2 * deg - 1, 0);
  for (std::size_t i = 0; i < deg; ++i) {
    if (a.coeffs_[i] == 0) continue;
    for (std::size_t j = 0; j < deg; ++j) {
      if (b.coeffs_[j] == 0) continue;
      mpz_addmul(prod[i + j].get_mpz_t(), a.coeffs_[i].get_mpz_t(), b.coeffs_[j].get_mpz_t());
    }
  }
  reduce_in_place(prod, *a.ring_);
  out.coeffs_ = std::move(prod);
  return out;
}

CyclotomicInteger& CyclotomicInteger::add_root(std::int64_t exponent, long multiplicity) {
  const std::int64_t L = ring_->level;
  std::int64_t e = exponent % L;
  if (e < 0) e += L;
  if (!ring_->power_basis.empty()) {
    const auto& row = ring_->power_basis[static_cast<std::size_t>(e)];
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (row[i] != 0) coeffs_[i] += row[i] * multiplicity;
    }
    return *this;
  }
  std::vector<mpz_class> x(static_cast<std::size_t>(e) + 1, 0);
  x[static_cast<std::size_t>(e)] = multiplicity;
  *this += CyclotomicInteger(L, std::move(x));
  return *this;
}

CyclotomicInteger CyclotomicInteger::operator-() const {
  CyclotomicInteger out(*this);
  for (auto& c : out.coeffs_) c = -c;
  return out;
}

bool CyclotomicInteger::operator==(const CyclotomicInteger& other) const {
  return ring_ == other.ring_ && coeffs_ == other.coeffs_;
}

std::string CyclotomicInteger::to_string() const {
  std::string out;
  for (std::size_t i = 0; i < coeffs_.size(); ++i) {
    if (coeffs_[i] == 0) continue;
    if (!out.empty()) out += " + ";
    out += coeffs_[i].get_str();
    if (i == 1) out += "*z";
    if (i > 1) out += "*z^" + std::to_string(i);
  }
  return (out.empty() ? "0" : out) + " [L=" + std::to_string(level()) + "]";
}

CyclotomicInteger cyc_add(const CyclotomicInteger& a, const CyclotomicInteger& b) { return a + b; }
CyclotomicInteger cyc_mul(const CyclotomicInteger& a, const CyclotomicInteger& b) { return a * b; }
CyclotomicInteger cyc_neg(const CyclotomicInteger& a) { return -a; }

CyclotomicInteger root_of_unity(std::int64_t level, std::int64_t exponent) {
  if (level < 1) throw DomainError("root_of_unity level must be >= 1");
  CyclotomicInteger out(level);
  out.add_root(exponent);
  return out;
}

bool vanishing_sum_feasible(std::int64_t n, std::int64_t total) {
  if (total < 0) throw DomainError("vanishing_sum_feasible needs total >= 0");
  const auto primes = prime_divisors(n);
  std::vector<char> reachable(static_cast<std::size_t>(total) + 1, 0);
  reachable[0] = 1;
  for (std::int64_t t = 1; t <= total; ++t) {
    for (auto p : primes) {
      if (p <= t && reachable[static_cast<std::size_t>(t - p)]) {
        reachable[static_cast<std::size_t>(t)] = 1;
        break;
      }
    }
  }
  return reachable[static_cast<std::size_t>(total)] != 0;
}

}  // namespace transversal
