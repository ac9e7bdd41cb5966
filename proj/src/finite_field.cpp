#include "transversal/finite_field.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <tuple>

#include "transversal/errors.hpp"
#include "transversal/group.hpp"

namespace transversal {

namespace {

using u64 = std::uint64_t;

u64 mod_pow_u64(u64 base, u64 exp, u64 mod) {
  unsigned __int128 result = 1 % mod;
  unsigned __int128 b = base % mod;
  while (exp) {
    if (exp & 1) result = result * b % mod;
    b = b * b % mod;
    exp >>= 1;
  }
  return static_cast<u64>(result);
}

std::vector<u64> distinct_prime_factors(u64 n) {
  std::vector<u64> out;
  for (u64 p = 2; p * p <= n; ++p) {
    if (n % p == 0) {
      out.push_back(p);
      while (n % p == 0) n /= p;
    }
  }
  if (n > 1) out.push_back(n);
  return out;
}

// Polynomials over F_q with trailing zeros trimmed; empty == 0.
struct PolyQ {
  u64 q;

  void trim(FqPolynomial& a) const {
    while (!a.empty() && a.back() == 0) a.pop_back();
  }
  u64 inv(u64 a) const { return mod_pow_u64(a, q - 2, q); }

  FqPolynomial mul(const FqPolynomial& a, const FqPolynomial& b) const {
    if (a.empty() || b.empty()) return {};
    FqPolynomial out(a.size() + b.size() - 1, 0);
    for (std::size_t i = 0; i < a.size(); ++i) {
      if (!a[i]) continue;
      for (std::size_t j = 0; j < b.size(); ++j) {
        out[i + j] = static_cast<std::uint32_t>((out[i + j] + static_cast<u64>(a[i]) * b[j]) % q);
      }
    }
    trim(out);
    return out;
  }

  FqPolynomial rem(FqPolynomial a, const FqPolynomial& m) const {
    trim(a);
    const std::size_t dm = m.size() - 1;
    const u64 lead_inv = inv(m.back());
    while (a.size() > dm) {
      const u64 c = a.back() * lead_inv % q;
      const std::size_t shift = a.size() - 1 - dm;
      for (std::size_t j = 0; j <= dm; ++j) {
        a[shift + j] = static_cast<std::uint32_t>((a[shift + j] + (q - c) * m[j]) % q);
      }
      trim(a);
    }
    return a;
  }

  FqPolynomial sub(FqPolynomial a, const FqPolynomial& b) const {
    if (a.size() < b.size()) a.resize(b.size(), 0);
    for (std::size_t i = 0; i < b.size(); ++i) a[i] = static_cast<std::uint32_t>((a[i] + q - b[i]) % q);
    trim(a);
    return a;
  }

  FqPolynomial gcd(FqPolynomial a, FqPolynomial b) const {
    trim(a);
    trim(b);
    while (!b.empty()) {
      FqPolynomial r = rem(a, b);
      a = std::move(b);
      b = std::move(r);
    }
    return a;
  }

  FqPolynomial powmod(FqPolynomial base, u64 e, const FqPolynomial& m) const {
    FqPolynomial result{1};
    base = rem(std::move(base), m);
    while (e) {
      if (e & 1) result = rem(mul(result, base), m);
      base = rem(mul(base, base), m);
      e >>= 1;
    }
    return result;
  }

  // x^(q^j) mod m, by j successive q-th powerings.
  FqPolynomial frobenius_x(std::int64_t j, const FqPolynomial& m) const {
    FqPolynomial x{0, 1};
    for (std::int64_t i = 0; i < j; ++i) x = powmod(x, q, m);
    return x;
  }
};

std::uint64_t int_pow(std::uint64_t q, std::int64_t d) {
  std::uint64_t r = 1;
  for (std::int64_t i = 0; i < d; ++i) r *= q;
  return r;
}

std::int64_t multiplicative_order_mod(std::int64_t q, std::int64_t m) {
  if (m == 1) return 1;
  std::int64_t d = 1;
  std::int64_t v = q % m;
  while (v != 1) {
    v = v * (q % m) % m;
    ++d;
    if (d > m) throw DomainError("characteristic is not invertible modulo m");
  }
  return d;
}

FqPolynomial index_to_poly(u64 index, u64 q, std::int64_t d) {
  FqPolynomial out(static_cast<std::size_t>(d), 0);
  for (std::int64_t i = 0; i < d; ++i) {
    out[static_cast<std::size_t>(i)] = static_cast<std::uint32_t>(index % q);
    index /= q;
  }
  return out;
}

}  // namespace

bool is_irreducible(const FqPolynomial& monic, std::int64_t q) {
  PolyQ P{static_cast<u64>(q)};
  FqPolynomial f = monic;
  P.trim(f);
  if (f.empty() || f.back() != 1) throw DomainError("is_irreducible expects a monic polynomial");
  const std::int64_t d = static_cast<std::int64_t>(f.size()) - 1;
  if (d < 1) return false;
  if (d == 1) return true;
  const FqPolynomial x{0, 1};
  if (P.sub(P.frobenius_x(d, f), P.rem(x, f)).size() != 0) return false;
  for (auto r : distinct_prime_factors(static_cast<u64>(d))) {
    FqPolynomial h = P.sub(P.frobenius_x(d / static_cast<std::int64_t>(r), f), P.rem(x, f));
    FqPolynomial g = P.gcd(f, h);
    if (g.size() != 1) return false;
  }
  return true;
}

// ---------------------------------------------------------------------------
// FieldSpec

FieldSpec::FieldSpec(std::int64_t q, std::int64_t d, FqPolynomial modulus, FqPolynomial generator,
                     FqPolynomial omega, std::int64_t omega_order)
    : q_(q),
      d_(d),
      modulus_(std::move(modulus)),
      generator_(std::move(generator)),
      omega_(std::move(omega)),
      omega_order_(omega_order) {}

std::uint64_t FieldSpec::size() const { return int_pow(static_cast<u64>(q_), d_); }

FqPolynomial FieldSpec::mul(const FqPolynomial& a, const FqPolynomial& b) const {
  const std::size_t d = static_cast<std::size_t>(d_);
  const u64 q = static_cast<u64>(q_);
  // Accumulate unreduced in 64 bits; q < 2^32 and d <= 32 keep this exact.
  std::vector<u64> prod(2 * d - 1, 0);
  for (std::size_t i = 0; i < d; ++i) {
    if (!a[i]) continue;
    for (std::size_t j = 0; j < d; ++j) prod[i + j] += static_cast<u64>(a[i]) * b[j] % q;
  }
  for (auto& v : prod) v %= q;
  for (std::size_t i = prod.size(); i-- > d;) {
    const u64 c = prod[i];
    if (!c) continue;
    for (std::size_t j = 0; j < d; ++j) {
      prod[i - d + j] = (prod[i - d + j] + (q - c) * modulus_[j]) % q;
    }
    prod[i] = 0;
  }
  FqPolynomial out(d);
  for (std::size_t i = 0; i < d; ++i) out[i] = static_cast<std::uint32_t>(prod[i]);
  return out;
}

FqPolynomial FieldSpec::pow(FqPolynomial a, std::uint64_t e) const {
  FqPolynomial result = one();
  while (e) {
    if (e & 1) result = mul(result, a);
    a = mul(a, a);
    e >>= 1;
  }
  return result;
}

FqPolynomial FieldSpec::one() const {
  FqPolynomial out(static_cast<std::size_t>(d_), 0);
  out[0] = 1;
  return out;
}

bool FieldSpec::is_one(const FqPolynomial& a) const { return a == one(); }

FqPolynomial FieldSpec::from_index(std::uint64_t index) const {
  return index_to_poly(index, static_cast<u64>(q_), d_);
}

std::string FieldSpec::descriptor() const {
  return "F_" + std::to_string(q_) + "^" + std::to_string(d_);
}

FieldSpecPtr field_with_order(std::int64_t m, std::optional<std::int64_t> preferred_char,
                              FieldOptions options) {
  if (m < 1) throw DomainError("field_with_order needs m >= 1");
  std::int64_t q = 0;
  if (preferred_char) {
    q = *preferred_char;
    if (!is_prime(q)) throw DomainError("field characteristic must be prime");
    if (m % q == 0) {
      throw DomainError("characteristic " + std::to_string(q) + " divides " + std::to_string(m) +
                        "; no element of that order exists");
    }
  } else {
    for (q = 2; m % q == 0 || !is_prime(q); ++q) {
    }
  }
  const std::int64_t d = options.totient_degree ? euler_phi(m) : multiplicative_order_mod(q, m);
  const double bits = static_cast<double>(d) * std::log2(static_cast<double>(q));
  if (bits > options.bits_cap + 1e-9) {
    throw RefusalError("field F_" + std::to_string(q) + "^" + std::to_string(d) + " needs " +
                       std::to_string(bits) + " bits, above the cap " + std::to_string(options.bits_cap));
  }

  static std::mutex mutex;
  static std::map<std::tuple<std::int64_t, std::int64_t, std::int64_t>, FieldSpecPtr> cache;
  std::lock_guard lock(mutex);
  const auto key = std::make_tuple(m, q, d);
  if (auto it = cache.find(key); it != cache.end()) return it->second;

  const u64 uq = static_cast<u64>(q);
  const u64 size = int_pow(uq, d);
  // First monic irreducible in lexicographic order of the lower coefficients.
  FqPolynomial modulus;
  for (u64 idx = 0; idx < size; ++idx) {
    FqPolynomial candidate = index_to_poly(idx, uq, d);
    candidate.push_back(1);
    if (is_irreducible(candidate, q)) {
      modulus = std::move(candidate);
      break;
    }
  }
  if (modulus.empty()) throw InternalError("no irreducible polynomial found");

  FieldSpec probe(q, d, modulus, {}, {}, 1);
  const u64 group_order = size - 1;
  const auto factors = distinct_prime_factors(group_order);
  FqPolynomial generator;
  for (u64 idx = 1; idx < size && generator.empty(); ++idx) {
    FqPolynomial g = probe.from_index(idx);
    bool primitive = true;
    for (auto r : factors) {
      if (probe.is_one(probe.pow(g, group_order / r))) {
        primitive = false;
        break;
      }
    }
    if (primitive) generator = std::move(g);
  }
  if (generator.empty()) throw InternalError("no multiplicative generator found");
  FqPolynomial omega = probe.pow(generator, group_order / static_cast<u64>(m));

  auto spec = std::make_shared<const FieldSpec>(q, d, std::move(modulus), std::move(generator),
                                                std::move(omega), m);
  cache.emplace(key, spec);
  return spec;
}

// ---------------------------------------------------------------------------
// FiniteFieldElement

FiniteFieldElement::FiniteFieldElement(FieldSpecPtr spec, FqPolynomial coeffs)
    : spec_(std::move(spec)), coeffs_(std::move(coeffs)) {
  if (!spec_) throw StructuralError("finite field element without a field");
  if (coeffs_.size() != static_cast<std::size_t>(spec_->degree())) {
    throw StructuralError("finite field element has the wrong number of coefficients");
  }
  for (auto& c : coeffs_) c = static_cast<std::uint32_t>(c % static_cast<u64>(spec_->characteristic()));
}

FiniteFieldElement FiniteFieldElement::zero(FieldSpecPtr spec) {
  const auto d = static_cast<std::size_t>(spec->degree());
  return FiniteFieldElement(std::move(spec), FqPolynomial(d, 0));
}

FiniteFieldElement FiniteFieldElement::one(FieldSpecPtr spec) {
  FqPolynomial c = spec->one();
  return FiniteFieldElement(std::move(spec), std::move(c));
}

FiniteFieldElement FiniteFieldElement::from_integer(FieldSpecPtr spec, std::int64_t value) {
  const std::int64_t q = spec->characteristic();
  FqPolynomial c(static_cast<std::size_t>(spec->degree()), 0);
  c[0] = static_cast<std::uint32_t>(((value % q) + q) % q);
  return FiniteFieldElement(std::move(spec), std::move(c));
}

bool FiniteFieldElement::is_zero() const {
  for (auto c : coeffs_) {
    if (c) return false;
  }
  return true;
}

void FiniteFieldElement::require_same_field(const FiniteFieldElement& other) const {
  if (spec_ != other.spec_) {
    throw StructuralError("finite field mismatch: " + spec_->descriptor() + " vs " +
                          other.spec_->descriptor());
  }
}

FiniteFieldElement& FiniteFieldElement::operator+=(const FiniteFieldElement& other) {
  require_same_field(other);
  const u64 q = static_cast<u64>(spec_->characteristic());
  for (std::size_t i = 0; i < coeffs_.size(); ++i) {
    coeffs_[i] = static_cast<std::uint32_t>((static_cast<u64>(coeffs_[i]) + other.coeffs_[i]) % q);
  }
  return *this;
}

FiniteFieldElement& FiniteFieldElement::operator-=(const FiniteFieldElement& other) {
  require_same_field(other);
  const u64 q = static_cast<u64>(spec_->characteristic());
  for (std::size_t i = 0; i < coeffs_.size(); ++i) {
    coeffs_[i] = static_cast<std::uint32_t>((static_cast<u64>(coeffs_[i]) + q - other.coeffs_[i]) % q);
  }
  return *this;
}

FiniteFieldElement& FiniteFieldElement::operator*=(const FiniteFieldElement& other) {
  require_same_field(other);
  coeffs_ = spec_->mul(coeffs_, other.coeffs_);
  return *this;
}

FiniteFieldElement FiniteFieldElement::operator-() const {
  return zero(spec_) - *this;
}

FiniteFieldElement FiniteFieldElement::pow(std::uint64_t e) const {
  return FiniteFieldElement(spec_, spec_->pow(coeffs_, e));
}

bool FiniteFieldElement::operator==(const FiniteFieldElement& other) const {
  return spec_ == other.spec_ && coeffs_ == other.coeffs_;
}

std::string FiniteFieldElement::to_string() const {
  std::string out = "[";
  for (std::size_t i = 0; i < coeffs_.size(); ++i) {
    if (i) out += ',';
    out += std::to_string(coeffs_[i]);
  }
  return out + "] in " + spec_->descriptor();
}

FiniteFieldElement field_root_of_unity(const FieldSpecPtr& spec, std::int64_t order, std::int64_t exponent) {
  if (order < 1 || spec->omega_order() % order != 0) {
    throw StructuralError("field " + spec->descriptor() + " has no distinguished root of order " +
                          std::to_string(order));
  }
  std::int64_t e = exponent % order;
  if (e < 0) e += order;
  const u64 power = static_cast<u64>(spec->omega_order() / order) * static_cast<u64>(e);
  return FiniteFieldElement(spec, spec->pow(spec->omega(), power));
}

FiniteFieldElement cyc_to_field(const CyclotomicInteger& a, const FieldSpecPtr& spec) {
  const std::int64_t L = a.level();
  if (spec->omega_order() % L != 0) {
    throw StructuralError("cannot map level " + std::to_string(L) + " into " + spec->descriptor() +
                          " whose omega has order " + std::to_string(spec->omega_order()));
  }
  const FiniteFieldElement root = field_root_of_unity(spec, L, 1);
  const long q = static_cast<long>(spec->characteristic());
  FiniteFieldElement acc = FiniteFieldElement::zero(spec);
  FiniteFieldElement power = FiniteFieldElement::one(spec);
  for (const auto& c : a.coeffs()) {
    mpz_class r = c % q;
    if (r < 0) r += q;
    if (r != 0) acc += FiniteFieldElement::from_integer(spec, r.get_si()) * power;
    power *= root;
  }
  return acc;
}

}  // namespace transversal
