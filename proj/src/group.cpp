#include "transversal/group.hpp"

#include <algorithm>
#include <charconv>
#include <limits>
#include <numeric>
#include <sstream>

#include "transversal/errors.hpp"

namespace transversal {

namespace {

std::int64_t mod_floor(std::int64_t a, std::int64_t n) {
  std::int64_t r = a % n;
  return r < 0 ? r + n : r;
}

std::int64_t parse_int(std::string_view text, std::string_view what) {
  while (!text.empty() && text.front() == ' ') text.remove_prefix(1);
  while (!text.empty() && text.back() == ' ') text.remove_suffix(1);
  std::int64_t value = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (text.empty() || ec != std::errc{} || ptr != text.data() + text.size()) {
    throw ParseError("malformed " + std::string(what) + ": '" + std::string(text) + "'");
  }
  return value;
}

}  // namespace

std::int64_t gcd64(std::int64_t a, std::int64_t b) { return std::gcd(a, b); }

std::int64_t lcm64(std::int64_t a, std::int64_t b) { return std::lcm(a, b); }

std::int64_t factorial(std::int64_t k) {
  std::int64_t result = 1;
  for (std::int64_t i = 2; i <= k; ++i) {
    if (result > std::numeric_limits<std::int64_t>::max() / i) {
      return std::numeric_limits<std::int64_t>::max();
    }
    result *= i;
  }
  return result;
}

std::int64_t euler_phi(std::int64_t n) {
  if (n < 1) throw DomainError("euler_phi: n must be >= 1");
  std::int64_t result = n;
  for (std::int64_t p = 2; p * p <= n; ++p) {
    if (n % p == 0) {
      while (n % p == 0) n /= p;
      result -= result / p;
    }
  }
  if (n > 1) result -= result / n;
  return result;
}

// ---------------------------------------------------------------------------
// GroupSpec

GroupSpec::GroupSpec(std::vector<std::int64_t> orders) : orders_(std::move(orders)) {
  if (orders_.empty()) throw DomainError("group spec needs at least one cyclic factor");
  for (auto n : orders_) {
    if (n < 2) throw DomainError("cyclic factor orders must be >= 2, got " + std::to_string(n));
    if (order_ > std::numeric_limits<std::int64_t>::max() / n) {
      throw DomainError("group order overflows 64 bits");
    }
    order_ *= n;
    exponent_ = std::lcm(exponent_, n);
  }
}

GroupSpec GroupSpec::parse(std::string_view text) {
  if (text.empty()) throw ParseError("empty group spec");
  std::vector<std::int64_t> orders;
  std::size_t pos = 0;
  if (text.front() != 'c') {
    orders.push_back(parse_int(text, "group order"));
    pos = text.size();
  }
  while (pos < text.size()) {
    if (text[pos] != 'c') throw ParseError("group spec factor must start with 'c': " + std::string(text));
    std::size_t end = text.find('x', pos);
    if (end == std::string_view::npos) end = text.size();
    orders.push_back(parse_int(text.substr(pos + 1, end - pos - 1), "cyclic factor order"));
    pos = end == text.size() ? end : end + 1;
    if (end + 1 == text.size()) throw ParseError("trailing 'x' in group spec");
  }
  try {
    return GroupSpec(std::move(orders));
  } catch (const DomainError& e) {
    throw ParseError(e.what());
  }
}

std::string GroupSpec::to_string() const {
  std::string out;
  for (std::size_t i = 0; i < orders_.size(); ++i) {
    if (i) out += 'x';
    out += 'c' + std::to_string(orders_[i]);
  }
  return out;
}

// ---------------------------------------------------------------------------
// GroupElement

GroupElement::GroupElement(const GroupSpec& spec, std::vector<std::int64_t> residues)
    : residues_(std::move(residues)) {
  if (residues_.size() != spec.rank()) {
    throw StructuralError("element has " + std::to_string(residues_.size()) +
                          " residues but group " + spec.to_string() + " has " +
                          std::to_string(spec.rank()) + " factors");
  }
  for (std::size_t i = 0; i < residues_.size(); ++i) {
    residues_[i] = mod_floor(residues_[i], spec.orders()[i]);
  }
}

GroupElement GroupElement::identity(const GroupSpec& spec) {
  return GroupElement(spec, std::vector<std::int64_t>(spec.rank(), 0));
}

bool GroupElement::is_identity() const {
  return std::all_of(residues_.begin(), residues_.end(), [](auto r) { return r == 0; });
}

std::string GroupElement::to_string() const {
  std::string out = "(";
  for (std::size_t i = 0; i < residues_.size(); ++i) {
    if (i) out += ',';
    out += std::to_string(residues_[i]);
  }
  return out + ")";
}

GroupElement parse_element(const GroupSpec& spec, std::string_view text) {
  while (!text.empty() && text.front() == ' ') text.remove_prefix(1);
  while (!text.empty() && text.back() == ' ') text.remove_suffix(1);
  if (text.size() < 2 || text.front() != '(' || text.back() != ')') {
    throw ParseError("element must be parenthesised: '" + std::string(text) + "'");
  }
  text = text.substr(1, text.size() - 2);
  std::vector<std::int64_t> residues;
  std::size_t pos = 0;
  while (true) {
    std::size_t end = text.find(',', pos);
    residues.push_back(parse_int(text.substr(pos, end == std::string_view::npos ? text.npos : end - pos),
                                 "residue"));
    if (end == std::string_view::npos) break;
    pos = end + 1;
  }
  if (residues.size() != spec.rank()) {
    throw ParseError("element " + std::string(text) + " does not match group " + spec.to_string());
  }
  for (std::size_t i = 0; i < residues.size(); ++i) {
    if (residues[i] < 0 || residues[i] >= spec.orders()[i]) {
      throw ParseError("residue out of range in (" + std::string(text) + ")");
    }
  }
  return GroupElement(spec, std::move(residues));
}

std::vector<GroupElement> parse_element_list(const GroupSpec& spec, std::string_view text) {
  std::vector<GroupElement> out;
  std::size_t pos = 0;
  while (pos < text.size()) {
    if (text[pos] == ' ' || text[pos] == ',') {
      ++pos;
      continue;
    }
    if (text[pos] != '(') throw ParseError("expected '(' in element list: " + std::string(text));
    std::size_t close = text.find(')', pos);
    if (close == std::string_view::npos) throw ParseError("unterminated element in list");
    out.push_back(parse_element(spec, text.substr(pos, close - pos + 1)));
    pos = close + 1;
  }
  return out;
}

std::string format_element_list(std::span<const GroupElement> elems) {
  std::string out;
  for (std::size_t i = 0; i < elems.size(); ++i) {
    if (i) out += ',';
    out += elems[i].to_string();
  }
  return out;
}

void require_member(const GroupSpec& spec, const GroupElement& g) {
  const auto& r = g.residues();
  if (r.size() != spec.rank()) {
    throw StructuralError("element " + g.to_string() + " is not in group " + spec.to_string());
  }
  for (std::size_t i = 0; i < r.size(); ++i) {
    if (r[i] < 0 || r[i] >= spec.orders()[i]) {
      throw StructuralError("element " + g.to_string() + " is not reduced for " + spec.to_string());
    }
  }
}

GroupElement group_mul(const GroupSpec& spec, const GroupElement& g, const GroupElement& h) {
  require_member(spec, g);
  require_member(spec, h);
  std::vector<std::int64_t> r(spec.rank());
  for (std::size_t i = 0; i < r.size(); ++i) {
    r[i] = (g.residues()[i] + h.residues()[i]) % spec.orders()[i];
  }
  return GroupElement(spec, std::move(r));
}

GroupElement group_inv(const GroupSpec& spec, const GroupElement& g) {
  require_member(spec, g);
  std::vector<std::int64_t> r(spec.rank());
  for (std::size_t i = 0; i < r.size(); ++i) r[i] = mod_floor(-g.residues()[i], spec.orders()[i]);
  return GroupElement(spec, std::move(r));
}

GroupElement group_pow(const GroupSpec& spec, const GroupElement& g, std::int64_t m) {
  require_member(spec, g);
  std::vector<std::int64_t> r(spec.rank());
  for (std::size_t i = 0; i < r.size(); ++i) {
    const std::int64_t n = spec.orders()[i];
    const __int128 prod = static_cast<__int128>(g.residues()[i]) * mod_floor(m, n);
    r[i] = static_cast<std::int64_t>(prod % n);
  }
  return GroupElement(spec, std::move(r));
}

std::int64_t element_order(const GroupSpec& spec, const GroupElement& g) {
  require_member(spec, g);
  std::int64_t result = 1;
  for (std::size_t i = 0; i < spec.rank(); ++i) {
    const std::int64_t n = spec.orders()[i];
    result = std::lcm(result, n / std::gcd(n, g.residues()[i]));
  }
  return result;
}

std::int64_t element_index(const GroupSpec& spec, const GroupElement& g) {
  require_member(spec, g);
  std::int64_t index = 0;
  for (std::size_t i = 0; i < spec.rank(); ++i) index = index * spec.orders()[i] + g.residues()[i];
  return index;
}

GroupElement element_at(const GroupSpec& spec, std::int64_t index) {
  if (index < 0 || index >= spec.order()) throw DomainError("element index out of range");
  std::vector<std::int64_t> r(spec.rank());
  for (std::size_t i = spec.rank(); i-- > 0;) {
    r[i] = index % spec.orders()[i];
    index /= spec.orders()[i];
  }
  return GroupElement(spec, std::move(r));
}

std::vector<GroupElement> enumerate_elements(const GroupSpec& spec, std::int64_t cap) {
  if (spec.order() > cap) {
    throw RefusalError("group " + spec.to_string() + " has order " + std::to_string(spec.order()) +
                       " above the enumeration cap " + std::to_string(cap));
  }
  std::vector<GroupElement> out;
  out.reserve(static_cast<std::size_t>(spec.order()));
  for (std::int64_t i = 0; i < spec.order(); ++i) out.push_back(element_at(spec, i));
  return out;
}

// ---------------------------------------------------------------------------
// Permutation

int permutation_sign(std::span<const int> images) {
  std::vector<char> seen(images.size(), 0);
  int sign = 1;
  for (std::size_t start = 0; start < images.size(); ++start) {
    if (seen[start]) continue;
    std::size_t length = 0;
    for (std::size_t i = start; !seen[i]; i = static_cast<std::size_t>(images[i])) {
      seen[i] = 1;
      ++length;
    }
    if (length % 2 == 0) sign = -sign;
  }
  return sign;
}

Permutation::Permutation(std::vector<int> images) : images_(std::move(images)) {
  std::vector<char> hit(images_.size(), 0);
  for (int v : images_) {
    if (v < 0 || static_cast<std::size_t>(v) >= images_.size() || hit[static_cast<std::size_t>(v)]) {
      throw DomainError("permutation images are not a bijection");
    }
    hit[static_cast<std::size_t>(v)] = 1;
  }
  sign_ = permutation_sign(images_);
}

Permutation Permutation::identity(std::size_t k) {
  std::vector<int> images(k);
  std::iota(images.begin(), images.end(), 0);
  return Permutation(std::move(images));
}

std::vector<int> Permutation::one_based() const {
  std::vector<int> out(images_);
  for (int& v : out) ++v;
  return out;
}

Permutation Permutation::from_one_based(const std::vector<int>& images) {
  std::vector<int> zero(images);
  for (int& v : zero) --v;
  return Permutation(std::move(zero));
}

bool Permutation::next() {
  const bool more = std::next_permutation(images_.begin(), images_.end());
  sign_ = permutation_sign(images_);
  return more;
}

// ---------------------------------------------------------------------------
// SubgroupSpec

SubgroupSpec::SubgroupSpec(GroupSpec parent, std::vector<GroupElement> generators, std::int64_t cap)
    : parent_(std::move(parent)), generators_(std::move(generators)) {
  for (const auto& g : generators_) require_member(parent_, g);
  // Breadth-first closure; in a finite group closure under products suffices.
  std::vector<char> seen;
  const bool dense = parent_.order() <= cap;
  if (dense) seen.assign(static_cast<std::size_t>(parent_.order()), 0);
  std::vector<GroupElement> frontier{GroupElement::identity(parent_)};
  std::vector<std::int64_t> found{0};
  if (dense) seen[0] = 1;
  auto visited = [&](std::int64_t idx) {
    if (dense) return seen[static_cast<std::size_t>(idx)] != 0;
    return std::find(found.begin(), found.end(), idx) != found.end();
  };
  while (!frontier.empty()) {
    std::vector<GroupElement> next;
    for (const auto& x : frontier) {
      for (const auto& gen : generators_) {
        GroupElement y = group_mul(parent_, x, gen);
        const std::int64_t idx = element_index(parent_, y);
        if (visited(idx)) continue;
        if (static_cast<std::int64_t>(found.size()) >= cap) {
          throw RefusalError("subgroup closure exceeds the enumeration cap");
        }
        if (dense) seen[static_cast<std::size_t>(idx)] = 1;
        found.push_back(idx);
        next.push_back(std::move(y));
      }
    }
    frontier = std::move(next);
  }
  std::sort(found.begin(), found.end());
  indices_ = found;
  elements_.reserve(found.size());
  for (auto idx : found) elements_.push_back(element_at(parent_, idx));
}

bool SubgroupSpec::contains(const GroupElement& g) const {
  return std::binary_search(indices_.begin(), indices_.end(), element_index(parent_, g));
}

bool SubgroupSpec::contains_all(std::span<const GroupElement> elems) const {
  return std::all_of(elems.begin(), elems.end(), [&](const auto& g) { return contains(g); });
}

// ---------------------------------------------------------------------------
// Number theory on orders

bool is_prime(std::int64_t n) {
  if (n < 2) return false;
  for (std::int64_t p = 2; p * p <= n; ++p) {
    if (n % p == 0) return false;
  }
  return true;
}

std::int64_t smallest_prime_divisor(std::int64_t n) {
  if (n <= 1) throw DomainError("smallest_prime_divisor needs n > 1, got " + std::to_string(n));
  for (std::int64_t p = 2; p * p <= n; ++p) {
    if (n % p == 0) return p;
  }
  return n;
}

std::vector<std::int64_t> prime_divisors(std::int64_t n) {
  if (n <= 1) throw DomainError("prime_divisors needs n > 1, got " + std::to_string(n));
  std::vector<std::int64_t> out;
  for (std::int64_t p = 2; p * p <= n; ++p) {
    if (n % p == 0) {
      out.push_back(p);
      while (n % p == 0) n /= p;
    }
  }
  if (n > 1) out.push_back(n);
  return out;
}

bool is_k_large(std::int64_t n, std::int64_t k) {
  if (n <= 1) throw DomainError("is_k_large needs n > 1, got " + std::to_string(n));
  if (k < 1) throw DomainError("is_k_large needs k >= 1");
  const auto primes = prime_divisors(n);
  if (primes.front() <= k) return false;
  const std::int64_t kf = factorial(k);
  return std::all_of(primes.begin() + 1, primes.end(), [kf](auto p) { return p > kf; });
}

SubgroupSpec hall_subgroup(const GroupSpec& spec, std::span<const std::int64_t> primes,
                           std::int64_t cap) {
  // Each cyclic factor Z_n contributes the generator of its pi-part: n / (pi-part of n).
  std::vector<GroupElement> gens;
  for (std::size_t i = 0; i < spec.rank(); ++i) {
    std::int64_t n = spec.orders()[i];
    std::int64_t part = 1;
    for (auto p : primes) {
      while (n % p == 0) {
        n /= p;
        part *= p;
      }
    }
    if (part == 1) continue;
    std::vector<std::int64_t> r(spec.rank(), 0);
    r[i] = spec.orders()[i] / part;
    gens.emplace_back(spec, std::move(r));
  }
  return SubgroupSpec(spec, std::move(gens), cap);
}

std::map<std::int64_t, SylowPart> sylow_decomposition(const GroupSpec& spec, std::int64_t cap) {
  std::map<std::int64_t, SylowPart> out;
  for (auto p : prime_divisors(spec.order())) {
    const std::int64_t one_prime[] = {p};
    SubgroupSpec sylow = hall_subgroup(spec, one_prime, cap);
    const std::int64_t cofactor = spec.order() / sylow.order();
    out.emplace(p, SylowPart{std::move(sylow), cofactor});
  }
  return out;
}

}  // namespace transversal
