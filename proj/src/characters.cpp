#include "transversal/characters.hpp"

#include <algorithm>
#include <atomic>
#include <limits>
#include <set>
#include <thread>

#include "transversal/errors.hpp"
#include "transversal/matrix_algorithms.hpp"
#include "transversal/random.hpp"

namespace transversal {

std::int64_t char_exponent(const GroupSpec& spec, const Character& chi, const GroupElement& g) {
  require_member(spec, chi.dual());
  require_member(spec, g);
  const std::int64_t L = spec.exponent();
  std::int64_t e = 0;
  for (std::size_t i = 0; i < spec.rank(); ++i) {
    const std::int64_t n = spec.orders()[i];
    const __int128 term = static_cast<__int128>(chi.dual().residues()[i] * g.residues()[i] % n) * (L / n);
    e = static_cast<std::int64_t>((e + term) % L);
  }
  return e;
}

RingValue char_eval(const GroupSpec& spec, const Character& chi, const GroupElement& g, const Backend& backend) {
  if (backend.level() != spec.exponent()) {
    throw StructuralError("backend level " + std::to_string(backend.level()) + " does not match exponent " +
                          std::to_string(spec.exponent()) + " of " + spec.to_string());
  }
  return backend.root(char_exponent(spec, chi, g));
}

std::vector<Character> all_characters(const GroupSpec& spec, std::int64_t cap) {
  std::vector<Character> out;
  for (auto& u : enumerate_elements(spec, cap)) out.emplace_back(std::move(u));
  return out;
}

std::vector<Character> characters_supported_on(const GroupSpec& spec, std::span<const std::int64_t> primes,
                                               std::int64_t cap) {
  std::vector<Character> out;
  const SubgroupSpec hall = hall_subgroup(spec, primes, cap);
  for (const auto& u : hall.elements()) out.emplace_back(u);
  return out;
}

CharacterMatrix char_matrix(const GroupSpec& spec, std::span<const Character> chars,
                            std::span<const GroupElement> elems, const Backend& backend) {
  if (chars.empty()) throw DomainError("character matrix needs k >= 1");
  if (chars.size() != elems.size()) throw StructuralError("character matrix needs k characters and k elements");
  CharacterMatrix m{{chars.begin(), chars.end()}, {elems.begin(), elems.end()}, backend, {}};
  m.entries.reserve(chars.size() * elems.size());
  for (const auto& chi : chars) {
    for (const auto& g : elems) m.entries.push_back(char_eval(spec, chi, g, backend));
  }
  return m;
}

namespace {

template <class T, class Fn>
RingValue dispatch_concrete(std::span<const RingValue> grid, Fn&& fn) {
  std::vector<T> concrete;
  concrete.reserve(grid.size());
  for (const auto& v : grid) {
    if constexpr (std::is_same_v<T, CyclotomicInteger>) {
      concrete.push_back(v.cyclotomic());
    } else {
      concrete.push_back(v.field());
    }
  }
  return RingValue(fn(std::span<const T>(concrete)));
}

template <class Fn>
RingValue run_algorithm(std::span<const RingValue> grid, std::size_t k, Fn&& fn) {
  if (grid.size() != k * k || k == 0) throw StructuralError("matrix grid is not k x k");
  if (grid[0].kind() == BackendKind::cyclotomic) {
    return dispatch_concrete<CyclotomicInteger>(grid, [&](auto g) { return fn(g); });
  }
  return dispatch_concrete<FiniteFieldElement>(grid, [&](auto g) { return fn(g); });
}

}  // namespace

RingValue determinant(std::span<const RingValue> grid, std::size_t k) {
  return run_algorithm(grid, k, [k](auto g) { return determinant(g, k); });
}

RingValue permanent(std::span<const RingValue> grid, std::size_t k) {
  return run_algorithm(grid, k, [k](auto g) { return permanent(g, k); });
}

RingValue determinant(const CharacterMatrix& m) { return determinant(m.entries, m.size()); }
RingValue permanent(const CharacterMatrix& m) { return permanent(m.entries, m.size()); }

// ---------------------------------------------------------------------------
// Tuple search

SearchStrategy parse_strategy(std::string_view text) {
  if (text == "auto") return SearchStrategy::automatic;
  if (text == "vandermonde-first") return SearchStrategy::vandermonde_first;
  if (text == "random") return SearchStrategy::random;
  if (text == "exhaustive") return SearchStrategy::exhaustive;
  throw ParseError("unknown search strategy '" + std::string(text) + "'");
}

std::string to_string(SearchStrategy s) {
  switch (s) {
    case SearchStrategy::automatic: return "auto";
    case SearchStrategy::vandermonde_first: return "vandermonde-first";
    case SearchStrategy::random: return "random";
    case SearchStrategy::exhaustive: return "exhaustive";
  }
  return "auto";
}

bool all_distinct(std::span<const GroupElement> elems) {
  std::set<GroupElement> seen(elems.begin(), elems.end());
  return seen.size() == elems.size();
}

bool all_distinct(std::span<const Character> chars) {
  std::set<Character> seen(chars.begin(), chars.end());
  return seen.size() == chars.size();
}

std::optional<Character> cyclic_generator(const GroupSpec& spec, std::span<const Character> candidates) {
  const auto size = static_cast<std::int64_t>(candidates.size());
  for (const auto& c : candidates) {
    if (element_order(spec, c.dual()) == size) return c;
  }
  return std::nullopt;
}

namespace {

// candidates^k would overflow or exceed the cap.
std::optional<std::int64_t> sweep_size(std::size_t n, std::size_t k, std::int64_t cap) {
  std::int64_t total = 1;
  for (std::size_t i = 0; i < k; ++i) {
    if (total > cap / static_cast<std::int64_t>(n)) return std::nullopt;
    total *= static_cast<std::int64_t>(n);
  }
  return total;
}

std::vector<Character> tuple_at(std::span<const Character> candidates, std::size_t k, std::int64_t index) {
  std::vector<Character> tuple(k, candidates[0]);
  const auto n = static_cast<std::int64_t>(candidates.size());
  for (std::size_t i = k; i-- > 0;) {
    tuple[i] = candidates[static_cast<std::size_t>(index % n)];
    index /= n;
  }
  return tuple;
}

void exhaustive_sweep(std::span<const Character> candidates, std::size_t k, std::int64_t total, int workers,
                      const TuplePredicate& accept, TupleSearchResult& result) {
  constexpr std::int64_t none = std::numeric_limits<std::int64_t>::max();
  std::atomic<std::int64_t> best{none};
  std::atomic<std::int64_t> tried{0};
  const int w = std::max(1, workers);
  auto scan = [&](std::int64_t begin, std::int64_t end) {
    std::int64_t local = 0;
    for (std::int64_t idx = begin; idx < end && idx < best.load(); ++idx) {
      ++local;
      if (accept(tuple_at(candidates, k, idx))) {
        std::int64_t cur = best.load();
        while (idx < cur && !best.compare_exchange_weak(cur, idx)) {
        }
        break;
      }
    }
    tried += local;
  };
  if (w == 1) {
    scan(0, total);
  } else {
    std::vector<std::thread> threads;
    const std::int64_t chunk = (total + w - 1) / w;
    for (int t = 0; t < w; ++t) {
      const std::int64_t begin = chunk * t;
      threads.emplace_back(scan, begin, std::min(total, begin + chunk));
    }
    for (auto& th : threads) th.join();
  }
  result.tuples_tried += tried.load();
  if (best.load() != none) {
    result.tuple = tuple_at(candidates, k, best.load());
    result.found_by = "exhaustive";
  } else {
    result.exhausted = true;
  }
}

}  // namespace

TupleSearchResult search_character_tuples(const GroupSpec& spec, std::span<const Character> candidates,
                                          std::size_t k, const SearchOptions& options,
                                          const TuplePredicate& accept) {
  if (k == 0) throw DomainError("tuple search needs k >= 1");
  if (candidates.empty()) throw DomainError("tuple search needs candidates");
  TupleSearchResult result;
  const auto strategy = options.strategy;

  if (strategy == SearchStrategy::automatic || strategy == SearchStrategy::vandermonde_first) {
    if (auto gen = cyclic_generator(spec, candidates)) {
      std::vector<Character> powers;
      for (std::size_t i = 0; i < k; ++i) {
        powers.emplace_back(group_pow(spec, gen->dual(), static_cast<std::int64_t>(i)));
      }
      ++result.tuples_tried;
      if (accept(powers)) {
        result.tuple = std::move(powers);
        result.found_by = "vandermonde";
        return result;
      }
    }
  }

  if (strategy == SearchStrategy::automatic || strategy == SearchStrategy::random) {
    Rng rng(options.seed);
    std::vector<Character> tuple(k, candidates[0]);
    for (std::int64_t t = 0; t < options.random_trials; ++t) {
      for (auto& c : tuple) c = candidates[uniform_below(rng, candidates.size())];
      ++result.tuples_tried;
      if (accept(tuple)) {
        result.tuple = tuple;
        result.found_by = "random";
        return result;
      }
    }
    if (strategy == SearchStrategy::random) return result;
  }

  const auto total = sweep_size(candidates.size(), k, options.exhaustive_cap);
  if (!total) {
    if (strategy == SearchStrategy::exhaustive) {
      throw RefusalError("exhaustive sweep of " + std::to_string(candidates.size()) + "^" + std::to_string(k) +
                         " tuples exceeds the cap " + std::to_string(options.exhaustive_cap));
    }
    return result;
  }
  exhaustive_sweep(candidates, k, *total, options.workers, accept, result);
  return result;
}

namespace {

TupleSearchResult find_tuple(const GroupSpec& spec, std::span<const GroupElement> elems, const Backend& backend,
                             const SearchOptions& options, bool use_permanent) {
  if (elems.empty()) throw DomainError("need at least one element");
  if (!all_distinct(elems)) throw DomainError("elements must be distinct");
  for (const auto& g : elems) require_member(spec, g);
  const auto chars = all_characters(spec);
  auto accept = [&](std::span<const Character> tuple) {
    const auto m = char_matrix(spec, tuple, elems, backend);
    return !(use_permanent ? permanent(m) : determinant(m)).is_zero();
  };
  auto result = search_character_tuples(spec, chars, elems.size(), options, accept);
  if (!result.tuple && result.exhausted) {
    throw InternalError(std::string("no character tuple with nonzero ") + (use_permanent ? "permanent" : "determinant") +
                        " for distinct elements " + format_element_list(elems) + " in " + spec.to_string());
  }
  return result;
}

}  // namespace

TupleSearchResult find_nonzero_det_tuple(const GroupSpec& spec, std::span<const GroupElement> elems,
                                         const Backend& backend, const SearchOptions& options) {
  return find_tuple(spec, elems, backend, options, false);
}

TupleSearchResult find_nonzero_per_tuple(const GroupSpec& spec, std::span<const GroupElement> elems,
                                         const Backend& backend, const SearchOptions& options) {
  return find_tuple(spec, elems, backend, options, true);
}

}  // namespace transversal
