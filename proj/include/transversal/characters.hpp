#pragma once

// Characters of a finite abelian group and exact character matrices.
//
// For G = Z_{n_1} x ... x Z_{n_r} with exponent L, the character with dual
// vector u sends g to zeta_L^(sum_i u_i g_i L / n_i). The dual vectors form a
// group with the same presentation as G.

#include <cstdint>
#include <optional>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "transversal/group.hpp"
#include "transversal/ring_value.hpp"

namespace transversal {

class Character {
 public:
  Character(const GroupSpec& spec, std::vector<std::int64_t> dual) : dual_(spec, std::move(dual)) {}
  explicit Character(GroupElement dual) : dual_(std::move(dual)) {}
  static Character trivial(const GroupSpec& spec) { return Character(GroupElement::identity(spec)); }

  // The dual vector as an element of the (isomorphic) presentation of G.
  const GroupElement& dual() const { return dual_; }
  std::string to_string() const { return dual_.to_string(); }

  bool operator==(const Character&) const = default;
  auto operator<=>(const Character&) const = default;

 private:
  GroupElement dual_;
};

// e in [0, L) with chi_u(g) = zeta_L^e.
std::int64_t char_exponent(const GroupSpec& spec, const Character& chi, const GroupElement& g);

// Throws StructuralError when the backend level differs from exponent(G).
RingValue char_eval(const GroupSpec& spec, const Character& chi, const GroupElement& g,
                    const Backend& backend);

// All characters in lexicographic dual-vector order.
std::vector<Character> all_characters(const GroupSpec& spec, std::int64_t cap = kDefaultEnumerationCap);

// Characters trivial on every Sylow subgroup whose prime is not listed; their
// restrictions to the Hall subgroup for `primes` are exactly its characters.
std::vector<Character> characters_supported_on(const GroupSpec& spec, std::span<const std::int64_t> primes,
                                               std::int64_t cap = kDefaultEnumerationCap);

struct CharacterMatrix {
  std::vector<Character> rows;
  std::vector<GroupElement> cols;
  Backend backend;
  std::vector<RingValue> entries;  // row-major; entries[i*k+j] = rows[i](cols[j])

  std::size_t size() const { return rows.size(); }
  const RingValue& at(std::size_t i, std::size_t j) const { return entries[i * rows.size() + j]; }
};

CharacterMatrix char_matrix(const GroupSpec& spec, std::span<const Character> chars,
                            std::span<const GroupElement> elems, const Backend& backend);

// Backend-dispatched wrappers around the generic algorithms.
RingValue determinant(std::span<const RingValue> grid, std::size_t k);
RingValue permanent(std::span<const RingValue> grid, std::size_t k);
RingValue determinant(const CharacterMatrix& m);
RingValue permanent(const CharacterMatrix& m);

enum class SearchStrategy { automatic, vandermonde_first, random, exhaustive };

SearchStrategy parse_strategy(std::string_view text);
std::string to_string(SearchStrategy s);

inline constexpr std::int64_t kDefaultRandomTrials = 10000;
inline constexpr std::int64_t kDefaultExhaustiveCap = 10000000;

struct SearchOptions {
  SearchStrategy strategy = SearchStrategy::automatic;
  std::uint64_t seed = 1;
  std::int64_t random_trials = kDefaultRandomTrials;
  std::int64_t exhaustive_cap = kDefaultExhaustiveCap;
  int workers = 1;
};

struct TupleSearchResult {
  std::optional<std::vector<Character>> tuple;
  std::string found_by;      // "vandermonde", "random", "exhaustive" or empty
  std::int64_t tuples_tried = 0;
  bool exhausted = false;    // a full sweep completed without a hit
};

using TuplePredicate = std::function<bool(std::span<const Character>)>;

// Searches candidates^k. `automatic`: Vandermonde powers when the candidate
// set is cyclic, then seeded random draws, then an exhaustive sweep if it fits
// under the cap. Exhaustive sweeps return the lexicographically least hit in
// candidate-index order regardless of the worker count.
TupleSearchResult search_character_tuples(const GroupSpec& spec, std::span<const Character> candidates,
                                          std::size_t k, const SearchOptions& options,
                                          const TuplePredicate& accept);

// Some chi_1..chi_k with det(chi_i(a_j)) != 0. An exhaustive sweep that finds
// nothing throws InternalError: a witness always exists for distinct elements.
TupleSearchResult find_nonzero_det_tuple(const GroupSpec& spec, std::span<const GroupElement> elems,
                                         const Backend& backend, const SearchOptions& options = {});
TupleSearchResult find_nonzero_per_tuple(const GroupSpec& spec, std::span<const GroupElement> elems,
                                         const Backend& backend, const SearchOptions& options = {});

// First element of the candidate subgroup whose order equals its size, if any.
std::optional<Character> cyclic_generator(const GroupSpec& spec, std::span<const Character> candidates);

bool all_distinct(std::span<const GroupElement> elems);
bool all_distinct(std::span<const Character> chars);

}  // namespace transversal
