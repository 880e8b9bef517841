#pragma once

#include <bit>
#include <cstdint>
#include <initializer_list>
#include <stdexcept>
#include <string>

namespace qsi {

/// Subset of observer positions, bit k set = observer k included.
struct ObserverSet {
  std::uint32_t mask = 0;

  constexpr ObserverSet() = default;
  constexpr explicit ObserverSet(std::uint32_t m) : mask(m) {}
  constexpr ObserverSet(std::initializer_list<int> members) {
    for (int k : members) mask |= std::uint32_t{1} << k;
  }

  static constexpr ObserverSet all(int n) {
    return ObserverSet(n >= 32 ? ~std::uint32_t{0} : (std::uint32_t{1} << n) - 1);
  }
  static constexpr ObserverSet single(int k) { return ObserverSet(std::uint32_t{1} << k); }

  constexpr bool contains(int k) const { return (mask >> k) & 1u; }
  constexpr int size() const { return std::popcount(mask); }
  constexpr bool empty() const { return mask == 0; }

  constexpr ObserverSet operator|(ObserverSet o) const { return ObserverSet(mask | o.mask); }
  constexpr ObserverSet operator&(ObserverSet o) const { return ObserverSet(mask & o.mask); }
  constexpr ObserverSet without(ObserverSet o) const { return ObserverSet(mask & ~o.mask); }
  constexpr ObserverSet without(int k) const { return without(single(k)); }
  constexpr bool disjoint(ObserverSet o) const { return (mask & o.mask) == 0; }
  constexpr bool subset_of(ObserverSet o) const { return (mask & ~o.mask) == 0; }

  friend constexpr bool operator==(ObserverSet, ObserverSet) = default;
};

/// Position of observer `k` among the members of `set` (0 = first in order).
constexpr int rank_in(ObserverSet set, int k) {
  return std::popcount(set.mask & ((std::uint32_t{1} << k) - 1));
}

inline void require_within(ObserverSet set, int n, const char* what) {
  if (!set.subset_of(ObserverSet::all(n)))
    throw std::invalid_argument(std::string(what) + ": observer index out of range");
}

}  // namespace qsi
