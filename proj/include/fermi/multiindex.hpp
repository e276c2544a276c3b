#pragma once

#include <bit>
#include <compare>
#include <cstdint>
#include <initializer_list>
#include <span>
#include <string>
#include <vector>

#include "fermi/errors.hpp"

namespace fermi {

/// Strictly ordered set of orbital labels, stored as a bitset over one
/// machine word. Orbitals are 1-based externally (orbital i occupies bit
/// i-1), so the usable orbital space is 1..64.
class MultiIndex {
 public:
  static constexpr int max_orbital = 64;

  constexpr MultiIndex() = default;

  static constexpr MultiIndex from_bits(std::uint64_t bits) {
    return MultiIndex(bits);
  }
  static MultiIndex from_orbitals(std::span<const int> orbitals);
  static MultiIndex from_orbitals(std::initializer_list<int> orbitals);
  /// The full index (1, 2, ..., m).
  static MultiIndex full(int m);

  constexpr std::uint64_t bits() const { return bits_; }
  constexpr int size() const { return std::popcount(bits_); }
  constexpr bool empty() const { return bits_ == 0; }

  constexpr bool contains(int orbital) const {
    return orbital >= 1 && orbital <= max_orbital &&
           (bits_ >> (orbital - 1)) & 1u;
  }
  constexpr bool contains(MultiIndex sub) const {
    return (sub.bits_ & ~bits_) == 0;
  }
  constexpr bool disjoint(MultiIndex other) const {
    return (bits_ & other.bits_) == 0;
  }
  /// Largest orbital label, 0 when empty.
  constexpr int max_element() const {
    return bits_ == 0 ? 0 : 64 - std::countl_zero(bits_);
  }

  std::vector<int> orbitals() const;
  std::string to_string() const;  // e.g. "(1,3,4)"

  friend constexpr bool operator==(MultiIndex, MultiIndex) = default;
  friend constexpr auto operator<=>(MultiIndex a, MultiIndex b) {
    return a.bits_ <=> b.bits_;
  }

 private:
  explicit constexpr MultiIndex(std::uint64_t bits) : bits_(bits) {}
  std::uint64_t bits_ = 0;
};

struct SignedIndexPair {
  MultiIndex first;
  MultiIndex second;
  int sign;  // +1 or -1
};

/// Sign of the permutation sorting the concatenation (a, b). Computed as
/// the parity of the number of pairs (x in a, y in b) with y < x, one
/// masked popcount per element of a. Throws OverlapError unless a and b
/// are disjoint.
int relative_sign(MultiIndex a, MultiIndex b);

/// Set union; throws OverlapError on overlapping inputs (the repeated-index
/// case always sits inside a vanishing coefficient, so callers zero it out
/// before getting here).
MultiIndex set_union(MultiIndex a, MultiIndex b);
MultiIndex set_intersect(MultiIndex a, MultiIndex b);
MultiIndex set_difference(MultiIndex a, MultiIndex b);

struct SplitTriple {
  MultiIndex common;  // a n b
  MultiIndex left;    // a \ b
  MultiIndex right;   // b \ a
};

/// (a, b) -> (a n b, a \ b, b \ a); inverse of merging the common part
/// back into both sides.
SplitTriple split_triple(MultiIndex a, MultiIndex b);

/// All C(m, length) multi-indices of the given length within 1..m, in
/// ascending bit order, each exactly once. Empty when length > m.
std::vector<MultiIndex> combinations(int length, int m);

/// All C(|a|, length) subsets of a of the given length, ascending bit order.
std::vector<MultiIndex> subsets_of(MultiIndex a, int length);

/// Binomial coefficient with the zero convention: 0 whenever k < 0, n < 0
/// or k > n.
double binomial(long long n, long long k);

}  // namespace fermi
