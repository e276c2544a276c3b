#include "fermi/multiindex.hpp"

#include <sstream>

namespace fermi {

MultiIndex MultiIndex::from_orbitals(std::span<const int> orbitals) {
  std::uint64_t bits = 0;
  for (int orb : orbitals) {
    if (orb < 1 || orb > max_orbital) {
      throw DomainError("orbital label out of range 1..64: " +
                        std::to_string(orb));
    }
    bits |= std::uint64_t{1} << (orb - 1);
  }
  return MultiIndex(bits);
}

MultiIndex MultiIndex::from_orbitals(std::initializer_list<int> orbitals) {
  return from_orbitals(std::span<const int>(orbitals.begin(), orbitals.size()));
}

MultiIndex MultiIndex::full(int m) {
  if (m < 0 || m > max_orbital) {
    throw DomainError("orbital count out of range: " + std::to_string(m));
  }
  return MultiIndex(m == 64 ? ~std::uint64_t{0}
                            : (std::uint64_t{1} << m) - 1);
}

std::vector<int> MultiIndex::orbitals() const {
  std::vector<int> out;
  out.reserve(static_cast<std::size_t>(size()));
  std::uint64_t rest = bits_;
  while (rest) {
    const int pos = std::countr_zero(rest);
    out.push_back(pos + 1);
    rest &= rest - 1;
  }
  return out;
}

std::string MultiIndex::to_string() const {
  std::ostringstream os;
  os << '(';
  bool first = true;
  for (int orb : orbitals()) {
    if (!first) os << ',';
    os << orb;
    first = false;
  }
  os << ')';
  return os.str();
}

int relative_sign(MultiIndex a, MultiIndex b) {
  if (!a.disjoint(b)) {
    throw OverlapError("relative_sign requires disjoint multi-indices: " +
                       a.to_string() + " vs " + b.to_string());
  }
  int inversions = 0;
  std::uint64_t rest = a.bits();
  while (rest) {
    const int pos = std::countr_zero(rest);
    const std::uint64_t below = (std::uint64_t{1} << pos) - 1;
    inversions += std::popcount(b.bits() & below);
    rest &= rest - 1;
  }
  return (inversions & 1) ? -1 : +1;
}

MultiIndex set_union(MultiIndex a, MultiIndex b) {
  if (!a.disjoint(b)) {
    throw OverlapError("union of overlapping multi-indices: " + a.to_string() +
                       " vs " + b.to_string());
  }
  return MultiIndex::from_bits(a.bits() | b.bits());
}

MultiIndex set_intersect(MultiIndex a, MultiIndex b) {
  return MultiIndex::from_bits(a.bits() & b.bits());
}

MultiIndex set_difference(MultiIndex a, MultiIndex b) {
  return MultiIndex::from_bits(a.bits() & ~b.bits());
}

SplitTriple split_triple(MultiIndex a, MultiIndex b) {
  return SplitTriple{set_intersect(a, b), set_difference(a, b),
                     set_difference(b, a)};
}

std::vector<MultiIndex> combinations(int length, int m) {
  std::vector<MultiIndex> out;
  if (length < 0 || m < 0 || length > m) return out;
  if (length == 0) {
    out.push_back(MultiIndex{});
    return out;
  }
  out.reserve(static_cast<std::size_t>(binomial(m, length)));
  const std::uint64_t limit = MultiIndex::full(m).bits();
  std::uint64_t v = (std::uint64_t{1} << length) - 1;
  while (v <= limit) {
    out.push_back(MultiIndex::from_bits(v));
    // Gosper's hack: next larger word with the same popcount.
    const std::uint64_t c = v & (~v + 1);
    const std::uint64_t r = v + c;
    if (r == 0) break;
    v = (((r ^ v) >> 2) / c) | r;
  }
  return out;
}

std::vector<MultiIndex> subsets_of(MultiIndex a, int length) {
  std::vector<MultiIndex> out;
  if (length < 0 || length > a.size()) return out;
  const auto positions = a.orbitals();
  for (MultiIndex sel : combinations(length, a.size())) {
    std::uint64_t bits = 0;
    for (int i : sel.orbitals()) {
      bits |= std::uint64_t{1} << (positions[static_cast<std::size_t>(i) - 1] - 1);
    }
    out.push_back(MultiIndex::from_bits(bits));
  }
  return out;
}

double binomial(long long n, long long k) {
  if (k < 0 || n < 0 || k > n) return 0.0;
  if (k > n - k) k = n - k;
  double result = 1.0;
  for (long long i = 1; i <= k; ++i) {
    result *= static_cast<double>(n - k + i);
    result /= static_cast<double>(i);
  }
  return result;
}

}  // namespace fermi
