#pragma once

#include <map>
#include <tuple>
#include <vector>

#include "fermi/state.hpp"

namespace fermi {

/// The argument tuple (D; alpha, beta; eps, eta) of the four-coefficient
/// building block: a shared core D, two inner blocks of equal size s and
/// two outer blocks of equal size.
struct LambdaInputs {
  MultiIndex d;
  MultiIndex alpha;
  MultiIndex beta;
  MultiIndex eps;
  MultiIndex eta;
};

/// Signed four-coefficient product
///   sgn(alpha u beta, eps u eta) c_{D u alpha u eps} conj(c_{D u alpha u eta})
///                                conj(c_{D u beta u eps}) c_{D u beta u eta},
/// zero unless all five blocks are pairwise disjoint. Throws SizeError when
/// |alpha| != |beta| or |eps| != |eta|.
Complex lambda_eval(const SlaterExpansion& psi, const LambdaInputs& inputs);

/// The same coefficient product with no sign factor and no disjointness
/// zeroing; overlapping unions still vanish through the absent coefficient.
Complex xi_eval(const SlaterExpansion& psi, const LambdaInputs& inputs);

constexpr std::size_t kDefaultGroupSumBudget = 500'000'000;

/// Precomputed table of every partial sum
///   cell(s, r, D) = sum over |eps|=|eta|=r-s, |alpha|=|beta|=s of
///                   lambda_eval(D; alpha, beta; eps, eta),
/// for all (s, r, D) with a nonzero contribution. Built by classifying
/// ordered pairs of support keys: each pair (A, A') yields the outer blocks
/// (eps, eta) = (A \ A', A' \ A) and a bucket entry (G = A n A', c_A
/// conj(c_{A'})); combining two entries of one bucket recovers
/// D = G1 n G2, alpha = G1 \ G2, beta = G2 \ G1 with every disjointness
/// requirement holding by construction. Cost is the sum of squared bucket
/// sizes instead of the fourth power of the support size.
class GroupSums {
 public:
  /// Throws BudgetError when the pair-combination estimate exceeds max_ops.
  explicit GroupSums(const SlaterExpansion& psi,
                     std::size_t max_ops = kDefaultGroupSumBudget);

  int particle_count() const { return n_; }
  int orbital_count() const { return m_; }

  /// Real cell value; zero for absent cells.
  double value(int s, int r, MultiIndex d) const;

  /// Sum of cell(s, r, D) over all cores D of size N-r.
  double aggregate(int s, int r) const;

  /// Distinct cores of size N-r appearing in any cell at this r. Cores
  /// absent here have identically zero cells for every s.
  std::vector<MultiIndex> cores(int r) const;

  /// Largest imaginary part left in any accumulated cell; the cell sums
  /// are real in exact arithmetic, so this is a sign-calculus diagnostic.
  double max_imag() const { return max_imag_; }

 private:
  using Key = std::tuple<int, int, std::uint64_t>;  // (s, r, D bits)
  int n_;
  int m_;
  double max_imag_ = 0.0;
  std::map<Key, Complex> cells_;
  std::map<std::pair<int, int>, Complex> aggregates_;
};

struct DecompositionCell {
  int s = 0;
  int r = 0;
  double weight = 0.0;     // C(N-r, k-s)
  double inner_sum = 0.0;  // aggregated group sum at (s, r)
  double contribution = 0.0;
};

struct DecompositionReport {
  int k = 0;
  std::vector<DecompositionCell> cells;
  double total = 0.0;
  double direct_hs_sq = 0.0;
  double residual = 0.0;
};

/// Exact rewriting of ||Gamma^(k)||_HS^2 as
///   sum_{s=0..k} sum_{r=0..N} C(N-r, k-s) * aggregate(s, r),
/// with the direct matrix value and the residual attached. Binomials with
/// out-of-range arguments are zero, which settles the r-range.
DecompositionReport hs_decomposition(const SlaterExpansion& psi, int k,
                                     std::size_t max_ops = kDefaultGroupSumBudget);

}  // namespace fermi
