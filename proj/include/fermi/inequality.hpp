#pragma once

#include <optional>
#include <string>

#include "fermi/decomposition.hpp"

namespace fermi {

struct InequalityReport {
  std::string label;
  int t = 0;
  int r = -1;            // -1 when summed over r
  double tau = 0.0;      // 0 when not applicable
  std::string core;      // "(1,3)"-style multi-index, or "summed"
  double lhs = 0.0;
  double rhs = 0.0;
  double slack = 0.0;    // rhs - lhs
  bool pass = false;     // slack >= -1e-10 * max(1, |lhs|, |rhs|)
};

/// Constructive record of the coefficients realized while following one of
/// the proof routes. `scale_exponent(s)` is the power of N the coefficient
/// at inner size s is expected to stay below, up to a constant; cap_check
/// is the realized maximum of |C| / N^exponent over the table.
struct ConstantLedger {
  int t = 0;
  int n = 0;
  std::map<std::tuple<int, int, int>, double> table;  // (s, t, r) -> C
  double cap_check = 0.0;
};

/// The recurring quadruple sum over |eps|=|eta|=r-t and |alpha|=|beta|=t at
/// a fixed core D (or summed over all cores of size N-r when D is absent).
double group_sum(const GroupSums& sums, int t, int r,
                 std::optional<MultiIndex> d = std::nullopt);
double group_sum(const SlaterExpansion& psi, int t, int r,
                 std::optional<MultiIndex> d = std::nullopt);

/// Per-core estimate valid for every parity of t: the (t, r, D) group sum
/// is at most half the binomial-weighted s=0 cell plus half an alternating
/// binomial combination of the s = 0..t cells at the same (r, D).
InequalityReport odd_lemma_check(const GroupSums& sums, int t, int r,
                                 MultiIndex d);

/// Per-core estimate valid for any t >= 1 (used on the even-t route),
/// with a free parameter tau > 0 balancing a Young inequality; three
/// binomial blocks on the right.
InequalityReport even_lemma_check(const GroupSums& sums, int t, int r,
                                  MultiIndex d, double tau);

/// Summed-over-r cancellation estimate with constructive coefficients:
/// odd t divides the per-core estimate by 2 + C(r-t, t) after moving the
/// s=t term left; even t takes tau = N, drops the size-(t+1) square, and
/// absorbs the leftover s=t block with the added nonnegative square. The
/// ledger records every realized coefficient (scaling target N^{t-s}).
std::pair<InequalityReport, ConstantLedger> proposition_check(
    const GroupSums& sums, int t);

enum class SquareVariant { drop, add, odd_square };

/// Re-derives one of the three square-expansion identities directly from
/// the coefficients and compares with the cell-table form; returns the
/// largest absolute residual. These are equalities, so residuals beyond
/// rounding noise indicate a sign-calculus bug.
double square_identity_check(const SlaterExpansion& psi, const GroupSums& sums,
                             int t, SquareVariant variant);

struct TheoremTrace {
  double bound = 0.0;         // certified upper bound on ||Gamma^(k)||_HS^2
  double direct_hs_sq = 0.0;  // from the matrix construction
  double realized_ck = 0.0;   // bound / N^k
  bool sound = false;         // bound >= direct within tolerance
  ConstantLedger ledger;      // scaling target N^{k-s}
};

/// Full descending induction t = k..0: start from the exact decomposition
/// weights, flatten each s=t row with the added square, apply the
/// cancellation estimate, and read off a state-independent certified bound
/// at t = 0. Every intermediate stage is also checked numerically against
/// the direct Hilbert-Schmidt value.
TheoremTrace theorem_trace(const SlaterExpansion& psi, int k);

}  // namespace fermi
