#include "fermi/inequality.hpp"

#include <cmath>
#include <unordered_map>

#include "fermi/rdm.hpp"

namespace fermi {

namespace {

InequalityReport make_report(std::string label, int t, int r, double tau,
                             std::string core, double lhs, double rhs) {
  InequalityReport report;
  report.label = std::move(label);
  report.t = t;
  report.r = r;
  report.tau = tau;
  report.core = std::move(core);
  report.lhs = lhs;
  report.rhs = rhs;
  report.slack = rhs - lhs;
  const double scale = std::max({1.0, std::abs(lhs), std::abs(rhs)});
  report.pass = report.slack >= -1e-10 * scale;
  return report;
}

/// Coefficient of the s=0..t-1 aggregate at map position q in the
/// summed-over-r cancellation estimate; keyed by (s, q).
std::map<std::pair<int, int>, double> proposition_coefficients(int n, int t) {
  std::map<std::pair<int, int>, double> coef;
  if (t % 2 == 1) {
    // Move the s=t term left and divide by 2 + C(r-t, t); the remaining
    // cells stay within the same (r, D) block.
    for (int q = t; q <= n; ++q) {
      const double denom = 2.0 + binomial(q - t, t);
      for (int s = 0; s <= t - 1; ++s) {
        double numer =
            ((s % 2) ? -1.0 : 1.0) * binomial(q - s, t) * binomial(q - s, t - s);
        if (s == 0) numer += binomial(q, t);
        coef[{s, q}] += numer / denom;
      }
    }
  } else {
    // tau = N route: the per-block estimate leaves a multiple
    // (1+t^2)(r-t)/(2tN) of the left side and a negative size-(t+1)
    // square which is dropped; adding (1+t^2)(N-r)/(2tN) times the
    // nonnegative square flattens the s=t coefficient to the constant
    // (1+t^2)(N-t)/(2tN), which is then moved left. That constant must
    // stay below one for the division to make sense; this holds at the
    // particle counts handled here.
    const double nn = static_cast<double>(n);
    const double t2 = 1.0 + static_cast<double>(t) * t;
    const double f = 1.0 - t2 * (nn - t) / (2.0 * t * nn);
    if (f <= 0.0) {
      throw NumericalError(
          "cancellation estimate not contractive at this particle count");
    }
    for (int q = t; q <= n; ++q) {
      for (int s = 0; s <= t - 1; ++s) {
        const double sign = (s % 2) ? -1.0 : 1.0;
        double e = 0.0;
        if (s >= 1) {
          e += (((s + t + 1) % 2) ? -1.0 : 1.0) *
               (static_cast<double>(s) / t) * binomial(q - s, t - s);
        }
        e += sign * binomial(q - s, t - 1 - s) * nn / (2.0 * t);
        double b = binomial(q - s, t - s) * binomial(q - s, 1);
        if (s >= 1) {
          b += static_cast<double>(s) * s * binomial(q - s, t - s + 1);
        }
        e += sign * b / (2.0 * t * nn);
        coef[{s, q}] += e / f;

        // Nonnegative-square spread: the block at r' = q lands on the
        // cell (s, rho) with rho = q - t + s.
        const int rho = q - t + s;
        coef[{s, rho}] += t2 * (nn - q) / (2.0 * t * nn) *
                          binomial(n - q + t - s, t - s) / f;
      }
    }
  }
  return coef;
}

double ledger_cap(const ConstantLedger& ledger, int exponent_base) {
  double cap = 0.0;
  for (const auto& [key, value] : ledger.table) {
    const int s = std::get<0>(key);
    cap = std::max(cap, std::abs(value) /
                            std::pow(static_cast<double>(ledger.n),
                                     exponent_base - s));
  }
  return cap;
}

}  // namespace

double group_sum(const GroupSums& sums, int t, int r,
                 std::optional<MultiIndex> d) {
  if (t < 0 || t > r || r > sums.particle_count()) {
    throw SizeError("group sum requires 0 <= t <= r <= N");
  }
  if (d) {
    if (d->size() != sums.particle_count() - r) {
      throw SizeError("core " + d->to_string() + " must have size N-r");
    }
    return sums.value(t, r, *d);
  }
  return sums.aggregate(t, r);
}

double group_sum(const SlaterExpansion& psi, int t, int r,
                 std::optional<MultiIndex> d) {
  return group_sum(GroupSums(psi), t, r, d);
}

InequalityReport odd_lemma_check(const GroupSums& sums, int t, int r,
                                 MultiIndex d) {
  const double lhs = group_sum(sums, t, r, d);
  double rhs = 0.5 * binomial(r, t) * sums.value(0, r, d);
  for (int s = 0; s <= t; ++s) {
    const double sign = (s % 2) ? -1.0 : 1.0;
    rhs += 0.5 * sign * binomial(r - s, t) * binomial(r - s, t - s) *
           sums.value(s, r, d);
  }
  return make_report("odd-case estimate", t, r, 0.0, d.to_string(), lhs, rhs);
}

InequalityReport even_lemma_check(const GroupSums& sums, int t, int r,
                                  MultiIndex d, double tau) {
  if (t < 1) throw DomainError("even-case estimate requires t >= 1");
  if (tau <= 0.0) throw DomainError("even-case estimate requires tau > 0");
  const double lhs = group_sum(sums, t, r, d);
  // Exact rewriting: the (t, r, D) sum equals a weighted mix of the lower
  // cells plus a cross term of one size-(t-1) square factor and one
  // size-(t+1) square factor; Young's inequality splits the cross term
  // into tau/2 times the first square plus 1/(2 tau) times the second.
  double rhs = 0.0;
  for (int s = 1; s <= t - 1; ++s) {
    rhs += (((s + t + 1) % 2) ? -1.0 : 1.0) * (static_cast<double>(s) / t) *
           binomial(r - s, t - s) * sums.value(s, r, d);
  }
  for (int s = 0; s <= t - 1; ++s) {
    const double sign = (s % 2) ? -1.0 : 1.0;
    rhs += sign * binomial(r - s, t - 1 - s) * sums.value(s, r, d) * tau /
           (2.0 * t);
  }
  for (int s = 0; s <= t + 1; ++s) {
    const double sign = (s % 2) ? -1.0 : 1.0;
    double b = 0.0;
    if (s <= t) b += binomial(r - s, t - s) * binomial(r - s, 1);
    if (s >= 1) {
      b += static_cast<double>(s) * s * binomial(r - s, t - s + 1);
    }
    rhs += sign * b * sums.value(s, r, d) / (2.0 * t * tau);
  }
  return make_report("even-case estimate", t, r, tau, d.to_string(), lhs, rhs);
}

std::pair<InequalityReport, ConstantLedger> proposition_check(
    const GroupSums& sums, int t) {
  if (t < 1) throw DomainError("cancellation estimate requires t >= 1");
  const int n = sums.particle_count();

  double lhs = 0.0;
  for (int r = t; r <= n; ++r) lhs += sums.aggregate(t, r);

  const auto coef = proposition_coefficients(n, t);
  double rhs = 0.0;
  ConstantLedger ledger;
  ledger.t = t;
  ledger.n = n;
  for (const auto& [key, value] : coef) {
    const auto [s, q] = key;
    rhs += value * sums.aggregate(s, q);
    ledger.table[{s, t, q}] = value;
  }
  ledger.cap_check = ledger_cap(ledger, t);
  return {make_report("cancellation estimate", t, -1, 0.0, "summed", lhs, rhs),
          ledger};
}

double square_identity_check(const SlaterExpansion& psi, const GroupSums& sums,
                             int t, SquareVariant variant) {
  const int n = psi.particle_count();
  const int m = psi.orbital_count();
  if (t < 0 || t > n) throw SizeError("block size outside 0..N");

  if (variant == SquareVariant::drop) {
    // sum_r aggregate(t, r) equals the sum of |w(alpha, beta)|^2 with
    // w = sum_A sgn(alpha u beta, A) c_{A u alpha} conj(c_{A u beta}).
    std::map<std::pair<std::uint64_t, std::uint64_t>, Complex> w;
    for (const auto& [k1, c1] : psi.coefficients()) {
      for (const auto& [k2, c2] : psi.coefficients()) {
        const MultiIndex core = set_intersect(k1, k2);
        if (core.size() != n - t) continue;
        const MultiIndex alpha = set_difference(k1, core);
        const MultiIndex beta = set_difference(k2, core);
        const double sign =
            relative_sign(set_union(alpha, beta), core);
        w[{alpha.bits(), beta.bits()}] += sign * c1 * std::conj(c2);
      }
    }
    double direct = 0.0;
    for (const auto& [key, value] : w) direct += std::norm(value);
    double table = 0.0;
    for (int r = t; r <= n; ++r) table += sums.aggregate(t, r);
    return std::abs(direct - table);
  }

  if (variant == SquareVariant::add) {
    // Per r: the nonnegative square over (D, eps, eta) with inner blocks
    // of size t equals a binomial mix of cells at shifted positions.
    std::map<int, double> direct;
    std::map<std::tuple<std::uint64_t, std::uint64_t, std::uint64_t>, Complex>
        v;
    for (const auto& [k1, c1] : psi.coefficients()) {
      for (const auto& [k2, c2] : psi.coefficients()) {
        const SplitTriple split = split_triple(k1, k2);
        if (split.common.size() < t) continue;
        const MultiIndex outer =
            MultiIndex::from_bits(split.left.bits() | split.right.bits());
        const Complex val = c1 * std::conj(c2);
        for (MultiIndex core : subsets_of(split.common, split.common.size() - t)) {
          const MultiIndex alpha = set_difference(split.common, core);
          const double sign = relative_sign(alpha, outer);
          v[{core.bits(), split.left.bits(), split.right.bits()}] +=
              sign * val;
        }
      }
    }
    for (const auto& [key, value] : v) {
      const int core_size = std::popcount(std::get<0>(key));
      direct[n - core_size] += std::norm(value);
    }
    double residual = 0.0;
    for (int r = t; r <= n; ++r) {
      double table = 0.0;
      for (int s = 0; s <= t; ++s) {
        const int rho = r - t + s;
        table += binomial(n - r + t - s, t - s) * sums.aggregate(s, rho);
      }
      const auto it = direct.find(r);
      const double d = it == direct.end() ? 0.0 : it->second;
      residual = std::max(residual, std::abs(d - table));
    }
    return residual;
  }

  // odd_square: per (r, D), the Young-inequality square expands into the
  // alternating binomial combination of the s = 0..t cells.
  double residual = 0.0;
  const MultiIndex space = MultiIndex::full(m);
  for (int r = t; r <= n; ++r) {
    for (MultiIndex d : sums.cores(r)) {
      double direct = 0.0;
      const MultiIndex avail = set_difference(space, d);
      for (MultiIndex eps : subsets_of(avail, r)) {
        const MultiIndex avail2 = set_difference(avail, eps);
        for (MultiIndex eta : subsets_of(avail2, r)) {
          const MultiIndex outer = set_union(eps, eta);
          for (MultiIndex alpha : subsets_of(eps, t)) {
            const MultiIndex eps_rest = set_difference(eps, alpha);
            Complex w{};
            for (MultiIndex beta : subsets_of(eta, t)) {
              const MultiIndex eta_rest = set_difference(eta, beta);
              const double sign =
                  relative_sign(beta, set_difference(outer, beta));
              w += sign *
                   std::conj(psi.coefficient(MultiIndex::from_bits(
                       d.bits() | alpha.bits() | eta_rest.bits()))) *
                   std::conj(psi.coefficient(MultiIndex::from_bits(
                       d.bits() | beta.bits() | eps_rest.bits())));
            }
            direct += std::norm(w);
          }
        }
      }
      double table = 0.0;
      for (int s = 0; s <= t; ++s) {
        const double sign = (s % 2) ? -1.0 : 1.0;
        table += sign * binomial(r - s, t) * binomial(r - s, t - s) *
                 sums.value(s, r, d);
      }
      residual = std::max(residual, std::abs(direct - table));
    }
  }
  return residual;
}

TheoremTrace theorem_trace(const SlaterExpansion& psi, int k) {
  const int n = psi.particle_count();
  if (k < 0 || k > n) throw DomainError("order outside 0..N");
  const GroupSums sums(psi);

  TheoremTrace trace;
  {
    const double hs = rdm_slater(psi, k).hs_norm();
    trace.direct_hs_sq = hs * hs;
  }

  // Running coefficients of aggregate(s, r) in the certified bound.
  std::map<std::pair<int, int>, double> coef;
  for (int s = 0; s <= k; ++s) {
    for (int r = 0; r <= n; ++r) {
      coef[{s, r}] = binomial(n - r, k - s);
    }
  }
  trace.ledger.t = k;
  trace.ledger.n = n;
  const auto record = [&](int stage) {
    for (const auto& [key, value] : coef) {
      trace.ledger.table[{key.first, stage, key.second}] = value;
    }
  };
  const auto stage_value = [&]() {
    double total = 0.0;
    for (const auto& [key, value] : coef) {
      total += value * sums.aggregate(key.first, key.second);
    }
    return total;
  };
  record(k);

  for (int t = k; t >= 1; --t) {
    if (stage_value() < trace.direct_hs_sq - 1e-8) {
      throw NumericalError("certified chain lost soundness at stage " +
                           std::to_string(t));
    }
    // Rows with r < t multiply empty aggregates and are ignored.
    double cap = 0.0;
    for (int r = t; r <= n; ++r) cap = std::max(cap, coef[{t, r}]);

    // Flatten the s=t row up to cap by adding nonnegative squares, then
    // replace the flat row through the cancellation estimate.
    for (int rp = t; rp <= n; ++rp) {
      const double gap = cap - coef[{t, rp}];
      for (int s = 0; s <= t - 1; ++s) {
        coef[{s, rp - t + s}] += gap * binomial(n - rp + t - s, t - s);
      }
    }
    for (const auto& [key, value] : proposition_coefficients(n, t)) {
      coef[{key.first, key.second}] += cap * value;
    }
    for (int r = 0; r <= n; ++r) coef.erase({t, r});
    record(t - 1);
  }

  // At t = 0 the aggregates are nonnegative and sum to one, so the bound
  // is the largest remaining coefficient.
  double bound = 0.0;
  for (int r = 0; r <= n; ++r) bound = std::max(bound, coef[{0, r}]);
  if (stage_value() < trace.direct_hs_sq - 1e-8) {
    throw NumericalError("certified chain lost soundness at stage 0");
  }

  trace.bound = bound;
  trace.realized_ck = bound / std::pow(static_cast<double>(n), k);
  trace.sound = trace.bound >= trace.direct_hs_sq - 1e-8;
  trace.ledger.cap_check = ledger_cap(trace.ledger, k);
  return trace;
}

}  // namespace fermi
