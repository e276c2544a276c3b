#include "fermi/decomposition.hpp"

#include <cmath>

#include "fermi/rdm.hpp"

namespace fermi {

namespace {

void check_sizes(const LambdaInputs& in) {
  if (in.alpha.size() != in.beta.size()) {
    throw SizeError("inner blocks differ in size: " + in.alpha.to_string() +
                    " vs " + in.beta.to_string());
  }
  if (in.eps.size() != in.eta.size()) {
    throw SizeError("outer blocks differ in size: " + in.eps.to_string() +
                    " vs " + in.eta.to_string());
  }
}

bool pairwise_disjoint(const LambdaInputs& in) {
  const MultiIndex blocks[] = {in.d, in.alpha, in.beta, in.eps, in.eta};
  std::uint64_t seen = 0;
  for (MultiIndex b : blocks) {
    if (seen & b.bits()) return false;
    seen |= b.bits();
  }
  return true;
}

}  // namespace

Complex xi_eval(const SlaterExpansion& psi, const LambdaInputs& in) {
  check_sizes(in);
  const auto coeff = [&psi](MultiIndex a, MultiIndex b, MultiIndex c) {
    if (!a.disjoint(b) || !a.disjoint(c) || !b.disjoint(c)) return Complex{};
    return psi.coefficient(
        MultiIndex::from_bits(a.bits() | b.bits() | c.bits()));
  };
  return coeff(in.d, in.alpha, in.eps) * std::conj(coeff(in.d, in.alpha, in.eta)) *
         std::conj(coeff(in.d, in.beta, in.eps)) * coeff(in.d, in.beta, in.eta);
}

Complex lambda_eval(const SlaterExpansion& psi, const LambdaInputs& in) {
  check_sizes(in);
  if (!pairwise_disjoint(in)) return Complex{};
  const double sign = relative_sign(set_union(in.alpha, in.beta),
                                    set_union(in.eps, in.eta));
  return sign * xi_eval(psi, in);
}

GroupSums::GroupSums(const SlaterExpansion& psi, std::size_t max_ops)
    : n_(psi.particle_count()), m_(psi.orbital_count()) {
  // Bucket ordered support-key pairs by their symmetric difference split.
  struct Entry {
    MultiIndex common;
    Complex value;
  };
  std::map<std::pair<std::uint64_t, std::uint64_t>, std::vector<Entry>> buckets;
  for (const auto& [a, ca] : psi.coefficients()) {
    for (const auto& [b, cb] : psi.coefficients()) {
      const SplitTriple split = split_triple(a, b);
      buckets[{split.left.bits(), split.right.bits()}].push_back(
          Entry{split.common, ca * std::conj(cb)});
    }
  }

  std::size_t ops = 0;
  for (const auto& [key, bucket] : buckets) {
    ops += bucket.size() * bucket.size();
  }
  if (ops > max_ops) {
    throw BudgetError("group-sum table needs about " + std::to_string(ops) +
                      " pair combinations (budget " + std::to_string(max_ops) +
                      ")");
  }

  for (const auto& [key, bucket] : buckets) {
    const auto eps = MultiIndex::from_bits(key.first);
    const auto eta = MultiIndex::from_bits(key.second);
    const MultiIndex outer = MultiIndex::from_bits(eps.bits() | eta.bits());
    const int outer_size = eps.size();
    for (const Entry& e1 : bucket) {
      for (const Entry& e2 : bucket) {
        const SplitTriple split = split_triple(e1.common, e2.common);
        const int s = split.left.size();
        const int r = s + outer_size;
        const double sign = relative_sign(
            MultiIndex::from_bits(split.left.bits() | split.right.bits()),
            outer);
        const Complex term = sign * e1.value * std::conj(e2.value);
        cells_[{s, r, split.common.bits()}] += term;
        aggregates_[{s, r}] += term;
      }
    }
  }
  for (const auto& [key, value] : cells_) {
    max_imag_ = std::max(max_imag_, std::abs(value.imag()));
  }
}

double GroupSums::value(int s, int r, MultiIndex d) const {
  const auto it = cells_.find({s, r, d.bits()});
  return it == cells_.end() ? 0.0 : it->second.real();
}

double GroupSums::aggregate(int s, int r) const {
  const auto it = aggregates_.find({s, r});
  return it == aggregates_.end() ? 0.0 : it->second.real();
}

std::vector<MultiIndex> GroupSums::cores(int r) const {
  std::vector<MultiIndex> out;
  for (int s = 0; s <= r; ++s) {
    for (auto it = cells_.lower_bound({s, r, 0});
         it != cells_.end() && std::get<0>(it->first) == s &&
         std::get<1>(it->first) == r;
         ++it) {
      out.push_back(MultiIndex::from_bits(std::get<2>(it->first)));
    }
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

DecompositionReport hs_decomposition(const SlaterExpansion& psi, int k,
                                     std::size_t max_ops) {
  const int n = psi.particle_count();
  if (k > n) throw DomainError("decomposition order exceeds particle count");
  const GroupSums sums(psi, max_ops);

  DecompositionReport report;
  report.k = k;
  for (int s = 0; s <= k; ++s) {
    for (int r = 0; r <= n; ++r) {
      DecompositionCell cell;
      cell.s = s;
      cell.r = r;
      cell.weight = binomial(n - r, k - s);
      cell.inner_sum = sums.aggregate(s, r);
      cell.contribution = cell.weight * cell.inner_sum;
      report.total += cell.contribution;
      report.cells.push_back(cell);
    }
  }
  const double hs = rdm_slater(psi, k).hs_norm();
  report.direct_hs_sq = hs * hs;
  report.residual = report.total - report.direct_hs_sq;
  return report;
}

}  // namespace fermi
