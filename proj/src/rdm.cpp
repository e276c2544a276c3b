#include "fermi/rdm.hpp"

#include <algorithm>
#include <cmath>

namespace fermi {

Rdm::Rdm(int order, int particle_count, int orbital_count)
    : k_(order), n_(particle_count), m_(orbital_count) {
  if (k_ < 0 || k_ > n_) {
    throw DomainError("rdm order " + std::to_string(k_) +
                      " outside 0..N=" + std::to_string(n_));
  }
  basis_ = combinations(k_, m_);
  const auto dim = static_cast<Eigen::Index>(basis_.size());
  matrix_ = Eigen::MatrixXcd::Zero(dim, dim);
}

int Rdm::basis_index(MultiIndex a) const {
  const auto it = std::lower_bound(basis_.begin(), basis_.end(), a);
  if (it == basis_.end() || *it != a) {
    throw DomainError("multi-index " + a.to_string() + " not in rdm basis");
  }
  return static_cast<int>(it - basis_.begin());
}

Rdm rdm_slater(const SlaterExpansion& psi, int k) {
  const int n = psi.particle_count();
  Rdm gamma(k, n, psi.orbital_count());
  auto& mat = gamma.matrix();
  for (const auto& [key1, c1] : psi.coefficients()) {
    for (const auto& [key2, c2] : psi.coefficients()) {
      const MultiIndex common = set_intersect(key1, key2);
      if (common.size() < n - k) continue;
      for (MultiIndex core : subsets_of(common, n - k)) {
        const MultiIndex alpha = set_difference(key1, core);
        const MultiIndex beta = set_difference(key2, core);
        const double sign =
            relative_sign(alpha, core) * relative_sign(beta, core);
        mat(gamma.basis_index(alpha), gamma.basis_index(beta)) +=
            sign * c1 * std::conj(c2);
      }
    }
  }
  return gamma;
}

Rdm rdm_dense_oracle(const SlaterExpansion& psi, int k,
                     std::size_t max_entries) {
  const int n = psi.particle_count();
  const int m = psi.orbital_count();
  Rdm gamma(k, n, m);
  const DenseTensor tensor = to_dense(psi, max_entries);

  std::size_t head = 1;  // M^k, the kept axes
  for (int i = 0; i < k; ++i) head *= static_cast<std::size_t>(m);
  const std::size_t tail = tensor.total_entries() / std::max<std::size_t>(head, 1);

  // B(alpha, z) = <u_alpha, Psi(., z)> over the first k coordinates; the
  // contraction over z then gives Gamma = C(N,k) B B^dagger.
  Eigen::MatrixXcd b = Eigen::MatrixXcd::Zero(
      static_cast<Eigen::Index>(gamma.basis().size()),
      static_cast<Eigen::Index>(tail));
  double amp = 1.0;
  for (int i = 2; i <= k; ++i) amp *= i;
  amp = 1.0 / std::sqrt(amp);  // 1/sqrt(k!)

  std::vector<int> coords(static_cast<std::size_t>(k));
  const auto data = tensor.data();
  for (std::size_t flat = 0; flat < data.size(); ++flat) {
    if (data[flat] == Complex{}) continue;
    std::size_t rest = flat % head;
    std::uint64_t bits = 0;
    bool repeated = false;
    for (int i = 0; i < k; ++i) {
      const int c = static_cast<int>(rest % static_cast<std::size_t>(m));
      rest /= static_cast<std::size_t>(m);
      coords[static_cast<std::size_t>(i)] = c;
      if (bits & (std::uint64_t{1} << c)) {
        repeated = true;
        break;
      }
      bits |= std::uint64_t{1} << c;
    }
    if (repeated) continue;
    int inversions = 0;
    for (int i = 0; i < k; ++i) {
      for (int j = i + 1; j < k; ++j) {
        if (coords[static_cast<std::size_t>(i)] >
            coords[static_cast<std::size_t>(j)]) {
          ++inversions;
        }
      }
    }
    const double sign = (inversions & 1) ? -amp : amp;
    const int row = gamma.basis_index(MultiIndex::from_bits(bits));
    b(row, static_cast<Eigen::Index>(flat / head)) += sign * data[flat];
  }
  gamma.matrix() = binomial(n, k) * (b * b.adjoint());
  return gamma;
}

SpectrumReport spectrum(const Rdm& gamma, bool normalized) {
  if (gamma.hermiticity_defect() > 1e-12) {
    throw NumericalError("rdm is not Hermitian within tolerance");
  }
  Eigen::MatrixXcd mat = gamma.matrix();
  if (normalized) {
    mat /= binomial(gamma.particle_count(), gamma.order());
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(mat);
  if (solver.info() != Eigen::Success) {
    throw NumericalError("eigendecomposition failed");
  }

  SpectrumReport report;
  const auto& evals = solver.eigenvalues();
  report.eigenvalues.assign(evals.data(), evals.data() + evals.size());
  std::sort(report.eigenvalues.rbegin(), report.eigenvalues.rend());

  double trace = 0.0;
  double sum_sq = 0.0;
  for (double lambda : report.eigenvalues) {
    if (lambda < -1e-8) {
      throw NumericalError("rdm eigenvalue " + std::to_string(lambda) +
                           " below PSD tolerance");
    }
    trace += lambda;
    sum_sq += lambda * lambda;
  }
  report.trace = trace;
  report.op_norm = report.eigenvalues.empty() ? 0.0 : report.eigenvalues.front();
  report.hs_norm = std::sqrt(sum_sq);

  double s = 0.0;
  double p_sq = 0.0;
  for (double lambda : report.eigenvalues) {
    const double p = lambda / trace;
    if (p < 1e-14) continue;
    s -= p * std::log(p);
    p_sq += p * p;
  }
  report.von_neumann = s;
  report.renyi2 = -std::log(p_sq);
  return report;
}

EntropyCertificates entropy_certificates(const SlaterExpansion& psi, int k) {
  const SpectrumReport report = spectrum(rdm_slater(psi, k), /*normalized=*/true);
  EntropyCertificates out;
  out.von_neumann = report.von_neumann;
  out.renyi2 = report.renyi2;
  out.jensen_floor = -std::log(report.hs_norm * report.hs_norm);
  if (out.von_neumann < out.jensen_floor - 1e-10) {
    throw NumericalError("entropy fell below its Hilbert-Schmidt floor");
  }
  if (std::abs(out.renyi2 - out.jensen_floor) > 1e-10) {
    throw NumericalError("second-order entropy drifted from its defining floor");
  }
  return out;
}

}  // namespace fermi
