#pragma once

#include <vector>

#include <Eigen/Dense>

#include "fermi/state.hpp"

namespace fermi {

/// k-particle reduced density matrix over the full C(M,k) basis of
/// k-orbital multi-indices in ascending bit order.
class Rdm {
 public:
  Rdm(int order, int particle_count, int orbital_count);

  int order() const { return k_; }
  int particle_count() const { return n_; }
  int orbital_count() const { return m_; }

  const std::vector<MultiIndex>& basis() const { return basis_; }
  /// Position of a size-k multi-index in the basis ordering.
  int basis_index(MultiIndex a) const;

  const Eigen::MatrixXcd& matrix() const { return matrix_; }
  Eigen::MatrixXcd& matrix() { return matrix_; }

  double trace() const { return matrix_.trace().real(); }
  double hs_norm() const { return matrix_.norm(); }
  double hermiticity_defect() const {
    return (matrix_ - matrix_.adjoint()).cwiseAbs().maxCoeff();
  }

 private:
  int k_;
  int n_;
  int m_;
  std::vector<MultiIndex> basis_;
  Eigen::MatrixXcd matrix_;
};

/// Sign-calculus construction: entries accumulated over shared cores A of
/// size N-k inside each pair of support keys, with relative signs
/// sgn(alpha,A) sgn(beta,A).
Rdm rdm_slater(const SlaterExpansion& psi, int k);

/// Independent oracle: expand to the dense first-quantized tensor, contract
/// the last N-k axes, and project onto the antisymmetric k-particle basis.
Rdm rdm_dense_oracle(const SlaterExpansion& psi, int k,
                     std::size_t max_entries = kDefaultDenseBudget);

struct SpectrumReport {
  std::vector<double> eigenvalues;  // descending
  double trace = 0.0;
  double op_norm = 0.0;
  double hs_norm = 0.0;
  double von_neumann = 0.0;  // nats, of the trace-normalized spectrum
  double renyi2 = 0.0;       // nats, -log sum p^2 of the same
};

/// Eigendecomposition plus entropies. With `normalized` set the matrix is
/// divided by C(N,k) first; entropies always refer to the trace-normalized
/// spectrum either way. Throws NumericalError if an eigenvalue dips below
/// -1e-8; eigenvalues below 1e-14 are clamped to zero before the logs.
SpectrumReport spectrum(const Rdm& gamma, bool normalized);

struct EntropyCertificates {
  double von_neumann = 0.0;
  double renyi2 = 0.0;
  double jensen_floor = 0.0;  // -log of the squared HS norm of gamma^(k)
};

/// Corollary-style floors: checks S >= -log ||gamma||_HS^2 (and that the
/// second-order entropy equals that floor) before returning them.
EntropyCertificates entropy_certificates(const SlaterExpansion& psi, int k);

}  // namespace fermi
