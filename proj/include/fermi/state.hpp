#pragma once

#include <complex>
#include <cstdint>
#include <filesystem>
#include <map>
#include <span>
#include <vector>

#include "fermi/multiindex.hpp"

namespace fermi {

using Complex = std::complex<double>;

/// Sparse N-fermion wavefunction as a map from occupied-orbital
/// multi-indices (all of size N, within 1..M) to complex amplitudes.
class SlaterExpansion {
 public:
  SlaterExpansion(int particle_count, int orbital_count);

  int particle_count() const { return n_; }
  int orbital_count() const { return m_; }

  const std::map<MultiIndex, Complex>& coefficients() const { return coeffs_; }

  /// Amplitude c_A; zero for absent keys.
  Complex coefficient(MultiIndex key) const;

  /// Validates key size and orbital range; a zero amplitude erases the key.
  void set_coefficient(MultiIndex key, Complex value);

  double norm_sq() const;

  /// Scales to unit norm and prunes amplitudes below 1e-15. Throws
  /// ZeroStateError on an all-zero expansion.
  SlaterExpansion normalized() const;

 private:
  int n_;
  int m_;
  std::map<MultiIndex, Complex> coeffs_;
};

/// Dense first-quantized tensor of rank N over an orbital axis of size M;
/// the oracle-side representation of a wavefunction.
class DenseTensor {
 public:
  DenseTensor(int rank, int dim);

  int rank() const { return rank_; }
  int dim() const { return dim_; }
  std::size_t total_entries() const { return data_.size(); }

  /// Axis values are 0-based.
  Complex& at(std::span<const int> idx);
  Complex at(std::span<const int> idx) const;

  std::span<const Complex> data() const { return data_; }
  std::span<Complex> data() { return data_; }

  double norm() const;

  /// Entrywise sign flip under transposing the two given axes; the
  /// fermionic antisymmetry check.
  double max_antisymmetry_violation(int axis_a, int axis_b) const;

  DenseTensor swapped_axes(int axis_a, int axis_b) const;

 private:
  int rank_;
  int dim_;
  std::vector<std::size_t> strides_;
  std::vector<Complex> data_;
};

/// Single-determinant state c_a = 1.
SlaterExpansion slater_state(MultiIndex a, int orbital_count);

/// Geminal-power pairing state over orbital pairs (2i-1, 2i): equal weight
/// on every union of N/2 full pairs. Requires N and M even, N <= M.
SlaterExpansion yang_pairing_state(int particle_count, int orbital_count);

/// support_size distinct keys sampled uniformly, i.i.d. complex-Gaussian
/// amplitudes, normalized. Deterministic for a fixed seed.
SlaterExpansion random_state(int particle_count, int orbital_count,
                             std::size_t support_size, std::uint64_t seed);

constexpr std::size_t kDefaultDenseBudget = 100'000'000;

/// Expands the sparse state into its explicit antisymmetrized tensor, with
/// basis-determinant entries sgn(perm)/sqrt(N!). Throws BudgetError when
/// M^N exceeds max_entries.
DenseTensor to_dense(const SlaterExpansion& psi,
                     std::size_t max_entries = kDefaultDenseBudget);

/// Antisymmetric product of two dense tensors (normalization matching the
/// orthonormal-determinant convention above); used to cross-check sign
/// conventions at tensor level.
DenseTensor wedge(const DenseTensor& a, const DenseTensor& b);

/// JSON schema: {"n": int, "m": int, "coeffs": [{"idx": [...], "re": f,
/// "im": f}, ...]} with 1-based ascending orbital arrays.
void save_state(const SlaterExpansion& psi, const std::filesystem::path& path);
SlaterExpansion load_state(const std::filesystem::path& path);

}  // namespace fermi
