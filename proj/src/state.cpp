#include "fermi/state.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <random>
#include <set>

#include <json.hpp>

namespace fermi {

namespace {

double factorial(int n) {
  double f = 1.0;
  for (int i = 2; i <= n; ++i) f *= i;
  return f;
}

int permutation_sign(std::span<const int> perm) {
  int inversions = 0;
  for (std::size_t i = 0; i < perm.size(); ++i) {
    for (std::size_t j = i + 1; j < perm.size(); ++j) {
      if (perm[i] > perm[j]) ++inversions;
    }
  }
  return (inversions & 1) ? -1 : +1;
}

/// Combination with the given colex rank among all size-n subsets of 1..m.
MultiIndex unrank_combination(std::uint64_t rank, int n, int m) {
  std::uint64_t bits = 0;
  double remaining = static_cast<double>(rank);
  for (int slot = n; slot >= 1; --slot) {
    int c = slot - 1;
    while (c + 1 <= m && binomial(c + 1, slot) <= remaining) ++c;
    remaining -= binomial(c, slot);
    bits |= std::uint64_t{1} << c;
  }
  return MultiIndex::from_bits(bits);
}

}  // namespace

SlaterExpansion::SlaterExpansion(int particle_count, int orbital_count)
    : n_(particle_count), m_(orbital_count) {
  if (n_ < 0 || m_ < 0 || m_ > MultiIndex::max_orbital) {
    throw DomainError("invalid expansion shape: n=" + std::to_string(n_) +
                      " m=" + std::to_string(m_));
  }
}

Complex SlaterExpansion::coefficient(MultiIndex key) const {
  const auto it = coeffs_.find(key);
  return it == coeffs_.end() ? Complex{} : it->second;
}

void SlaterExpansion::set_coefficient(MultiIndex key, Complex value) {
  if (key.size() != n_) {
    throw ValidationError("key " + key.to_string() + " has " +
                          std::to_string(key.size()) + " orbitals, expected " +
                          std::to_string(n_));
  }
  if (!MultiIndex::full(m_).contains(key)) {
    throw ValidationError("key " + key.to_string() +
                          " outside orbital space 1.." + std::to_string(m_));
  }
  if (value == Complex{}) {
    coeffs_.erase(key);
  } else {
    coeffs_[key] = value;
  }
}

double SlaterExpansion::norm_sq() const {
  double total = 0.0;
  for (const auto& [key, c] : coeffs_) total += std::norm(c);
  return total;
}

SlaterExpansion SlaterExpansion::normalized() const {
  const double nsq = norm_sq();
  if (nsq <= 0.0) {
    throw ZeroStateError("cannot normalize an all-zero expansion");
  }
  const double scale = 1.0 / std::sqrt(nsq);
  SlaterExpansion out(n_, m_);
  for (const auto& [key, c] : coeffs_) {
    const Complex scaled = c * scale;
    if (std::abs(scaled) >= 1e-15) out.coeffs_[key] = scaled;
  }
  return out;
}

DenseTensor::DenseTensor(int rank, int dim) : rank_(rank), dim_(dim) {
  if (rank < 0 || dim < 0) throw DomainError("invalid tensor shape");
  std::size_t total = 1;
  strides_.resize(static_cast<std::size_t>(rank));
  for (int axis = 0; axis < rank; ++axis) {
    strides_[static_cast<std::size_t>(axis)] = total;
    total *= static_cast<std::size_t>(dim);
  }
  data_.assign(total, Complex{});
}

Complex& DenseTensor::at(std::span<const int> idx) {
  std::size_t flat = 0;
  for (std::size_t axis = 0; axis < idx.size(); ++axis) {
    flat += strides_[axis] * static_cast<std::size_t>(idx[axis]);
  }
  return data_[flat];
}

Complex DenseTensor::at(std::span<const int> idx) const {
  return const_cast<DenseTensor*>(this)->at(idx);
}

double DenseTensor::norm() const {
  double total = 0.0;
  for (const Complex& v : data_) total += std::norm(v);
  return std::sqrt(total);
}

DenseTensor DenseTensor::swapped_axes(int axis_a, int axis_b) const {
  DenseTensor out(rank_, dim_);
  std::vector<int> idx(static_cast<std::size_t>(rank_), 0);
  for (std::size_t flat = 0; flat < data_.size(); ++flat) {
    std::vector<int> src = idx;
    std::swap(src[static_cast<std::size_t>(axis_a)],
              src[static_cast<std::size_t>(axis_b)]);
    out.at(idx) = at(src);
    for (int axis = 0; axis < rank_; ++axis) {
      auto& v = idx[static_cast<std::size_t>(axis)];
      if (++v < dim_) break;
      v = 0;
    }
  }
  return out;
}

double DenseTensor::max_antisymmetry_violation(int axis_a, int axis_b) const {
  const DenseTensor swapped = swapped_axes(axis_a, axis_b);
  double worst = 0.0;
  for (std::size_t flat = 0; flat < data_.size(); ++flat) {
    worst = std::max(worst, std::abs(data_[flat] + swapped.data_[flat]));
  }
  return worst;
}

SlaterExpansion slater_state(MultiIndex a, int orbital_count) {
  if (a.empty()) throw DomainError("slater_state requires a nonempty index");
  if (!MultiIndex::full(orbital_count).contains(a)) {
    throw DomainError("index " + a.to_string() + " outside orbital space 1.." +
                      std::to_string(orbital_count));
  }
  SlaterExpansion psi(a.size(), orbital_count);
  psi.set_coefficient(a, Complex{1.0, 0.0});
  return psi;
}

SlaterExpansion yang_pairing_state(int particle_count, int orbital_count) {
  if (particle_count % 2 != 0 || orbital_count % 2 != 0) {
    throw DomainError("pairing state requires even particle and orbital counts");
  }
  if (particle_count <= 0 || particle_count > orbital_count) {
    throw DomainError("pairing state requires 0 < N <= M");
  }
  const int pairs = orbital_count / 2;
  const int chosen = particle_count / 2;
  SlaterExpansion psi(particle_count, orbital_count);
  const double amp = 1.0 / std::sqrt(binomial(pairs, chosen));
  for (MultiIndex sel : combinations(chosen, pairs)) {
    std::uint64_t bits = 0;
    for (int p : sel.orbitals()) {
      bits |= std::uint64_t{3} << (2 * (p - 1));  // the pair (2p-1, 2p)
    }
    psi.set_coefficient(MultiIndex::from_bits(bits), Complex{amp, 0.0});
  }
  return psi;
}

SlaterExpansion random_state(int particle_count, int orbital_count,
                             std::size_t support_size, std::uint64_t seed) {
  const double space = binomial(orbital_count, particle_count);
  if (support_size < 1 || static_cast<double>(support_size) > space) {
    throw DomainError("support_size " + std::to_string(support_size) +
                      " outside 1..C(M,N)");
  }
  std::mt19937_64 rng(seed);
  const auto total = static_cast<std::uint64_t>(space);

  std::set<std::uint64_t> ranks;
  if (support_size == total) {
    for (std::uint64_t r = 0; r < total; ++r) ranks.insert(r);
  } else {
    while (ranks.size() < support_size) ranks.insert(rng() % total);
  }

  // Box-Muller from explicit 53-bit uniforms; keeps the draw sequence
  // independent of the standard library's distribution internals.
  const auto uniform = [&rng]() {
    return (static_cast<double>(rng() >> 11) + 0.5) * 0x1.0p-53;
  };
  SlaterExpansion psi(particle_count, orbital_count);
  for (std::uint64_t rank : ranks) {
    const double u1 = uniform();
    const double u2 = uniform();
    const double radius = std::sqrt(-2.0 * std::log(u1));
    const Complex amp{radius * std::cos(2.0 * M_PI * u2),
                      radius * std::sin(2.0 * M_PI * u2)};
    psi.set_coefficient(unrank_combination(rank, particle_count, orbital_count),
                        amp);
  }
  return psi.normalized();
}

DenseTensor to_dense(const SlaterExpansion& psi, std::size_t max_entries) {
  const int n = psi.particle_count();
  const int m = psi.orbital_count();
  double entries = 1.0;
  for (int i = 0; i < n; ++i) entries *= m;
  if (entries > static_cast<double>(max_entries)) {
    throw BudgetError("dense tensor would need " + std::to_string(entries) +
                      " entries (budget " + std::to_string(max_entries) + ")");
  }
  DenseTensor tensor(n, m);
  const double amp_scale = 1.0 / std::sqrt(factorial(n));
  std::vector<int> axes(static_cast<std::size_t>(n));
  for (const auto& [key, c] : psi.coefficients()) {
    const auto orbs = key.orbitals();
    std::iota(axes.begin(), axes.end(), 0);
    do {
      std::vector<int> idx(static_cast<std::size_t>(n));
      for (int i = 0; i < n; ++i) {
        idx[static_cast<std::size_t>(axes[static_cast<std::size_t>(i)])] =
            orbs[static_cast<std::size_t>(i)] - 1;
      }
      tensor.at(idx) +=
          c * (amp_scale * permutation_sign(axes));
    } while (std::next_permutation(axes.begin(), axes.end()));
  }
  return tensor;
}

DenseTensor wedge(const DenseTensor& a, const DenseTensor& b) {
  if (a.dim() != b.dim()) throw SizeError("wedge over mismatched orbital axes");
  const int n = a.rank();
  const int m = b.rank();
  const int total_rank = n + m;
  DenseTensor out(total_rank, a.dim());
  const double scale =
      1.0 / std::sqrt(factorial(n) * factorial(m) * factorial(total_rank));
  std::vector<int> perm(static_cast<std::size_t>(total_rank));
  std::iota(perm.begin(), perm.end(), 0);
  std::vector<int> idx(static_cast<std::size_t>(total_rank), 0);
  std::vector<int> left(static_cast<std::size_t>(n));
  std::vector<int> right(static_cast<std::size_t>(m));
  for (std::size_t flat = 0; flat < out.total_entries(); ++flat) {
    Complex acc{};
    do {
      for (int i = 0; i < n; ++i) {
        left[static_cast<std::size_t>(i)] =
            idx[static_cast<std::size_t>(perm[static_cast<std::size_t>(i)])];
      }
      for (int i = 0; i < m; ++i) {
        right[static_cast<std::size_t>(i)] = idx[static_cast<std::size_t>(
            perm[static_cast<std::size_t>(n + i)])];
      }
      acc += static_cast<double>(permutation_sign(perm)) * a.at(left) *
             b.at(right);
    } while (std::next_permutation(perm.begin(), perm.end()));
    out.at(idx) = scale * acc;
    for (int axis = 0; axis < total_rank; ++axis) {
      auto& v = idx[static_cast<std::size_t>(axis)];
      if (++v < a.dim()) break;
      v = 0;
    }
  }
  return out;
}

void save_state(const SlaterExpansion& psi, const std::filesystem::path& path) {
  if (std::abs(psi.norm_sq() - 1.0) > 1e-10) {
    throw ValidationError("refusing to save an unnormalized state");
  }
  nlohmann::json doc;
  doc["n"] = psi.particle_count();
  doc["m"] = psi.orbital_count();
  doc["coeffs"] = nlohmann::json::array();
  for (const auto& [key, c] : psi.coefficients()) {
    doc["coeffs"].push_back(
        {{"idx", key.orbitals()}, {"re", c.real()}, {"im", c.imag()}});
  }
  std::ofstream out(path);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  out << doc.dump(2) << '\n';
}

SlaterExpansion load_state(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string());
  nlohmann::json doc;
  try {
    in >> doc;
  } catch (const nlohmann::json::exception& e) {
    throw FormatError("malformed state file " + path.string() + ": " +
                      e.what());
  }
  if (!doc.contains("n") || !doc.contains("m") || !doc.contains("coeffs") ||
      !doc["coeffs"].is_array()) {
    throw FormatError("state file " + path.string() +
                      " missing n/m/coeffs fields");
  }
  SlaterExpansion psi(doc["n"].get<int>(), doc["m"].get<int>());
  for (const auto& entry : doc["coeffs"]) {
    const auto idx = entry.at("idx").get<std::vector<int>>();
    MultiIndex key = MultiIndex::from_orbitals(idx);
    if (key.size() != static_cast<int>(idx.size())) {
      throw ValidationError("repeated orbital in key of " + path.string());
    }
    psi.set_coefficient(
        key, Complex{entry.at("re").get<double>(), entry.at("im").get<double>()});
  }
  if (std::abs(psi.norm_sq() - 1.0) > 1e-10) {
    throw ValidationError("state file " + path.string() + " is not normalized");
  }
  return psi;
}

}  // namespace fermi
