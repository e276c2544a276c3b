#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>

#include "fermi/state.hpp"

using namespace fermi;

TEST_CASE("slater state basics") {
  const SlaterExpansion psi =
      slater_state(MultiIndex::from_orbitals({1, 2, 3}), 6);
  CHECK(psi.particle_count() == 3);
  CHECK(psi.orbital_count() == 6);
  CHECK(psi.coefficients().size() == 1);
  CHECK(psi.coefficient(MultiIndex::from_orbitals({1, 2, 3})) ==
        Complex{1.0, 0.0});
  CHECK(psi.norm_sq() == doctest::Approx(1.0));
  CHECK_THROWS_AS(slater_state(MultiIndex::from_orbitals({1, 7}), 6),
                  DomainError);
  CHECK_THROWS_AS(slater_state(MultiIndex{}, 4), DomainError);
}

TEST_CASE("coefficient validation") {
  SlaterExpansion psi(2, 4);
  CHECK_THROWS_AS(psi.set_coefficient(MultiIndex::from_orbitals({1}),
                                      Complex{1.0, 0.0}),
                  ValidationError);
  CHECK_THROWS_AS(psi.set_coefficient(MultiIndex::from_orbitals({1, 5}),
                                      Complex{1.0, 0.0}),
                  ValidationError);
  psi.set_coefficient(MultiIndex::from_orbitals({1, 2}), Complex{2.0, 0.0});
  psi.set_coefficient(MultiIndex::from_orbitals({1, 2}), Complex{});
  CHECK(psi.coefficients().empty());
  CHECK_THROWS_AS(psi.normalized(), ZeroStateError);
}

TEST_CASE("pairing state") {
  const SlaterExpansion psi = yang_pairing_state(2, 4);
  CHECK(psi.coefficients().size() == 2);
  CHECK(psi.coefficient(MultiIndex::from_orbitals({1, 2})).real() ==
        doctest::Approx(1.0 / std::sqrt(2.0)));
  CHECK(psi.coefficient(MultiIndex::from_orbitals({3, 4})).real() ==
        doctest::Approx(1.0 / std::sqrt(2.0)));

  const SlaterExpansion big = yang_pairing_state(4, 8);
  CHECK(big.coefficients().size() == 6);
  CHECK(big.norm_sq() == doctest::Approx(1.0));
  for (const auto& [key, c] : big.coefficients()) {
    CHECK(c.real() == doctest::Approx(1.0 / std::sqrt(6.0)));
  }
  CHECK_THROWS_AS(yang_pairing_state(3, 6), DomainError);
  CHECK_THROWS_AS(yang_pairing_state(4, 7), DomainError);
  CHECK_THROWS_AS(yang_pairing_state(6, 4), DomainError);
}

TEST_CASE("random state determinism and support") {
  const SlaterExpansion a = random_state(3, 6, 5, 7);
  const SlaterExpansion b = random_state(3, 6, 5, 7);
  CHECK(a.coefficients().size() == 5);
  REQUIRE(a.coefficients().size() == b.coefficients().size());
  for (const auto& [key, c] : a.coefficients()) {
    CHECK(b.coefficient(key) == c);
  }
  CHECK(a.norm_sq() == doctest::Approx(1.0).epsilon(1e-12));

  const SlaterExpansion full = random_state(3, 6, 20, 9);
  CHECK(full.coefficients().size() == 20);
  CHECK_THROWS_AS(random_state(3, 6, 21, 1), DomainError);
  CHECK_THROWS_AS(random_state(3, 6, 0, 1), DomainError);

  const SlaterExpansion c = random_state(3, 6, 5, 8);
  bool different = false;
  for (const auto& [key, value] : a.coefficients()) {
    if (c.coefficient(key) != value) different = true;
  }
  CHECK(different);
}

TEST_CASE("dense expansion of a two-particle determinant") {
  const DenseTensor tensor =
      to_dense(slater_state(MultiIndex::from_orbitals({1, 2}), 2));
  const double amp = 1.0 / std::sqrt(2.0);
  const int i00[] = {0, 0}, i01[] = {0, 1}, i10[] = {1, 0}, i11[] = {1, 1};
  CHECK(tensor.at(i00) == Complex{});
  CHECK(tensor.at(i01).real() == doctest::Approx(amp));
  CHECK(tensor.at(i10).real() == doctest::Approx(-amp));
  CHECK(tensor.at(i11) == Complex{});
}

TEST_CASE("dense expansion invariants") {
  const SlaterExpansion psi = random_state(3, 5, 4, 1);
  const DenseTensor tensor = to_dense(psi);
  CHECK(tensor.norm() == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(tensor.max_antisymmetry_violation(1, 2) < 1e-12);
  CHECK(tensor.max_antisymmetry_violation(0, 2) < 1e-12);

  // A determinant has exactly N! nonzero entries of magnitude 1/sqrt(N!).
  const DenseTensor det =
      to_dense(slater_state(MultiIndex::from_orbitals({1, 3, 4}), 5));
  int nonzero = 0;
  for (const Complex& v : det.data()) {
    if (v != Complex{}) {
      ++nonzero;
      CHECK(std::abs(v) == doctest::Approx(1.0 / std::sqrt(6.0)));
    }
  }
  CHECK(nonzero == 6);

  CHECK_THROWS_AS(to_dense(psi, 10), BudgetError);
}

TEST_CASE("wedge matches the sign-adjusted union determinant") {
  const auto check_pair = [](std::initializer_list<int> a,
                             std::initializer_list<int> b, int m) {
    const MultiIndex ma = MultiIndex::from_orbitals(a);
    const MultiIndex mb = MultiIndex::from_orbitals(b);
    const DenseTensor product =
        wedge(to_dense(slater_state(ma, m)), to_dense(slater_state(mb, m)));
    const DenseTensor expected =
        to_dense(slater_state(set_union(ma, mb), m));
    const double sign = relative_sign(ma, mb);
    double worst = 0.0;
    for (std::size_t i = 0; i < product.data().size(); ++i) {
      worst = std::max(worst,
                       std::abs(product.data()[i] - sign * expected.data()[i]));
    }
    CHECK(worst < 1e-12);
  };
  check_pair({1}, {2}, 3);
  check_pair({2}, {1}, 3);
  check_pair({1, 3}, {2}, 4);
  check_pair({2, 4}, {1, 3}, 4);
}

TEST_CASE("save and load round trip") {
  namespace fs = std::filesystem;
  const fs::path path = fs::temp_directory_path() / "fermi_state_test.json";
  const SlaterExpansion psi = random_state(3, 6, 5, 13);
  save_state(psi, path);
  const SlaterExpansion loaded = load_state(path);
  CHECK(loaded.particle_count() == 3);
  CHECK(loaded.orbital_count() == 6);
  REQUIRE(loaded.coefficients().size() == psi.coefficients().size());
  for (const auto& [key, c] : psi.coefficients()) {
    CHECK(loaded.coefficient(key) == c);  // bit-exact round trip
  }
  fs::remove(path);

  SlaterExpansion unnormalized(2, 4);
  unnormalized.set_coefficient(MultiIndex::from_orbitals({1, 2}),
                               Complex{0.5, 0.0});
  CHECK_THROWS_AS(save_state(unnormalized, path), ValidationError);
}

TEST_CASE("load rejects malformed input") {
  namespace fs = std::filesystem;
  const fs::path path = fs::temp_directory_path() / "fermi_state_bad.json";
  {
    std::ofstream out(path);
    out << "{ not json";
  }
  CHECK_THROWS_AS(load_state(path), FormatError);
  {
    std::ofstream out(path);
    out << R"({"n": 2, "m": 4, "coeffs": [{"idx": [1, 1, 2], "re": 1.0, "im": 0.0}]})";
  }
  CHECK_THROWS_AS(load_state(path), ValidationError);
  fs::remove(path);
  CHECK_THROWS_AS(load_state(path), IoError);
}
