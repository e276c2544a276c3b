#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "fermi/inequality.hpp"
#include "fermi/rdm.hpp"

using namespace fermi;

namespace {

MultiIndex mi(std::initializer_list<int> orbitals) {
  return MultiIndex::from_orbitals(orbitals);
}

/// Direct quadruple-loop evaluation of the (t, r, D) group sum.
double brute_force_group_sum(const SlaterExpansion& psi, int t, int r,
                             MultiIndex d) {
  const int outer = r - t;
  const std::uint64_t rest =
      MultiIndex::full(psi.orbital_count()).bits() & ~d.bits();
  Complex total{};
  for (MultiIndex alpha : subsets_of(MultiIndex::from_bits(rest), t)) {
    for (MultiIndex beta :
         subsets_of(MultiIndex::from_bits(rest & ~alpha.bits()), t)) {
      const std::uint64_t rest_ab = rest & ~alpha.bits() & ~beta.bits();
      for (MultiIndex eps : subsets_of(MultiIndex::from_bits(rest_ab), outer)) {
        for (MultiIndex eta :
             subsets_of(MultiIndex::from_bits(rest_ab & ~eps.bits()), outer)) {
          total += lambda_eval(psi, {d, alpha, beta, eps, eta});
        }
      }
    }
  }
  return total.real();
}

}  // namespace

TEST_CASE("group sum on a single determinant") {
  const SlaterExpansion psi = slater_state(mi({1, 2, 3}), 6);
  const GroupSums sums(psi);
  CHECK(group_sum(sums, 0, 0, mi({1, 2, 3})) == doctest::Approx(1.0));
  CHECK(group_sum(sums, 0, 0) == doctest::Approx(1.0));
  CHECK(group_sum(sums, 1, 1, mi({1, 2})) == doctest::Approx(0.0));
  CHECK(group_sum(sums, 1, 1) == doctest::Approx(0.0));
  CHECK_THROWS_AS(group_sum(sums, 1, 1, mi({1})), SizeError);
}

TEST_CASE("group sum matches direct enumeration") {
  const SlaterExpansion psi = random_state(3, 6, 6, 17);
  const GroupSums sums(psi);
  for (int r = 0; r <= 3; ++r) {
    for (int t = 0; t <= r; ++t) {
      double summed = 0.0;
      for (MultiIndex d : combinations(3 - r, 6)) {
        const double direct = brute_force_group_sum(psi, t, r, d);
        CHECK(group_sum(sums, t, r, d) ==
              doctest::Approx(direct).epsilon(1e-12));
        summed += direct;
      }
      CHECK(group_sum(sums, t, r) == doctest::Approx(summed).epsilon(1e-12));
      CHECK(group_sum(psi, t, r) == doctest::Approx(summed).epsilon(1e-12));
    }
  }
}

TEST_CASE("per-core estimate for odd block sizes") {
  for (std::uint64_t seed = 1; seed <= 4; ++seed) {
    const SlaterExpansion psi = random_state(4, 7, 9, seed);
    const GroupSums sums(psi);
    for (int t : {1, 3}) {
      for (int r = t; r <= 4; ++r) {
        for (MultiIndex d : sums.cores(r)) {
          const InequalityReport report = odd_lemma_check(sums, t, r, d);
          CHECK(report.pass);
          CHECK(report.slack == doctest::Approx(report.rhs - report.lhs));
          CHECK(report.t == t);
          CHECK(report.r == r);
        }
      }
    }
  }
}

TEST_CASE("per-core estimate for even block sizes across tau") {
  for (std::uint64_t seed = 5; seed <= 7; ++seed) {
    const SlaterExpansion psi = random_state(4, 8, 12, seed);
    const GroupSums sums(psi);
    for (double tau : {0.5, 1.0, 4.0}) {
      for (int r = 2; r <= 4; ++r) {
        for (MultiIndex d : sums.cores(r)) {
          const InequalityReport report = even_lemma_check(sums, 2, r, d, tau);
          CHECK(report.pass);
          CHECK(report.tau == tau);
        }
      }
    }
  }
  // The Young-split estimate holds for odd block sizes as well.
  const SlaterExpansion psi = random_state(4, 8, 12, 5);
  const GroupSums sums(psi);
  for (int t : {1, 3}) {
    for (int r = t; r <= 4; ++r) {
      for (MultiIndex d : sums.cores(r)) {
        CHECK(even_lemma_check(sums, t, r, d, 2.0).pass);
      }
    }
  }
  CHECK_THROWS_AS(even_lemma_check(sums, 0, 2, mi({1, 2}), 1.0), DomainError);
  CHECK_THROWS_AS(even_lemma_check(sums, 2, 2, mi({1, 2}), 0.0), DomainError);
}

TEST_CASE("square-expansion identities") {
  for (std::uint64_t seed = 1; seed <= 3; ++seed) {
    const SlaterExpansion psi = random_state(4, 7, 8, seed + 30);
    const GroupSums sums(psi);
    for (int t = 1; t <= 3; ++t) {
      CHECK(square_identity_check(psi, sums, t, SquareVariant::drop) < 1e-10);
      CHECK(square_identity_check(psi, sums, t, SquareVariant::add) < 1e-10);
      CHECK(square_identity_check(psi, sums, t, SquareVariant::odd_square) <
            1e-10);
    }
  }
}

TEST_CASE("summed cancellation estimate and its coefficient ledger") {
  for (std::uint64_t seed = 1; seed <= 3; ++seed) {
    const SlaterExpansion psi = random_state(4, 7, 10, seed + 50);
    const GroupSums sums(psi);
    for (int t = 1; t <= 3; ++t) {
      const auto [report, ledger] = proposition_check(sums, t);
      CHECK(report.pass);
      CHECK(ledger.t == t);
      CHECK(ledger.n == 4);
      CHECK(ledger.cap_check > 0.0);
      // The coefficients stay within a modest multiple of N^{t-s}.
      CHECK(ledger.cap_check < 10.0);
    }
  }
}

TEST_CASE("block size one has linear coefficients") {
  const SlaterExpansion psi = random_state(4, 7, 10, 77);
  const GroupSums sums(psi);
  const auto [report, ledger] = proposition_check(sums, 1);
  CHECK(report.pass);
  for (const auto& [key, coef] : ledger.table) {
    const auto [s, t, r] = key;
    if (s == 0 && t == 1) {
      CHECK(coef == doctest::Approx(static_cast<double>(r)));
    }
  }
}

TEST_CASE("certified trace on a single determinant") {
  const SlaterExpansion psi = slater_state(mi({1, 2, 3, 4}), 6);
  const TheoremTrace trace = theorem_trace(psi, 2);
  CHECK(trace.sound);
  CHECK(trace.direct_hs_sq == doctest::Approx(6.0));
  CHECK(trace.bound >= 6.0 - 1e-10);
  CHECK(trace.realized_ck == doctest::Approx(trace.bound / 16.0));
}

TEST_CASE("certified trace for one-particle matrices is exactly N") {
  for (std::uint64_t seed = 1; seed <= 3; ++seed) {
    const SlaterExpansion psi = random_state(4, 7, 9, seed + 60);
    const TheoremTrace trace = theorem_trace(psi, 1);
    CHECK(trace.sound);
    CHECK(trace.bound == doctest::Approx(4.0));
    const double hs = rdm_slater(psi, 1).hs_norm();
    CHECK(trace.direct_hs_sq == doctest::Approx(hs * hs).epsilon(1e-10));
    CHECK(trace.bound >= trace.direct_hs_sq - 1e-10);
  }
}

TEST_CASE("certified trace soundness on random states") {
  for (std::uint64_t seed = 1; seed <= 3; ++seed) {
    const SlaterExpansion psi = random_state(4, 7, 12, seed + 70);
    for (int k = 1; k <= 3; ++k) {
      const TheoremTrace trace = theorem_trace(psi, k);
      CHECK(trace.sound);
      CHECK(trace.bound >= trace.direct_hs_sq - 1e-8);
      CHECK(trace.realized_ck ==
            doctest::Approx(trace.bound / std::pow(4.0, k)));
      CHECK(trace.ledger.table.size() > 0);
    }
  }
}
