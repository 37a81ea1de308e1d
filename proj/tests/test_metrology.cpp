#include <doctest.h>

#include <bit>
#include <cmath>

#include "qsnet/ghz.hpp"
#include "qsnet/metrology.hpp"

using namespace qsnet;

namespace {

QuantumState plus_n(int n) {
  return QuantumState::pure(CVector::Constant(Eigen::Index{1} << n, std::pow(2.0, -n / 2.0)));
}

QuantumState dephased_ghz(int n, double coherence) {
  const auto d = Eigen::Index{1} << n;
  CMatrix rho = CMatrix::Zero(d, d);
  rho(0, 0) = rho(d - 1, d - 1) = 0.5;
  rho(0, d - 1) = rho(d - 1, 0) = 0.5 * coherence;
  return QuantumState::mixed(rho);
}

std::vector<double> ones(int n) { return std::vector<double>(static_cast<std::size_t>(n), 1.0); }

}  // namespace

TEST_SUITE("metrology") {
  TEST_CASE("Heisenberg and shot-noise oracles") {
    for (int n = 2; n <= 6; ++n) {
      const auto ghz = phase_family(ghz_state(n), ones(n), 0.3);
      CHECK(qfi_pure(ghz).value == doctest::Approx(n * n).epsilon(1e-9));
      CHECK(qfi_pure(ghz).method == QfiMethod::pure_formula);
      const auto prod = phase_family(plus_n(n), ones(n));
      CHECK(qfi_pure(prod).value == doctest::Approx(n).epsilon(1e-9));
      CHECK(qfi_mixed(prod).value == doctest::Approx(n).epsilon(1e-7));
    }
  }

  TEST_CASE("dephased GHZ scales with coherence squared") {
    const int n = 3;
    for (double c : {1.0, 0.8, 0.5, 0.0}) {
      const auto fam = phase_family(dephased_ghz(n, c), ones(n), 0.1);
      const auto spec = qfi_mixed(fam);
      CHECK(spec.value == doctest::Approx(n * n * c * c).epsilon(1e-7));
      CHECK(spec.method == QfiMethod::spectral_general);
      if (c > 0.0) CHECK(qfi_bures_oracle(fam).value == doctest::Approx(n * n * c * c).epsilon(1e-3));
      CMatrix g = CMatrix::Zero(8, 8);
      for (int i = 0; i < 8; ++i) g(i, i) = std::popcount(static_cast<unsigned>(i));
      CHECK(qfi_generator(fam.state_at(0.1), LinearOperator(g, true)).value ==
            doctest::Approx(n * n * c * c).epsilon(1e-9));
    }
  }

  TEST_CASE("full-rank states are tagged") {
    CMatrix rho = 0.9 * dephased_ghz(2, 1.0).matrix() + 0.1 * CMatrix::Identity(4, 4) / 4.0;
    const auto r = qfi_mixed(phase_family(QuantumState::mixed(rho), ones(2)));
    CHECK(r.method == QfiMethod::full_rank_formula);
    CHECK(r.rank == 4);
    CHECK(r.excluded_weight == 0.0);
  }

  TEST_CASE("SLD solves the Lyapunov equation") {
    const auto fam = phase_family(dephased_ghz(2, 0.7), ones(2), 0.2);
    const auto rho = fam.state_at(0.2);
    const CMatrix drho = state_derivative(fam);
    const CMatrix l = sld(rho, drho).matrix();
    const CMatrix r = rho.matrix();
    CHECK(((l * r + r * l) / 2.0 - drho).norm() < 1e-8);
    // QFI = Tr(rho L^2)
    CHECK(std::real((r * l * l).trace()) == doctest::Approx(qfi_mixed(fam).value).epsilon(1e-7));
  }

  TEST_CASE("bound arithmetic") {
    CHECK(continuity_bound(0.99, 1.0) == doctest::Approx(2.4));
    CHECK(continuity_bound(1.0, 3.0) == 0.0);
    CHECK(hiding_generator_norm_bound(5, 0.5) == doctest::Approx(1.0));
    CHECK(cramer_rao_bound(16.0, 100) == doctest::Approx(1.0 / 1600));
    CHECK_THROWS_AS(cramer_rao_bound(0.0, 100), QuantumError);
    const auto h = hiding_generator(3, 0, gates::z());
    CHECK(operator_inf_norm(h) <= hiding_generator_norm_bound(3, 1.0) + 1e-12);
    CHECK(operator_inf_norm(h) == doctest::Approx(2.0));
  }

  TEST_CASE("privacy of GHZ, product and dephased resources") {
    for (int n = 2; n <= 5; ++n) {
      const auto a = QubitAssignment::one_per_node(n);
      NodeSet all(static_cast<std::size_t>(n));
      for (int i = 0; i < n; ++i) all[static_cast<std::size_t>(i)] = i;
      const auto g = privacy_epsilon(ghz_state(n), a, all);
      CHECK(std::abs(g.epsilon) < 1e-9);
      CHECK(std::abs(g.epsilon_substitution) < 1e-9);
      const auto p = privacy_epsilon(plus_n(n), a, all);
      CHECK(p.epsilon == doctest::Approx(1.0 / (n * n)).epsilon(1e-9));
      // substitution slopes are not optimal for the product state
      CHECK(p.epsilon_substitution == doctest::Approx(1.0 / (n * (n - 1.0))).epsilon(1e-9));
      CHECK(std::abs(privacy_epsilon(dephased_ghz(n, 0.6), a, all).epsilon) < 1e-9);
    }
    // honest subset of a GHZ: classical correlations only
    const auto sub = privacy_epsilon(ghz_state(4), QubitAssignment::one_per_node(4), {0, 1, 2});
    CHECK(std::abs(sub.epsilon) < 1e-9);
    CHECK(sub.honest_count == 3);
    CHECK_THROWS_AS(privacy_epsilon(ghz_state(3), QubitAssignment::one_per_node(3), {1}), QuantumError);
  }

  TEST_CASE("finite-difference privacy route matches the analytic one") {
    const int n = 3;
    const auto a = QubitAssignment::one_per_node(n);
    const auto base = plus_n(n);
    const EncodedFamilyBuilder builder = [&](const PhaseVector& th) {
      return encode_network(base, th, a).as_mixed();
    };
    const auto fd = privacy_epsilon(builder, PhaseVector({0.1, 0.2, 0.3}), {0, 1, 2});
    CHECK(fd.epsilon == doctest::Approx(1.0 / 9).epsilon(1e-6));
  }
}
