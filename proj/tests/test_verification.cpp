#include <doctest.h>

#include <cmath>

#include "qsnet/verification.hpp"

using namespace qsnet;

namespace {

VerificationParams params(int n, double m = 1.0, double c = 2.0, int lambda = 1) {
  VerificationParams p;
  p.n = n;
  p.m = m;
  p.c = c;
  p.lambda = lambda;
  return p;
}

}  // namespace

TEST_SUITE("verification") {
  TEST_CASE("copy arithmetic") {
    CHECK(required_tests(1.0, 4) == 355);
    CHECK(required_tests(2.0, 3) == 178);
    CHECK(total_copies(params(4)) == 2840);
    CHECK(total_copies(params(3, 2.0, 0.9, 2)) == 3 * 2 * 3 * 178);
    auto p = params(4);
    p.n_test_override = 10;
    CHECK(p.n_test() == 10);
    CHECK(total_copies(p) == 80);
  }

  TEST_CASE("threshold and bounds") {
    CHECK(acceptance_threshold(4, 1) == 0.03125);
    CHECK(acceptance_threshold(3, 2) == doctest::Approx(1.0 / 36));
    CHECK(fidelity_bound(2.0, 4, 0.0) == doctest::Approx(0.2928932188134524).epsilon(1e-15));
    CHECK(fidelity_bound(2.0, 4, 0.1) == 0.0);
    CHECK(soundness_probability(1.0, 2.0, 4) == doctest::Approx(0.3700394750525634).epsilon(1e-15));
    CHECK(soundness_probability(0.5, 1.0, 4) == 0.0);
  }

  TEST_CASE("symmetrised floors") {
    const auto b = symmetrised_fidelity_bound(0.9, 3, 0.0, 2, 3, 2.0);
    CHECK(b.fidelity_floor.value == doctest::Approx(0.27565835097474317).epsilon(1e-14));
    CHECK_FALSE(b.fidelity_floor.clamped);
    CHECK(b.probability_floor.value == doctest::Approx(0.9284006650025273).epsilon(1e-14));
    const auto none = symmetrised_fidelity_bound(0.9, 3, 0.0, 2, 0, 2.0);
    CHECK(none.probability_floor.value == 0.0);
  }

  TEST_CASE("constant window") {
    CHECK(params(4).constants_valid());
    CHECK(params(4).constraint_violations().empty());
    const auto bad = params(4, 1.0, 1.0);
    CHECK_FALSE(bad.constants_valid());
    REQUIRE(bad.constraint_violations().size() == 1);
    CHECK(bad.constraint_violations()[0].rfind("constants violate", 0) == 0);
    CHECK_THROWS_AS(VerificationRunner(bad, NetworkTopology::all_honest(4), {}, Resource::ghz(4)), QuantumError);
    auto over = bad;
    over.allow_invalid_constants = true;
    const VerificationRunner r(over, NetworkTopology::all_honest(4), {}, Resource::ghz(4));
    const auto o = r.run(1);
    CHECK_FALSE(o.fidelity_bound.applicable);
    CHECK_FALSE(o.constants_valid);
  }

  TEST_CASE("honest run: completeness and copy accounting") {
    const VerificationRunner r(params(4), NetworkTopology::all_honest(4), {}, Resource::ghz(4));
    for (std::uint64_t s = 0; s < 10; ++s) {
      const auto o = r.run(s, true);
      CHECK(o.accepted);
      CHECK(o.transcript.f == 0.0);
      CHECK(o.transcript.tested + o.transcript.discarded + 1 == o.transcript.total);
      CHECK(o.transcript.total == 2840);
      CHECK(o.transcript.records.size() == 4u * 355u);
      CHECK(o.honest_fidelity == doctest::Approx(1.0));
      CHECK(o.transcript.accepted == (o.transcript.f <= o.transcript.threshold));
    }
  }

  TEST_CASE("no copy is measured twice") {
    const VerificationRunner r(params(3, 2.0, 0.9), NetworkTopology::all_honest(3), {}, Resource::ghz(3));
    const auto o = r.run(99, true);
    std::vector<bool> seen(static_cast<std::size_t>(o.transcript.total), false);
    for (const auto& t : o.transcript.records) {
      CHECK_FALSE(seen[t.copy]);
      seen[t.copy] = true;
    }
    CHECK_FALSE(seen[o.transcript.target_copy]);
  }

  TEST_CASE("zero-state source is rejected") {
    AdversaryModel m;
    m.source = SourceAttack::replace(QuantumState::basis(4, 0));
    const VerificationRunner r(params(4), NetworkTopology::all_honest(4), m, Resource::ghz(4));
    const auto o = r.run(3);
    CHECK_FALSE(o.accepted);
    CHECK(o.transcript.f == doctest::Approx(0.5).epsilon(0.1));
    CHECK(o.honest_fidelity == doctest::Approx(0.5));
  }

  TEST_CASE("protocol selection") {
    auto topo = NetworkTopology::all_honest(4);
    topo.honest = {1, 2, 3};
    CHECK_THROWS_AS(VerificationRunner(params(4), topo, {}, Resource::ghz(4)), QuantumError);
    topo.verifier = std::nullopt;
    const VerificationRunner crs(params(4), topo, {}, Resource::ghz(4));
    CHECK(crs.symmetrised());
    const auto o = crs.run(5);
    CHECK(o.symmetrised.has_value());
    CHECK_THROWS_AS(run_verification(params(4, 1.0, 2.0, 2), NetworkTopology::all_honest(4), {}, Resource::ghz(4), 1),
                    QuantumError);
  }

  TEST_CASE("dishonest verifier reporting all-fail") {
    auto topo = NetworkTopology::all_honest(3, std::nullopt);
    topo.honest = {0, 1};
    AdversaryModel m;
    m.dishonest[2].as_verifier = VerifierConduct::all_fail;
    auto p = params(3, 2.0, 0.9, 2);
    const VerificationRunner r(p, topo, m, Resource::ghz(3));
    const auto o = r.run(8);
    // the sets overseen by node 2 fail completely, every other set passes
    double expected = 0.0;
    for (std::size_t k = 0; k < o.transcript.set_verifiers.size(); ++k) {
      const double rate = o.transcript.set_rates[k];
      CHECK(rate == (o.transcript.set_verifiers[k] == 2 ? 1.0 : 0.0));
      expected += rate;
    }
    CHECK(o.transcript.f == doctest::Approx(expected / (2 * 3)));
    CHECK(o.accepted == (o.transcript.f <= 1.0 / 36));
  }

  TEST_CASE("function resource with X-flagged qubits passes") {
    const LinearFunctionSpec spec{1.0, {2, -1}};
    auto p = params(3, 2.0, 0.9);
    const VerificationRunner r(p, NetworkTopology::all_honest(2), {}, Resource::for_function(spec));
    CHECK(r.run(4).accepted);
    CHECK(r.run(4).transcript.f == 0.0);
  }

  TEST_CASE("runs are reproducible") {
    AdversaryModel m;
    m.source = SourceAttack::on_every_qubit(KrausChannel::dephasing(0.05));
    const VerificationRunner r(params(4), NetworkTopology::all_honest(4), m, Resource::ghz(4));
    const auto a = r.run(17, true), b = r.run(17, true);
    CHECK(a.transcript.f == b.transcript.f);
    CHECK(a.transcript.target_copy == b.transcript.target_copy);
    CHECK(a.transcript.f_j == b.transcript.f_j);
    CHECK(r.run(18).transcript.f_j != a.transcript.f_j);
  }
}
