#include <doctest.h>

#include <cmath>

#include "qsnet/adversary.hpp"
#include "qsnet/ghz.hpp"

using namespace qsnet;

namespace {

QuantumState plus() { return QuantumState::pure(CVector::Constant(2, std::sqrt(0.5))); }

}  // namespace

TEST_SUITE("adversary") {
  TEST_CASE("channel oracles") {
    const auto d = KrausChannel::dephasing(0.2).apply(plus(), 0);
    CHECK(std::real(d.matrix()(0, 1)) == doctest::Approx(0.5 * 0.6));
    CHECK(fidelity(d, plus()) == doctest::Approx(0.8));
    const auto dp = KrausChannel::depolarizing(0.4).apply(QuantumState::basis(1, 0), 0);
    CHECK(std::real(dp.matrix()(0, 0)) == doctest::Approx(0.8));
    CHECK(KrausChannel::dephasing(0.3).parameter() == 0.3);
    CHECK_THROWS_AS(KrausChannel::dephasing(1.5), QuantumError);
    CHECK_THROWS_AS(KrausChannel({CMatrix::Identity(2, 2) * 0.5}), QuantumError);
  }

  TEST_CASE("dephasing one GHZ qubit halves coherence at p = 1/4") {
    const auto s = KrausChannel::dephasing(0.25).apply(ghz_state(3), 1);
    CHECK(std::real(s.matrix()(0, 7)) == doctest::Approx(0.25));
    CHECK(fidelity(s, ghz_state(3)) == doctest::Approx(0.75));
  }

  TEST_CASE("topology validation") {
    auto t = NetworkTopology::all_honest(4);
    CHECK_NOTHROW(t.validate());
    CHECK(t.dishonest().empty());
    t.honest = {0, 2};
    CHECK(t.dishonest() == NodeSet{1, 3});
    CHECK(t.is_honest(2));
    t.verifier = 5;
    CHECK_THROWS_AS(t.validate(), QuantumError);
    t.verifier = std::nullopt;
    t.honest = {};
    CHECK_NOTHROW(t.validate());
  }

  TEST_CASE("model validation") {
    NetworkTopology t = NetworkTopology::all_honest(3);
    t.honest = {0, 1};
    AdversaryModel m;
    m.dishonest[2].flip_probability = 0.5;
    CHECK_NOTHROW(m.validate(t));
    m.dishonest[1].flip_probability = 0.5;
    CHECK_THROWS_AS(m.validate(t), QuantumError);
    m.dishonest.erase(1);
    m.dishonest[2].local_unitary = LinearOperator(CMatrix::Ones(2, 2));
    CHECK_THROWS_AS(m.validate(t), QuantumError);
  }

  TEST_CASE("variant preparation") {
    const auto a = QubitAssignment::one_per_node(3);
    AdversaryModel m;
    m.source = SourceAttack::replace(QuantumState::basis(3, 0));
    CHECK(fidelity(prepare_variant(m, a, ghz_state(3), 0), QuantumState::basis(3, 0)) == doctest::Approx(1.0));
    CHECK_FALSE(m.leaves_copies_ideal());
    m = AdversaryModel::none();
    CHECK(m.leaves_copies_ideal());
    m.channels.insert_or_assign(1, KrausChannel::dephasing(0.5));
    const auto s = prepare_variant(m, a, ghz_state(3), 0);
    CHECK(std::abs(s.matrix()(0, 7)) < 1e-15);

    m = AdversaryModel::none();
    m.source = SourceAttack::mixture(QuantumState::basis(3, 0), 0.3);
    Rng rng(5);
    int subs = 0;
    for (int i = 0; i < 4000; ++i) subs += draw_copy_variant(m, rng);
    CHECK(subs > 1050);
    CHECK(subs < 1350);
  }

  TEST_CASE("reporting") {
    NetworkTopology t = NetworkTopology::all_honest(3);
    t.honest = {0, 1};
    AdversaryModel m;
    m.dishonest[2].flip_probability = 1.0;
    Rng rng(1);
    CHECK(report_outcome(m, t, 0, -1, rng) == -1);
    CHECK(report_outcome(m, t, 2, -1, rng) == 1);
    CHECK(report_outcome(m, t, 2, 1, rng) == -1);
  }

  TEST_CASE("honest reduction") {
    NetworkTopology t = NetworkTopology::all_honest(3);
    const auto a = QubitAssignment::one_per_node(3);
    CHECK(fidelity(honest_reduced(ghz_state(3), t, a), ghz_state(3)) == doctest::Approx(1.0));
    t.honest = {0, 2};
    const auto r = honest_reduced(ghz_state(3), t, a);
    CHECK(r.n_qubits() == 2);
    CHECK(r.purity() == doctest::Approx(0.5));
    t.honest = {};
    CHECK_THROWS_AS(honest_reduced(ghz_state(3), t, a), QuantumError);
  }
}
