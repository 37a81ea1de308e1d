#include <doctest.h>

#include <cmath>
#include <numbers>

#include "qsnet/encoding.hpp"
#include "qsnet/ghz.hpp"

using namespace qsnet;

TEST_SUITE("encoding") {
  TEST_CASE("assignment for k = (2, -1)") {
    const LinearFunctionSpec spec{1.0, {2, -1}};
    const auto a = QubitAssignment::for_function(spec);
    CHECK(a.n_qubits() == 3);
    CHECK(a.n_nodes() == 2);
    CHECK(a.owner(0) == QubitOwner{0, false});
    CHECK(a.owner(1) == QubitOwner{0, false});
    CHECK(a.owner(2) == QubitOwner{1, true});
    CHECK(a.x_flags() == std::vector<bool>{false, false, true});
    CHECK(a.qubits_of(0) == std::vector<int>{0, 1});
    CHECK(spec.total_qubits() == 3);
  }

  TEST_CASE("function spec validation") {
    CHECK_THROWS_AS((LinearFunctionSpec{1.0, {}}.validate()), QuantumError);
    CHECK_THROWS_AS((LinearFunctionSpec{1.0, {0, 0}}.validate()), QuantumError);
    const auto avg = LinearFunctionSpec::average(4);
    CHECK(avg.scale == 0.25);
    CHECK(avg.weights == std::vector<int>{1, 1, 1, 1});
  }

  TEST_CASE("branch phase of the function resource") {
    const LinearFunctionSpec spec{0.5, {2, -1}};
    const auto res = resource_state_for_function(spec);
    const PhaseVector th({0.4, 1.1});
    const auto enc = encode_network(res.state, th, res.assignment);
    // (|001> + e^{i(2 t1 - t2)} |110>) / sqrt 2 up to a global phase
    const cplx ratio = enc.amplitudes()(6) / enc.amplitudes()(1);
    CHECK(std::abs(ratio - std::polar(1.0, 2 * 0.4 - 1.1)) < 1e-12);
    CHECK(function_value(spec, th) == doctest::Approx(0.5 * (0.8 - 1.1)));
  }

  TEST_CASE("average encoding of GHZ") {
    const auto a = QubitAssignment::one_per_node(4);
    const double t = std::numbers::pi / 8;
    const auto enc = encode_network(ghz_state(4), PhaseVector({t, t, t, t}), a);
    CHECK(pauli_expectation(enc, PauliString::parse("XXXX")) == doctest::Approx(std::cos(4 * t)).epsilon(1e-12));
  }

  TEST_CASE("privacy substitution") {
    const auto s = privacy_substitution(PhaseVector({0.3, 0.1, 0.2, 0.9}), 0, {0, 1, 2});
    CHECK(s[0] == 0.3);
    CHECK(s[1] == doctest::Approx(-0.15));
    CHECK(s[2] == doctest::Approx(-0.15));
    CHECK(s[3] == 0.9);
    CHECK_THROWS_AS(privacy_substitution(PhaseVector({0.3, 0.1}), 0, {0}), QuantumError);
  }

  TEST_CASE("node sets and phase vectors") {
    CHECK(make_node_set({3, 1, 3, 0}) == NodeSet{0, 1, 3});
    CHECK_THROWS_AS(PhaseVector({0.1, std::nan("")}), QuantumError);
    CHECK((PhaseVector({1.0, 2.0}) + PhaseVector({0.5, 0.5})) == PhaseVector({1.5, 2.5}));
    CHECK_THROWS_AS(encode_network(ghz_state(3), PhaseVector({0.1}), QubitAssignment::one_per_node(3)),
                    QuantumError);
  }
}
