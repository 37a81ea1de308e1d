#pragma once

// Quantum Fisher information for one-parameter families of states.
//
// Several independent routes are provided so they can be checked against one
// another: the pure-state formula, the spectral (SLD) formula, the
// generator form for unitary families and a Bures-distance finite difference.

#include <functional>
#include <string>
#include <vector>

#include "qsnet/encoding.hpp"
#include "qsnet/qcore.hpp"

namespace qsnet {

inline constexpr double kDefaultRankTolerance = 1e-10;
inline constexpr double kDefaultFiniteDifferenceStep = 1e-5;

/// theta -> state, evaluated at `point`. Analytic derivatives are optional;
/// when absent, central finite differences are used.
struct ParameterizedFamily {
  std::function<QuantumState(double)> state_at;
  std::function<CMatrix(double)> derivative;       // d rho / d theta
  std::function<CVector(double)> pure_derivative;  // d psi / d theta
  double point = 0.0;
};

/// rho(theta) = e^{-i theta G} rho e^{i theta G}.
ParameterizedFamily unitary_family(QuantumState base, const LinearOperator& generator, double point = 0.0);

/// Qubit q acquires diag(1, e^{i weights[q] theta}).
ParameterizedFamily phase_family(QuantumState base, std::vector<double> qubit_weights, double point = 0.0);

/// Arbitrary family; derivatives by finite differences only.
ParameterizedFamily black_box_family(std::function<QuantumState(double)> state_at, double point = 0.0);

enum class QfiMethod { pure_formula, full_rank_formula, spectral_general, bures_oracle, generator_form };

std::string to_string(QfiMethod method);

struct QfiResult {
  double value = 0.0;
  QfiMethod method = QfiMethod::spectral_general;
  int rank = 0;
  double tolerance = 0.0;
  /// sum |<k|d rho|l>|^2 over pairs dropped by the rank cut.
  double excluded_weight = 0.0;
};

/// Central difference (rho(theta+h) - rho(theta-h)) / 2h.
CMatrix state_derivative(const ParameterizedFamily& family, double step = kDefaultFiniteDifferenceStep);

/// Symmetric logarithmic derivative on pairs with lambda_k + lambda_l > tolerance.
LinearOperator sld(const QuantumState& rho, const CMatrix& drho, double tolerance = kDefaultRankTolerance);

/// 4 (<d psi|d psi> - |<psi|d psi>|^2).
QfiResult qfi_pure(const ParameterizedFamily& family, double step = kDefaultFiniteDifferenceStep);

/// 2 sum |<k|d rho|l>|^2 / (lambda_k + lambda_l) over retained pairs.
QfiResult qfi_mixed(const ParameterizedFamily& family, double tolerance = kDefaultRankTolerance);

/// 8 (1 - sqrt F(rho(theta - h/2), rho(theta + h/2))) / h^2.
QfiResult qfi_bures_oracle(const ParameterizedFamily& family, double step = 1e-4);

/// QFI of rho under e^{-i theta G}: 2 sum (l_k - l_l)^2 / (l_k + l_l) |G_kl|^2.
QfiResult qfi_generator(const QuantumState& rho, const LinearOperator& generator,
                        double tolerance = kDefaultRankTolerance);

/// 24 ||H||^2 sqrt(1 - F).
double continuity_bound(double fidelity, double h_norm);

/// Triangle-inequality bound ||H'|| <= 2 ||H||.
double hiding_generator_norm_bound(int n, double base_h_norm);

/// H' = H on `target` minus H / (n - 1) on every other qubit.
LinearOperator hiding_generator(int n, int target, const LinearOperator& single_qubit_h);

double cramer_rao_bound(double qfi, long long repetitions);

struct NodePrivacy {
  int node = 0;
  /// QFI about theta_node minimised over hiding assignments of the other honest phases.
  double qfi_optimal = 0.0;
  /// QFI about theta_node under phi_k = -theta_node / (n_honest - 1).
  double qfi_substitution = 0.0;
};

struct PrivacyReport {
  /// max over honest nodes of qfi_optimal / n_honest^2.
  double epsilon = 0.0;
  int worst_node = -1;
  /// Same maximum using qfi_substitution.
  double epsilon_substitution = 0.0;
  int honest_count = 0;
  std::vector<NodePrivacy> nodes;
};

/// Privacy of `resource` (unencoded, full network) on its honest reduction.
/// Node derivatives are the commutators i[N_node, rho_H]; the QFI is the same
/// at every operating point of a unitary family, so none is needed.
PrivacyReport privacy_epsilon(const QuantumState& resource, const QubitAssignment& assignment,
                              const NodeSet& honest, double tolerance = kDefaultRankTolerance);

/// Maps a full phase vector to the honest-reduced encoded state.
using EncodedFamilyBuilder = std::function<QuantumState(const PhaseVector&)>;

/// Same quantity from a black-box encoder, with node derivatives by central
/// differences around `base`.
PrivacyReport privacy_epsilon(const EncodedFamilyBuilder& builder, const PhaseVector& base,
                              const NodeSet& honest, double tolerance = kDefaultRankTolerance,
                              double step = kDefaultFiniteDifferenceStep);

}  // namespace qsnet
