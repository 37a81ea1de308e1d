#include "qsnet/metrology.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <memory>
#include <string>

#include <unsupported/Eigen/KroneckerProduct>

#include "qsnet/kernels.hpp"

namespace qsnet {

namespace {

// Values in [-1e-9, 0) are rounding noise around an exact zero.
double clip_nonnegative(double v) { return v < 0.0 && v > -1e-9 ? 0.0 : std::max(v, 0.0); }

CMatrix unitary_from_generator(const SpectralDecomposition& g, double theta) {
  const auto d = g.eigenvalues.size();
  CVector phases(d);
  for (Eigen::Index k = 0; k < d; ++k) phases(k) = std::polar(1.0, -theta * g.eigenvalues(k));
  return g.eigenvectors * phases.asDiagonal() * g.eigenvectors.adjoint();
}

// g[b] = sum of weights[q] over qubits q set in b.
std::vector<double> diagonal_generator(int n, std::span<const double> weights) {
  std::vector<double> g(std::size_t{1} << n, 0.0);
  for (std::size_t b = 0; b < g.size(); ++b) {
    for (int q = 0; q < n; ++q) {
      if (b >> bit_position(q, n) & 1) g[b] += weights[static_cast<std::size_t>(q)];
    }
  }
  return g;
}

struct Spectrum {
  RVector lambda;
  CMatrix v;
};

Spectrum spectrum_of(const QuantumState& s) {
  auto sd = spectral_decomposition(s.density_matrix());
  return {std::move(sd.eigenvalues), std::move(sd.eigenvectors)};
}

// Bilinear form 2 sum Re(conj(A_kl) B_kl) / (l_k + l_l) in the eigenbasis.
double sld_form(const Spectrum& sp, const CMatrix& a, const CMatrix& b, double tol) {
  const auto d = sp.lambda.size();
  double sum = 0.0;
  for (Eigen::Index l = 0; l < d; ++l) {
    for (Eigen::Index k = 0; k < d; ++k) {
      const double s = sp.lambda(k) + sp.lambda(l);
      if (s > tol) sum += 2.0 * (std::conj(a(k, l)) * b(k, l)).real() / s;
    }
  }
  return sum;
}

PrivacyReport privacy_from_derivatives(const QuantumState& rho_h, const std::vector<CMatrix>& derivs,
                                       const NodeSet& honest, double tol) {
  const auto m = static_cast<Eigen::Index>(honest.size());
  const Spectrum sp = spectrum_of(rho_h);
  std::vector<CMatrix> rotated;
  rotated.reserve(derivs.size());
  for (const auto& d : derivs) rotated.push_back(sp.v.adjoint() * d * sp.v);

  Eigen::MatrixXd gram(m, m);
  for (Eigen::Index u = 0; u < m; ++u) {
    for (Eigen::Index w = u; w < m; ++w) {
      gram(u, w) = gram(w, u) = sld_form(sp, rotated[static_cast<std::size_t>(u)],
                                         rotated[static_cast<std::size_t>(w)], tol);
    }
  }

  PrivacyReport report;
  report.honest_count = static_cast<int>(m);
  const double n2 = static_cast<double>(m * m);
  for (Eigen::Index j = 0; j < m; ++j) {
    // Others' block and its coupling to j.
    Eigen::MatrixXd g_oo(m - 1, m - 1);
    Eigen::VectorXd g_oj(m - 1);
    Eigen::VectorXd sub(m - 1);
    for (Eigen::Index a = 0, ia = 0; a < m; ++a) {
      if (a == j) continue;
      g_oj(ia) = gram(a, j);
      sub(ia) = -1.0 / static_cast<double>(m - 1);
      for (Eigen::Index b = 0, ib = 0; b < m; ++b) {
        if (b == j) continue;
        g_oo(ia, ib) = gram(a, b);
        ++ib;
      }
      ++ia;
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(g_oo);
    const double cut = 1e-12 * std::max(1.0, es.eigenvalues().cwiseAbs().maxCoeff());
    const Eigen::VectorXd proj = es.eigenvectors().transpose() * g_oj;
    double reduction = 0.0;
    for (Eigen::Index k = 0; k < proj.size(); ++k) {
      if (es.eigenvalues()(k) > cut) reduction += proj(k) * proj(k) / es.eigenvalues()(k);
    }
    NodePrivacy np;
    np.node = honest[static_cast<std::size_t>(j)];
    np.qfi_optimal = clip_nonnegative(gram(j, j) - reduction);
    np.qfi_substitution = clip_nonnegative(gram(j, j) + 2.0 * sub.dot(g_oj) + sub.dot(g_oo * sub));
    if (report.worst_node < 0 || np.qfi_optimal / n2 > report.epsilon) {
      report.epsilon = np.qfi_optimal / n2;
      report.worst_node = np.node;
    }
    report.epsilon_substitution = std::max(report.epsilon_substitution, np.qfi_substitution / n2);
    report.nodes.push_back(np);
  }
  return report;
}

void check_honest(const NodeSet& honest, int n_nodes) {
  if (honest.size() < 2) throw QuantumError("privacy_epsilon: needs at least two honest nodes");
  if (!std::is_sorted(honest.begin(), honest.end()) ||
      std::adjacent_find(honest.begin(), honest.end()) != honest.end()) {
    throw QuantumError("privacy_epsilon: honest set must be sorted and duplicate-free");
  }
  if (honest.front() < 0 || honest.back() >= n_nodes) throw QuantumError("privacy_epsilon: honest node out of range");
}

}  // namespace

ParameterizedFamily unitary_family(QuantumState base, const LinearOperator& generator, double point) {
  if (!generator.is_hermitian() && !is_hermitian(generator.matrix())) {
    throw QuantumError("unitary_family: generator must be Hermitian");
  }
  if (generator.dim() != base.dim()) throw QuantumError("unitary_family: dimension mismatch");
  auto g = std::make_shared<SpectralDecomposition>(spectral_decomposition(generator.matrix()));
  auto gm = std::make_shared<CMatrix>(generator.matrix());
  auto b = std::make_shared<QuantumState>(std::move(base));
  const int n = b->n_qubits();

  ParameterizedFamily fam;
  fam.point = point;
  fam.state_at = [g, b, n](double theta) {
    const CMatrix u = unitary_from_generator(*g, theta);
    if (b->is_pure()) return QuantumState::pure_unchecked(u * b->amplitudes(), n);
    return QuantumState::mixed_unchecked(u * b->matrix() * u.adjoint(), n);
  };
  fam.derivative = [g, gm, b, n](double theta) -> CMatrix {
    const CMatrix u = unitary_from_generator(*g, theta);
    const CMatrix rho = u * b->density_matrix() * u.adjoint();
    return cplx(0, -1) * (*gm * rho - rho * *gm);
  };
  if (b->is_pure()) {
    fam.pure_derivative = [g, gm, b](double theta) -> CVector {
      return cplx(0, -1) * (*gm * (unitary_from_generator(*g, theta) * b->amplitudes()));
    };
  }
  return fam;
}

ParameterizedFamily phase_family(QuantumState base, std::vector<double> qubit_weights, double point) {
  const int n = base.n_qubits();
  if (static_cast<int>(qubit_weights.size()) != n) throw QuantumError("phase_family: one weight per qubit required");
  auto g = std::make_shared<std::vector<double>>(diagonal_generator(n, qubit_weights));
  auto w = std::make_shared<std::vector<double>>(std::move(qubit_weights));
  auto b = std::make_shared<QuantumState>(std::move(base));

  ParameterizedFamily fam;
  fam.point = point;
  fam.state_at = [w, b, n](double theta) {
    std::vector<double> bit_phases(static_cast<std::size_t>(n));
    for (int q = 0; q < n; ++q) bit_phases[bit_position(q, n)] = (*w)[static_cast<std::size_t>(q)] * theta;
    const auto diag = kernels::phase_diagonal(static_cast<std::size_t>(n), bit_phases);
    if (b->is_pure()) {
      CVector v = b->amplitudes();
      kernels::scale_diagonal({v.data(), static_cast<std::size_t>(v.size())}, diag);
      return QuantumState::pure_unchecked(std::move(v), n);
    }
    CMatrix rho = b->matrix();
    kernels::conjugate_diagonal(rho, diag);
    return QuantumState::mixed_unchecked(std::move(rho), n);
  };
  auto state_at = fam.state_at;
  fam.derivative = [g, state_at](double theta) -> CMatrix {
    CMatrix rho = state_at(theta).density_matrix();
    for (Eigen::Index c = 0; c < rho.cols(); ++c) {
      for (Eigen::Index r = 0; r < rho.rows(); ++r) {
        rho(r, c) *= cplx(0, (*g)[static_cast<std::size_t>(r)] - (*g)[static_cast<std::size_t>(c)]);
      }
    }
    return rho;
  };
  if (b->is_pure()) {
    fam.pure_derivative = [g, state_at](double theta) -> CVector {
      CVector v = state_at(theta).amplitudes();
      for (Eigen::Index i = 0; i < v.size(); ++i) v(i) *= cplx(0, (*g)[static_cast<std::size_t>(i)]);
      return v;
    };
  }
  return fam;
}

ParameterizedFamily black_box_family(std::function<QuantumState(double)> state_at, double point) {
  ParameterizedFamily fam;
  fam.state_at = std::move(state_at);
  fam.point = point;
  return fam;
}

std::string to_string(QfiMethod method) {
  switch (method) {
    case QfiMethod::pure_formula: return "pure-formula";
    case QfiMethod::full_rank_formula: return "full-rank-formula";
    case QfiMethod::spectral_general: return "spectral-general";
    case QfiMethod::bures_oracle: return "bures-oracle";
    case QfiMethod::generator_form: return "generator-form";
  }
  return "unknown";
}

CMatrix state_derivative(const ParameterizedFamily& family, double step) {
  if (!(step > 0.0)) throw QuantumError("state_derivative: step must be positive");
  const CMatrix plus = family.state_at(family.point + step).density_matrix();
  const CMatrix minus = family.state_at(family.point - step).density_matrix();
  return (plus - minus) / (2.0 * step);
}

LinearOperator sld(const QuantumState& rho, const CMatrix& drho, double tolerance) {
  if (drho.rows() != static_cast<Eigen::Index>(rho.dim()) || drho.cols() != drho.rows()) {
    throw QuantumError("sld: derivative dimension mismatch");
  }
  if (!is_hermitian(drho, 1e-8)) throw QuantumError("sld: derivative is not Hermitian");
  const Spectrum sp = spectrum_of(rho);
  const CMatrix d = sp.v.adjoint() * drho * sp.v;
  const auto dim = d.rows();
  CMatrix l = CMatrix::Zero(dim, dim);
  bool retained = false;
  for (Eigen::Index c = 0; c < dim; ++c) {
    for (Eigen::Index r = 0; r < dim; ++r) {
      const double s = sp.lambda(r) + sp.lambda(c);
      if (s > tolerance) {
        l(r, c) = 2.0 * d(r, c) / s;
        retained = true;
      }
    }
  }
  if (!retained) throw QuantumError("sld: every eigenvalue pair is below the tolerance");
  CMatrix out = sp.v * l * sp.v.adjoint();
  out = (out + out.adjoint()) / 2.0;
  return LinearOperator(std::move(out), true);
}

QfiResult qfi_pure(const ParameterizedFamily& family, double step) {
  const QuantumState psi_state = family.state_at(family.point);
  if (!psi_state.is_pure()) throw QuantumError("qfi_pure: family does not yield pure states");
  const CVector& psi = psi_state.amplitudes();
  CVector dpsi;
  if (family.pure_derivative) {
    dpsi = family.pure_derivative(family.point);
  } else {
    if (!(step > 0.0)) throw QuantumError("qfi_pure: step must be positive");
    const auto plus = family.state_at(family.point + step);
    const auto minus = family.state_at(family.point - step);
    if (!plus.is_pure() || !minus.is_pure()) throw QuantumError("qfi_pure: family does not yield pure states");
    dpsi = (plus.amplitudes() - minus.amplitudes()) / (2.0 * step);
  }
  const double value = 4.0 * (dpsi.squaredNorm() - std::norm(psi.dot(dpsi)));
  return {clip_nonnegative(value), QfiMethod::pure_formula, 1, 0.0, 0.0};
}

QfiResult qfi_mixed(const ParameterizedFamily& family, double tolerance) {
  const QuantumState rho = family.state_at(family.point);
  const CMatrix drho = family.derivative ? family.derivative(family.point) : state_derivative(family);
  const Spectrum sp = spectrum_of(rho);
  const CMatrix d = sp.v.adjoint() * drho * sp.v;
  const auto dim = d.rows();

  QfiResult res;
  res.tolerance = tolerance;
  double value = 0.0, kept_weight = 0.0;
  for (Eigen::Index l = 0; l < dim; ++l) {
    for (Eigen::Index k = 0; k < dim; ++k) {
      const double s = sp.lambda(k) + sp.lambda(l);
      const double w = std::norm(d(k, l));
      if (s > tolerance) {
        value += 2.0 * w / s;
        kept_weight += w;
      } else {
        res.excluded_weight += w;
      }
    }
  }
  for (Eigen::Index k = 0; k < dim; ++k) res.rank += sp.lambda(k) > tolerance / 2 ? 1 : 0;
  if (kept_weight == 0.0 && res.excluded_weight > 1e-12) {
    throw QuantumError("qfi_mixed: derivative lies entirely on truncated eigenvalue pairs (weight " +
                       std::to_string(res.excluded_weight) + ")");
  }
  res.method = res.rank == dim ? QfiMethod::full_rank_formula : QfiMethod::spectral_general;
  res.value = clip_nonnegative(value);
  return res;
}

QfiResult qfi_bures_oracle(const ParameterizedFamily& family, double step) {
  if (!(step > 0.0)) throw QuantumError("qfi_bures_oracle: step must be positive");
  const double f = fidelity(family.state_at(family.point - step / 2), family.state_at(family.point + step / 2));
  if (!(f > 0.5)) throw QuantumError("qfi_bures_oracle: step too large, fidelity " + std::to_string(f));
  const double value = 8.0 * (1.0 - std::sqrt(f)) / (step * step);
  return {clip_nonnegative(value), QfiMethod::bures_oracle, 0, step, 0.0};
}

QfiResult qfi_generator(const QuantumState& rho, const LinearOperator& generator, double tolerance) {
  if (generator.dim() != rho.dim()) throw QuantumError("qfi_generator: dimension mismatch");
  const Spectrum sp = spectrum_of(rho);
  const CMatrix g = sp.v.adjoint() * generator.matrix() * sp.v;
  QfiResult res;
  res.method = QfiMethod::generator_form;
  res.tolerance = tolerance;
  double value = 0.0;
  for (Eigen::Index l = 0; l < g.cols(); ++l) {
    for (Eigen::Index k = 0; k < g.rows(); ++k) {
      const double s = sp.lambda(k) + sp.lambda(l);
      const double diff = sp.lambda(k) - sp.lambda(l);
      if (s > tolerance) {
        value += 2.0 * diff * diff / s * std::norm(g(k, l));
      } else {
        res.excluded_weight += diff * diff * std::norm(g(k, l));
      }
    }
    res.rank += sp.lambda(l) > tolerance / 2 ? 1 : 0;
  }
  res.value = clip_nonnegative(value);
  return res;
}

double continuity_bound(double fidelity, double h_norm) {
  if (!(fidelity >= 0.0 && fidelity <= 1.0)) throw QuantumError("continuity_bound: fidelity outside [0, 1]");
  if (!(h_norm >= 0.0)) throw QuantumError("continuity_bound: negative generator norm");
  return 24.0 * h_norm * h_norm * std::sqrt(1.0 - fidelity);
}

double hiding_generator_norm_bound(int n, double base_h_norm) {
  if (n < 2) throw QuantumError("hiding_generator_norm_bound: n must be at least 2");
  if (!(base_h_norm >= 0.0)) throw QuantumError("hiding_generator_norm_bound: negative norm");
  return 2.0 * base_h_norm;
}

LinearOperator hiding_generator(int n, int target, const LinearOperator& single_qubit_h) {
  if (n < 2) throw QuantumError("hiding_generator: n must be at least 2");
  if (target < 0 || target >= n) throw QuantumError("hiding_generator: target out of range");
  if (single_qubit_h.n_qubits() != 1) throw QuantumError("hiding_generator: base generator must act on one qubit");
  const auto dim = static_cast<Eigen::Index>(std::size_t{1} << n);
  CMatrix total = CMatrix::Zero(dim, dim);
  for (int q = 0; q < n; ++q) {
    const double coeff = q == target ? 1.0 : -1.0 / (n - 1);
    CMatrix term = CMatrix::Identity(1, 1);
    for (int p = 0; p < n; ++p) {
      const CMatrix& factor = p == q ? single_qubit_h.matrix() : CMatrix::Identity(2, 2).eval();
      term = Eigen::kroneckerProduct(term, factor).eval();
    }
    total += coeff * term;
  }
  return LinearOperator(std::move(total), single_qubit_h.is_hermitian());
}

double cramer_rao_bound(double qfi, long long repetitions) {
  if (!(qfi > 0.0)) throw QuantumError("cramer_rao_bound: QFI must be positive (variance unbounded)");
  if (repetitions < 1) throw QuantumError("cramer_rao_bound: need at least one repetition");
  return 1.0 / (static_cast<double>(repetitions) * qfi);
}

PrivacyReport privacy_epsilon(const QuantumState& resource, const QubitAssignment& assignment,
                              const NodeSet& honest, double tolerance) {
  check_honest(honest, assignment.n_nodes());
  if (assignment.n_qubits() != resource.n_qubits()) throw QuantumError("privacy_epsilon: assignment size mismatch");
  const auto kept = assignment.qubits_of(honest);
  if (kept.empty()) throw QuantumError("privacy_epsilon: honest nodes hold no qubits");
  const QuantumState rho_h = partial_trace(resource, kept).as_mixed();
  const int nh = static_cast<int>(kept.size());
  const CMatrix& rho = rho_h.matrix();

  std::vector<CMatrix> derivs;
  for (int node : honest) {
    std::vector<double> w(static_cast<std::size_t>(nh), 0.0);
    for (int i = 0; i < nh; ++i) {
      if (assignment.owner(kept[static_cast<std::size_t>(i)]).node == node) w[static_cast<std::size_t>(i)] = 1.0;
    }
    const auto g = diagonal_generator(nh, w);
    CMatrix d(rho.rows(), rho.cols());
    for (Eigen::Index c = 0; c < rho.cols(); ++c) {
      for (Eigen::Index r = 0; r < rho.rows(); ++r) {
        d(r, c) = cplx(0, g[static_cast<std::size_t>(r)] - g[static_cast<std::size_t>(c)]) * rho(r, c);
      }
    }
    derivs.push_back(std::move(d));
  }
  return privacy_from_derivatives(rho_h, derivs, honest, tolerance);
}

PrivacyReport privacy_epsilon(const EncodedFamilyBuilder& builder, const PhaseVector& base, const NodeSet& honest,
                              double tolerance, double step) {
  check_honest(honest, static_cast<int>(base.size()));
  if (!(step > 0.0)) throw QuantumError("privacy_epsilon: step must be positive");
  const QuantumState rho_h = builder(base);
  std::vector<CMatrix> derivs;
  for (int node : honest) {
    std::vector<double> e(base.size(), 0.0);
    e[static_cast<std::size_t>(node)] = step;
    const PhaseVector up = base + PhaseVector(e);
    for (double& x : e) x = -x;
    const PhaseVector down = base + PhaseVector(e);
    derivs.push_back((builder(up).density_matrix() - builder(down).density_matrix()) / (2.0 * step));
  }
  return privacy_from_derivatives(rho_h, derivs, honest, tolerance);
}

}  // namespace qsnet
