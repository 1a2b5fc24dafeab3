#include "qpg/ion_full_model.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "qpg/special_functions.hpp"

namespace qpg {

namespace {

constexpr int kMaxPeriodDenominator = 10000;
constexpr int kMaxCalibrationIterations = 40;
constexpr double kCalibrationTol = 1e-9;  // relative to |Omega_eff|

// Nearest unitary (polar factor). Long Floquet powers otherwise amplify the
// rounding drift of each product roughly linearly in the exponent.
Matrix nearest_unitary(const Matrix& m) {
  Eigen::JacobiSVD<Matrix> svd(m, Eigen::ComputeFullU | Eigen::ComputeFullV);
  return svd.matrixU() * svd.matrixV().adjoint();
}

Matrix matrix_power(Matrix base, long long exponent) {
  Matrix result = Matrix::Identity(base.rows(), base.cols());
  base = nearest_unitary(base);
  while (exponent > 0) {
    if (exponent & 1) result = nearest_unitary(base * result);
    exponent >>= 1;
    if (exponent) base = nearest_unitary(base * base);
  }
  return result;
}

int steps_for(double span, double dt) {
  return std::max(1, static_cast<int>(std::ceil(span / dt - 1e-9)));
}

// Spin labels of a flat index on ion_j x ion_k x Fock(fock_max).
struct IonLabels {
  int sj;
  int sk;
  int n;
};

IonLabels ion_labels(int index, int fock_max) {
  const int f = fock_max + 1;
  const int spins = index / f;
  return {spins / 2, spins % 2, index % f};
}

}  // namespace

void FullIonParams::validate() const {
  const IonGateParams& b = base;
  if (!(b.eta > 0.0 && b.eta < 1.0)) throw InvalidParameter("eta", "must satisfy 0 < eta < 1");
  if (!(b.omega >= 0.0)) throw InvalidParameter("omega", "must be >= 0");
  if (!(b.delta > b.omega)) throw InvalidParameter("delta", "must exceed omega (Omega < delta)");
  if (!(b.delta < 1.0)) throw InvalidParameter("delta", "must be < 1 (delta < nu)");
  if (!std::isfinite(b.phi)) throw InvalidParameter("phi", "must be finite");
  if (!(b.g0 >= 0.0)) throw InvalidParameter("g0", "must be >= 0");
  if (b.n_sel < 0) throw InvalidParameter("n_sel", "must be >= 0");
  if (b.n_max < b.n_sel + 3) throw InvalidParameter("n_max", "must be >= n_sel + 3");
  if (!(dt > 0.0) || dt > kMaxStep * (1.0 + 1e-12)) {
    throw InvalidParameter("dt", "must satisfy 0 < dt <= 2 pi / 50 (50 steps per trap period)");
  }
  if (!(t_final > 0.0)) throw InvalidParameter("t_final", "must be > 0");
  if (!(tol_conv > 0.0)) throw InvalidParameter("tol_conv", "must be > 0");
  if (pad < 4) throw InvalidParameter("pad", "must be >= 4");
  if (max_halvings < 1) throw InvalidParameter("max_halvings", "must be >= 1");
}

HilbertSpace full_ion_space(const FullIonParams& p) { return ion_space(p.base.n_max + p.pad); }

// ---------------------------------------------------------------------------
// FullIonModel

FullIonModel::FullIonModel(FullIonParams p) : params_(std::move(p)) {
  params_.validate();
  space_ = full_ion_space(params_);
  const int fmax = fock_max();
  // The displacement itself is built with a further `pad` margin so that it
  // is accurate on the whole simulated Fock range.
  const LambDickeContext ctx{params_.base.eta, fmax, params_.pad};
  d0_ = quadrature_exponential(ctx).matrix();
  retuning_ = stark_operator(space_, params_.retuning);

  const double delta = params_.base.delta;
  rotation_rates_.resize(space_.dim());
  for (int i = 0; i < space_.dim(); ++i) {
    const IonLabels l = ion_labels(i, fmax);
    rotation_rates_(i) = -l.n + (1.0 - delta) * l.sj + delta * l.sk;
  }
}

Operator FullIonModel::hamiltonian_at(double t) const {
  const IonGateParams& b = params_.base;
  const int f = fock_max() + 1;
  Matrix h = Matrix::Zero(space_.dim(), space_.dim());
  if (b.omega == 0.0 || (!params_.beam_i && !params_.beam_ii)) return Operator(space_, std::move(h));

  // D(t) = R(t) D(0) R(t)^dagger with R(t) = exp(i N t).
  Matrix d(f, f);
  for (int c = 0; c < f; ++c)
    for (int r = 0; r < f; ++r) d(r, c) = d0_(r, c) * std::polar(1.0, (r - c) * t);

  const Complex beam_phase = std::polar(b.omega, b.phi);
  const Complex coeff_j = beam_phase * std::polar(1.0, -(1.0 - b.delta) * t);
  const Complex coeff_k = beam_phase * std::polar(1.0, -b.delta * t);

  // Spin block index = 2 s_j + s_k.
  auto put = [&](int to, int from, const Complex& coeff) {
    const Matrix x = coeff * d;
    h.block(to * f, from * f, f, f) += x;
    h.block(from * f, to * f, f, f) += x.adjoint();
  };
  if (params_.beam_i) {
    put(2, 0, coeff_j);  // S+_j with k down
    put(3, 1, coeff_j);  // S+_j with k up
  }
  if (params_.beam_ii) {
    put(1, 0, coeff_k);  // S+_k with j down
    put(3, 2, coeff_k);  // S+_k with j up
  }
  return Operator(space_, std::move(h));
}

Matrix FullIonModel::stepped(double span, int steps) const {
  const double h = span / steps;
  Matrix u = Matrix::Identity(space_.dim(), space_.dim());
  for (int i = 0; i < steps; ++i) {
    const Operator gen = hamiltonian_at((i + 0.5) * h) + retuning_;
    u = expm_unitary(gen, h).matrix() * u;
  }
  return u;
}

std::optional<double> FullIonModel::period() const {
  const double delta = params_.base.delta;
  for (int q = 1; q <= kMaxPeriodDenominator; ++q) {
    const double scaled = delta * q;
    if (std::abs(scaled - std::round(scaled)) < 1e-12 * q) return 2.0 * kPi * q;
  }
  return std::nullopt;
}

Operator FullIonModel::period_propagator(double dt) const {
  const auto T = period();
  if (!T) throw PreconditionError("period_propagator: H(t) is not periodic (irrational delta)");
  return Operator(space_, stepped(*T, steps_for(*T, dt)));
}

Operator FullIonModel::propagator(double t, double dt) const {
  if (t < 0.0) throw PreconditionError("propagator: negative time");
  if (t == 0.0) return Operator::identity(space_);
  const auto T = period();
  if (!T || t < 2.0 * *T) return Operator(space_, stepped(t, steps_for(t, dt)));

  const long long periods = static_cast<long long>(std::floor(t / *T));
  const double rest = t - static_cast<double>(periods) * *T;
  Matrix u = matrix_power(stepped(*T, steps_for(*T, dt)), periods);
  if (rest > 1e-12 * *T) u = stepped(rest, steps_for(rest, dt)) * u;
  return Operator(space_, std::move(u));
}

Operator FullIonModel::corotating_generator() const {
  Operator k = hamiltonian_at(0.0) + retuning_;
  Matrix m = k.matrix();
  m.diagonal() -= rotation_rates_.cast<Complex>();
  return Operator(space_, std::move(m));
}

Operator FullIonModel::exact_propagator(double t) const {
  const Operator inner = expm_unitary(corotating_generator(), t);
  Vector frame(space_.dim());
  for (int i = 0; i < space_.dim(); ++i) frame(i) = std::polar(1.0, -rotation_rates_(i) * t);
  return Operator(space_, frame.asDiagonal() * inner.matrix());
}

Operator hamiltonian_at(const FullIonParams& p, double t) {
  return FullIonModel(p).hamiltonian_at(t);
}

// ---------------------------------------------------------------------------
// Propagation

StateVector embed_ion_state(const FullIonParams& p, const StateVector& psi) {
  const HilbertSpace full = full_ion_space(p);
  if (psi.space() == full) return psi;
  if (!(psi.space() == ion_space(p.base.n_max))) {
    throw SpaceMismatch("embed_ion_state: state lives on " + psi.space().describe());
  }
  const int small_f = p.base.n_max + 1;
  const int big_f = p.base.n_max + p.pad + 1;
  Vector v = Vector::Zero(full.dim());
  for (int i = 0; i < psi.space().dim(); ++i) v((i / small_f) * big_f + i % small_f) = psi.amplitude(i);
  return StateVector(full, std::move(v));
}

PropagationResult propagate_checked(const FullIonParams& p, const StateVector& psi0) {
  const FullIonModel model(p);
  const StateVector start = embed_ion_state(p, psi0);

  double dt = p.dt;
  StateVector coarse = evolve(model.propagator(p.t_final, dt), start);
  double change = 0.0;
  for (int h = 1; h <= p.max_halvings; ++h) {
    dt *= 0.5;
    StateVector fine = evolve(model.propagator(p.t_final, dt), start);
    change = std::abs(1.0 - state_fidelity(coarse, fine));
    if (change < p.tol_conv) return {std::move(fine), dt, h, change};
    coarse = std::move(fine);
  }
  throw ConvergenceError("propagate: no convergence after " + std::to_string(p.max_halvings) +
                             " step halvings (dt = " + std::to_string(dt) +
                             ", change = " + std::to_string(change) + ")",
                         dt, change);
}

StateVector propagate(const FullIonParams& p, const StateVector& psi0) {
  return propagate_checked(p, psi0).state;
}

// ---------------------------------------------------------------------------
// Calibration

namespace {

struct PairSpectrum {
  double detuning;   // E(low) - E(high) of the dressed two-level pair
  double splitting;  // |e_a - e_b| of the two pair-dominated eigenvectors
};

// Reads the pair detuning off eigenvectors / eigen-energies: for a two-level
// block the lower-state weights p_a, p_b of the two eigenvectors satisfy
// p_a - p_b = (D / (e_a - e_b)) (p_a + p_b).
PairSpectrum pair_detuning(const Matrix& vectors, const Eigen::VectorXd& energies, int low,
                           int high) {
  int a = -1;
  int b = -1;
  double wa = -1.0;
  double wb = -1.0;
  for (int i = 0; i < vectors.cols(); ++i) {
    const double w = std::norm(vectors(low, i)) + std::norm(vectors(high, i));
    if (w > wa) {
      b = a;
      wb = wa;
      a = i;
      wa = w;
    } else if (w > wb) {
      b = i;
      wb = w;
    }
  }
  const double gap = energies(a) - energies(b);
  const double pa = std::norm(vectors(low, a));
  const double pb = std::norm(vectors(low, b));
  return {gap * (pa - pb) / (pa + pb), std::abs(gap)};
}

}  // namespace

CalibrationResult calibrate_retuning(const FullIonParams& p) {
  p.validate();
  CalibrationResult out;
  if (p.base.omega == 0.0) return out;
  out.retuning = stark_retuning(p.base);
  const double coupling = omega_eff(p.base);
  if (!(coupling > 0.0)) return out;

  const int fmax = p.base.n_max + p.pad;
  const int low = ion_index(fmax, Spin::down, Spin::down, p.base.n_sel);
  const int high = ion_index(fmax, Spin::up, Spin::up, p.base.n_sel + 1);

  for (int it = 1; it <= kMaxCalibrationIterations; ++it) {
    FullIonParams q = p;
    q.retuning = out.retuning;
    Eigen::SelfAdjointEigenSolver<Matrix> solver(FullIonModel(q).corotating_generator().matrix());
    const PairSpectrum spec = pair_detuning(solver.eigenvectors(), solver.eigenvalues(), low, high);
    out.iterations = it;
    out.residual_detuning = spec.detuning;
    out.coupling = 0.5 * spec.splitting;
    if (std::abs(spec.detuning) < kCalibrationTol * coupling) break;
    // Raising both upper levels by D/2 each lowers E(low) - E(high) by D.
    out.retuning.shift_j += 0.5 * spec.detuning;
    out.retuning.shift_k += 0.5 * spec.detuning;
  }
  return out;
}

// ---------------------------------------------------------------------------
// Validation

ValidationReport validate_effective(const FullIonParams& p, const ValidationOptions& opt) {
  p.validate();
  ValidationReport rep;
  const IonGateParams& base = p.base;
  const bool driven = base.omega > 0.0 && base.g0 > 0.0;
  if (driven) {
    rep.warnings = base.warnings();
    rep.omega_eff = omega_eff(base);
  }
  rep.t_gate = rep.omega_eff > 0.0 ? kPi / rep.omega_eff : p.t_final;

  FullIonParams q = p;
  if (driven && opt.calibrate) {
    const CalibrationResult cal = calibrate_retuning(p);
    q.retuning = cal.retuning;
    rep.calibration_residual = cal.residual_detuning;
    rep.coupling_ratio = cal.coupling / rep.omega_eff;
  } else if (driven) {
    q.retuning = stark_retuning(base);
  }
  rep.retuning = q.retuning;
  const FullIonModel model(q);

  const int fmax = base.n_max + p.pad;
  const auto comp = computational_indices(fmax, base.n_sel);
  auto max_change = [&](const Operator& a, const Operator& b) {
    double worst = 0.0;
    for (int idx : comp) {
      const Vector x = a.matrix().col(idx);
      const Vector y = b.matrix().col(idx);
      worst = std::max(worst, std::abs(1.0 - std::norm(x.dot(y))));
    }
    return worst;
  };

  double dt = p.dt;
  Operator coarse = model.propagator(rep.t_gate, dt);
  bool converged = false;
  for (int h = 1; h <= p.max_halvings; ++h) {
    dt *= 0.5;
    Operator fine = model.propagator(rep.t_gate, dt);
    rep.convergence_change = max_change(coarse, fine);
    rep.halvings = h;
    coarse = std::move(fine);
    if (rep.convergence_change < p.tol_conv) {
      converged = true;
      break;
    }
  }
  if (!converged) {
    throw ConvergenceError("validate_effective: gate propagator did not converge after " +
                               std::to_string(p.max_halvings) + " halvings (change " +
                               std::to_string(rep.convergence_change) + ")",
                           dt, rep.convergence_change);
  }
  rep.dt_used = dt;
  const Operator& u = coarse;
  rep.unitarity_defect = u.unitarity_defect();
  if (driven && std::abs(rep.calibration_residual) > kCalibrationTol * rep.omega_eff) {
    rep.warnings.emplace_back("beam retuning did not reach resonance to the requested tolerance");
  }
  if (driven && opt.calibrate && std::abs(rep.coupling_ratio - 1.0) > 0.01) {
    char buf[160];
    std::snprintf(buf, sizeof buf,
                  "full-model pair coupling is %.4g x |Omega_eff|; the pulse length misses a full "
                  "Rabi cycle (delta / nu corrections)",
                  rep.coupling_ratio);
    rep.warnings.emplace_back(buf);
  }

  const Matrix block = restrict_to(u.matrix(), comp);
  rep.correction = fit_qpg_correction(block);
  const Operator corrected = apply_correction(u, rep.correction);

  Matrix ideal = Matrix::Identity(u.dim(), u.dim());
  ideal(comp[0], comp[0]) = -1.0;
  const Operator ideal_op(u.space(), ideal);
  rep.gate_fidelity = subspace_overlap(corrected, ideal_op, basis_projector(u.space(), comp));
  rep.infidelity = 1.0 - rep.gate_fidelity;

  for (int i = 0; i < 4; ++i) {
    const Complex sign = i == 0 ? -1.0 : 1.0;
    rep.state_fidelity_full[i] = std::norm(sign * corrected(comp[i], comp[i]));
    double above = 0.0;
    for (int r = 0; r < u.dim(); ++r) {
      if (ion_labels(r, fmax).n > base.n_sel + 1) above += std::norm(u(r, comp[i]));
    }
    rep.leakage = std::max(rep.leakage, above);
  }

  if (driven) {
    const QpgResult eff = qpg_unitary(base);
    const auto ecomp = computational_indices(base.n_max, base.n_sel);
    for (int i = 0; i < 4; ++i) {
      const Complex sign = i == 0 ? -1.0 : 1.0;
      rep.state_fidelity_effective[i] = std::norm(sign * eff.corrected(ecomp[i], ecomp[i]));
    }
    rep.gate_fidelity_effective = eff.report.fidelity_to_ideal;
  }
  return rep;
}

}  // namespace qpg
