#include "qpg/ion_gate.hpp"

#include <algorithm>
#include <cmath>

#include "qpg/special_functions.hpp"

namespace qpg {

namespace {

double f0(const IonGateParams& p, int n) { return f_factor(n, 0, p.eta); }
double f1(const IonGateParams& p, int n) { return f_factor(n, 1, p.eta); }

double wrap_phase(double x) { return std::remainder(x, 2.0 * kPi); }

}  // namespace

void IonGateParams::validate() const {
  if (!(eta > 0.0 && eta < 1.0)) throw InvalidParameter("eta", "must satisfy 0 < eta < 1");
  if (!(omega > 0.0)) throw InvalidParameter("omega", "must be > 0");
  if (!(delta > omega)) throw InvalidParameter("delta", "must exceed omega (Omega < delta)");
  if (!(delta < 1.0)) throw InvalidParameter("delta", "must be < 1 (delta < nu)");
  if (!std::isfinite(phi)) throw InvalidParameter("phi", "must be finite");
  if (!(g0 >= 0.0) || !std::isfinite(g0)) throw InvalidParameter("g0", "must be >= 0");
  if (n_sel < 0) throw InvalidParameter("n_sel", "must be >= 0");
  if (n_max < n_sel + 3) throw InvalidParameter("n_max", "must be >= n_sel + 3");
}

std::vector<std::string> IonGateParams::warnings() const {
  std::vector<std::string> out;
  if (omega / delta > 0.2) out.emplace_back("omega/delta > 0.2: outside the dispersive regime");
  if (delta > 0.2) out.emplace_back("delta > 0.2: detuning not small against the trap frequency");
  return out;
}

HilbertSpace ion_space(int n_max) {
  return HilbertSpace::qubit() * HilbertSpace::qubit() * HilbertSpace::fock(n_max);
}

int ion_index(int n_max, Spin j, Spin k, int n) {
  return (2 * static_cast<int>(j) + static_cast<int>(k)) * (n_max + 1) + n;
}

std::array<int, 4> computational_indices(int n_max, int n) {
  return {ion_index(n_max, Spin::down, Spin::down, n), ion_index(n_max, Spin::down, Spin::up, n),
          ion_index(n_max, Spin::up, Spin::down, n), ion_index(n_max, Spin::up, Spin::up, n)};
}

double pair_coupling(const IonGateParams& p, int n) {
  return p.eta * p.omega_o() * p.g0 * std::sqrt(n + 1.0) * f1(p, n) *
         std::abs(f0(p, n) - f0(p, n + 1));
}

double omega_eff(const IonGateParams& p) { return pair_coupling(p, p.n_sel); }

double self_energy(const IonGateParams& p, Spin j, Spin k, int n) {
  const double eta2 = p.eta * p.eta;
  double e = 0.0;
  if (j == Spin::up) {
    // eta^2 a^dag F_1^2 a
    e += n > 0 ? eta2 * n * std::pow(f1(p, n - 1), 2) : 0.0;
  } else {
    // -eta^2 F_1 a a^dag F_1
    e -= eta2 * (n + 1.0) * std::pow(f1(p, n), 2);
  }
  const double stark_k = std::pow(f0(p, n), 2);
  e += k == Spin::up ? -stark_k : stark_k;
  return p.omega_o() * p.g0 * e;
}

Operator build_effective_hamiltonian(const IonGateParams& p) {
  p.validate();
  const int nm = p.n_max;
  const HilbertSpace space = ion_space(nm);
  Matrix h = Matrix::Zero(space.dim(), space.dim());

  for (int sj = 0; sj < 2; ++sj)
    for (int sk = 0; sk < 2; ++sk)
      for (int n = 0; n <= nm; ++n) {
        const int i = ion_index(nm, Spin(sj), Spin(sk), n);
        h(i, i) = self_energy(p, Spin(sj), Spin(sk), n);
      }

  // i eta Omega_o g0 e^{2 i phi} S+_j S+_k [a^dag F_0 - F_0 a^dag] F_1 + H.c.
  // [a^dag F_0 - F_0 a^dag] F_1 |n> = sqrt(n+1) (f_0(n) - f_0(n+1)) f_1(n) |n+1>
  const Complex prefactor = kI * p.eta * p.omega_o() * p.g0 * std::polar(1.0, 2.0 * p.phi);
  for (int n = 0; n < nm; ++n) {
    const Complex element =
        prefactor * std::sqrt(n + 1.0) * (f0(p, n) - f0(p, n + 1)) * f1(p, n);
    const int from = ion_index(nm, Spin::down, Spin::down, n);
    const int to = ion_index(nm, Spin::up, Spin::up, n + 1);
    h(to, from) = element;
    h(from, to) = std::conj(element);
  }
  return Operator(space, std::move(h));
}

StarkRetuning stark_retuning(const IonGateParams& p) {
  p.validate();
  const int s = p.n_sel;
  const double e_low = self_energy(p, Spin::down, Spin::down, s);
  const double e_high = self_energy(p, Spin::up, Spin::up, s + 1);
  const double detuning = e_low - e_high;
  return {-e_low, 0.5 * detuning, 0.5 * detuning};
}

Operator stark_operator(const HilbertSpace& space, const StarkRetuning& r) {
  Operator c = Complex(r.global_offset) * Operator::identity(space);
  c += Complex(r.shift_j) * embed(space, 0, projector2(1));
  c += Complex(r.shift_k) * embed(space, 1, projector2(1));
  return c;
}

Operator stark_compensation(const IonGateParams& p) {
  return stark_operator(ion_space(p.n_max), stark_retuning(p));
}

double residual_detuning(const IonGateParams& p, int n) {
  const StarkRetuning r = stark_retuning(p);
  const double low = self_energy(p, Spin::down, Spin::down, n) + r.global_offset;
  const double high = self_energy(p, Spin::up, Spin::up, n + 1) + r.global_offset +
                      r.shift_j + r.shift_k;
  return low - high;
}

double off_resonant_transfer_bound(const IonGateParams& p, int n) {
  const double c = pair_coupling(p, n);
  const double half = 0.5 * residual_detuning(p, n);
  const double denom = c * c + half * half;
  return denom > 0.0 ? c * c / denom : 0.0;
}

double off_resonant_transfer(const IonGateParams& p, int n, double t) {
  const double c = pair_coupling(p, n);
  const double half = 0.5 * residual_detuning(p, n);
  const double rabi = std::sqrt(c * c + half * half);
  if (rabi == 0.0) return 0.0;
  return c * c / (rabi * rabi) * std::pow(std::sin(rabi * t), 2);
}

Operator compensated_hamiltonian(const IonGateParams& p) {
  return build_effective_hamiltonian(p) + stark_compensation(p);
}

Operator compensated_propagator(const IonGateParams& p, double t) {
  return expm_unitary(compensated_hamiltonian(p), t);
}

LocalPhaseCorrection fit_qpg_correction(const Matrix& block, double* residual) {
  const double t00 = std::arg(block(0, 0));
  const double t01 = std::arg(block(1, 1));
  const double t10 = std::arg(block(2, 2));
  LocalPhaseCorrection c;
  c.global = wrap_phase(kPi - t00);
  c.target = wrap_phase(-t01 - c.global);
  c.control = wrap_phase(-t10 - c.global);
  if (residual) {
    Matrix ideal = Matrix::Identity(4, 4);
    ideal(0, 0) = -1.0;
    *residual = (apply_correction_4x4(block, c) - ideal).cwiseAbs().maxCoeff();
  }
  return c;
}

Matrix apply_correction_4x4(const Matrix& block, const LocalPhaseCorrection& c) {
  Matrix out = block;
  for (int r = 0; r < 4; ++r) {
    const int sj = r / 2;
    const int sk = r % 2;
    out.row(r) *= std::polar(1.0, c.global + sj * c.control + sk * c.target);
  }
  return out;
}

Operator apply_correction(const Operator& u, const LocalPhaseCorrection& c) {
  const HilbertSpace& space = u.space();
  Matrix out = u.matrix();
  const int block = space.dim() / 4;
  for (int r = 0; r < space.dim(); ++r) {
    const int spins = r / block;
    const int sj = spins / 2;
    const int sk = spins % 2;
    out.row(r) *= std::polar(1.0, c.global + sj * c.control + sk * c.target);
  }
  return Operator(space, std::move(out));
}

QpgResult qpg_unitary(const IonGateParams& p) {
  p.validate();
  GateReport rep;
  rep.warnings = p.warnings();
  rep.omega_eff = omega_eff(p);
  if (!(rep.omega_eff > 0.0)) {
    throw InvalidParameter("g0", "effective Rabi frequency vanishes; no finite gate time");
  }
  rep.t_gate = kPi / rep.omega_eff;
  rep.retuning = stark_retuning(p);

  const Operator raw = compensated_propagator(p, rep.t_gate);
  const auto comp = computational_indices(p.n_max, p.n_sel);
  const Matrix block = restrict_to(raw.matrix(), comp);
  for (int i = 0; i < 4; ++i) rep.raw_local_phases[i] = std::arg(block(i, i));

  rep.correction = fit_qpg_correction(block, &rep.residual);
  Operator corrected = apply_correction(raw, rep.correction);

  for (int c = 0; c < 4; ++c) {
    double inside = 0.0;
    for (int r = 0; r < 4; ++r) inside += std::norm(block(r, c));
    rep.leakage = std::max(rep.leakage, std::max(0.0, 1.0 - inside));
    rep.off_diagonal_weight =
        std::max(rep.off_diagonal_weight, std::max(0.0, 1.0 - std::norm(block(c, c))));
  }

  Matrix ideal = Matrix::Identity(raw.dim(), raw.dim());
  ideal(comp[0], comp[0]) = -1.0;
  rep.fidelity_to_ideal = subspace_overlap(corrected, Operator(raw.space(), std::move(ideal)),
                                           basis_projector(raw.space(), comp));
  rep.quality_ok = rep.off_diagonal_weight < kGateQualityTol && rep.residual < 1e-3;
  return {raw, std::move(corrected), std::move(rep)};
}

ThreeQubitView three_qubit_view(const IonGateParams& p, double theta) {
  p.validate();
  if (p.n_sel != 0) throw PreconditionError("three_qubit_view requires n_sel = 0");
  if (p.n_max < 3) throw PreconditionError("three_qubit_view requires n_max >= 3");
  const double w = omega_eff(p);
  if (!(w > 0.0)) throw InvalidParameter("g0", "effective Rabi frequency vanishes");

  ThreeQubitView v;
  v.theta = theta;
  v.time = theta / w;
  const Operator u = compensated_propagator(p, v.time);

  std::array<int, 8> idx{};
  for (int sj = 0; sj < 2; ++sj)
    for (int sk = 0; sk < 2; ++sk)
      for (int n = 0; n < 2; ++n) idx[4 * sj + 2 * sk + n] = ion_index(p.n_max, Spin(sj), Spin(sk), n);
  v.raw = restrict_to(u.matrix(), idx);

  constexpr int kLow = 0;   // |dd,0>
  constexpr int kHigh = 7;  // |uu,1>
  v.corrected = v.raw;
  for (int s = 0; s < 8; ++s) {
    if (s == kLow || s == kHigh) continue;
    v.phases[s] = std::arg(v.raw(s, s));
    v.corrected.row(s) *= std::polar(1.0, -v.phases[s]);
  }

  const double c = std::cos(theta);
  const double sn = std::abs(std::sin(theta));
  v.pair_defect = std::max({std::abs(v.raw(kLow, kLow) - c), std::abs(v.raw(kHigh, kHigh) - c),
                            std::abs(std::abs(v.raw(kHigh, kLow)) - sn),
                            std::abs(std::abs(v.raw(kLow, kHigh)) - sn)});

  for (int s = 0; s < 8; ++s) {
    if (s == kLow || s == kHigh) continue;
    for (int r = 0; r < 8; ++r) {
      const Complex target = r == s ? Complex(1.0) : Complex(0.0);
      v.spectator_defect = std::max(v.spectator_defect, std::abs(v.corrected(r, s) - target));
    }
  }

  // |dd,1> is the only spectator with a partner outside the 8-dim space.
  constexpr int kLeaky = 1;
  double inside = 0.0;
  for (int r = 0; r < 8; ++r) inside += std::norm(v.raw(r, kLeaky));
  v.leakage = std::max(0.0, 1.0 - inside);
  v.leakage_oracle = off_resonant_transfer(p, 1, v.time);
  v.leakage_bound = off_resonant_transfer_bound(p, 1);
  if (v.leakage_oracle < kLeakageFloor) {
    v.leakage_ok = v.leakage < kLeakageFloor * 2.0 + 1e-13;
  } else {
    const double ratio = v.leakage / v.leakage_oracle;
    v.leakage_ok = ratio >= 0.5 && ratio <= 2.0;
  }
  return v;
}

}  // namespace qpg
