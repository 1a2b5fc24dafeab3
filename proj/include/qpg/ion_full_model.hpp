#pragma once

// Time-dependent two-ion + CM-mode model used to check the effective
// Hamiltonian of ion_gate.hpp outside the rotating-wave picture.
//
// In the interaction picture with respect to the internal and vibrational
// free evolution, and after dropping terms at optical frequencies only,
//
//   H(t) = Omega e^{i phi} S+_j D(t) e^{-i(1-delta)t}
//        + Omega e^{i phi} S+_k D(t) e^{-i delta t} + H.c.,
//   D(t) = exp(i eta (a e^{-it} + a^dag e^{it})),
//
// on ion_j (x) ion_k (x) Fock(n_max + pad), in units of the trap frequency.
// All vibrational sidebands are kept. A beam retuning enters as the static
// diagonal term of `StarkRetuning`.
//
// Time stepping uses the exponential midpoint rule. When delta is rational
// (delta = p/q) H(t) has period 2 pi q and long pulses are assembled from
// the one-period propagator raised to an integer power.

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "qpg/ion_gate.hpp"
#include "qpg/quantum_core.hpp"

namespace qpg {

struct FullIonParams {
  IonGateParams base;
  double dt = 2.0 * kPi / 100.0;
  double t_final = 1.0;
  double tol_conv = 1e-6;
  int pad = 10;
  int max_halvings = 3;
  bool beam_i = true;   // sideband beam on ion j
  bool beam_ii = true;  // carrier beam on ion k
  StarkRetuning retuning;

  /// Largest admissible step: 50 steps per trap period.
  static constexpr double kMaxStep = 2.0 * kPi / 50.0;

  /// Like IonGateParams::validate but Omega = 0 is allowed.
  void validate() const;
};

HilbertSpace full_ion_space(const FullIonParams& p);

/// Stateless evaluator for H(t) and its propagators; caches D(0).
class FullIonModel {
 public:
  explicit FullIonModel(FullIonParams p);

  const FullIonParams& params() const noexcept { return params_; }
  const HilbertSpace& space() const noexcept { return space_; }
  int fock_max() const noexcept { return params_.base.n_max + params_.pad; }

  /// H(t) without the retuning term.
  Operator hamiltonian_at(double t) const;
  /// Static retuning term.
  const Operator& retuning_operator() const noexcept { return retuning_; }

  /// Product of midpoint steps covering [0, span] with `steps` equal steps.
  Matrix stepped(double span, int steps) const;

  /// Period of H(t) if delta is a rational with denominator <= 10000.
  std::optional<double> period() const;

  /// Propagator from 0 to t with step at most dt. Uses the one-period
  /// propagator when H(t) is periodic and t spans several periods.
  Operator propagator(double t, double dt) const;
  /// One-period propagator with step at most dt (requires a period).
  Operator period_propagator(double dt) const;

  /// Exact propagator from the time-independent co-rotating generator.
  /// Independent of time stepping; used as an oracle.
  Operator exact_propagator(double t) const;
  /// Time-independent generator K with U(t) = exp(-i G t) exp(-i K t).
  Operator corotating_generator() const;

 private:
  FullIonParams params_;
  HilbertSpace space_;
  Matrix d0_;          // exp(i eta (a + a^dag)) on the padded Fock space
  Operator retuning_;  // diagonal
  Eigen::VectorXd rotation_rates_;  // diagonal of G
};

Operator hamiltonian_at(const FullIonParams& p, double t);

struct PropagationResult {
  StateVector state;
  double dt_used = 0.0;
  int halvings = 0;
  double last_change = 0.0;  // |1 - fidelity| between the two finest runs
};

/// Propagates psi0 to p.t_final; psi0 may live on the unpadded ion space,
/// in which case it is embedded. Throws ConvergenceError when halving dt
/// p.max_halvings times does not bring the change below p.tol_conv.
PropagationResult propagate_checked(const FullIonParams& p, const StateVector& psi0);
StateVector propagate(const FullIonParams& p, const StateVector& psi0);

/// Lifts a state on ion_space(n_max) into the padded space.
StateVector embed_ion_state(const FullIonParams& p, const StateVector& psi);

struct CalibrationResult {
  StarkRetuning retuning;
  double residual_detuning = 0.0;
  double coupling = 0.0;  // half the splitting of the dressed pair at resonance
  int iterations = 0;
};

/// Retunes the beams so that |dd, n_sel> and |uu, n_sel + 1> are resonant in
/// the full model, starting from the effective-model retuning. The pair
/// detuning is read off the co-rotating generator, which fixes the one-period
/// propagator exactly, so the result does not depend on a time step.
CalibrationResult calibrate_retuning(const FullIonParams& p);

struct ValidationOptions {
  bool calibrate = true;
};

struct ValidationReport {
  double t_gate = 0.0;
  double omega_eff = 0.0;
  double dt_used = 0.0;
  int halvings = 0;
  double convergence_change = 0.0;
  StarkRetuning retuning;
  double calibration_residual = 0.0;
  double coupling_ratio = 0.0;      // full-model pair coupling / |Omega_eff|
  std::array<double, 4> state_fidelity_full{};       // dd, du, ud, uu
  std::array<double, 4> state_fidelity_effective{};  // effective model, same metric
  double gate_fidelity = 0.0;       // subspace overlap full vs ideal QPG
  double gate_fidelity_effective = 0.0;
  double infidelity = 0.0;          // 1 - gate_fidelity
  double leakage = 0.0;             // population above n_sel + 1
  double unitarity_defect = 0.0;
  LocalPhaseCorrection correction;
  std::vector<std::string> warnings;
};

/// Runs the gate pulse pi/|Omega_eff| through the full model from each
/// computational state (x) |n_sel> and compares with the corrected QPG.
/// For Omega = 0 the pulse length is p.t_final.
ValidationReport validate_effective(const FullIonParams& p, const ValidationOptions& opt = {});

}  // namespace qpg
