#pragma once

// Single-pulse phase gate for two individually addressed ions sharing the
// centre-of-mass (CM) mode.
//
// Hilbert space: ion_j (x) ion_k (x) Fock(n_max), ion j is the control.
// Frequencies are in units of the trap frequency nu; hbar = 1.
//
// The effective Hamiltonian couples |dd, n> <-> |uu, n+1> only, with
// coupling magnitude
//
//   eta * Omega_o * g0 * sqrt(n+1) * f_1(n) * |f_0(n) - f_0(n+1)|,
//   Omega_o = Omega^2 / delta,
//
// plus n-dependent Stark shifts. A retuning of the two beams (two scalars and
// a global offset) brings the pair at n = n_sel to resonance; every other
// pair keeps a residual detuning, which is what makes the interaction
// selective.

#include <array>
#include <string>
#include <vector>

#include "qpg/quantum_core.hpp"

namespace qpg {

struct IonGateParams {
  double eta = 0.1;
  double omega = 0.01;  // Raman Rabi frequency
  double delta = 0.1;   // detuning from carrier / first upper sideband
  double phi = 0.0;     // laser phase
  double g0 = 1.0;      // spectator-mode factor, ground-state value
  int n_max = 6;
  int n_sel = 0;

  double omega_o() const { return omega * omega / delta; }

  /// Throws InvalidParameter naming the offending field.
  void validate() const;
  /// Non-fatal notes about leaving the dispersive regime.
  std::vector<std::string> warnings() const;
};

/// Computational basis label of ion j / ion k (0 = down, 1 = up).
enum class Spin : int { down = 0, up = 1 };

HilbertSpace ion_space(int n_max);
int ion_index(int n_max, Spin j, Spin k, int n);

/// |Omega_eff| for the selected pair (n_sel, n_sel + 1).
double omega_eff(const IonGateParams& p);

/// Coupling magnitude between |dd, n> and |uu, n+1>.
double pair_coupling(const IonGateParams& p, int n);

/// Diagonal (self-energy) entry of H_eff at |s_j, s_k, n>.
double self_energy(const IonGateParams& p, Spin j, Spin k, int n);

Operator build_effective_hamiltonian(const IonGateParams& p);

/// Beam retuning bringing |dd, n_sel> and |uu, n_sel+1> to degeneracy.
/// The compensation operator is
///   global_offset * I + shift_j * P_up(j) + shift_k * P_up(k).
struct StarkRetuning {
  double global_offset = 0.0;
  double shift_j = 0.0;
  double shift_k = 0.0;
};

StarkRetuning stark_retuning(const IonGateParams& p);
Operator stark_operator(const HilbertSpace& space, const StarkRetuning& r);
Operator stark_compensation(const IonGateParams& p);

/// Detuning of the pair (|dd, n>, |uu, n+1>) left after compensation.
double residual_detuning(const IonGateParams& p, int n);

/// Largest transfer probability of the off-resonant pair starting at n,
/// from the two-level Rabi formula: c^2 / (c^2 + (D/2)^2).
double off_resonant_transfer_bound(const IonGateParams& p, int n);

/// Two-level transfer probability of the pair starting at n after time t.
double off_resonant_transfer(const IonGateParams& p, int n, double t);

/// H_eff + C.
Operator compensated_hamiltonian(const IonGateParams& p);
Operator compensated_propagator(const IonGateParams& p, double t);

/// Local phase gates Z(a) (x) Z(b) times exp(i c), Z(x) = diag(1, e^{ix}).
struct LocalPhaseCorrection {
  double control = 0.0;
  double target = 0.0;
  double global = 0.0;
};

/// Fits the correction that maps the diagonal of a 4x4 computational block
/// onto (-1, 1, 1, 1). `residual` receives max |corrected - diag(-1,1,1,1)|.
LocalPhaseCorrection fit_qpg_correction(const Matrix& block, double* residual = nullptr);

/// Applies a correction to an operator on ion_j (x) ion_k (x) Fock.
Operator apply_correction(const Operator& u, const LocalPhaseCorrection& c);
Matrix apply_correction_4x4(const Matrix& block, const LocalPhaseCorrection& c);

/// Computational basis indices (dd, du, ud, uu) at Fock level n.
std::array<int, 4> computational_indices(int n_max, int n);

struct GateReport {
  double t_gate = 0.0;
  double omega_eff = 0.0;
  double fidelity_to_ideal = 0.0;
  std::array<double, 4> raw_local_phases{};  // dd, du, ud, uu
  double leakage = 0.0;
  LocalPhaseCorrection correction;
  StarkRetuning retuning;
  double residual = 0.0;             // max |corrected block - QPG|
  double off_diagonal_weight = 0.0;  // leakage plus in-block off-diagonal population
  bool quality_ok = false;
  std::vector<std::string> warnings;
};

struct QpgResult {
  Operator raw;        // exp(-i (H_eff + C) t_gate)
  Operator corrected;  // after local phase correction
  GateReport report;
};

/// Off-diagonal weight above which the gate is reported as failed.
inline constexpr double kGateQualityTol = 1e-6;

QpgResult qpg_unitary(const IonGateParams& p);

/// 8x8 view on ion_j (x) ion_k (x) {|0>, |1>} at Rabi angle theta.
struct ThreeQubitView {
  double theta = 0.0;
  double time = 0.0;
  Matrix raw;                    // restricted propagator
  Matrix corrected;              // with the diagonal phases of the six spectators removed
  std::array<double, 8> phases{};  // removed phases (0 on the rotating pair)
  double pair_defect = 0.0;      // max |block - rotation(theta)| up to the coupling phase
  double spectator_defect = 0.0;  // max |corrected - I| on the six spectator states
  double leakage = 0.0;          // population of |dd,1> leaving the 8-dim space
  double leakage_oracle = 0.0;   // two-level prediction for the same quantity
  double leakage_bound = 0.0;    // c^2 / (c^2 + (D/2)^2)
  bool leakage_ok = false;       // leakage within a factor 2 of the oracle
};

/// Lower bound on oracle probability below which leakage ratios are not compared.
inline constexpr double kLeakageFloor = 1e-14;

ThreeQubitView three_qubit_view(const IonGateParams& p, double theta);

}  // namespace qpg
