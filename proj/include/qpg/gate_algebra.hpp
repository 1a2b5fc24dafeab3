#pragma once

// Ideal two-qubit gates and equivalence up to local phase gates.
//
// Basis order (|dd>, |du>, |ud>, |uu>); the first label is the control.

#include "qpg/quantum_core.hpp"

namespace qpg {

class TwoQubitGate {
 public:
  /// Throws Error unless `matrix` is 4x4 and unitary within 1e-10.
  explicit TwoQubitGate(Matrix matrix);

  const Matrix& matrix() const noexcept { return matrix_; }
  Complex operator()(int r, int c) const { return matrix_(r, c); }
  Vector apply(const Vector& amplitudes) const { return matrix_ * amplitudes; }

 private:
  Matrix matrix_;
};

TwoQubitGate operator*(const TwoQubitGate& a, const TwoQubitGate& b);

TwoQubitGate ideal_qpg();
TwoQubitGate ideal_cnot();
TwoQubitGate ideal_swap();

/// Target rotation |d> -> (|d> - |u>)/sqrt2, |u> -> (|d> + |u>)/sqrt2.
/// Not the symmetric Hadamard: R^2 = [[0, 1], [-1, 0]], R^4 = -I, order 8.
Matrix target_rotation();

/// Smallest k in [1, max_power] with r^k = I within tol, or 0.
int rotation_order(const Matrix& r, int max_power = 64, double tol = 1e-12);

/// (I (x) r) g (I (x) r).
TwoQubitGate target_sandwich(const TwoQubitGate& g, const Matrix& r);

/// corrected = e^{i global} (Z(control_after) (x) Z(target_after)) a
///             (Z(control_before) (x) Z(target_before)),  Z(x) = diag(1, e^{ix}).
struct LocalPhases {
  double control_before = 0.0;
  double target_before = 0.0;
  double control_after = 0.0;
  double target_after = 0.0;
  double global = 0.0;
};

TwoQubitGate apply_local_phases(const TwoQubitGate& a, const LocalPhases& ph);

struct PhaseEquivalence {
  bool equivalent = false;
  LocalPhases phases;
  double distance = 0.0;     // max |corrected(a) - b| at the fitted phases
  double lower_bound = 0.0;  // max ||a_ij| - |b_ij||; no phase choice can beat it
};

inline constexpr double kEquivalenceTol = 1e-8;

/// Deterministic search: grid of step pi/16 on the four local angles (global
/// phase solved in closed form), then exact coordinate descent on the
/// Frobenius distance from the best grid points.
PhaseEquivalence equal_up_to_local_phases(const TwoQubitGate& a, const TwoQubitGate& b);

struct CnotRecipe {
  TwoQubitGate composition;  // (I (x) R) QPG (I (x) R)
  TwoQubitGate corrected;    // after the fitted local phases
  LocalPhases phases;
  double distance = 0.0;
};

/// Turns a phase gate into a CNOT with the target rotation on both sides,
/// then fits the local phases. Throws RecipeMismatch when no phases bring
/// the composition within 1e-8 of the CNOT.
CnotRecipe cnot_from_qpg(const TwoQubitGate& qpg);

/// Purity of the control qubit's reduced state.
double control_purity(const Vector& amplitudes);

}  // namespace qpg
