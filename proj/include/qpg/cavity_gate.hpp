#pragma once

// Phase gate on two cavity modes catalysed by a three-level atom.
//
// Spaces (leftmost factor slowest):
//   effective:  Fock_1(n_max) x Fock_2(n_max) x {g, e}
//   full:       Fock_1(n_max) x Fock_2(n_max) x {g, i, e}
// Frequencies in units of Omega_ei.
//
// Coupling convention of the full model: the g <-> i leg absorbs a mode-2
// photon and the i <-> e leg a mode-1 photon,
//
//   H = Delta |i><i| + Omega_ig (|i><g| a_2 + H.c.) + Omega_ei (|e><i| a_1 + H.c.),
//
// so |1,1,g> -> |1,0,i> -> |0,0,e> is a two-step path with amplitude product
// Omega_ig * Omega_ei. Eliminating |i> gives the two-photon coupling
// -(Omega_ei Omega_ig / Delta) (|e><g| a_1 a_2 + H.c.) and conserves
// n_1 + n_2 + rank(atom) with rank(g, i, e) = (0, 1, 2).

#include <string>
#include <vector>

#include "qpg/quantum_core.hpp"

namespace qpg {

struct CavityParams {
  double omega_ei = 1.0;
  double omega_ig = 1.0;
  double delta_big = 30.0;
  int n_max = 2;
  bool compensate_stark = true;

  void validate() const;
  std::vector<std::string> warnings() const;
};

enum class AtomLevel : int { g = 0, i = 1, e = 2 };

HilbertSpace cavity_effective_space(int n_max);
HilbertSpace cavity_full_space(int n_max);

/// Omega_ei * Omega_ig / Delta.
double effective_omega(const CavityParams& p);

/// Omega (|e><g| a_1 a_2 + H.c.) on the effective space. The atomic factor
/// is two-level with g = 0, e = 1.
Operator build_cavity_effective(const CavityParams& p);

/// Evolves psi for t = pi / Omega under the effective Hamiltonian. psi must
/// have the atom in g and both modes in {0, 1}.
StateVector cavity_qpg(const CavityParams& p, const StateVector& psi);

/// Second-order Stark counter-terms of the full model:
///   (Omega_ig^2 / Delta) n_2 |g><g| + (Omega_ei^2 / Delta) (n_1 + 1) |e><e|.
Operator stark_counter_terms(const CavityParams& p);

/// Three-level Hamiltonian; includes the counter-terms when compensate_stark.
Operator build_three_level_full(const CavityParams& p);

/// Logical basis states n_1, n_2 in {0, 1} with the atom in g, ordered
/// |0,0>, |0,1>, |1,0>, |1,1>.
std::vector<int> cavity_logical_indices(const HilbertSpace& space, int ground_label);

struct AdiabaticPoint {
  double delta_big = 0.0;
  double t_gate = 0.0;
  /// |(<00g|U|00g> - <11g|U|11g>) / 2|^2: one iff |1,1,g> acquires -1 relative
  /// to the non-evolving |0,0,g>.
  double fidelity = 0.0;
  double gate_fidelity = 0.0;         // subspace overlap with the logical QPG
  double max_intermediate = 0.0;      // max_t P(i) starting from |1,1,g>
  double intermediate_bound = 0.0;    // 4 (Omega_ei^2 + Omega_ig^2) / Delta^2
  double conservation_defect = 0.0;   // max |[N_exc, H]|
};

struct AdiabaticReport {
  AdiabaticPoint at_params;
  std::vector<AdiabaticPoint> sweep;  // Delta in {10, 30, 100}
  bool monotone = false;              // fidelity strictly increasing along the sweep
  std::vector<std::string> warnings;
};

/// Full-model gate at the parameters' own Delta.
AdiabaticPoint adiabatic_point(const CavityParams& p);

AdiabaticReport validate_adiabatic(const CavityParams& p);

/// Excitation number n_1 + n_2 + rank(atom) on the full space.
Operator excitation_number(int n_max);

}  // namespace qpg
