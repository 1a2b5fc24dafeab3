#include "qpg/cavity_gate.hpp"

#include <algorithm>
#include <array>
#include <cmath>

namespace qpg {

namespace {

constexpr std::array<double, 3> kSweepDeltas{10.0, 30.0, 100.0};

Matrix atom3_transition(AtomLevel to, AtomLevel from) {
  Matrix m = Matrix::Zero(3, 3);
  m(static_cast<int>(to), static_cast<int>(from)) = 1.0;
  return m;
}

}  // namespace

void CavityParams::validate() const {
  if (!std::isfinite(omega_ei) || omega_ei < 0.0) throw InvalidParameter("omega_ei", "must be >= 0");
  if (!std::isfinite(omega_ig) || omega_ig < 0.0) throw InvalidParameter("omega_ig", "must be >= 0");
  if (!(delta_big > 0.0) || !std::isfinite(delta_big)) {
    throw InvalidParameter("delta_big", "must be > 0");
  }
  if (n_max < 1) throw InvalidParameter("n_max", "must be >= 1");
}

std::vector<std::string> CavityParams::warnings() const {
  std::vector<std::string> out;
  const double ratio = (omega_ei * omega_ei + omega_ig * omega_ig) / (delta_big * delta_big);
  if (ratio > 0.05) out.emplace_back("(Omega_ei^2 + Omega_ig^2) / Delta^2 > 0.05: adiabatic elimination is poor");
  return out;
}

HilbertSpace cavity_effective_space(int n_max) {
  return HilbertSpace::fock(n_max) * HilbertSpace::fock(n_max) * HilbertSpace::qubit();
}

HilbertSpace cavity_full_space(int n_max) {
  return HilbertSpace::fock(n_max) * HilbertSpace::fock(n_max) * HilbertSpace::atom3();
}

double effective_omega(const CavityParams& p) {
  if (p.delta_big == 0.0) throw InvalidParameter("delta_big", "must be nonzero");
  return p.omega_ei * p.omega_ig / p.delta_big;
}

Operator build_cavity_effective(const CavityParams& p) {
  p.validate();
  const HilbertSpace space = cavity_effective_space(p.n_max);
  const Operator a1 = embed(space, 0, annihilation(p.n_max).matrix());
  const Operator a2 = embed(space, 1, annihilation(p.n_max).matrix());
  const Operator eg = embed(space, 2, raising2());
  const Operator x = eg * a1 * a2;
  return Complex(effective_omega(p)) * (x + x.adjoint());
}

std::vector<int> cavity_logical_indices(const HilbertSpace& space, int ground_label) {
  std::vector<int> out;
  for (int n1 = 0; n1 < 2; ++n1)
    for (int n2 = 0; n2 < 2; ++n2) out.push_back(space.index({n1, n2, ground_label}));
  return out;
}

StateVector cavity_qpg(const CavityParams& p, const StateVector& psi) {
  p.validate();
  const HilbertSpace space = cavity_effective_space(p.n_max);
  if (!(psi.space() == space)) throw SpaceMismatch("cavity_qpg: state is not on " + space.describe());
  const auto logical = cavity_logical_indices(space, 0);
  double outside = 0.0;
  for (int i = 0; i < space.dim(); ++i) {
    if (std::find(logical.begin(), logical.end(), i) == logical.end()) outside += psi.population(i);
  }
  if (outside > 1e-12) {
    throw PreconditionError("cavity_qpg: input must have the atom in g and both modes in {0, 1}");
  }
  const double w = effective_omega(p);
  if (!(w > 0.0)) throw InvalidParameter("omega_ig", "effective Rabi frequency vanishes");
  return evolve(expm_unitary(build_cavity_effective(p), kPi / w), psi);
}

Operator stark_counter_terms(const CavityParams& p) {
  p.validate();
  const HilbertSpace space = cavity_full_space(p.n_max);
  Matrix m = Matrix::Zero(space.dim(), space.dim());
  for (int i = 0; i < space.dim(); ++i) {
    const auto l = space.labels(i);
    const int n1 = l[0];
    const int n2 = l[1];
    const auto level = static_cast<AtomLevel>(l[2]);
    if (level == AtomLevel::g) {
      m(i, i) = p.omega_ig * p.omega_ig * n2 / p.delta_big;
    } else if (level == AtomLevel::e && n1 < p.n_max) {
      m(i, i) = p.omega_ei * p.omega_ei * (n1 + 1.0) / p.delta_big;
    }
  }
  return Operator(space, std::move(m));
}

Operator build_three_level_full(const CavityParams& p) {
  p.validate();
  const HilbertSpace space = cavity_full_space(p.n_max);
  const Matrix a = annihilation(p.n_max).matrix();
  const Operator a1 = embed(space, 0, a);
  const Operator a2 = embed(space, 1, a);
  const Operator ig = embed(space, 2, atom3_transition(AtomLevel::i, AtomLevel::g));
  const Operator ei = embed(space, 2, atom3_transition(AtomLevel::e, AtomLevel::i));
  const Operator ii = embed(space, 2, atom3_transition(AtomLevel::i, AtomLevel::i));

  const Operator absorb_2 = Complex(p.omega_ig) * (ig * a2);
  const Operator absorb_1 = Complex(p.omega_ei) * (ei * a1);
  Operator h = Complex(p.delta_big) * ii;
  h += absorb_2 + absorb_2.adjoint();
  h += absorb_1 + absorb_1.adjoint();
  if (p.compensate_stark) h += stark_counter_terms(p);
  return h;
}

Operator excitation_number(int n_max) {
  const HilbertSpace space = cavity_full_space(n_max);
  Matrix m = Matrix::Zero(space.dim(), space.dim());
  for (int i = 0; i < space.dim(); ++i) {
    const auto l = space.labels(i);
    m(i, i) = static_cast<double>(l[0] + l[1] + l[2]);
  }
  return Operator(space, std::move(m));
}

AdiabaticPoint adiabatic_point(const CavityParams& p) {
  p.validate();
  AdiabaticPoint pt;
  pt.delta_big = p.delta_big;
  const double w = effective_omega(p);
  if (!(w > 0.0)) throw InvalidParameter("omega_ig", "effective Rabi frequency vanishes");
  pt.t_gate = kPi / w;
  pt.intermediate_bound =
      4.0 * (p.omega_ei * p.omega_ei + p.omega_ig * p.omega_ig) / (p.delta_big * p.delta_big);

  const Operator h = build_three_level_full(p);
  const Operator nexc = excitation_number(p.n_max);
  pt.conservation_defect = (nexc * h - h * nexc).matrix().cwiseAbs().maxCoeff();

  const HilbertSpace& space = h.space();
  Eigen::SelfAdjointEigenSolver<Matrix> solver(h.matrix());
  const Matrix& v = solver.eigenvectors();
  const Eigen::VectorXd& e = solver.eigenvalues();
  auto propagator_at = [&](double t) {
    Vector ph(e.size());
    for (int k = 0; k < e.size(); ++k) ph(k) = std::polar(1.0, -e(k) * t);
    return Matrix(v * ph.asDiagonal() * v.adjoint());
  };

  const Operator u(space, propagator_at(pt.t_gate));
  const auto logical = cavity_logical_indices(space, static_cast<int>(AtomLevel::g));
  const Complex ref = u(logical[0], logical[0]);
  const Complex flipped = u(logical[3], logical[3]);
  pt.fidelity = std::norm(0.5 * (ref - flipped));

  Matrix ideal = Matrix::Identity(space.dim(), space.dim());
  ideal(logical[3], logical[3]) = -1.0;
  pt.gate_fidelity = subspace_overlap(u, Operator(space, std::move(ideal)),
                                      basis_projector(space, logical));

  // Intermediate population from |1,1,g>, sampled at 32 points per fastest
  // oscillation of the spectrum.
  const Vector coeff = v.adjoint() * Vector::Unit(space.dim(), logical[3]);
  std::vector<int> intermediate;
  for (int i = 0; i < space.dim(); ++i) {
    if (space.labels(i)[2] == static_cast<int>(AtomLevel::i)) intermediate.push_back(i);
  }
  const double spread = e.maxCoeff() - e.minCoeff();
  const long long samples = std::clamp<long long>(
      static_cast<long long>(std::ceil(32.0 * pt.t_gate * spread / (2.0 * kPi))), 2000, 2000000);
  const Matrix vi = [&] {
    Matrix rows(intermediate.size(), v.cols());
    for (std::size_t r = 0; r < intermediate.size(); ++r) rows.row(r) = v.row(intermediate[r]);
    return rows;
  }();
  Vector ph(e.size());
  for (long long s = 0; s <= samples; ++s) {
    const double t = pt.t_gate * static_cast<double>(s) / static_cast<double>(samples);
    for (int k = 0; k < e.size(); ++k) ph(k) = coeff(k) * std::polar(1.0, -e(k) * t);
    pt.max_intermediate = std::max(pt.max_intermediate, (vi * ph).squaredNorm());
  }
  return pt;
}

AdiabaticReport validate_adiabatic(const CavityParams& p) {
  AdiabaticReport rep;
  rep.warnings = p.warnings();
  rep.at_params = adiabatic_point(p);
  for (double d : kSweepDeltas) {
    CavityParams q = p;
    q.delta_big = d;
    rep.sweep.push_back(adiabatic_point(q));
  }
  rep.monotone = true;
  for (std::size_t i = 1; i < rep.sweep.size(); ++i) {
    if (!(rep.sweep[i].fidelity > rep.sweep[i - 1].fidelity)) rep.monotone = false;
  }
  return rep;
}

}  // namespace qpg
