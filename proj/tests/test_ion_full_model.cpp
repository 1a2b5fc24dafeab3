#include <doctest.h>

#include "oracles.hpp"
#include "qpg/ion_full_model.hpp"

using namespace qpg;

namespace {

FullIonParams small_params() {
  FullIonParams f;
  f.base.n_max = 3;
  f.pad = 4;
  f.base.omega = 0.02;
  return f;
}

double max_abs(const Matrix& m) { return m.cwiseAbs().maxCoeff(); }

// Gate fidelity of the exact propagator at t = pi / |Omega_eff| after calibration.
double exact_gate_fidelity(double eta, double omega, double delta, double phi) {
  FullIonParams f;
  f.base.eta = eta;
  f.base.omega = omega;
  f.base.delta = delta;
  f.base.phi = phi;
  f.retuning = calibrate_retuning(f).retuning;
  const FullIonModel m(f);
  const Operator u = m.exact_propagator(kPi / omega_eff(f.base));
  const auto comp = computational_indices(m.fock_max(), 0);
  const LocalPhaseCorrection c = fit_qpg_correction(restrict_to(u.matrix(), comp));
  const Operator cu = apply_correction(u, c);
  Matrix ideal = Matrix::Identity(u.dim(), u.dim());
  ideal(comp[0], comp[0]) = -1.0;
  return subspace_overlap(cu, Operator(u.space(), ideal), basis_projector(u.space(), comp));
}

}  // namespace

TEST_SUITE("ion_full_model") {
  TEST_CASE("parameter validation") {
    FullIonParams f = small_params();
    CHECK_NOTHROW(f.validate());
    f.dt = 0.2;
    CHECK_THROWS_AS(f.validate(), InvalidParameter);
    f = small_params();
    f.pad = 2;
    CHECK_THROWS_AS(f.validate(), InvalidParameter);
    f = small_params();
    f.base.omega = 0.0;
    CHECK_NOTHROW(f.validate());
  }

  TEST_CASE("zero drive gives a zero Hamiltonian and the identity") {
    FullIonParams f = small_params();
    f.base.omega = 0.0;
    const FullIonModel m(f);
    for (double t : {0.0, 0.3, 2.0}) CHECK(max_abs(m.hamiltonian_at(t).matrix()) == 0.0);
    const Operator u = m.propagator(5.0, f.dt);
    CHECK(max_abs(u.matrix() - Matrix::Identity(u.dim(), u.dim())) < 1e-14);
    // the identity overlaps the phase gate with (|-1 + 3| / 4)^2
    const auto comp = computational_indices(m.fock_max(), 0);
    Matrix ideal = Matrix::Identity(u.dim(), u.dim());
    ideal(comp[0], comp[0]) = -1.0;
    const double f_id = subspace_overlap(u, Operator(u.space(), ideal), basis_projector(u.space(), comp));
    CHECK(f_id == doctest::Approx(0.25).epsilon(1e-12));
  }

  TEST_CASE("Hamiltonian is Hermitian and reduces to the carrier as eta -> 0") {
    FullIonParams f = small_params();
    f.base.phi = 0.6;
    CHECK(FullIonModel(f).hamiltonian_at(1.7).hermiticity_defect() < 1e-14);

    f.base.eta = 1e-7;
    const FullIonModel m(f);
    const double t = 0.9;
    const int fd = m.fock_max() + 1;
    Matrix carrier = Matrix::Zero(m.space().dim(), m.space().dim());
    const Complex cj = std::polar(f.base.omega, f.base.phi - (1.0 - f.base.delta) * t);
    const Complex ck = std::polar(f.base.omega, f.base.phi - f.base.delta * t);
    for (int n = 0; n < fd; ++n) {
      auto idx = [&](int sj, int sk) { return (2 * sj + sk) * fd + n; };
      carrier(idx(1, 0), idx(0, 0)) = cj;
      carrier(idx(1, 1), idx(0, 1)) = cj;
      carrier(idx(0, 1), idx(0, 0)) = ck;
      carrier(idx(1, 1), idx(1, 0)) = ck;
    }
    carrier += Matrix(carrier.adjoint());
    CHECK(max_abs(m.hamiltonian_at(t).matrix() - carrier) < 1e-8);
  }

  TEST_CASE("time stepping converges to the co-rotating propagator") {
    FullIonParams f = small_params();
    f.base.delta = 0.1;
    const FullIonModel m(f);
    const double t = 7.3;
    const Matrix exact = m.exact_propagator(t).matrix();
    // independent check of exp(-i K t) itself
    const Matrix k = m.corotating_generator().matrix();
    const Matrix inner = oracle::taylor_expm(k, 0.4);
    CHECK(max_abs(inner - expm_unitary(m.corotating_generator(), 0.4).matrix()) < 1e-12);

    const double e1 = max_abs(m.propagator(t, 0.1).matrix() - exact);
    const double e2 = max_abs(m.propagator(t, 0.05).matrix() - exact);
    CHECK(e1 < 1e-3);
    CHECK(e2 < e1 / 3.0);  // second-order method: ratio about 4
  }

  TEST_CASE("Floquet power agrees with the exact propagator over many periods") {
    FullIonParams f = small_params();
    f.base.delta = 0.125;  // period 16 pi
    const FullIonModel m(f);
    REQUIRE(m.period().has_value());
    CHECK(*m.period() == doctest::Approx(16.0 * kPi));
    const double t = 20.5 * *m.period();
    const Operator u = m.propagator(t, 2.0 * kPi / 100.0);
    CHECK(u.unitarity_defect() < 1e-10);
    CHECK(max_abs(u.matrix() - m.exact_propagator(t).matrix()) < 1e-3);
  }

  TEST_CASE("beam I off leaves ion j untouched") {
    FullIonParams f = small_params();
    f.beam_i = false;
    f.t_final = 40.0;
    f.tol_conv = 1e-8;
    const HilbertSpace s = ion_space(f.base.n_max);
    for (int sj : {0, 1}) {
      const StateVector psi = StateVector::basis(s, {sj, 0, 1});
      const StateVector out = propagate(f, psi);
      const int fd = f.base.n_max + f.pad + 1;
      double p_same = 0.0;
      for (int i = 0; i < out.space().dim(); ++i)
        if ((i / fd) / 2 == sj) p_same += out.population(i);
      CHECK(p_same == doctest::Approx(1.0).epsilon(1e-12));
      CHECK(out.norm() == doctest::Approx(1.0).epsilon(1e-12));
    }
  }

  TEST_CASE("norm conservation and convergence bookkeeping") {
    FullIonParams f = small_params();
    f.t_final = 25.0;
    const StateVector psi = StateVector::basis(ion_space(f.base.n_max), {0, 0, 0});
    const PropagationResult r = propagate_checked(f, psi);
    CHECK(r.state.norm() == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(r.halvings >= 1);
    CHECK(r.last_change < f.tol_conv);
    CHECK(r.dt_used == doctest::Approx(f.dt / std::pow(2.0, r.halvings)));

    f.tol_conv = 1e-30;
    f.max_halvings = 1;
    CHECK_THROWS_AS(propagate_checked(f, psi), ConvergenceError);
  }

  TEST_CASE("padding does not change the computational block") {
    FullIonParams a;
    a.base.omega = 0.02;
    FullIonParams b = a;
    b.pad = 14;
    const double t = 300.0;
    const FullIonModel ma(a), mb(b);
    const auto ca = computational_indices(ma.fock_max(), 0);
    const auto cb = computational_indices(mb.fock_max(), 0);
    const Matrix ba = restrict_to(ma.exact_propagator(t).matrix(), ca);
    const Matrix bb = restrict_to(mb.exact_propagator(t).matrix(), cb);
    CHECK(max_abs(ba - bb) < 1e-9);
  }

  TEST_CASE("calibration reaches resonance") {
    FullIonParams f;
    f.base.omega = 0.02;
    const CalibrationResult c = calibrate_retuning(f);
    CHECK(std::abs(c.residual_detuning) < 1e-8 * c.coupling);
    CHECK(c.iterations <= 40);
    CHECK(c.coupling > 0.0);
  }

  TEST_CASE("deep dispersive regime approaches the effective gate") {
    const double coarse = exact_gate_fidelity(0.05, 0.01, 0.04, 0.0);
    const double fine = exact_gate_fidelity(0.05, 0.002, 0.04, 0.0);
    CHECK(fine > coarse);
    CHECK(fine == doctest::Approx(0.97403).epsilon(1e-4));
  }

  TEST_CASE("gate fidelity independent of the laser phase") {
    const double a = exact_gate_fidelity(0.1, 0.02, 0.1, 0.0);
    const double b = exact_gate_fidelity(0.1, 0.02, 0.1, 0.7);
    CHECK(a == doctest::Approx(b).epsilon(1e-8));
  }
}
