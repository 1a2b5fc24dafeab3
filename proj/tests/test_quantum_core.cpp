#include <doctest.h>

#include "oracles.hpp"
#include "qpg/quantum_core.hpp"

using namespace qpg;

namespace {

double max_abs(const Matrix& m) { return m.cwiseAbs().maxCoeff(); }

Operator sx() { return Operator(HilbertSpace::qubit(), sigma_x2()); }

Operator random_hermitian(const HilbertSpace& s, unsigned seed) {
  std::srand(seed);
  Matrix m = Matrix::Random(s.dim(), s.dim());
  return Operator(s, 0.5 * (m + m.adjoint()));
}

}  // namespace

TEST_SUITE("quantum_core") {
  TEST_CASE("hilbert space dimensions and indexing") {
    const HilbertSpace s = HilbertSpace::qubit() * HilbertSpace::qubit() * HilbertSpace::fock(4);
    CHECK(s.dim() == 20);
    CHECK(s.index({1, 0, 3}) == (2 * 1 + 0) * 5 + 3);
    CHECK(s.labels(13) == std::vector<int>{1, 0, 3});
    CHECK(HilbertSpace::atom3().dim() == 3);
    CHECK_THROWS_AS(HilbertSpace::fock(0), InvalidTruncation);
    CHECK_THROWS(s.index({2, 0, 0}));
  }

  TEST_CASE("tensor products follow the row-major convention") {
    const HilbertSpace q = HilbertSpace::qubit();
    CHECK(max_abs(tensor(Operator::identity(q), Operator::identity(q)).matrix() - Matrix::Identity(4, 4)) == 0.0);

    const StateVector zz = StateVector::basis(q * q, {0, 0});
    const StateVector out = evolve(tensor(sx(), Operator::identity(q)), zz);
    CHECK(out.population((q * q).index({1, 0})) == doctest::Approx(1.0));

    Matrix a(2, 2);
    a << 1.0, 2.0, 3.0, 4.0;
    Matrix b = Matrix::Zero(3, 3);
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) b(i, j) = Complex(i + 1, j);
    const Operator ab = tensor(Operator(q, a), Operator(HilbertSpace::fock(2), b));
    CHECK(ab.dim() == 6);
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j)
        for (int m = 0; m < 3; ++m)
          for (int n = 0; n < 3; ++n) CHECK(ab(i * 3 + m, j * 3 + n) == a(i, j) * b(m, n));

    const Operator c = Operator(HilbertSpace::qubit(), sigma_x2());
    const Matrix left = tensor(tensor(Operator(q, a), Operator(HilbertSpace::fock(2), b)), c).matrix();
    const Matrix right = tensor(Operator(q, a), tensor(Operator(HilbertSpace::fock(2), b), c)).matrix();
    CHECK(max_abs(left - right) == 0.0);
  }

  TEST_CASE("ladder operators") {
    Matrix expect(2, 2);
    expect << 0.0, 1.0, 0.0, 0.0;
    CHECK(max_abs(annihilation(1).matrix() - expect) == 0.0);
    CHECK_THROWS_AS(annihilation(0), InvalidTruncation);

    const int n_max = 5;
    const Operator a = annihilation(n_max);
    const Operator n = creation(n_max) * a;
    for (int k = 0; k <= n_max; ++k) CHECK(n(k, k).real() == doctest::Approx(k));
    CHECK(max_abs(n.matrix() - number(n_max).matrix()) < 1e-14);

    const Matrix comm = (a * creation(n_max) - creation(n_max) * a).matrix();
    Matrix defect = comm - Matrix::Identity(n_max + 1, n_max + 1);
    CHECK(std::abs(defect(n_max, n_max) + Complex(n_max + 1.0)) < 1e-12);
    defect(n_max, n_max) = 0.0;
    CHECK(max_abs(defect) < 1e-14);
  }

  TEST_CASE("expm_unitary") {
    const HilbertSpace q = HilbertSpace::qubit();
    CHECK(max_abs(expm_unitary(sx(), 0.0).matrix() - Matrix::Identity(2, 2)) < 1e-15);

    Matrix d = Matrix::Zero(2, 2);
    d(0, 0) = 0.3;
    d(1, 1) = -1.7;
    const Operator ud = expm_unitary(Operator(q, d), 2.5);
    CHECK(std::abs(ud(0, 0) - std::polar(1.0, -0.3 * 2.5)) < 1e-14);
    CHECK(std::abs(ud(1, 1) - std::polar(1.0, 1.7 * 2.5)) < 1e-14);

    const double omega = 0.7;
    const StateVector out =
        evolve(expm_unitary(Complex(omega) * sx(), kPi / (2.0 * omega)), StateVector::basis(q, {0}));
    CHECK(out.population(1) == doctest::Approx(1.0).epsilon(1e-14));

    Matrix bad = Matrix::Zero(2, 2);
    bad(0, 1) = 1.0;
    CHECK_THROWS_AS(expm_unitary(Operator(q, bad), 1.0), HermiticityError);
  }

  TEST_CASE("expm_unitary against a Taylor oracle and group laws") {
    const HilbertSpace s = HilbertSpace::qubit() * HilbertSpace::fock(3);
    const Operator h = random_hermitian(s, 7);
    CHECK(max_abs(expm_unitary(h, 0.8).matrix() - oracle::taylor_expm(h.matrix(), 0.8)) < 1e-12);

    const Operator u1 = expm_unitary(h, 0.4);
    const Operator u2 = expm_unitary(h, 1.1);
    CHECK(max_abs((u1 * u2).matrix() - expm_unitary(h, 1.5).matrix()) < 1e-10);
    CHECK(max_abs(u2.adjoint().matrix() - expm_unitary(h, -1.1).matrix()) < 1e-10);
    // accuracy does not degrade for long times
    CHECK(expm_unitary(h, 1e7).unitarity_defect() < 1e-10);
  }

  TEST_CASE("states, evolution and fidelities") {
    const HilbertSpace q = HilbertSpace::qubit();
    Vector v(2);
    v << 1.0, 1.0;
    CHECK_THROWS_AS(StateVector(q, v), InvalidState);
    const StateVector plus = StateVector::normalized(q, v);
    const StateVector zero = StateVector::basis(q, {0});
    const StateVector one = StateVector::basis(q, {1});
    CHECK(state_fidelity(zero, zero) == doctest::Approx(1.0));
    CHECK(state_fidelity(zero, one) == 0.0);
    CHECK(state_fidelity(zero, plus) == doctest::Approx(0.5));
    CHECK(state_fidelity(plus, zero) == doctest::Approx(state_fidelity(zero, plus)));
    CHECK(state_fidelity(evolve(Operator::identity(q), plus), plus) == doctest::Approx(1.0));
    CHECK(evolve(sx(), zero).population(1) == doctest::Approx(1.0));

    const HilbertSpace s = q * HilbertSpace::fock(2);
    const Operator u = expm_unitary(random_hermitian(s, 3), 2.0);
    Vector a = Vector::Zero(s.dim());
    a(0) = 0.6;
    a(4) = Complex(0.0, 0.8);
    const StateVector psi(s, a);
    const StateVector phi = StateVector::basis_index(s, 2);
    CHECK(std::abs(evolve(u, psi).norm() - 1.0) < 1e-10);
    CHECK(std::abs(state_fidelity(evolve(u, psi), evolve(u, phi)) - state_fidelity(psi, phi)) < 1e-10);
    CHECK_THROWS_AS(evolve(Operator::identity(q), psi), SpaceMismatch);
    CHECK_THROWS_AS(state_fidelity(zero, psi), SpaceMismatch);
  }

  TEST_CASE("subspace_overlap") {
    const HilbertSpace s = HilbertSpace::qubit() * HilbertSpace::qubit();
    const Operator u = expm_unitary(random_hermitian(s, 11), 0.9);
    const std::vector<int> all{0, 1, 2, 3};
    const Operator full = basis_projector(s, all);
    CHECK(subspace_overlap(u, u, full) == doctest::Approx(1.0));
    CHECK(subspace_overlap(Complex(std::polar(1.0, 0.77)) * u, u, full) == doctest::Approx(1.0));

    const HilbertSpace q = HilbertSpace::qubit();
    const std::vector<int> first{0};
    const Operator rot = expm_unitary(sx(), kPi / 2.0);
    CHECK(subspace_overlap(rot, Operator::identity(q), basis_projector(q, first)) < 1e-30);

    Matrix notp = Matrix::Identity(2, 2);
    notp(0, 1) = 0.5;
    CHECK_THROWS_AS(subspace_overlap(rot, rot, Operator(q, notp)), NotAProjector);
  }

  TEST_CASE("embedding and restriction") {
    const HilbertSpace s = HilbertSpace::qubit() * HilbertSpace::fock(2) * HilbertSpace::qubit();
    const Operator e = embed(s, 1, annihilation(2).matrix());
    const Operator ref = tensor(tensor(Operator::identity(HilbertSpace::qubit()), annihilation(2)),
                                Operator::identity(HilbertSpace::qubit()));
    CHECK(max_abs(e.matrix() - ref.matrix()) == 0.0);
    const std::vector<int> idx{1, 4};
    const Matrix r = restrict_to(e.matrix(), idx);
    CHECK(r.rows() == 2);
    CHECK(r(0, 1) == e(1, 4));
  }
}
