#include "qpg/quantum_core.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace qpg {

namespace {

void require_same_space(const HilbertSpace& a, const HilbertSpace& b, const char* where) {
  if (!(a == b)) {
    throw SpaceMismatch(std::string(where) + ": " + a.describe() + " vs " + b.describe());
  }
}

}  // namespace

// ---------------------------------------------------------------------------
// HilbertSpace

HilbertSpace::HilbertSpace(std::vector<Factor> factors) : factors_(std::move(factors)) {
  dim_ = 1;
  for (const auto& f : factors_) {
    switch (f.kind) {
      case FactorKind::qubit:
        if (f.dim != 2) throw InvalidTruncation("qubit factor must have dim 2");
        break;
      case FactorKind::atom3:
        if (f.dim != 3) throw InvalidTruncation("three-level factor must have dim 3");
        break;
      case FactorKind::fock:
        if (f.dim < 2) throw InvalidTruncation("Fock factor needs n_max >= 1");
        break;
    }
    dim_ *= f.dim;
  }
}

HilbertSpace HilbertSpace::qubit() { return HilbertSpace({{FactorKind::qubit, 2}}); }

HilbertSpace HilbertSpace::fock(int n_max) {
  if (n_max < 1) throw InvalidTruncation("Fock truncation n_max must be >= 1");
  return HilbertSpace({{FactorKind::fock, n_max + 1}});
}

HilbertSpace HilbertSpace::atom3() { return HilbertSpace({{FactorKind::atom3, 3}}); }

int HilbertSpace::index(std::initializer_list<int> labels) const {
  return index(std::span<const int>(labels.begin(), labels.size()));
}

int HilbertSpace::index(std::span<const int> labels) const {
  if (labels.size() != factors_.size()) {
    throw SpaceMismatch("label count does not match factor count of " + describe());
  }
  int idx = 0;
  for (std::size_t i = 0; i < factors_.size(); ++i) {
    if (labels[i] < 0 || labels[i] >= factors_[i].dim) {
      throw SpaceMismatch("basis label out of range for " + describe());
    }
    idx = idx * factors_[i].dim + labels[i];
  }
  return idx;
}

std::vector<int> HilbertSpace::labels(int index) const {
  std::vector<int> out(factors_.size());
  for (std::size_t i = factors_.size(); i-- > 0;) {
    out[i] = index % factors_[i].dim;
    index /= factors_[i].dim;
  }
  return out;
}

std::string HilbertSpace::describe() const {
  std::ostringstream os;
  for (std::size_t i = 0; i < factors_.size(); ++i) {
    if (i) os << " x ";
    switch (factors_[i].kind) {
      case FactorKind::qubit: os << "qubit"; break;
      case FactorKind::atom3: os << "atom3"; break;
      case FactorKind::fock: os << "fock(" << factors_[i].dim - 1 << ")"; break;
    }
  }
  return os.str();
}

HilbertSpace operator*(const HilbertSpace& a, const HilbertSpace& b) {
  std::vector<Factor> f(a.factors().begin(), a.factors().end());
  f.insert(f.end(), b.factors().begin(), b.factors().end());
  return HilbertSpace(std::move(f));
}

// ---------------------------------------------------------------------------
// Operator

Operator::Operator(HilbertSpace space, Matrix entries)
    : space_(std::move(space)), entries_(std::move(entries)) {
  if (entries_.rows() != space_.dim() || entries_.cols() != space_.dim()) {
    throw SpaceMismatch("operator shape does not match " + space_.describe());
  }
}

Operator Operator::identity(const HilbertSpace& space) {
  return Operator(space, Matrix::Identity(space.dim(), space.dim()));
}

Operator Operator::zero(const HilbertSpace& space) {
  return Operator(space, Matrix::Zero(space.dim(), space.dim()));
}

Operator Operator::adjoint() const { return Operator(space_, entries_.adjoint()); }

double Operator::hermiticity_defect() const {
  if (entries_.size() == 0) return 0.0;
  return (entries_ - entries_.adjoint()).cwiseAbs().maxCoeff();
}

double Operator::unitarity_defect() const {
  if (entries_.size() == 0) return 0.0;
  const Matrix g = entries_.adjoint() * entries_;
  return (g - Matrix::Identity(g.rows(), g.cols())).cwiseAbs().maxCoeff();
}

bool Operator::is_diagonal() const {
  for (int c = 0; c < entries_.cols(); ++c)
    for (int r = 0; r < entries_.rows(); ++r)
      if (r != c && entries_(r, c) != Complex(0.0)) return false;
  return true;
}

Operator& Operator::operator+=(const Operator& other) {
  require_same_space(space_, other.space_, "operator +");
  entries_ += other.entries_;
  return *this;
}

Operator& Operator::operator-=(const Operator& other) {
  require_same_space(space_, other.space_, "operator -");
  entries_ -= other.entries_;
  return *this;
}

Operator& Operator::operator*=(Complex scale) {
  entries_ *= scale;
  return *this;
}

Operator operator+(Operator a, const Operator& b) { return a += b; }
Operator operator-(Operator a, const Operator& b) { return a -= b; }
Operator operator*(Complex scale, Operator a) { return a *= scale; }

Operator operator*(const Operator& a, const Operator& b) {
  require_same_space(a.space(), b.space(), "operator product");
  return Operator(a.space(), a.matrix() * b.matrix());
}

// ---------------------------------------------------------------------------
// StateVector

StateVector::StateVector(HilbertSpace space, Vector amplitudes)
    : space_(std::move(space)), amplitudes_(std::move(amplitudes)) {
  if (amplitudes_.size() != space_.dim()) {
    throw SpaceMismatch("state length does not match " + space_.describe());
  }
  if (std::abs(amplitudes_.norm() - 1.0) >= 1e-10) {
    throw InvalidState("state vector is not normalized");
  }
}

StateVector StateVector::normalized(HilbertSpace space, Vector amplitudes) {
  const double n = amplitudes.norm();
  if (n == 0.0) throw InvalidState("cannot normalize the zero vector");
  return StateVector(std::move(space), amplitudes / n);
}

StateVector StateVector::basis(const HilbertSpace& space, std::initializer_list<int> labels) {
  return basis_index(space, space.index(labels));
}

StateVector StateVector::basis_index(const HilbertSpace& space, int index) {
  Vector v = Vector::Zero(space.dim());
  v(index) = 1.0;
  return StateVector(space, std::move(v));
}

// ---------------------------------------------------------------------------
// Free functions

Operator tensor(const Operator& a, const Operator& b) {
  const Matrix& x = a.matrix();
  const Matrix& y = b.matrix();
  Matrix out(x.rows() * y.rows(), x.cols() * y.cols());
  for (int i = 0; i < x.rows(); ++i)
    for (int j = 0; j < x.cols(); ++j)
      out.block(i * y.rows(), j * y.cols(), y.rows(), y.cols()) = x(i, j) * y;
  return Operator(a.space() * b.space(), std::move(out));
}

StateVector tensor(const StateVector& a, const StateVector& b) {
  const Vector& x = a.amplitudes();
  const Vector& y = b.amplitudes();
  Vector out(x.size() * y.size());
  for (int i = 0; i < x.size(); ++i) out.segment(i * y.size(), y.size()) = x(i) * y;
  return StateVector(a.space() * b.space(), std::move(out));
}

Operator embed(const HilbertSpace& space, int position, const Matrix& local) {
  const auto factors = space.factors();
  if (position < 0 || position >= static_cast<int>(factors.size()) ||
      local.rows() != factors[position].dim || local.cols() != factors[position].dim) {
    throw SpaceMismatch("embed: local operator does not fit factor of " + space.describe());
  }
  int left = 1;
  int right = 1;
  for (int i = 0; i < position; ++i) left *= factors[i].dim;
  for (std::size_t i = position + 1; i < factors.size(); ++i) right *= factors[i].dim;
  const int d = local.rows();
  Matrix out = Matrix::Zero(space.dim(), space.dim());
  for (int l = 0; l < left; ++l)
    for (int a = 0; a < d; ++a)
      for (int b = 0; b < d; ++b) {
        const Complex v = local(a, b);
        if (v == Complex(0.0)) continue;
        for (int r = 0; r < right; ++r) {
          out((l * d + a) * right + r, (l * d + b) * right + r) = v;
        }
      }
  return Operator(space, std::move(out));
}

Operator annihilation(int n_max) {
  const HilbertSpace space = HilbertSpace::fock(n_max);
  Matrix m = Matrix::Zero(n_max + 1, n_max + 1);
  for (int n = 1; n <= n_max; ++n) m(n - 1, n) = std::sqrt(static_cast<double>(n));
  return Operator(space, std::move(m));
}

Operator creation(int n_max) { return annihilation(n_max).adjoint(); }

Operator number(int n_max) {
  Matrix m = Matrix::Zero(n_max + 1, n_max + 1);
  for (int n = 0; n <= n_max; ++n) m(n, n) = static_cast<double>(n);
  return Operator(HilbertSpace::fock(n_max), std::move(m));
}

Matrix raising2() {
  Matrix m = Matrix::Zero(2, 2);
  m(1, 0) = 1.0;
  return m;
}

Matrix lowering2() { return raising2().adjoint(); }

Matrix sigma_x2() {
  Matrix m = Matrix::Zero(2, 2);
  m(0, 1) = m(1, 0) = 1.0;
  return m;
}

Matrix projector2(int level) {
  Matrix m = Matrix::Zero(2, 2);
  m(level, level) = 1.0;
  return m;
}

Operator expm_unitary(const Operator& h, double t) {
  const double scale = std::max(1.0, h.matrix().size() ? h.matrix().cwiseAbs().maxCoeff() : 0.0);
  const double defect = h.hermiticity_defect();
  if (defect >= 1e-12 * scale) {
    throw HermiticityError("expm_unitary: generator is not Hermitian (defect " +
                           std::to_string(defect) + ")");
  }
  if (t == 0.0) return Operator::identity(h.space());
  // Symmetrize so the solver sees an exactly Hermitian matrix.
  const Matrix herm = 0.5 * (h.matrix() + h.matrix().adjoint());
  Eigen::SelfAdjointEigenSolver<Matrix> solver(herm);
  const Eigen::VectorXd& w = solver.eigenvalues();
  Vector phases(w.size());
  for (int i = 0; i < w.size(); ++i) phases(i) = std::polar(1.0, -w(i) * t);
  const Matrix& v = solver.eigenvectors();
  return Operator(h.space(), v * phases.asDiagonal() * v.adjoint());
}

StateVector evolve(const Operator& u, const StateVector& psi) {
  require_same_space(u.space(), psi.space(), "evolve");
  return StateVector(psi.space(), u.matrix() * psi.amplitudes());
}

double state_fidelity(const StateVector& psi, const StateVector& phi) {
  require_same_space(psi.space(), phi.space(), "state_fidelity");
  return std::norm(psi.amplitudes().dot(phi.amplitudes()));
}

double subspace_overlap(const Operator& u_actual, const Operator& u_ideal,
                        const Operator& projector) {
  require_same_space(u_actual.space(), u_ideal.space(), "subspace_overlap");
  require_same_space(u_actual.space(), projector.space(), "subspace_overlap");
  const Matrix& p = projector.matrix();
  const double idempotent = (p * p - p).cwiseAbs().maxCoeff();
  if (projector.hermiticity_defect() > 1e-10 || idempotent > 1e-10) {
    throw NotAProjector("subspace_overlap: projector must satisfy P^2 = P = P^dagger");
  }
  const double rank = p.trace().real();
  if (rank < 0.5) throw NotAProjector("subspace_overlap: projector has rank 0");
  const Complex tr = (p * u_ideal.matrix().adjoint() * u_actual.matrix() * p).trace();
  return std::clamp(std::norm(tr) / (rank * rank), 0.0, 1.0);
}

Operator basis_projector(const HilbertSpace& space, std::span<const int> indices) {
  Matrix p = Matrix::Zero(space.dim(), space.dim());
  for (int i : indices) p(i, i) = 1.0;
  return Operator(space, std::move(p));
}

Matrix restrict_to(const Matrix& m, std::span<const int> indices) {
  const int d = static_cast<int>(indices.size());
  Matrix out(d, d);
  for (int r = 0; r < d; ++r)
    for (int c = 0; c < d; ++c) out(r, c) = m(indices[r], indices[c]);
  return out;
}

}  // namespace qpg
