#pragma once

// Dense complex linear algebra over labeled tensor-product Hilbert spaces.
//
// Basis ordering is row-major over the factor list: the leftmost factor
// varies slowest. For qubit_j (x) qubit_k (x) Fock(n_max) the index of
// |s_j, s_k, n> is (2 * s_j + s_k) * (n_max + 1) + n. Qubit label 0 is the
// lower level (|down>, |g>), label 1 the upper level.
//
// Units: hbar = 1, so propagators are exp(-i H t).

#include <complex>
#include <initializer_list>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "qpg/errors.hpp"

namespace qpg {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;

inline constexpr Complex kI{0.0, 1.0};
inline constexpr double kPi = 3.14159265358979323846;

enum class FactorKind { qubit, fock, atom3 };

struct Factor {
  FactorKind kind;
  int dim;

  bool operator==(const Factor&) const = default;
};

class HilbertSpace {
 public:
  HilbertSpace() = default;
  explicit HilbertSpace(std::vector<Factor> factors);

  static HilbertSpace qubit();
  /// Fock space truncated at n_max (dimension n_max + 1).
  static HilbertSpace fock(int n_max);
  static HilbertSpace atom3();

  int dim() const noexcept { return dim_; }
  std::span<const Factor> factors() const noexcept { return factors_; }
  int factor_count() const noexcept { return static_cast<int>(factors_.size()); }

  /// Flat index of a product basis state given one label per factor.
  int index(std::initializer_list<int> labels) const;
  int index(std::span<const int> labels) const;
  std::vector<int> labels(int index) const;

  std::string describe() const;

  bool operator==(const HilbertSpace&) const = default;

 private:
  std::vector<Factor> factors_;
  int dim_ = 1;
};

/// Concatenation of factor lists.
HilbertSpace operator*(const HilbertSpace& a, const HilbertSpace& b);

class Operator {
 public:
  Operator() = default;
  Operator(HilbertSpace space, Matrix entries);

  static Operator identity(const HilbertSpace& space);
  static Operator zero(const HilbertSpace& space);

  const HilbertSpace& space() const noexcept { return space_; }
  const Matrix& matrix() const noexcept { return entries_; }
  int dim() const noexcept { return space_.dim(); }
  Complex operator()(int row, int col) const { return entries_(row, col); }

  Operator adjoint() const;

  /// max |A - A^dagger|
  double hermiticity_defect() const;
  /// max |A^dagger A - I|
  double unitarity_defect() const;
  bool is_hermitian(double tol = 1e-12) const { return hermiticity_defect() < tol; }
  bool is_unitary(double tol = 1e-10) const { return unitarity_defect() < tol; }
  /// True when every off-diagonal entry is exactly zero.
  bool is_diagonal() const;

  Operator& operator+=(const Operator& other);
  Operator& operator-=(const Operator& other);
  Operator& operator*=(Complex scale);

 private:
  HilbertSpace space_;
  Matrix entries_;
};

Operator operator+(Operator a, const Operator& b);
Operator operator-(Operator a, const Operator& b);
Operator operator*(Complex scale, Operator a);
Operator operator*(const Operator& a, const Operator& b);

class StateVector {
 public:
  StateVector() = default;
  /// Throws InvalidState unless | |amplitudes| - 1 | < 1e-10.
  StateVector(HilbertSpace space, Vector amplitudes);

  /// Normalizes the given amplitudes first.
  static StateVector normalized(HilbertSpace space, Vector amplitudes);
  static StateVector basis(const HilbertSpace& space, std::initializer_list<int> labels);
  static StateVector basis_index(const HilbertSpace& space, int index);

  const HilbertSpace& space() const noexcept { return space_; }
  const Vector& amplitudes() const noexcept { return amplitudes_; }
  Complex amplitude(int index) const { return amplitudes_(index); }
  double population(int index) const { return std::norm(amplitudes_(index)); }
  double norm() const { return amplitudes_.norm(); }

 private:
  HilbertSpace space_;
  Vector amplitudes_;
};

Operator tensor(const Operator& a, const Operator& b);
StateVector tensor(const StateVector& a, const StateVector& b);

/// Places `local` on factor `position` of `space`, identities elsewhere.
Operator embed(const HilbertSpace& space, int position, const Matrix& local);

/// Truncated bosonic lowering operator on Fock(n_max).
Operator annihilation(int n_max);
Operator creation(int n_max);
Operator number(int n_max);

/// Pauli-type two-level operators in the (lower, upper) basis.
Matrix raising2();   // |1><0|
Matrix lowering2();  // |0><1|
Matrix sigma_x2();
Matrix projector2(int level);

/// exp(-i h t) by Hermitian eigendecomposition; accuracy does not depend on
/// |h t|. Throws HermiticityError when h is not Hermitian within tolerance.
Operator expm_unitary(const Operator& h, double t);

StateVector evolve(const Operator& u, const StateVector& psi);

/// |<psi|phi>|^2
double state_fidelity(const StateVector& psi, const StateVector& phi);

/// |Tr(P u_ideal^dagger u_actual P)|^2 / d^2, d = rank(P).
double subspace_overlap(const Operator& u_actual, const Operator& u_ideal,
                        const Operator& projector);

/// Orthogonal projector onto the span of the given basis indices.
Operator basis_projector(const HilbertSpace& space, std::span<const int> indices);

/// Sub-block of a matrix on the given basis indices (rows and columns).
Matrix restrict_to(const Matrix& m, std::span<const int> indices);

}  // namespace qpg
