#include "qpg/gate_algebra.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <vector>

namespace qpg {

namespace {

constexpr int kGridSteps = 32;  // pi/16
constexpr int kRefineStarts = 4;
constexpr int kMaxSweeps = 20000;

double wrap(double x) {
  const double w = std::remainder(x, 2.0 * kPi);
  return w == -kPi ? kPi : w;
}

// Phase exponent of entry (r, c) for each angle:
// (control_before, target_before, control_after, target_after, global).
std::array<int, 5> indicators(int r, int c) { return {c / 2, c % 2, r / 2, r % 2, 1}; }

std::array<double, 5> as_array(const LocalPhases& p) {
  return {p.control_before, p.target_before, p.control_after, p.target_after, p.global};
}

LocalPhases from_array(const std::array<double, 5>& a) {
  return {wrap(a[0]), wrap(a[1]), wrap(a[2]), wrap(a[3]), wrap(a[4])};
}

Matrix corrected_matrix(const Matrix& a, const std::array<double, 5>& ang) {
  Matrix out(4, 4);
  for (int r = 0; r < 4; ++r)
    for (int c = 0; c < 4; ++c) {
      const auto ind = indicators(r, c);
      double phase = 0.0;
      for (int k = 0; k < 5; ++k) phase += ind[k] * ang[k];
      out(r, c) = a(r, c) * std::polar(1.0, phase);
    }
  return out;
}

double max_distance(const Matrix& a, const Matrix& b) { return (a - b).cwiseAbs().maxCoeff(); }

// Exact coordinate descent on the Frobenius distance: each angle multiplies a
// fixed subset of entries, so its optimum is arg(sum conj(x) b) over that subset.
std::array<double, 5> refine(const Matrix& a, const Matrix& b, std::array<double, 5> ang) {
  for (int sweep = 0; sweep < kMaxSweeps; ++sweep) {
    double biggest = 0.0;
    for (int k = 0; k < 5; ++k) {
      const Matrix cur = corrected_matrix(a, ang);
      Complex acc = 0.0;
      for (int r = 0; r < 4; ++r)
        for (int c = 0; c < 4; ++c) {
          if (!indicators(r, c)[k]) continue;
          acc += std::conj(cur(r, c) * std::polar(1.0, -ang[k])) * b(r, c);
        }
      if (std::abs(acc) == 0.0) continue;
      const double next = std::arg(acc);
      biggest = std::max(biggest, std::abs(wrap(next - ang[k])));
      ang[k] = next;
    }
    if (biggest < 1e-14) break;
  }
  return ang;
}

}  // namespace

TwoQubitGate::TwoQubitGate(Matrix matrix) : matrix_(std::move(matrix)) {
  if (matrix_.rows() != 4 || matrix_.cols() != 4) throw Error("two-qubit gate must be 4x4");
  const double defect = (matrix_.adjoint() * matrix_ - Matrix::Identity(4, 4)).cwiseAbs().maxCoeff();
  if (defect >= 1e-10) throw Error("two-qubit gate is not unitary");
}

TwoQubitGate operator*(const TwoQubitGate& a, const TwoQubitGate& b) {
  return TwoQubitGate(a.matrix() * b.matrix());
}

TwoQubitGate ideal_qpg() {
  Matrix m = Matrix::Identity(4, 4);
  m(0, 0) = -1.0;
  return TwoQubitGate(std::move(m));
}

TwoQubitGate ideal_cnot() {
  Matrix m = Matrix::Zero(4, 4);
  m(0, 0) = m(1, 1) = 1.0;
  m(2, 3) = m(3, 2) = 1.0;
  return TwoQubitGate(std::move(m));
}

TwoQubitGate ideal_swap() {
  Matrix m = Matrix::Zero(4, 4);
  m(0, 0) = m(3, 3) = 1.0;
  m(1, 2) = m(2, 1) = 1.0;
  return TwoQubitGate(std::move(m));
}

Matrix target_rotation() {
  const double s = 1.0 / std::sqrt(2.0);
  Matrix r(2, 2);
  // columns are the images of |d> and |u>
  r << s, s,
      -s, s;
  return r;
}

int rotation_order(const Matrix& r, int max_power, double tol) {
  Matrix p = r;
  for (int k = 1; k <= max_power; ++k) {
    if ((p - Matrix::Identity(r.rows(), r.cols())).cwiseAbs().maxCoeff() < tol) return k;
    p = r * p;
  }
  return 0;
}

TwoQubitGate target_sandwich(const TwoQubitGate& g, const Matrix& r) {
  const Operator id = Operator::identity(HilbertSpace::qubit());
  const Operator rr = tensor(id, Operator(HilbertSpace::qubit(), r));
  return TwoQubitGate(rr.matrix() * g.matrix() * rr.matrix());
}

TwoQubitGate apply_local_phases(const TwoQubitGate& a, const LocalPhases& ph) {
  return TwoQubitGate(corrected_matrix(a.matrix(), as_array(ph)));
}

PhaseEquivalence equal_up_to_local_phases(const TwoQubitGate& a, const TwoQubitGate& b) {
  const Matrix& am = a.matrix();
  const Matrix& bm = b.matrix();
  PhaseEquivalence out;
  out.lower_bound = (am.cwiseAbs() - bm.cwiseAbs()).cwiseAbs().maxCoeff();

  std::array<Complex, kGridSteps> unit{};
  for (int s = 0; s < kGridSteps; ++s) unit[s] = std::polar(1.0, 2.0 * kPi * s / kGridSteps);

  struct Candidate {
    double distance;
    std::array<double, 5> angles;
  };
  std::vector<Candidate> best;

  for (int i0 = 0; i0 < kGridSteps; ++i0)
    for (int i1 = 0; i1 < kGridSteps; ++i1)
      for (int i2 = 0; i2 < kGridSteps; ++i2)
        for (int i3 = 0; i3 < kGridSteps; ++i3) {
          const std::array<int, 4> idx{i0, i1, i2, i3};
          Matrix y(4, 4);
          Complex overlap = 0.0;
          for (int r = 0; r < 4; ++r)
            for (int c = 0; c < 4; ++c) {
              const auto ind = indicators(r, c);
              int step = 0;
              for (int k = 0; k < 4; ++k) step += ind[k] * idx[k];
              y(r, c) = am(r, c) * unit[step % kGridSteps];
              overlap += std::conj(y(r, c)) * bm(r, c);
            }
          const double g = std::abs(overlap) > 0.0 ? std::arg(overlap) : 0.0;
          const double d = max_distance(y * std::polar(1.0, g), bm);
          if (static_cast<int>(best.size()) < kRefineStarts || d < best.back().distance) {
            std::array<double, 5> ang{};
            for (int k = 0; k < 4; ++k) ang[k] = 2.0 * kPi * idx[k] / kGridSteps;
            ang[4] = g;
            const Candidate cand{d, ang};
            const auto pos = std::upper_bound(best.begin(), best.end(), cand,
                                              [](const Candidate& x, const Candidate& y2) {
                                                return x.distance < y2.distance;
                                              });
            best.insert(pos, cand);
            if (static_cast<int>(best.size()) > kRefineStarts) best.pop_back();
          }
        }

  out.distance = std::numeric_limits<double>::infinity();
  for (const Candidate& c : best) {
    // Refinement only ever replaces a start that it improves.
    std::array<double, 5> ang = c.angles;
    double d = c.distance;
    if (d > 0.0) {
      const auto refined = refine(am, bm, ang);
      const double rd = max_distance(corrected_matrix(am, refined), bm);
      if (rd < d) {
        ang = refined;
        d = rd;
      }
    }
    if (d < out.distance) {
      out.distance = d;
      out.phases = from_array(ang);
    }
  }
  out.distance = max_distance(corrected_matrix(am, as_array(out.phases)), bm);
  out.equivalent = out.distance < kEquivalenceTol;
  return out;
}

CnotRecipe cnot_from_qpg(const TwoQubitGate& qpg) {
  const TwoQubitGate composition = target_sandwich(qpg, target_rotation());
  const PhaseEquivalence eq = equal_up_to_local_phases(composition, ideal_cnot());
  if (!eq.equivalent) {
    throw RecipeMismatch("target rotation sandwich is not local-phase equivalent to CNOT",
                         eq.distance);
  }
  return {composition, apply_local_phases(composition, eq.phases), eq.phases, eq.distance};
}

double control_purity(const Vector& amplitudes) {
  if (amplitudes.size() != 4) throw Error("control_purity expects a two-qubit state");
  Eigen::Matrix2cd rho = Eigen::Matrix2cd::Zero();
  for (int c1 = 0; c1 < 2; ++c1)
    for (int c2 = 0; c2 < 2; ++c2)
      for (int t = 0; t < 2; ++t) rho(c1, c2) += amplitudes(2 * c1 + t) * std::conj(amplitudes(2 * c2 + t));
  return (rho * rho).trace().real();
}

}  // namespace qpg
