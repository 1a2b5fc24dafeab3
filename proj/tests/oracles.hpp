#pragma once

// Independent reference computations. None of these call into the code they
// check: series instead of recurrences, closed forms instead of matrix
// exponentials, hand-multiplied gate products.

#include <cmath>
#include <complex>

#include <Eigen/Dense>

namespace oracle {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;

inline long double binomial(int n, int k) {
  if (k < 0 || k > n) return 0.0L;
  long double r = 1.0L;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

inline long double factorial(int n) {
  long double r = 1.0L;
  for (int i = 2; i <= n; ++i) r *= i;
  return r;
}

/// L_n^k(x) = sum_i (-1)^i C(n+k, n-i) x^i / i!
inline double laguerre_series(int n, int k, double x) {
  long double sum = 0.0L;
  long double power = 1.0L;  // x^i / i!
  for (int i = 0; i <= n; ++i) {
    if (i > 0) power *= static_cast<long double>(x) / i;
    sum += (i % 2 ? -1.0L : 1.0L) * binomial(n + k, n - i) * power;
  }
  return static_cast<double>(sum);
}

/// e^{-eta^2/2} n!/(n+k)! L_n^k(eta^2) from the series.
inline double f_series(int n, int k, double eta) {
  return std::exp(-0.5 * eta * eta) * static_cast<double>(factorial(n) / factorial(n + k)) *
         laguerre_series(n, k, eta * eta);
}

/// <m| exp(i eta (a + a^dag)) |n> of the untruncated oscillator:
/// e^{-eta^2/2} (i eta)^{|m-n|} sqrt(n_<! / n_>!) L_{n_<}^{|m-n|}(eta^2).
inline Complex displacement_element(int m, int n, double eta) {
  const int lo = std::min(m, n);
  const int d = std::abs(m - n);
  const double mag = std::exp(-0.5 * eta * eta) * std::pow(eta, d) *
                     std::sqrt(static_cast<double>(factorial(lo) / factorial(lo + d))) *
                     laguerre_series(lo, d, eta * eta);
  return mag * std::pow(Complex(0.0, 1.0), d);
}

/// exp(-i h t) by scaling and squaring of a Taylor series; for moderate |h t|.
inline Matrix taylor_expm(const Matrix& h, double t) {
  const Matrix a = Complex(0.0, -t) * h;
  const double norm = a.cwiseAbs().rowwise().sum().maxCoeff();
  int squarings = 0;
  while (norm / std::pow(2.0, squarings) > 0.25) ++squarings;
  const Matrix x = a / std::pow(2.0, squarings);
  Matrix term = Matrix::Identity(h.rows(), h.cols());
  Matrix sum = term;
  for (int k = 1; k <= 30; ++k) {
    term = term * x / static_cast<double>(k);
    sum += term;
  }
  for (int s = 0; s < squarings; ++s) sum = sum * sum;
  return sum;
}

/// Two-level transfer probability for coupling c and detuning d:
/// P(t) = c^2 / (c^2 + d^2/4) sin^2(sqrt(c^2 + d^2/4) t).
inline double rabi_transfer(double c, double d, double t) {
  const double w2 = c * c + 0.25 * d * d;
  if (w2 == 0.0) return 0.0;
  const double s = std::sin(std::sqrt(w2) * t);
  return c * c / w2 * s * s;
}

/// Three-state chain |a> -(g1)- |b> -(g2)- |c> with |b> raised by Delta:
/// the effective a <-> c coupling to second order is -g1 g2 / Delta.
inline double chain_effective_coupling(double g1, double g2, double delta) { return -g1 * g2 / delta; }

/// (I (x) R) diag(-1, 1, 1, 1) (I (x) R) with R = [[1, 1], [-1, 1]] / sqrt2 (columns are
/// images of |d>, |u>), multiplied out by hand.
inline Matrix sandwich_by_hand() {
  Matrix m = Matrix::Zero(4, 4);
  m(0, 0) = -1.0;
  m(1, 1) = 1.0;
  m(2, 3) = 1.0;
  m(3, 2) = -1.0;
  return m;
}

}  // namespace oracle
