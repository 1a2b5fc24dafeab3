#include "qpg/special_functions.hpp"

#include <cmath>

namespace qpg {

void LambDickeContext::validate() const {
  if (!(eta > 0.0 && eta < 1.0)) throw InvalidParameter("eta", "must satisfy 0 < eta < 1");
  if (n_max < 1) throw InvalidParameter("n_max", "must be >= 1");
  if (pad < 4) throw InvalidParameter("pad", "must be >= 4");
}

double laguerre(int n, int k, double x) {
  if (n < 0 || k < 0 || !(x >= 0.0)) {
    throw InvalidParameter("laguerre", "requires n >= 0, k >= 0, x >= 0");
  }
  double prev = 1.0;
  if (n == 0) return prev;
  double cur = 1.0 + k - x;
  for (int m = 2; m <= n; ++m) {
    const double next = ((2.0 * m - 1.0 + k - x) * cur - (m - 1.0 + k) * prev) / m;
    prev = cur;
    cur = next;
  }
  return cur;
}

double f_factor(int n, int k, double eta) {
  if (!(eta > 0.0 && eta < 1.0)) throw InvalidParameter("eta", "must satisfy 0 < eta < 1");
  if (n < 0 || k < 0) throw InvalidParameter("f_factor", "requires n >= 0, k >= 0");
  // n!/(n+k)! = 1 / ((n+1)(n+2)...(n+k))
  double ratio = 1.0;
  for (int i = 1; i <= k; ++i) ratio /= static_cast<double>(n + i);
  const double x = eta * eta;
  return std::exp(-0.5 * x) * ratio * laguerre(n, k, x);
}

Operator build_F(int k, const LambDickeContext& ctx) {
  ctx.validate();
  Matrix m = Matrix::Zero(ctx.n_max + 1, ctx.n_max + 1);
  for (int n = 0; n <= ctx.n_max; ++n) m(n, n) = f_factor(n, k, ctx.eta);
  return Operator(HilbertSpace::fock(ctx.n_max), std::move(m));
}

Operator quadrature_exponential_padded(const LambDickeContext& ctx) {
  ctx.validate();
  const int big = ctx.n_max + ctx.pad;
  const Operator a = annihilation(big);
  // exp(i eta X) = exp(-i H t) with H = -eta X, t = 1.
  const Operator generator = Complex(-ctx.eta) * (a + a.adjoint());
  return expm_unitary(generator, 1.0);
}

Operator quadrature_exponential(const LambDickeContext& ctx) {
  const Operator padded = quadrature_exponential_padded(ctx);
  const int d = ctx.n_max + 1;
  return Operator(HilbertSpace::fock(ctx.n_max), padded.matrix().topLeftCorner(d, d));
}

}  // namespace qpg
