#pragma once

#include "qpg/quantum_core.hpp"

namespace qpg {

/// Lamb-Dicke parameter plus the Fock truncation it is evaluated on.
/// `pad` extra levels are used internally wherever a truncated operator
/// function (e.g. an exponential) would otherwise be corrupted at the top.
struct LambDickeContext {
  double eta = 0.1;
  int n_max = 6;
  int pad = 10;

  /// Throws InvalidParameter: 0 < eta < 1, n_max >= 1, pad >= 4.
  void validate() const;
};

/// Generalized Laguerre polynomial L_n^k(x) by the three-term recurrence.
double laguerre(int n, int k, double x);

/// f_k(n) = exp(-eta^2/2) n!/(n+k)! L_n^k(eta^2); the diagonal of F_k.
double f_factor(int n, int k, double eta);

/// Diagonal F_k = sum_n f_k(n) |n><n| on Fock(n_max).
Operator build_F(int k, const LambDickeContext& ctx);

/// exp(i eta (a + a^dagger)) computed on Fock(n_max + pad), cropped to Fock(n_max).
Operator quadrature_exponential(const LambDickeContext& ctx);

/// The same exponential on Fock(n_max + pad) without cropping.
Operator quadrature_exponential_padded(const LambDickeContext& ctx);

}  // namespace qpg
