#pragma once
// Exponential-fitting residual evaluators.
//
// The schemes are constructed so that both the internal stages and the final
// update integrate the reference functions x^k e^{lambda x} exactly for k = 0
// and lambda = +-i omega.  Evaluating the degree-k conditions for arbitrary
// complex lambda turns that construction into something testable: the k = 0
// residuals must vanish identically at the fitted harmonic, and the same
// evaluators report how far any other (k, lambda) pair is from being
// reproduced.  All conditions are normalized by h^max(k,1), so each residual
// is dimensionless in h:
//   k = 0:  z^2 sum a_ij e^{c_j z} + xi_i c_i z - (e^{c_i z} - 1)
//   k = 1:  sum a_ij (2z + c_j z^2) e^{c_j z} + xi_i c_i - c_i e^{c_i z}
//   k >= 2: sum a_ij (k(k-1)c_j^{k-2} + 2k c_j^{k-1} z + c_j^k z^2) e^{c_j z}
//             - c_i^k e^{c_i z}
// with z = lambda h, and the final-update analogues using b and right-hand
// sides e^z - 1 - z, e^z - 1, e^z.

#include <cmath>
#include <complex>
#include <stdexcept>

#include "tableau.hpp"

namespace eftddirk {

struct FitProbe {
  std::complex<double> lambda;  // fitting exponent, 1/time
  double h = 0;                 // step the condition is scaled against
  int K = 0;                    // highest polynomial degree probed
  int L = 1;                    // harmonic count of the reference set
};

namespace detail {

inline void check_fit_args(const NumericTableau& tab, int stage, const FitProbe& probe, int k,
                           bool internal) {
  if (k < 0 || k > probe.K)
    throw std::invalid_argument("fit residual: k must lie in [0, probe.K]");
  if (internal && (stage < 0 || stage >= tab.s))
    throw std::invalid_argument("fit residual: stage out of range");
  if (!(probe.h > 0)) throw std::invalid_argument("fit residual: probe.h must be positive");
}

// k(k-1)c^{k-2} + 2k c^{k-1} z + c^k z^2, the second derivative of x^k e^{z x}
// at x = c with x scaled out.
inline std::complex<double> d2_bracket(double c, int k, std::complex<double> z) {
  if (k == 0) return z * z;
  if (k == 1) return 2.0 * z + c * z * z;
  return double(k) * double(k - 1) * std::pow(c, k - 2) + 2.0 * double(k) * std::pow(c, k - 1) * z +
         std::pow(c, k) * z * z;
}

}  // namespace detail

// Scheme side minus exact side of the degree-k internal condition for one
// stage: zero means stage `stage` reproduces x^k e^{lambda x} exactly.
inline std::complex<double> internal_fit_residual(const NumericTableau& tab, int stage,
                                                  const FitProbe& probe, int k) {
  detail::check_fit_args(tab, stage, probe, k, true);
  const std::complex<double> z = probe.lambda * probe.h;
  std::complex<double> sum = 0;
  for (int j = 0; j <= stage; ++j)
    sum += tab.a[stage][j] * detail::d2_bracket(tab.c[j], k, z) * std::exp(tab.c[j] * z);
  const std::complex<double> ei = std::exp(tab.c[stage] * z);
  const double ci = tab.c[stage];
  if (k == 0) return sum + tab.xi[stage] * ci * z - (ei - 1.0);
  if (k == 1) return sum + tab.xi[stage] * ci - ci * ei;
  return sum - std::pow(ci, k) * ei;
}

// Same for the final update: zero means the step map reproduces x^k e^{lambda x}.
inline std::complex<double> final_fit_residual(const NumericTableau& tab, const FitProbe& probe,
                                               int k) {
  detail::check_fit_args(tab, 0, probe, k, false);
  const std::complex<double> z = probe.lambda * probe.h;
  std::complex<double> sum = 0;
  for (int i = 0; i < tab.s; ++i)
    sum += tab.b[i] * detail::d2_bracket(tab.c[i], k, z) * std::exp(tab.c[i] * z);
  const std::complex<double> ez = std::exp(z);
  if (k == 0) return sum - (ez - 1.0 - z);
  if (k == 1) return sum - (ez - 1.0);
  return sum - ez;
}

}  // namespace eftddirk
