#pragma once

// Linear stability analysis: amplification factor on y'' = -nu^2 y, scans of
// the (theta, v) stability region, and leading phase-lag / damping terms.

#include <cmath>
#include <complex>
#include <cstdint>
#include <future>
#include <limits>
#include <stdexcept>
#include <thread>
#include <vector>

#include "tableau.hpp"
#include "util.hpp"

namespace eftddirk {

namespace detail {
inline constexpr double kStableTol = 1e-12;
}

// Amplification factor for one step of size h on y'' = -nu^2 y, written in the
// complex variable u = y + i y'/nu with theta = nu h.  The stage vector solves
// (I + theta^2 A) Y = e + i theta (xi * c), lower triangular, and
//   R = 1 + i theta - theta^2 b^T Y.
// The tableau (hence A, b, xi) is evaluated at the fitting parameter v, which
// need not equal theta; v = theta is the exactly-fitted diagonal.
inline std::complex<double> stability_R(const NumericTableau& tab, double theta) {
  const double th2 = theta * theta;
  std::complex<double> Y[3];
  for (int i = 0; i < tab.s; ++i) {
    std::complex<double> rhs(1.0, theta * tab.xi[i] * tab.c[i]);
    for (int j = 0; j < i; ++j) rhs -= th2 * tab.a[i][j] * Y[j];
    const double diag = 1 + th2 * tab.a[i][i];
    if (std::fabs(diag) < detail::kPoleTol)
      throw TableauPoleError("stability pole: stage factor 1 + theta^2 a_" +
                             std::to_string(i + 1) + std::to_string(i + 1) +
                             " ~ 0 at theta = " + format_g17(theta));
    Y[i] = rhs / diag;
  }
  std::complex<double> acc(0, 0);
  for (int i = 0; i < tab.s; ++i) acc += tab.b[i] * Y[i];
  return std::complex<double>(1.0, theta) - th2 * acc;
}

inline std::complex<double> stability_R(const SchemeSpec& sp, double theta, double v) {
  return stability_R(eval_tableau(sp, v), theta);
}

// Phase lag theta - arg R and damping 1 - |R| at fixed frequency ratio
// r = v/theta.  The principal argument is the right branch for the small and
// moderate theta used in leading-term fits; sweeps unwrap it themselves.
struct PhasePoint {
  double theta = 0;
  double disp = 0;  // dispersion (phase lag)
  double dis = 0;   // dissipation (damping)
};

inline PhasePoint phase_at(const SchemeSpec& sp, double r, double theta) {
  const std::complex<double> R = stability_R(sp, theta, r * theta);
  return {theta, theta - std::arg(R), 1.0 - std::abs(R)};
}

// Continuous sweep over an increasing theta grid; the argument of R is
// unwrapped starting from arg R(0) = 0 so the phase lag has no 2 pi jumps.
inline std::vector<PhasePoint> phase_sweep(const SchemeSpec& sp, double r,
                                           const std::vector<double>& thetas) {
  std::vector<PhasePoint> out;
  out.reserve(thetas.size());
  const double two_pi = 2 * std::acos(-1.0);
  double prev_arg = 0;
  for (double theta : thetas) {
    const std::complex<double> R = stability_R(sp, theta, r * theta);
    double a = std::arg(R);
    a += two_pi * std::round((prev_arg - a) / two_pi);
    prev_arg = a;
    out.push_back({theta, theta - a, 1.0 - std::abs(R)});
  }
  return out;
}

// Leading term D(theta) ~ coeff * theta^(order+1) of the phase lag and
// damping; `order` follows the classical convention (a method dispersive of
// order p has phase lag O(theta^{p+1})), so it is the fitted log-log slope
// minus one.  The slope comes from a halving theta ladder, the coefficient
// from one Richardson step (in theta^2; both series advance in even powers).
// Entries at round-off are discarded; when fewer than two survive (e.g. on
// the fitted diagonal r = 1) the term is reported floor-limited.
struct PhaseTerm {
  int order = 0;
  double coeff = 0;
  double slope = std::numeric_limits<double>::quiet_NaN();
  bool floor_limited = false;
};

struct PhaseReport {
  double r = 0;
  PhaseTerm disp, dis;
};

namespace detail {

inline PhaseTerm fit_leading_term(const std::vector<double>& thetas,
                                  const std::vector<double>& values) {
  constexpr double kFloor = 1e-13;
  PhaseTerm out;
  std::vector<double> mag(values.size());
  for (std::size_t i = 0; i < values.size(); ++i) mag[i] = std::fabs(values[i]);
  const SlopeFit fit = fit_loglog(thetas, mag, kFloor);
  if (fit.used < 2 || !std::isfinite(fit.slope)) {
    out.floor_limited = true;
    return out;
  }
  out.slope = fit.slope;
  const int power = int(std::lround(fit.slope));
  out.order = power - 1;
  // Richardson over the smallest halving pair (theta, theta/2) whose values
  // still sit comfortably above round-off; fall back to any usable pair.
  auto richardson = [&](std::size_t i) {
    const double rho = thetas[i - 1] / thetas[i];
    const double cs = values[i] / std::pow(thetas[i], power);
    const double cb = values[i - 1] / std::pow(thetas[i - 1], power);
    return (rho * rho * cs - cb) / (rho * rho - 1);
  };
  for (double guard : {100 * kFloor, kFloor}) {
    for (std::size_t i = thetas.size(); i-- > 1;) {
      if (mag[i] < guard || mag[i - 1] < guard) continue;
      out.coeff = richardson(i);
      return out;
    }
  }
  return out;
}

}  // namespace detail

inline PhaseReport phase_leading_terms(const SchemeSpec& sp, double r,
                                       const std::vector<double>& thetas = {0.4, 0.2, 0.1, 0.05,
                                                                            0.025}) {
  if (thetas.size() < 5) throw std::invalid_argument("phase_leading_terms: need >= 5 thetas");
  const double ratio = thetas[1] / thetas[0];
  for (std::size_t i = 1; i < thetas.size(); ++i) {
    if (!(thetas[i] < thetas[i - 1]) || thetas[i] <= 0)
      throw std::invalid_argument("phase_leading_terms: thetas must be positive and decreasing");
    if (std::fabs(thetas[i] / thetas[i - 1] - ratio) > 1e-9 * std::fabs(ratio))
      throw std::invalid_argument("phase_leading_terms: thetas must be geometric");
  }
  std::vector<double> disp(thetas.size()), dis(thetas.size());
  for (std::size_t i = 0; i < thetas.size(); ++i) {
    const PhasePoint p = phase_at(sp, r, thetas[i]);
    disp[i] = p.disp;
    dis[i] = p.dis;
  }
  PhaseReport rep;
  rep.r = r;
  rep.disp = detail::fit_leading_term(thetas, disp);
  rep.dis = detail::fit_leading_term(thetas, dis);
  return rep;
}

// Stability scan over [0, theta_max] x [0, v_max], n points per axis with the
// endpoints included.  A cell is stable when |R| <= 1 + 1e-12; cells where the
// tableau or the stage factor is singular are flagged rather than fatal.  Rows
// share one tableau evaluation and are processed concurrently; the layout and
// the counts do not depend on the thread schedule.
struct StabilityRegion {
  int n = 0;
  double theta_max = 0, v_max = 0;
  std::vector<double> theta, v;       // axis values, size n
  std::vector<std::uint8_t> stable;   // n*n cells, index iv*n + it
  std::vector<std::uint8_t> pole;     // n*n cells
  std::vector<double> mag;            // |R| per cell, NaN where pole is set
  long stable_count = 0, pole_count = 0;
};

inline StabilityRegion stability_region(const SchemeSpec& sp, double theta_max = 5.0,
                                        double v_max = 5.0, int n = 500) {
  if (n < 1 || theta_max <= 0 || v_max <= 0)
    throw std::invalid_argument("stability_region: need n >= 1 and positive ranges");
  StabilityRegion reg;
  reg.n = n;
  reg.theta_max = theta_max;
  reg.v_max = v_max;
  reg.theta.resize(n);
  reg.v.resize(n);
  for (int k = 0; k < n; ++k) {
    reg.theta[k] = n == 1 ? 0.0 : theta_max * k / double(n - 1);
    reg.v[k] = n == 1 ? 0.0 : v_max * k / double(n - 1);
  }
  reg.stable.assign(std::size_t(n) * n, 0);
  reg.pole.assign(std::size_t(n) * n, 0);
  reg.mag.assign(std::size_t(n) * n, std::numeric_limits<double>::quiet_NaN());

  auto run_row = [&](int iv) {
    const std::size_t base = std::size_t(iv) * n;
    NumericTableau tab;
    try {
      tab = eval_tableau(sp, reg.v[iv]);
    } catch (const TableauPoleError&) {
      for (int it = 0; it < n; ++it) reg.pole[base + it] = 1;
      return;
    }
    for (int it = 0; it < n; ++it) {
      try {
        const double mag = std::abs(stability_R(tab, reg.theta[it]));
        reg.mag[base + it] = mag;
        reg.stable[base + it] = mag <= 1 + detail::kStableTol ? 1 : 0;
      } catch (const TableauPoleError&) {
        reg.pole[base + it] = 1;
      }
    }
  };

  const unsigned workers =
      std::min<unsigned>(std::max(1u, std::thread::hardware_concurrency()), unsigned(n));
  std::vector<std::future<void>> jobs;
  for (unsigned w = 0; w < workers; ++w)
    jobs.push_back(std::async(std::launch::async, [&, w] {
      for (int iv = int(w); iv < n; iv += int(workers)) run_row(iv);
    }));
  for (auto& j : jobs) j.get();

  for (std::size_t k = 0; k < reg.stable.size(); ++k) {
    if (reg.pole[k])
      ++reg.pole_count;
    else if (reg.stable[k])
      ++reg.stable_count;
  }
  return reg;
}

}  // namespace eftddirk
