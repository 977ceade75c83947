#pragma once
// Fixed-stepsize time stepper.
//
// One step from y_n: with the tableau evaluated at v = omega h,
//   Y_i     = y_n + h xi_i c_i f(y_n) + h^2 sum_{j<=i} a_ij g(Y_j)
//   y_{n+1} = y_n + h f(y_n) + h^2 sum_i b_i g(Y_i)
// Each implicit stage is solved by fixed-point iteration from the predictor
// Y_i^(0) = y_n + h c_i f(y_n) + (c_i h)^2/2 g(y_n), stopping when the
// 2-norm update drops below fp_tol; a zero diagonal entry makes the stage a
// single explicit evaluation.  The framework is strictly autonomous --
// non-autonomous forcings are handled by state augmentation on the problem
// side -- and f(y_n) is evaluated exactly once per step.

#include <chrono>
#include <cmath>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "tableau.hpp"
#include "util.hpp"

namespace eftddirk {

struct Problem {
  std::string name;
  int dim = 0;
  std::function<std::vector<double>(const std::vector<double>&)> f;  // y'
  std::function<std::vector<double>(const std::vector<double>&)> g;  // y'' = f'(y) f(y)
  std::vector<double> y0;
  double t0 = 0, t_end = 0;
  std::optional<double> omega_hint;                       // principal frequency
  std::function<std::vector<double>(double)> exact;       // optional
  std::function<double(const std::vector<double>&)> invariant;  // optional
};

struct SolveConfig {
  double h = 0;       // stepsize
  double omega = 0;   // fitting frequency actually used
  double fp_tol = 1e-12;
  int fp_max_iter = 100;
};

struct RunReport {
  std::string scheme;
  double h = 0;
  long steps = 0;
  std::optional<double> max_global_error;
  std::vector<std::pair<double, double>> invariant_drift;  // (t, |H - H0|)
  double wall_seconds = 0;
  long fp_iterations = 0;
};

struct StageConvergenceError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

namespace detail {

inline void axpy(std::vector<double>& y, double a, const std::vector<double>& x) {
  for (std::size_t k = 0; k < y.size(); ++k) y[k] += a * x[k];
}

inline double dist2(const std::vector<double>& x, const std::vector<double>& y) {
  double s = 0;
  for (std::size_t k = 0; k < x.size(); ++k) s += (x[k] - y[k]) * (x[k] - y[k]);
  return std::sqrt(s);
}

inline bool all_finite(const std::vector<double>& x) {
  for (double v : x)
    if (!std::isfinite(v)) return false;
  return true;
}

}  // namespace detail

struct StageResult {
  std::vector<double> y;
  int iterations = 0;  // fixed-point iterations taken (0 for explicit stages)
};

// Solves stage i given the converged g-values of stages 0..i-1.
inline StageResult solve_stage(const NumericTableau& tab, const Problem& pb,
                               const std::vector<double>& y_n, const std::vector<double>& f_n,
                               const std::vector<double>& g_n, int i,
                               const std::vector<std::vector<double>>& g_prior,
                               const SolveConfig& cfg) {
  const double h = cfg.h, ci = tab.c[i];
  std::vector<double> base = y_n;
  detail::axpy(base, h * tab.xi[i] * ci, f_n);
  for (int j = 0; j < i; ++j) detail::axpy(base, h * h * tab.a[i][j], g_prior[j]);

  const double aii = tab.a[i][i];
  if (aii == 0.0) return {std::move(base), 0};

  std::vector<double> y = y_n;
  detail::axpy(y, h * ci, f_n);
  detail::axpy(y, 0.5 * ci * ci * h * h, g_n);
  const double guard = 1e8 * std::max(1.0, norm2(y_n));
  for (int r = 1; r <= cfg.fp_max_iter; ++r) {
    std::vector<double> next = base;
    detail::axpy(next, h * h * aii, pb.g(y));
    const double delta = detail::dist2(next, y);
    y = std::move(next);
    if (!detail::all_finite(y) || norm2(y) > guard)
      throw StageConvergenceError("stage " + std::to_string(i + 1) +
                                  " fixed-point iteration diverged (h too large)");
    if (delta < cfg.fp_tol) return {std::move(y), r};
  }
  throw StageConvergenceError("stage " + std::to_string(i + 1) + " not converged after " +
                              std::to_string(cfg.fp_max_iter) +
                              " fixed-point iterations (h too large for the contraction)");
}

// One step y_n -> y_{n+1}.  The framework is autonomous; t_n is carried for
// bookkeeping only.  Accumulates fixed-point iteration counts into *fp_iters.
inline std::vector<double> step(const NumericTableau& tab, const Problem& pb, double /*t_n*/,
                                const std::vector<double>& y_n, const SolveConfig& cfg,
                                long* fp_iters = nullptr) {
  if (cfg.h == 0) return y_n;
  const std::vector<double> f_n = pb.f(y_n);
  const std::vector<double> g_n = pb.g(y_n);

  std::vector<std::vector<double>> g_stage(tab.s);
  for (int i = 0; i < tab.s; ++i) {
    StageResult st = solve_stage(tab, pb, y_n, f_n, g_n, i, g_stage, cfg);
    if (fp_iters) *fp_iters += st.iterations;
    g_stage[i] = pb.g(st.y);
  }

  std::vector<double> y = y_n;
  detail::axpy(y, cfg.h, f_n);
  for (int i = 0; i < tab.s; ++i) detail::axpy(y, cfg.h * cfg.h * tab.b[i], g_stage[i]);
  return y;
}

struct Trajectory {
  std::vector<double> t;
  std::vector<std::vector<double>> y;
};

struct IntegrateOptions {
  long thin = 1;                          // store every thin-th step in traj
  const Trajectory* reference = nullptr;  // error source when exact is absent
  std::optional<double> t_end;            // override the problem's span end
};

// Marches the problem from t0 to t_end with fixed h (one shortened final step
// if the span is not a multiple of h; the tableau is re-evaluated for it).
// The global error is measured in the infinity norm at every step against the
// exact solution, or at matching times of opt.reference when exact is absent.
inline RunReport integrate(const SchemeSpec& sp, const Problem& pb, const SolveConfig& cfg,
                           Trajectory* traj = nullptr, const IntegrateOptions& opt = {}) {
  if (!(cfg.h > 0)) throw std::invalid_argument("integrate: h must be positive");
  if (!(cfg.fp_tol > 0)) throw std::invalid_argument("integrate: fp_tol must be positive");
  const double t0 = pb.t0, T = opt.t_end.value_or(pb.t_end);
  if (!(T > t0)) throw std::invalid_argument("integrate: empty time span");

  const NumericTableau tab = eval_tableau(sp, cfg.omega * cfg.h);

  RunReport rep;
  rep.scheme = sp.name;
  rep.h = cfg.h;

  std::vector<double> y = pb.y0;
  double t = t0;
  const double H0 = pb.invariant ? pb.invariant(y) : 0.0;
  double mge = 0;
  bool have_err = bool(pb.exact);
  std::size_t ref_k = 0;

  auto record = [&](long n, bool stored) {
    if (pb.exact) {
      const std::vector<double> ex = pb.exact(t);
      mge = std::max(mge, dist_inf(y, ex));
    } else if (opt.reference) {
      const auto& ref = *opt.reference;
      while (ref_k < ref.t.size() && ref.t[ref_k] < t - 1e-9) ++ref_k;
      if (ref_k < ref.t.size() && std::fabs(ref.t[ref_k] - t) <= 1e-9) {
        mge = std::max(mge, dist_inf(y, ref.y[ref_k]));
        have_err = true;
      }
    }
    if (pb.invariant) rep.invariant_drift.emplace_back(t, std::fabs(pb.invariant(y) - H0));
    if (traj && stored) {
      traj->t.push_back(t);
      traj->y.push_back(y);
    }
    (void)n;
  };

  const auto clock0 = std::chrono::steady_clock::now();
  record(0, true);

  const long n_full = long(std::floor((T - t0) / cfg.h + 1e-9));
  const long thin = std::max<long>(1, opt.thin);
  for (long n = 1; n <= n_full; ++n) {
    try {
      y = step(tab, pb, t, y, cfg, &rep.fp_iterations);
    } catch (const StageConvergenceError& e) {
      throw StageConvergenceError(std::string(e.what()) + " at step " + std::to_string(n) +
                                  ", t = " + format_g17(t));
    }
    t = t0 + double(n) * cfg.h;
    ++rep.steps;
    record(n, n % thin == 0 || (n == n_full && t >= T - 1e-12 * cfg.h));
  }
  if (T - t > 1e-12 * cfg.h) {
    SolveConfig last = cfg;
    last.h = T - t;
    const NumericTableau tab_last = eval_tableau(sp, cfg.omega * last.h);
    try {
      y = step(tab_last, pb, t, y, last, &rep.fp_iterations);
    } catch (const StageConvergenceError& e) {
      throw StageConvergenceError(std::string(e.what()) + " at the final partial step, t = " +
                                  format_g17(t));
    }
    t = T;
    ++rep.steps;
    record(rep.steps, true);
  }

  rep.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - clock0).count();
  if (have_err) rep.max_global_error = mge;
  return rep;
}

}  // namespace eftddirk
