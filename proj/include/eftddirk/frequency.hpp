#pragma once

// Fitting-frequency estimation: golden-section search on a scalar objective,
// and a driver that minimizes an integration-quality metric over omega.

#include <cmath>
#include <functional>
#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

#include "integrator.hpp"
#include "util.hpp"

namespace eftddirk {

struct GoldenResult {
  double x = 0;          // midpoint of the final bracket
  double value = 0;      // best objective seen there
  int iterations = 0;    // bracket shrinks by (sqrt(5)-1)/2 per iteration
  int probes = 0;        // objective evaluations: iterations + 2
};

// Minimize f over [lo, hi] until the bracket is narrower than tol.  Every
// evaluation is appended to *trace when given.  A non-finite objective value
// aborts the search, naming the offending point.
inline GoldenResult golden_section(const std::function<double(double)>& f, double lo, double hi,
                                   double tol,
                                   std::vector<std::pair<double, double>>* trace = nullptr) {
  if (!(lo < hi)) throw std::invalid_argument("golden_section: need lo < hi");
  if (!(tol > 0)) throw std::invalid_argument("golden_section: need tol > 0");
  const double invphi = (std::sqrt(5.0) - 1) / 2;

  GoldenResult out;
  auto eval = [&](double x) {
    const double val = f(x);
    ++out.probes;
    if (!std::isfinite(val))
      throw std::runtime_error("golden_section: objective not finite at x = " + format_g17(x));
    if (trace) trace->push_back({x, val});
    return val;
  };

  double a = lo, b = hi;
  double x1 = b - invphi * (b - a), x2 = a + invphi * (b - a);
  double f1 = eval(x1), f2 = eval(x2);
  while (b - a > tol) {
    ++out.iterations;
    if (f1 < f2) {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - invphi * (b - a);
      f1 = eval(x1);
    } else {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + invphi * (b - a);
      f2 = eval(x2);
    }
  }
  out.x = (a + b) / 2;
  out.value = std::min(f1, f2);
  return out;
}

enum class FreqObjective { GlobalError, InvariantDrift };

struct FreqSearch {
  double lo = 0, hi = 0;                                    // omega bracket
  double tol = 1e-6;                                        // final bracket width
  FreqObjective objective = FreqObjective::GlobalError;
  std::optional<double> t_end;                              // span override
};

struct FreqResult {
  double omega = 0;
  double objective = 0;
  int iterations = 0;
  int probes = 0;
  std::vector<std::pair<double, double>> trace;  // (omega, objective) per probe
};

// Pick the fitting frequency that minimizes either the max global error (needs
// an exact solution on the problem) or the worst invariant drift over the run.
inline FreqResult estimate_omega(const SchemeSpec& sp, const Problem& pb, double h,
                                 const FreqSearch& search) {
  if (search.objective == FreqObjective::GlobalError && !pb.exact)
    throw std::invalid_argument("estimate_omega: " + pb.name + " has no exact solution");
  if (search.objective == FreqObjective::InvariantDrift && !pb.invariant)
    throw std::invalid_argument("estimate_omega: " + pb.name + " has no invariant");

  IntegrateOptions opt;
  opt.t_end = search.t_end;
  auto objective = [&](double omega) {
    const SolveConfig cfg{h, omega, 1e-12, 100};
    const RunReport rep = integrate(sp, pb, cfg, nullptr, opt);
    if (search.objective == FreqObjective::GlobalError) return *rep.max_global_error;
    double worst = 0;
    for (const auto& [t, d] : rep.invariant_drift) worst = std::max(worst, d);
    return worst;
  };

  FreqResult out;
  const GoldenResult g =
      golden_section(objective, search.lo, search.hi, search.tol, &out.trace);
  out.omega = g.x;
  out.objective = g.value;
  out.iterations = g.iterations;
  out.probes = g.probes;
  return out;
}

}  // namespace eftddirk
