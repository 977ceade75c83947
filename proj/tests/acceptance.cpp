// Acceptance gate: one line per criterion, pinned tolerances, exit code =
// number of failures.  Everything here goes through the public headers only.

#include <eftddirk/analysis.hpp>
#include <eftddirk/fitting.hpp>
#include <eftddirk/frequency.hpp>
#include <eftddirk/integrator.hpp>
#include <eftddirk/problems.hpp>
#include <eftddirk/tableau.hpp>
#include <eftddirk/trees.hpp>

#include <chrono>
#include <cmath>
#include <complex>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

using namespace eftddirk;

namespace {

const std::vector<std::string> kAll = {
    "2s4(1/4,1,0)", "2s4(0,1/2,0)", "2s4(1/4,1,11/20)", "2s4(0,1/2,3/40)", "2s5", "3s6"};

int failures = 0;

void run(int no, const std::string& title, const std::function<bool(std::ostringstream&)>& body) {
  std::ostringstream detail;
  bool ok = false;
  const auto t0 = std::chrono::steady_clock::now();
  try {
    ok = body(detail);
  } catch (const std::exception& e) {
    detail << " threw: " << e.what();
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  std::printf("criterion %2d: %s - %s (%s) [%.2f s]\n", no, ok ? "PASS" : "FAIL", title.c_str(),
              detail.str().c_str(), secs);
  std::fflush(stdout);
  if (!ok) ++failures;
}

double max_drift(const RunReport& rep) {
  double m = 0;
  for (const auto& [t, d] : rep.invariant_drift) m = std::max(m, d);
  return m;
}

// Fitting residuals, every stage and the final update, degrees 0 and 1,
// both rotation senses.
bool crit1(std::ostringstream& out) {
  const auto t0 = std::chrono::steady_clock::now();
  double worst = 0;
  for (const std::string& token : kAll) {
    const SchemeSpec sp = build_scheme(token);
    for (double v : {0.1, 0.5, 1.0, 2.0}) {
      const NumericTableau tab = eval_tableau(sp, v);
      for (double sign : {1.0, -1.0}) {
        FitProbe probe;
        probe.lambda = {0.0, sign * v};
        probe.h = 1.0;
        for (int i = 0; i < sp.stages; ++i)
          worst = std::max(worst, std::abs(internal_fit_residual(tab, i, probe, 0)));
        worst = std::max(worst, std::abs(final_fit_residual(tab, probe, 0)));
      }
    }
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  out << "max residual " << worst << " tol 1e-12, " << secs << " s < 1";
  return worst < 1e-12 && secs < 1.0;
}

bool crit2(std::ostringstream& out) {
  const Problem pb = harmonic(5.0);
  double worst = 0;
  for (const std::string& token : kAll) {
    const RunReport rep = integrate(build_scheme(token), pb, {0.1, 5.0, 1e-12, 100});
    worst = std::max(worst, rep.max_global_error.value_or(1.0));
  }
  out << "harmonic(5) h=0.1 worst MGE " << worst << " tol 1e-9";
  return worst < 1e-9;
}

bool crit3(std::ostringstream& out) {
  const Problem pb = kepler();
  IntegrateOptions opt;
  opt.t_end = 20;
  const std::vector<double> hs = {1.0 / 8, 1.0 / 16, 1.0 / 32, 1.0 / 64};
  bool ok = true;
  for (const std::string& token : kAll) {
    std::vector<double> mge;
    for (double h : hs)
      mge.push_back(*integrate(build_scheme(token), pb, {h, 5.0, 1e-12, 100}, nullptr, opt)
                         .max_global_error);
    const double slope = fit_loglog(hs, mge).slope;
    const SchemeSpec sp = build_scheme(token);
    const double lo = sp.order == 4 ? 3.7 : sp.order == 5 ? 4.7 : 5.7;
    // The phase-optimized weights push the measured slope on this
    // phase-dominated problem about one past the design order, so they get
    // the floor only; the plain schemes must sit inside the design window.
    const bool tuned = token.find("11/20") != std::string::npos ||
                       token.find("3/40") != std::string::npos;
    out << " " << token << ":" << slope;
    ok = ok && slope >= lo && (tuned || slope <= lo + 0.8);
  }
  out << " windows [3.7,4.5]/[4.7,5.5]/[5.7,6.5], floor only when tuned";
  return ok;
}

bool crit4(std::ostringstream& out) {
  const std::vector<double> hs = {1.0 / 8, 1.0 / 16, 1.0 / 32, 1.0 / 64};
  bool slopes_ok = true;
  for (const std::string& token : kAll) {
    const SchemeSpec sp = build_scheme(token);
    for (const OrderResidualRow& row : order_residuals(sp, 1.0, hs)) {
      const double need = sp.order + 1 - row.rho - 0.2;
      if (!std::isnan(row.slope) && row.slope < need) {
        slopes_ok = false;
        out << " " << token << " tree " << row.tree_no << " slope " << row.slope << " < " << need;
      }
    }
  }

  // Bridging identities between the series coefficients (entries expanded in
  // mu, E(mu) = E0 + E2 mu^2 + E4 mu^4) and the classical quadrature orders.
  double worst = 0;
  for (const std::string& token : kAll) {
    const SchemeSpec sp = build_scheme(token);
    const SeriesTableau st = tableau_series(sp);
    const int s = sp.stages;
    for (int i = 0; i < s; ++i) {
      const double ci = st.c[i];
      double lhs_a1 = st.xi2[i] * ci, lhs_a2 = 0;
      for (int j = 0; j <= i; ++j) {
        lhs_a1 += st.a0[i][j] * st.c[j];
        lhs_a2 += 0.5 * st.a0[i][j] * st.c[j] * st.c[j] + st.a2[i][j];
      }
      worst = std::max(worst, std::fabs(lhs_a1 - ci * ci * ci / 6));
      worst = std::max(worst, std::fabs(lhs_a2 - ci * ci * ci * ci / 24));
    }
    double c2 = 0, c3 = 0, c4 = 0;
    for (int i = 0; i < s; ++i) {
      const double ci = st.c[i];
      c2 += 0.5 * st.b0[i] * ci * ci + st.b2[i];
      c3 += st.b0[i] * ci * ci * ci / 6 + st.b2[i] * ci;
      c4 += st.b0[i] * ci * ci * ci * ci / 24 + 0.5 * st.b2[i] * ci * ci + st.b4[i];
    }
    worst = std::max(worst, std::fabs(c2 - 1.0 / 24));
    worst = std::max(worst, std::fabs(c3 - 1.0 / 120));
    worst = std::max(worst, std::fabs(c4 - 1.0 / 720));
  }
  out << " residual-slope margin 0.2; identity defect " << worst << " tol 1e-8";
  return slopes_ok && worst < 1e-8;
}

bool crit5(std::ostringstream& out) {
  const double s5 = std::sqrt(5.0), s6 = std::sqrt(6.0);
  struct Form {
    const char* token;
    int disp_order, dis_order;
    std::function<double(double)> disp, dis;
  };
  const double p3 = std::pow(5 + s5, 3);
  const std::vector<Form> forms = {
      {"2s4(1/4,1,0)", 4, 5, [](double r) { return -11 * (1 - r * r) / 480; },
       [](double r) { return (-230 - 7 * r * r) * (1 - r * r) / 23040; }},
      {"2s4(0,1/2,0)", 4, 5, [](double r) { return -3 * (1 - r * r) / 240; },
       [](double r) { return (-50 - r * r) * (1 - r * r) / 5760; }},
      {"2s5", 6, 5,
       [=](double r) {
         return (1 - r * r) * ((168 * s6 - 379) * r * r + 84 * s6 - 162) / 252000;
       },
       [](double r) { return (r * r * r * r + r * r - 2) / 14400; }},
      {"3s6", 6, 7,
       [=](double r) { return (1 - r * r) * ((17 * s5 - 10) * r * r - 4 * s5 - 10) / (3780 * p3); },
       [=](double r) {
         return (1 - r * r) *
                ((15 + s5) * r * r * r * r + 175 * (5 * s5 - 9) * r * r - 175 * (1 + 3 * s5)) /
                (15120000 * (3 + s5));
       }}};

  bool ok = true;
  for (const Form& fm : forms) {
    const SchemeSpec sp = build_scheme(fm.token);
    for (double r : {0.0, 0.5}) {
      const PhaseReport rep = phase_leading_terms(sp, r);
      const double ed = fm.disp(r), es = fm.dis(r);
      const bool here = rep.disp.order == fm.disp_order && rep.dis.order == fm.dis_order &&
                        std::fabs(rep.disp.coeff - ed) <= 0.02 * std::fabs(ed) &&
                        std::fabs(rep.dis.coeff - es) <= 0.02 * std::fabs(es);
      if (!here)
        out << " " << fm.token << " r=" << r << " got (" << rep.disp.order << ","
            << rep.disp.coeff << ")/(" << rep.dis.order << "," << rep.dis.coeff << ") want ("
            << fm.disp_order << "," << ed << ")/(" << fm.dis_order << "," << es << ")";
      ok = ok && here;
    }
  }
  for (const char* token : {"2s4(1/4,1,11/20)", "2s4(0,1/2,3/40)"})
    for (double r : {0.0, 0.5}) {
      const PhaseReport rep = phase_leading_terms(build_scheme(token), r);
      if (rep.disp.order < 6) {
        out << " " << token << " r=" << r << " dispersion order " << rep.disp.order << " < 6";
        ok = false;
      }
    }
  out << " closed forms 2%, tuned dispersion order >= 6";
  return ok;
}

bool crit6(std::ostringstream& out) {
  bool ok = true;

  double worst_diag = 0;
  for (const std::string& token : kAll) {
    const StabilityRegion reg = stability_region(build_scheme(token), 5.0, 5.0, 200);
    int skipped = 0;
    for (int k = 0; k < reg.n; ++k) {
      const std::size_t cell = std::size_t(k) * reg.n + k;
      if (reg.pole[cell]) {
        ++skipped;
        continue;
      }
      worst_diag = std::max(worst_diag, std::fabs(reg.mag[cell] - 1.0));
    }
    if (skipped > reg.n / 10) {
      out << " " << token << " skipped " << skipped << " diagonal cells";
      ok = false;
    }
  }
  out << "matched-diagonal deviation " << worst_diag << " tol 1e-11";
  ok = ok && worst_diag <= 1e-11;

  for (const auto& [tuned, base] :
       {std::pair{"2s4(1/4,1,11/20)", "2s4(1/4,1,0)"}, std::pair{"2s4(0,1/2,3/40)", "2s4(0,1/2,0)"}}) {
    const long nt = stability_region(build_scheme(tuned), 5.0, 5.0, 200).stable_count;
    const long nb = stability_region(build_scheme(base), 5.0, 5.0, 200).stable_count;
    out << "; " << tuned << " " << nt << " vs " << nb << " stable cells";
    ok = ok && nt >= nb;
  }

  // One fitted oscillator step from (1, 0): with u = y - i y'/nu the update is
  // multiplication by R, so y1 = (Re R, -nu Im R).
  std::mt19937 rng(20240817);
  std::uniform_real_distribution<double> U(0.05, 1.0);
  double worst_osc = 0;
  for (int trial = 0; trial < 100; ++trial) {
    const double theta = U(rng), v = U(rng);
    const SchemeSpec sp = build_scheme(kAll[trial % kAll.size()]);
    const double h = 0.1, nu = theta / h, omega = v / h;
    const Problem pb = harmonic(nu);
    long iters = 0;
    const std::vector<double> y1 =
        step(eval_tableau(sp, omega * h), pb, 0, {1.0, 0.0}, {h, omega, 1e-14, 200}, &iters);
    const std::complex<double> R = stability_R(sp, theta, v);
    worst_osc = std::max({worst_osc, std::fabs(y1[0] - R.real()), std::fabs(-y1[1] / nu - R.imag())});
  }
  out << "; oscillator-step mismatch " << worst_osc << " tol 1e-11";
  return ok && worst_osc <= 1e-11;
}

bool crit7(std::ostringstream& out) {
  const Problem pb = fpu();
  const double H0 = pb.invariant(pb.y0);
  const double h_ref = std::fabs(H0 - 2.001200080);
  const RunReport hi = integrate(build_scheme("3s6"), pb, {1.0 / 200, 50.0, 1e-12, 100});
  const RunReport lo = integrate(build_scheme("2s4(1/4,1,0)"), pb, {1.0 / 200, 50.0, 1e-12, 100});
  const double d6 = max_drift(hi), d4 = max_drift(lo);
  out << "H(y0) defect " << h_ref << " tol 1e-9; drift 3s6 " << d6 << " < 2s4 " << d4;
  return h_ref <= 1e-9 && d6 < d4;
}

bool crit8(std::ostringstream& out) {
  const Problem pb = sine_gordon(25);
  const double omega = *pb.omega_hint;

  Trajectory ref;
  IntegrateOptions ro;
  ro.thin = 125;  // reference step (1/16)/125 = 1/2000, recorded on the 1/16 grid
  integrate(build_scheme("3s6"), pb, {(1.0 / 16) / 125, omega, 1e-12, 100}, &ref, ro);

  IntegrateOptions opt;
  opt.reference = &ref;
  const double m6 =
      *integrate(build_scheme("3s6"), pb, {1.0 / 16, omega, 1e-12, 100}, nullptr, opt)
           .max_global_error;
  const double m5 =
      *integrate(build_scheme("2s5"), pb, {1.0 / 16, omega, 1e-12, 100}, nullptr, opt)
           .max_global_error;
  out << "3s6 MGE " << m6 << " vs 1.28e-9, 2s5 " << m5 << " vs 6.46e-8, factor-5 windows";
  const auto within5 = [](double got, double want) {
    return got >= want / 5 && got <= want * 5;
  };
  return within5(m6, 1.28e-9) && within5(m5, 6.46e-8);
}

bool crit9(std::ostringstream& out) {
  FreqSearch search;
  search.lo = 4.5;
  search.hi = 5.5;
  search.tol = 1e-4;
  search.t_end = 10;
  const FreqResult res =
      estimate_omega(build_scheme("2s4(1/4,1,0)"), kepler(), 1.0 / 16, search);
  out << "omega " << res.omega << " want 5.01 +/- 0.02 (" << res.probes << " probes)";
  return std::fabs(res.omega - 5.01) <= 0.02;
}

bool crit10(std::ostringstream& out) {
  bool ok = true;

  // g must equal the directional derivative of f along f.
  double worst_fd = 0;
  for (const Problem& pb :
       {kepler(), fpu(), sine_gordon(25), almost_periodic(), harmonic(5.0)}) {
    const std::vector<double>& y = pb.y0;
    const std::vector<double> fy = pb.f(y), gy = pb.g(y);
    double fmax = 1;
    for (double x : fy) fmax = std::max(fmax, std::fabs(x));
    const double eps = 1e-7;
    std::vector<double> yp = y, ym = y;
    for (std::size_t k = 0; k < y.size(); ++k) {
      yp[k] += eps * fy[k] / fmax;
      ym[k] -= eps * fy[k] / fmax;
    }
    const std::vector<double> fp = pb.f(yp), fm = pb.f(ym);
    double gmax = 1, err = 0;
    for (double x : gy) gmax = std::max(gmax, std::fabs(x));
    for (std::size_t k = 0; k < y.size(); ++k)
      err = std::max(err, std::fabs((fp[k] - fm[k]) * fmax / (2 * eps) - gy[k]));
    worst_fd = std::max(worst_fd, err / gmax);
  }
  out << "g-vs-f defect " << worst_fd << " tol 1e-5";
  ok = ok && worst_fd < 1e-5;

  // Coefficients are even in v.
  double worst_even = 0;
  for (const std::string& token : kAll) {
    const SchemeSpec sp = build_scheme(token);
    for (double v : {0.3, 0.9}) {
      const NumericTableau p = eval_tableau(sp, v), m = eval_tableau(sp, -v);
      for (int i = 0; i < sp.stages; ++i) {
        worst_even = std::max({worst_even, std::fabs(p.b[i] - m.b[i]),
                               std::fabs(p.xi[i] - m.xi[i])});
        for (int j = 0; j <= i; ++j)
          worst_even = std::max(worst_even, std::fabs(p.a[i][j] - m.a[i][j]));
      }
    }
  }
  out << "; evenness defect " << worst_even << " tol 1e-14";
  ok = ok && worst_even <= 1e-14;

  // A converged stage satisfies its implicit equation with freshly evaluated g.
  const Problem pb = kepler();
  const SchemeSpec sp = build_scheme("2s5");
  const double h = 0.05, fp_tol = 1e-12;
  const NumericTableau tab = eval_tableau(sp, 5.0 * h);
  const std::vector<double> f_n = pb.f(pb.y0), g_n = pb.g(pb.y0);
  std::vector<std::vector<double>> g_stage;
  double worst_res = 0;
  for (int i = 0; i < sp.stages; ++i) {
    const StageResult st = solve_stage(tab, pb, pb.y0, f_n, g_n, i, g_stage, {h, 5.0, fp_tol, 100});
    std::vector<double> rhs = pb.y0;
    for (std::size_t k = 0; k < rhs.size(); ++k) rhs[k] += h * tab.xi[i] * tab.c[i] * f_n[k];
    g_stage.push_back(pb.g(st.y));
    for (int j = 0; j <= i; ++j)
      for (std::size_t k = 0; k < rhs.size(); ++k) rhs[k] += h * h * tab.a[i][j] * g_stage[j][k];
    for (std::size_t k = 0; k < rhs.size(); ++k)
      worst_res = std::max(worst_res, std::fabs(rhs[k] - st.y[k]));
  }
  out << "; stage residual " << worst_res << " tol " << 10 * fp_tol;
  return ok && worst_res <= 10 * fp_tol;
}

}  // namespace

int main() {
  run(1, "fitting residuals < 1e-12 at v in {0.1,0.5,1,2}, < 1 s", crit1);
  run(2, "fitted harmonic(5) exact to 1e-9 over [0,100]", crit2);
  run(3, "Kepler convergence slopes at the design orders", crit3);
  run(4, "order-condition slopes and series identities", crit4);
  run(5, "leading phase-error coefficients", crit5);
  run(6, "stability grid: matched diagonal, tuned masks, oscillator oracle", crit6);
  run(7, "FPU invariant value and drift ordering", crit7);
  run(8, "sine-Gordon N=25 error magnitudes", crit8);
  run(9, "Kepler frequency search recovers 5.01", crit9);
  run(10, "derivative consistency, evenness, stage residuals", crit10);
  std::printf("%d of 10 criteria pass\n", 10 - failures);
  return failures;
}
