#pragma once
// Scheme definitions and tableau evaluation for exponentially fitted
// two-derivative diagonally implicit Runge-Kutta methods.
//
// An s-stage scheme advances y' = f(y), with g = f'f available analytically,
// via
//   Y_i     = y_n + xi_i(v) c_i h f(y_n) + h^2 sum_{j<=i} a_ij(v) g(Y_j),
//   y_{n+1} = y_n + h f(y_n) + h^2 sum_i b_i(v) g(Y_i),
// where v = omega h. The diagonal entries a_ii(v), the stage scalings xi_i(v)
// and the two outer weights b_1, b_s are transcendental in v, fixed by
// requiring every stage and the update to be exact on e^{+i omega x} and
// e^{-i omega x}; the strictly lower a_ij and any interior weight are plain
// constants. All entries are even functions of v and reduce to a classical
// two-derivative tableau as v -> 0.
//
// Closed forms (D_i = cos(c_i v), outer pair p = 1, q = s, all at stage i):
//   a_ii = (2 sin^2(c_i v/2) - v^2 sum_{j<i} a_ij cos(c_j v)) / (v^2 D_i)
//   xi_i = (sin(c_i v) + v^2 sum_{j<i} a_ij sin((c_j - c_i) v)) / (c_i v D_i)
//   N_t  = sin(c_t v) + sin((1-c_t) v) - v cos(c_t v)
//            + v^2 sum_{interior m} b_m sin((c_m - c_t) v)
//   b_p  = -N_q / (v^2 sin((c_p - c_q) v)),   b_q = +N_p / (same)
// with xi_i = 1 when c_i = 0. Near v = 0 these are 0/0; a truncated power
// series evaluates that neighbourhood instead.

#include <array>
#include <cmath>
#include <cstdio>
#include <stdexcept>
#include <string>

#include "series.hpp"
#include "util.hpp"

namespace eftddirk {

// Thrown when an evaluation point sits on (or numerically at) a zero of one
// of the tableau denominators.
class TableauPoleError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class SchemeFamily { TwoStageOrder4, TwoStageOrder5, ThreeStageOrder6 };

// Static description of a scheme: nodes plus all v-independent coefficients.
struct SchemeSpec {
  SchemeFamily family{};
  int stages = 0;
  int order = 0;
  std::array<double, 3> c{};
  std::array<std::array<double, 3>, 3> alow{};  // strictly lower a_ij
  std::array<double, 3> bmid{};                 // interior weights (0 < i < s-1)
  std::string name;

  double cmax() const {
    double m = 0;
    for (int i = 0; i < stages; ++i) m = std::max(m, std::fabs(c[i]));
    return m;
  }
};

// The tableau evaluated at one v = omega h.
struct NumericTableau {
  int s = 0;
  double v = 0;
  std::array<double, 3> c{};
  std::array<std::array<double, 3>, 3> a{};
  std::array<double, 3> b{};
  std::array<double, 3> xi{};
};

// Taylor coefficients of the entries through fourth order in mu = i v:
// E(mu) = E0 + E2 mu^2 + E4 mu^4, i.e. E(v) = E0 - E2 v^2 + E4 v^4.
struct SeriesTableau {
  int s = 0;
  std::array<double, 3> c{};
  std::array<std::array<double, 3>, 3> a0{}, a2{}, a4{};
  std::array<double, 3> b0{}, b2{}, b4{};
  std::array<double, 3> xi0{}, xi2{}, xi4{};
};

inline SchemeSpec make_eftddirk2s4(double c1, double c2, double phi) {
  if (!(c1 >= 0 && c1 <= 1 && c2 >= 0 && c2 <= 1))
    throw std::invalid_argument("2s4 nodes must lie in [0,1]");
  if (std::fabs(c1 - c2) < 1e-12)
    throw std::invalid_argument("2s4 nodes must be distinct");
  if (std::fabs(2 * (c1 + c2 - 3 * c1 * c2) - 1) > 1e-12)
    throw std::invalid_argument("2s4 nodes violate 2(c1 + c2 - 3 c1 c2) = 1");
  SchemeSpec sp;
  sp.family = SchemeFamily::TwoStageOrder4;
  sp.stages = 2;
  sp.order = 4;
  sp.c = {c1, c2, 0};
  sp.alow[1][0] = phi;
  char buf[96];
  std::snprintf(buf, sizeof buf, "EFTDDIRK2s4(%g,%g,%g)", c1, c2, phi);
  sp.name = buf;
  return sp;
}

inline SchemeSpec make_eftddirk2s5() {
  const double r6 = std::sqrt(6.0);
  SchemeSpec sp;
  sp.family = SchemeFamily::TwoStageOrder5;
  sp.stages = 2;
  sp.order = 5;
  sp.c = {(4 - r6) / 10, (4 + r6) / 10, 0};
  sp.alow[1][0] = (2 + 3 * r6) / 50;
  sp.name = "EFTDDIRK2s5";
  return sp;
}

inline SchemeSpec make_eftddirk3s6() {
  const double r5 = std::sqrt(5.0);
  SchemeSpec sp;
  sp.family = SchemeFamily::ThreeStageOrder6;
  sp.stages = 3;
  sp.order = 6;
  sp.c = {0, (5 - r5) / 10, (5 + r5) / 10};
  sp.alow[1][0] = (3 - r5) / 30;
  sp.alow[2][0] = (1 + r5) / 60;
  sp.alow[2][1] = (5 + 3 * r5) / 60;
  sp.bmid[1] = (5 + r5) / 24;
  sp.name = "EFTDDIRK3s6";
  return sp;
}

// Scheme selector tokens used by the CLI and tests. Fixed tokens name the
// built-in presets; "2s4(c1,c2,phi)" builds the parametric family, with
// fractions accepted ("2s4(1/4,1,11/20)").
inline SchemeSpec build_scheme(const std::string& token) {
  if (token == "2s4a") return make_eftddirk2s4(0.25, 1.0, 0.0);
  if (token == "2s4aopt") return make_eftddirk2s4(0.25, 1.0, 0.55);
  if (token == "2s4b") return make_eftddirk2s4(0.0, 0.5, 0.0);
  if (token == "2s4bopt" || token == "2s4opt") return make_eftddirk2s4(0.0, 0.5, 0.075);
  if (token == "2s5") return make_eftddirk2s5();
  if (token == "3s6") return make_eftddirk3s6();
  if (token.rfind("2s4(", 0) == 0 && token.back() == ')') {
    const auto args = parse_real_list(token.substr(4, token.size() - 5));
    if (args.size() != 3)
      throw std::invalid_argument("expected 2s4(c1,c2,phi), got '" + token + "'");
    return make_eftddirk2s4(args[0], args[1], args[2]);
  }
  throw std::invalid_argument("unknown scheme '" + token + "'");
}

namespace detail {

inline constexpr double kPoleTol = 1e-8;
// Below this |v|*cmax the closed forms are evaluated by series instead.
inline constexpr double kSeriesSwitch = 1e-3;

template <typename Real>
struct ClosedEntries {
  std::array<std::array<Real, 3>, 3> a{};
  std::array<Real, 3> b{}, xi{};
};

// sin(x) - x evaluated without cancellation for small |x|.
template <typename Real>
Real sin_minus_arg(Real x) {
  if (std::fabs(x) > Real(0.5)) return std::sin(x) - x;
  const Real x2 = x * x;
  Real term = -x * x2 / 6, sum = term;
  for (int k = 5; k < 24; k += 2) {
    term *= -x2 / Real((k - 1) * k);
    const Real next = sum + term;
    if (next == sum) break;
    sum = next;
  }
  return sum;
}

template <typename Real>
ClosedEntries<Real> eval_closed(const SchemeSpec& sp, Real v) {
  const int s = sp.stages;
  const Real v2 = v * v;
  std::array<Real, 3> cosc{}, sinc{};
  for (int i = 0; i < s; ++i) {
    const Real ci = Real(sp.c[i]);
    cosc[i] = std::cos(ci * v);
    sinc[i] = std::sin(ci * v);
    if (std::fabs(cosc[i]) < Real(kPoleTol))
      throw TableauPoleError("tableau pole: cos(c" + std::to_string(i + 1) +
                             " v) ~ 0 at v = " + format_g17(double(v)));
  }
  const int p = 0, q = s - 1;
  const Real spq = std::sin(Real(sp.c[p] - sp.c[q]) * v);
  if (std::fabs(spq) < Real(kPoleTol))
    throw TableauPoleError("tableau pole: sin((c1 - c" + std::to_string(s) +
                           ") v) ~ 0 at v = " + format_g17(double(v)));

  ClosedEntries<Real> t;
  for (int i = 0; i < s; ++i) {
    const Real ci = Real(sp.c[i]);
    Real acc_cos = 0, acc_sin = 0;
    for (int j = 0; j < i; ++j) {
      t.a[i][j] = Real(sp.alow[i][j]);
      acc_cos += t.a[i][j] * cosc[j];
      acc_sin += t.a[i][j] * std::sin(Real(sp.c[j] - sp.c[i]) * v);
    }
    const Real sh = std::sin(ci * v / 2);
    t.a[i][i] = (2 * sh * sh - v2 * acc_cos) / (v2 * cosc[i]);
    t.xi[i] = sp.c[i] == 0 ? Real(1) : (sinc[i] + v2 * acc_sin) / (ci * v * cosc[i]);
  }
  // sin(cv) + sin((1-c)v) - v cos(cv) rewritten as
  // sin(cv)(1 - cos v) + cos(cv)(sin v - v): the rewrite never forms 1-c, so
  // the O(v) terms cancel exactly instead of leaving a rounding residue that
  // the later division by v^2 sin((cp-cq)v) would blow up at small v.  Both
  // factors are computed so their absolute error scales with their own O(v^2)
  // / O(v^3) size, keeping the quotient's error flat in v.
  const Real hv = std::sin(v / 2);
  const Real omcv = 2 * hv * hv, svmv = sin_minus_arg(v);
  auto outer_num = [&](int x) {
    Real acc = 0;
    for (int m = 1; m < s - 1; ++m)
      acc += Real(sp.bmid[m]) * std::sin(Real(sp.c[m] - sp.c[x]) * v);
    return sinc[x] * omcv + cosc[x] * svmv + v2 * acc;
  };
  t.b[p] = -outer_num(q) / (v2 * spq);
  t.b[q] = outer_num(p) / (v2 * spq);
  for (int m = 1; m < s - 1; ++m) t.b[m] = Real(sp.bmid[m]);
  return t;
}

// Entry series in powers of v (not mu). Numerators are assembled from exact
// sin/cos coefficients, so the leading zero coefficients cancel analytically
// and shifting them out is exact; quotients of even/odd-structured series
// keep exactly zero odd slots.
struct TableauSeriesV {
  int s = 0;
  std::array<std::array<VSeries, 3>, 3> a{};
  std::array<VSeries, 3> b{}, xi{};
};

inline TableauSeriesV tableau_series_v(const SchemeSpec& sp) {
  const int s = sp.stages;
  TableauSeriesV t;
  t.s = s;
  for (int i = 0; i < s; ++i) {
    const double ci = sp.c[i];
    VSeries acc_cos{}, acc_sin{};
    for (int j = 0; j < i; ++j) {
      t.a[i][j] = VSeries::constant(sp.alow[i][j]);
      acc_cos += sp.alow[i][j] * cos_av(sp.c[j]);
      acc_sin += sp.alow[i][j] * sin_av(sp.c[j] - ci);
    }
    const VSeries num_a = one_minus_cos_av(ci) - acc_cos.shifted_up(2);
    t.a[i][i] = series_div(num_a.shifted_down(2), cos_av(ci));
    if (ci == 0) {
      t.xi[i] = VSeries::constant(1);
    } else {
      // denominator c_i v cos(c_i v); the 1/v goes into the shift
      const VSeries num_xi = sin_av(ci) + acc_sin.shifted_up(2);
      t.xi[i] = series_div(num_xi.shifted_down(1), ci * cos_av(ci));
    }
  }
  const int p = 0, q = s - 1;
  auto outer_num = [&](int x) {
    VSeries acc{};
    for (int m = 1; m < s - 1; ++m) acc += sp.bmid[m] * sin_av(sp.c[m] - sp.c[x]);
    return sin_av(sp.c[x]) + sin_av(1 - sp.c[x]) - cos_av(sp.c[x]).shifted_up(1) +
           acc.shifted_up(2);
  };
  const VSeries den = sin_av(sp.c[p] - sp.c[q]).shifted_down(1);  // sin((cp-cq)v)/v
  t.b[p] = -1 * series_div(outer_num(q).shifted_down(3), den);
  t.b[q] = series_div(outer_num(p).shifted_down(3), den);
  for (int m = 1; m < s - 1; ++m) t.b[m] = VSeries::constant(sp.bmid[m]);
  return t;
}

}  // namespace detail

// Closed-form evaluation; throws TableauPoleError near denominator zeros.
inline NumericTableau eval_tableau_closed(const SchemeSpec& sp, double v) {
  const auto e = detail::eval_closed<double>(sp, v);
  NumericTableau t;
  t.s = sp.stages;
  t.v = v;
  t.c = sp.c;
  for (int i = 0; i < t.s; ++i) {
    t.xi[i] = e.xi[i];
    t.b[i] = e.b[i];
    for (int j = 0; j <= i; ++j) t.a[i][j] = e.a[i][j];
  }
  return t;
}

// Analytic Taylor coefficients of the entries, reported in mu = i v.
inline SeriesTableau tableau_series(const SchemeSpec& sp) {
  const auto sv = detail::tableau_series_v(sp);
  SeriesTableau st;
  st.s = sp.stages;
  st.c = sp.c;
  for (int i = 0; i < st.s; ++i) {
    st.xi0[i] = sv.xi[i].c[0];
    st.xi2[i] = -sv.xi[i].c[2];
    st.xi4[i] = sv.xi[i].c[4];
    st.b0[i] = sv.b[i].c[0];
    st.b2[i] = -sv.b[i].c[2];
    st.b4[i] = sv.b[i].c[4];
    for (int j = 0; j <= i; ++j) {
      st.a0[i][j] = sv.a[i][j].c[0];
      st.a2[i][j] = -sv.a[i][j].c[2];
      st.a4[i][j] = sv.a[i][j].c[4];
    }
  }
  return st;
}

// Evaluates the tableau at v, switching to the series branch for small |v|.
inline NumericTableau eval_tableau(const SchemeSpec& sp, double v) {
  if (std::fabs(v) * sp.cmax() >= detail::kSeriesSwitch) return eval_tableau_closed(sp, v);
  const auto sv = detail::tableau_series_v(sp);
  NumericTableau t;
  t.s = sp.stages;
  t.v = v;
  t.c = sp.c;
  for (int i = 0; i < t.s; ++i) {
    t.xi[i] = sv.xi[i].eval(v, 4);
    t.b[i] = sv.b[i].eval(v, 4);
    for (int j = 0; j <= i; ++j) t.a[i][j] = sv.a[i][j].eval(v, 4);
  }
  return t;
}

namespace detail {

// Fits E(v) = p0 + p2 v^2 + p4 v^4 + ... from samples taken at Chebyshev
// abscissae in x = v^2 (entries are even, so they are analytic functions of
// x): Newton interpolation through the samples, expanded to monomial form
// around x = 0, yields the low coefficients. Nodes sit well away from x = 0,
// where the closed forms are best conditioned, and the interpolation error of
// the full-degree polynomial is far below the sampling noise.
struct EvenFit {
  double p0 = 0, p2 = 0, p4 = 0;
};

inline EvenFit fit_even_series(const long double* F, const long double* x, int n) {
  std::array<long double, 8> d{};
  for (int i = 0; i < n; ++i) d[i] = F[i];
  for (int m = 1; m < n; ++m)
    for (int i = n - 1; i >= m; --i) d[i] = (d[i] - d[i - 1]) / (x[i] - x[i - m]);
  // expand the Newton form to monomial coefficients about 0
  std::array<long double, 8> poly{};
  poly[0] = d[n - 1];
  int deg = 0;
  for (int i = n - 2; i >= 0; --i) {
    for (int k = deg + 1; k >= 1; --k) poly[k] = poly[k - 1] - x[i] * poly[k];
    poly[0] = -x[i] * poly[0] + d[i];
    ++deg;
  }
  EvenFit fit;
  fit.p0 = double(poly[0]);
  fit.p2 = double(poly[1]);
  fit.p4 = double(poly[2]);
  return fit;
}

}  // namespace detail

// Taylor coefficients recovered numerically by sampling the closed forms at
// probe points v in [~0.8 v_probe, 10 v_probe] and fitting; an independent
// route to the same coefficients as tableau_series. Extended precision keeps
// the cancellation noise of the closed forms out of the fitted coefficients.
inline SeriesTableau taylor_tableau(const SchemeSpec& sp, double v_probe = 1e-2) {
  if (!(v_probe >= 1e-3 && v_probe <= 2e-2))
    throw std::invalid_argument("v_probe must lie in [1e-3, 2e-2]");
  constexpr int kNodes = 7;
  const long double pi = 3.14159265358979323846264338328L;
  const long double xmax = (long double)(100.0 * v_probe * v_probe);
  std::array<long double, kNodes> xnode{};
  std::array<detail::ClosedEntries<long double>, kNodes> samples;
  for (int k = 0; k < kNodes; ++k) {
    xnode[k] = xmax * (1 + std::cos((2 * k + 1) * pi / (2 * kNodes))) / 2;
    samples[k] = detail::eval_closed<long double>(sp, std::sqrt(xnode[k]));
  }
  SeriesTableau st;
  st.s = sp.stages;
  st.c = sp.c;
  std::array<long double, kNodes> F{};
  auto fit = [&](auto&& get, double& e0, double& e2, double& e4) {
    for (int k = 0; k < kNodes; ++k) F[k] = get(samples[k]);
    const auto r = detail::fit_even_series(F.data(), xnode.data(), kNodes);
    e0 = r.p0;
    e2 = -r.p2;  // flip v^2 -> mu^2
    e4 = r.p4;
  };
  for (int i = 0; i < st.s; ++i) {
    fit([i](const auto& s) { return s.xi[i]; }, st.xi0[i], st.xi2[i], st.xi4[i]);
    fit([i](const auto& s) { return s.b[i]; }, st.b0[i], st.b2[i], st.b4[i]);
    for (int j = 0; j <= i; ++j)
      fit([i, j](const auto& s) { return s.a[i][j]; }, st.a0[i][j], st.a2[i][j],
          st.a4[i][j]);
  }
  return st;
}

// One row per stage "c_i | xi_i | a_i1 .. a_ii", then the weight row.
inline std::string dump_tableau(const NumericTableau& t) {
  std::string out = "v = " + format_g17(t.v) + "\n";
  for (int i = 0; i < t.s; ++i) {
    out += format_g17(t.c[i]) + " | " + format_g17(t.xi[i]) + " |";
    for (int j = 0; j <= i; ++j) out += " " + format_g17(t.a[i][j]);
    out += "\n";
  }
  out += "b:";
  for (int i = 0; i < t.s; ++i) out += " " + format_g17(t.b[i]);
  out += "\n";
  return out;
}

}  // namespace eftddirk
