#pragma once
// Benchmark problems, each packaged with analytic first and second
// derivatives (g = f'(y) f(y) worked out by hand, never finite-differenced)
// plus exact solutions and invariants where available.

#include <array>
#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "integrator.hpp"

namespace eftddirk {

// Perturbed Kepler-type oscillator with Hamiltonian
//   H(q, p) = (p1^2 + p2^2)/2 + omega^2 (q1^2 + q2^2)/2 + alpha (q1^2 + q2^2)^3 / 6,
// omega = 5, alpha = eps (2 omega + eps), eps = 1e-2.  The circular orbit of
// radius 1 rotates at the perturbed frequency Omega = omega + eps.
inline Problem kepler() {
  constexpr double omega = 5.0, eps = 1e-2;
  constexpr double alpha = eps * (2 * omega + eps);
  constexpr double Omega = omega + eps;

  Problem pb;
  pb.name = "kepler";
  pb.dim = 4;
  pb.y0 = {1.0, 0.0, 0.0, Omega};
  pb.t0 = 0;
  pb.t_end = 100;
  pb.omega_hint = omega;
  pb.f = [](const std::vector<double>& y) {
    const double r2 = y[0] * y[0] + y[1] * y[1], r4 = r2 * r2;
    return std::vector<double>{y[2], y[3], -(omega * omega + alpha * r4) * y[0],
                               -(omega * omega + alpha * r4) * y[1]};
  };
  pb.g = [](const std::vector<double>& y) {
    const double r2 = y[0] * y[0] + y[1] * y[1], r4 = r2 * r2;
    const double qp = y[0] * y[2] + y[1] * y[3];
    return std::vector<double>{
        -(omega * omega + alpha * r4) * y[0], -(omega * omega + alpha * r4) * y[1],
        -(omega * omega + alpha * r4) * y[2] - 4 * alpha * r2 * qp * y[0],
        -(omega * omega + alpha * r4) * y[3] - 4 * alpha * r2 * qp * y[1]};
  };
  pb.exact = [](double t) {
    return std::vector<double>{std::cos(Omega * t), std::sin(Omega * t),
                               -Omega * std::sin(Omega * t), Omega * std::cos(Omega * t)};
  };
  pb.invariant = [](const std::vector<double>& y) {
    const double r2 = y[0] * y[0] + y[1] * y[1];
    return 0.5 * (y[2] * y[2] + y[3] * y[3]) + 0.5 * omega * omega * r2 +
           alpha / 6.0 * r2 * r2 * r2;
  };
  return pb;
}

// Fermi-Pasta-Ulam chain with m = 3 stiff springs, omega = 50: state
// (x, xdot) in R^12, xdotdot = -Omega^2 x - grad U(x) with
// Omega = diag(0, 0, 0, omega, omega, omega) and the quartic potential
//   U(x) = [ (x1 - x4)^4 + (x2 - x5 - x1 - x4)^4 + (x3 - x6 - x2 - x5)^4
//            + (x3 + x6)^4 ] / 4
// written below through its four linear forms.  (The coupling index follows
// the standard chain layout x_{j+1} - x_{m+j+1} - x_j - x_{m+j}, which is
// what the printed initial energy H(y0) = 2.001200080 pins down.)
inline Problem fpu() {
  constexpr double omega = 50.0;
  static const int ell[4][6] = {{1, 0, 0, -1, 0, 0},
                                {-1, 1, 0, -1, -1, 0},
                                {0, -1, 1, 0, -1, -1},
                                {0, 0, 1, 0, 0, 1}};
  auto forms = [](const std::vector<double>& x) {
    std::array<double, 4> T{};
    for (int k = 0; k < 4; ++k)
      for (int i = 0; i < 6; ++i) T[k] += ell[k][i] * x[i];
    return T;
  };
  auto grad_u = [forms](const std::vector<double>& x) {
    const auto T = forms(x);
    std::vector<double> gu(6, 0.0);
    for (int k = 0; k < 4; ++k)
      for (int i = 0; i < 6; ++i) gu[i] += T[k] * T[k] * T[k] * ell[k][i];
    return gu;
  };
  auto hess_u_times = [forms](const std::vector<double>& x, const std::vector<double>& w) {
    const auto T = forms(x);
    std::vector<double> hw(6, 0.0);
    for (int k = 0; k < 4; ++k) {
      double lw = 0;
      for (int i = 0; i < 6; ++i) lw += ell[k][i] * w[i];
      for (int i = 0; i < 6; ++i) hw[i] += 3 * T[k] * T[k] * lw * ell[k][i];
    }
    return hw;
  };
  auto omega2 = [](int i) { return i < 3 ? 0.0 : omega * omega; };

  Problem pb;
  pb.name = "fpu";
  pb.dim = 12;
  pb.y0 = std::vector<double>(12, 0.0);
  pb.y0[0] = 1.0;
  pb.y0[3] = 1.0 / omega;
  pb.y0[6] = 1.0;
  pb.y0[9] = 1.0;
  pb.t0 = 0;
  pb.t_end = 100;
  pb.omega_hint = omega;
  pb.f = [grad_u, omega2](const std::vector<double>& y) {
    const std::vector<double> x(y.begin(), y.begin() + 6);
    const std::vector<double> gu = grad_u(x);
    std::vector<double> d(12);
    for (int i = 0; i < 6; ++i) d[i] = y[6 + i];
    for (int i = 0; i < 6; ++i) d[6 + i] = -omega2(i) * y[i] - gu[i];
    return d;
  };
  pb.g = [grad_u, hess_u_times, omega2](const std::vector<double>& y) {
    const std::vector<double> x(y.begin(), y.begin() + 6);
    const std::vector<double> v(y.begin() + 6, y.end());
    const std::vector<double> gu = grad_u(x);
    const std::vector<double> hv = hess_u_times(x, v);
    std::vector<double> d(12);
    for (int i = 0; i < 6; ++i) d[i] = -omega2(i) * x[i] - gu[i];
    for (int i = 0; i < 6; ++i) d[6 + i] = -omega2(i) * v[i] - hv[i];
    return d;
  };
  pb.invariant = [forms, omega2](const std::vector<double>& y) {
    double H = 0;
    for (int i = 0; i < 6; ++i) H += 0.5 * (y[6 + i] * y[6 + i] + omega2(i) * y[i] * y[i]);
    const auto T = forms(std::vector<double>(y.begin(), y.begin() + 6));
    for (int k = 0; k < 4; ++k) H += 0.25 * T[k] * T[k] * T[k] * T[k];
    return H;
  };
  return pb;
}

// Sine-Gordon equation u_tt = u_xx - sin u on (-1, 1) with periodic boundary,
// semi-discretized on N points (x_i = -1 + i Dx, Dx = 2/N) by the circulant
// second-difference matrix M = circ(2, -1, ..., -1) / Dx^2.  State (U, V):
//   f = (V, -M U - sin U),   g = (-M U - sin U, -M V - cos(U) * V).
// Initial data U = pi, V_i = sqrt(N) (0.01 + sin(2 pi i / N)), i = 1..N.
// The convention is an even grid; odd N is accepted and discretizes the same
// operator.  omega_hint is the largest linear frequency sqrt(lambda_max(M)),
// which is N for even N.
inline Problem sine_gordon(int N) {
  if (N < 3) throw std::invalid_argument("sine_gordon: need at least 3 grid points");
  const double inv_dx2 = double(N) * double(N) / 4.0;
  auto apply_m = [N, inv_dx2](const std::vector<double>& u, int shift) {
    std::vector<double> mu(N);
    for (int i = 0; i < N; ++i) {
      const int l = (i + N - 1) % N, r = (i + 1) % N;
      mu[i] = inv_dx2 * (2 * u[shift + i] - u[shift + l] - u[shift + r]);
    }
    return mu;
  };

  Problem pb;
  pb.name = "sine-gordon";
  pb.dim = 2 * N;
  pb.y0.assign(2 * N, 0.0);
  const double pi = std::acos(-1.0);
  for (int i = 0; i < N; ++i) {
    pb.y0[i] = pi;
    pb.y0[N + i] = std::sqrt(double(N)) * (0.01 + std::sin(2 * pi * (i + 1) / N));
  }
  pb.t0 = 0;
  pb.t_end = 10;
  pb.omega_hint = double(N) * std::sin(pi * (N / 2) / N);
  pb.f = [N, apply_m](const std::vector<double>& y) {
    const std::vector<double> mu = apply_m(y, 0);
    std::vector<double> d(2 * N);
    for (int i = 0; i < N; ++i) d[i] = y[N + i];
    for (int i = 0; i < N; ++i) d[N + i] = -mu[i] - std::sin(y[i]);
    return d;
  };
  pb.g = [N, apply_m](const std::vector<double>& y) {
    const std::vector<double> mu = apply_m(y, 0);
    const std::vector<double> mv = apply_m(y, N);
    std::vector<double> d(2 * N);
    for (int i = 0; i < N; ++i) d[i] = -mu[i] - std::sin(y[i]);
    for (int i = 0; i < N; ++i) d[N + i] = -mv[i] - std::cos(y[i]) * y[N + i];
    return d;
  };
  return pb;
}

// Almost-periodic complex oscillator y'' + y = 0.001 e^{it}, y(0) = 1,
// y'(0) = 0.9995 i, autonomized over the real state
// (Re y, Im y, Re y', Im y', t) with t' = 1.  The exact solution
//   y(t) = cos t + 0.0005 t sin t + i (sin t - 0.0005 t cos t)
// drifts away from the unit circle with amplitude 0.0005 t.
inline Problem almost_periodic() {
  Problem pb;
  pb.name = "almost-periodic";
  pb.dim = 5;
  pb.y0 = {1.0, 0.0, 0.0, 0.9995, 0.0};
  pb.t0 = 0;
  pb.t_end = 1000;
  pb.omega_hint = 1.0;
  pb.f = [](const std::vector<double>& y) {
    return std::vector<double>{y[2], y[3], -y[0] + 0.001 * std::cos(y[4]),
                               -y[1] + 0.001 * std::sin(y[4]), 1.0};
  };
  pb.g = [](const std::vector<double>& y) {
    return std::vector<double>{-y[0] + 0.001 * std::cos(y[4]), -y[1] + 0.001 * std::sin(y[4]),
                               -y[2] - 0.001 * std::sin(y[4]), -y[3] + 0.001 * std::cos(y[4]),
                               0.0};
  };
  pb.exact = [](double t) {
    const double c = std::cos(t), s = std::sin(t);
    return std::vector<double>{c + 0.0005 * t * s, s - 0.0005 * t * c,
                               -0.9995 * s + 0.0005 * t * c, 0.9995 * c + 0.0005 * t * s, t};
  };
  return pb;
}

// Harmonic oscillator y'' + omega^2 y = 0 as the 2-dim system (y, y'),
// started at (1, 0).  Its solutions span exactly the fitting space of the
// schemes, so integrations should be exact to round-off when cfg.omega
// matches; used as the calibration problem.
inline Problem harmonic(double omega, double t_end = 100) {
  if (!(omega > 0)) throw std::invalid_argument("harmonic: omega must be positive");
  Problem pb;
  pb.name = "harmonic";
  pb.dim = 2;
  pb.y0 = {1.0, 0.0};
  pb.t0 = 0;
  pb.t_end = t_end;
  pb.omega_hint = omega;
  pb.f = [omega](const std::vector<double>& y) {
    return std::vector<double>{y[1], -omega * omega * y[0]};
  };
  pb.g = [omega](const std::vector<double>& y) {
    return std::vector<double>{-omega * omega * y[0], -omega * omega * y[1]};
  };
  pb.exact = [omega](double t) {
    return std::vector<double>{std::cos(omega * t), -omega * std::sin(omega * t)};
  };
  pb.invariant = [omega](const std::vector<double>& y) {
    return 0.5 * (y[1] * y[1] + omega * omega * y[0] * y[0]);
  };
  return pb;
}

}  // namespace eftddirk
