#pragma once
// Truncated power series in v used to evaluate tableau entries near v = 0,
// where the closed trigonometric forms lose all their digits to cancellation.
// Every tableau entry is a ratio of trigonometric polynomials whose numerator
// vanishes to known order at v = 0; building the quotient series from exact
// sin/cos Taylor coefficients sidesteps the 0/0.

#include <array>
#include <cmath>

namespace eftddirk::detail {

// Coefficients c[k] of v^k, truncated at fixed length.
struct VSeries {
  static constexpr int kLen = 12;
  std::array<double, kLen> c{};

  static VSeries constant(double a) {
    VSeries s;
    s.c[0] = a;
    return s;
  }

  VSeries& operator+=(const VSeries& o) {
    for (int k = 0; k < kLen; ++k) c[k] += o.c[k];
    return *this;
  }
  VSeries& operator-=(const VSeries& o) {
    for (int k = 0; k < kLen; ++k) c[k] -= o.c[k];
    return *this;
  }
  friend VSeries operator+(VSeries a, const VSeries& b) { return a += b; }
  friend VSeries operator-(VSeries a, const VSeries& b) { return a -= b; }
  friend VSeries operator*(double s, VSeries a) {
    for (double& x : a.c) x *= s;
    return a;
  }

  // Multiplication by v^k.
  VSeries shifted_up(int k) const {
    VSeries r;
    for (int i = 0; i + k < kLen; ++i) r.c[i + k] = c[i];
    return r;
  }
  // Division by v^k; the dropped low coefficients must vanish analytically.
  VSeries shifted_down(int k) const {
    VSeries r;
    for (int i = 0; i + k < kLen; ++i) r.c[i] = c[i + k];
    return r;
  }

  // Horner evaluation through the v^max_pow term.
  double eval(double v, int max_pow) const {
    double r = 0;
    for (int k = max_pow; k >= 0; --k) r = r * v + c[k];
    return r;
  }
};

// sin(a v)
inline VSeries sin_av(double a) {
  VSeries s;
  double term = a;
  for (int k = 1; k < VSeries::kLen; k += 2) {
    s.c[k] = term;
    term *= -a * a / double((k + 1) * (k + 2));
  }
  return s;
}

// cos(a v)
inline VSeries cos_av(double a) {
  VSeries s;
  double term = 1;
  for (int k = 0; k < VSeries::kLen; k += 2) {
    s.c[k] = term;
    term *= -a * a / double((k + 1) * (k + 2));
  }
  return s;
}

// 1 - cos(a v), with the leading cancellation removed exactly.
inline VSeries one_minus_cos_av(double a) {
  VSeries s = cos_av(a);
  for (double& x : s.c) x = -x;
  s.c[0] = 0;
  return s;
}

// Cauchy quotient n/d; requires d.c[0] != 0.
inline VSeries series_div(const VSeries& n, const VSeries& d) {
  VSeries q;
  for (int k = 0; k < VSeries::kLen; ++k) {
    double acc = n.c[k];
    for (int j = 0; j < k; ++j) acc -= q.c[j] * d.c[k - j];
    q.c[k] = acc / d.c[0];
  }
  return q;
}

}  // namespace eftddirk::detail
