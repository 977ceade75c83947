#pragma once
// Shared helpers: small-vector norms, log-log slope fits, value formatting,
// and exact parsing of fractional quantities like "1/64".

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

namespace eftddirk {

inline double norm2(const std::vector<double>& x) {
  double s = 0;
  for (double xi : x) s += xi * xi;
  return std::sqrt(s);
}

inline double norm_inf(const std::vector<double>& x) {
  double m = 0;
  for (double xi : x) m = std::max(m, std::fabs(xi));
  return m;
}

inline double dist_inf(const std::vector<double>& x, const std::vector<double>& y) {
  double m = 0;
  for (std::size_t i = 0; i < x.size(); ++i) m = std::max(m, std::fabs(x[i] - y[i]));
  return m;
}

struct SlopeFit {
  double slope = std::numeric_limits<double>::quiet_NaN();
  double intercept = std::numeric_limits<double>::quiet_NaN();
  int used = 0;  // points retained after floor discarding
};

// Least-squares slope of log y against log x. Points with y <= floor are
// treated as round-off noise and discarded.
inline SlopeFit fit_loglog(const std::vector<double>& x, const std::vector<double>& y,
                           double floor = 0.0) {
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int n = 0;
  for (std::size_t i = 0; i < x.size() && i < y.size(); ++i) {
    if (!(x[i] > 0) || !(y[i] > floor) || !std::isfinite(y[i])) continue;
    const double lx = std::log(x[i]), ly = std::log(y[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
    ++n;
  }
  SlopeFit f;
  f.used = n;
  if (n >= 2) {
    const double den = n * sxx - sx * sx;
    f.slope = (n * sxy - sx * sy) / den;
    f.intercept = (sy - f.slope * sx) / n;
  }
  return f;
}

// Shortest 17-significant-digit decimal form (round-trips a double exactly).
inline std::string format_g17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

// Accepts plain decimals and exact fractions: "0.25", "1e-3", "1/64", "-11/20".
inline double parse_real(const std::string& s) {
  auto parse_plain = [](const std::string& t) {
    if (t.empty()) throw std::invalid_argument("empty numeric value");
    char* end = nullptr;
    const double x = std::strtod(t.c_str(), &end);
    if (end != t.c_str() + t.size())
      throw std::invalid_argument("bad numeric value: '" + t + "'");
    return x;
  };
  const auto slash = s.find('/');
  if (slash == std::string::npos) return parse_plain(s);
  const double num = parse_plain(s.substr(0, slash));
  const double den = parse_plain(s.substr(slash + 1));
  if (den == 0) throw std::invalid_argument("zero denominator in '" + s + "'");
  return num / den;
}

// Splits "a,b,c" and parses each element with parse_real.
inline std::vector<double> parse_real_list(const std::string& s) {
  std::vector<double> out;
  std::size_t pos = 0;
  while (pos <= s.size()) {
    const auto comma = s.find(',', pos);
    const auto piece = s.substr(pos, comma == std::string::npos ? std::string::npos : comma - pos);
    out.push_back(parse_real(piece));
    if (comma == std::string::npos) break;
    pos = comma + 1;
  }
  return out;
}

}  // namespace eftddirk
