#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "reflect/error.hpp"

namespace reflect {

/// Real function sampled at t_i = -T + 2T i/n, i = 0..n, n even.
class GridFunction {
 public:
  GridFunction(double T, std::vector<double> values) : T_(T), values_(std::move(values)) {
    if (!(T_ > 0.0) || !std::isfinite(T_))
      throw Error(ErrorCode::InvalidArgument, "grid half-length must be positive");
    const auto count = values_.size();
    if (count < 3 || (count - 1) % 2 != 0)
      throw Error(ErrorCode::InvalidArgument, "grid needs an even number n >= 2 of subintervals");
  }

  template <class F>
  static GridFunction sample(double T, int n, F&& f) {
    if (n < 2 || n % 2 != 0) throw Error(ErrorCode::InvalidArgument, "n must be even and >= 2");
    std::vector<double> v(static_cast<std::size_t>(n) + 1);
    for (int i = 0; i <= n; ++i) v[static_cast<std::size_t>(i)] = f(node(T, n, i));
    return GridFunction(T, std::move(v));
  }

  static GridFunction constant(double T, int n, double c) {
    return sample(T, n, [c](double) { return c; });
  }

  /// Node i of an n-interval grid; exact at the ends and symmetric bit for bit.
  static double node(double T, int n, int i) {
    return T * (static_cast<double>(2 * i - n) / static_cast<double>(n));
  }

  double T() const noexcept { return T_; }
  int n() const noexcept { return static_cast<int>(values_.size()) - 1; }
  double step() const noexcept { return 2.0 * T_ / n(); }
  double node(int i) const { return node(T_, n(), i); }
  std::vector<double> nodes() const {
    std::vector<double> t(values_.size());
    for (int i = 0; i <= n(); ++i) t[static_cast<std::size_t>(i)] = node(i);
    return t;
  }

  const std::vector<double>& values() const noexcept { return values_; }
  std::vector<double>& values() noexcept { return values_; }
  double operator[](int i) const { return values_[static_cast<std::size_t>(i)]; }
  double& operator[](int i) { return values_[static_cast<std::size_t>(i)]; }

  /// u(-t_i), which is again a grid value.
  double reflected(int i) const { return values_[static_cast<std::size_t>(n() - i)]; }

  bool is_periodic(double tol) const { return std::abs(values_.front() - values_.back()) <= tol; }

  bool same_grid(const GridFunction& o) const {
    return n() == o.n() && std::abs(T_ - o.T_) <= 1e-12 * T_;
  }

  /// Cubic Lagrange interpolation on the four nearest nodes; returns the
  /// stored value when t is a node up to rounding.
  double operator()(double t) const {
    const int nn = n();
    const double h = step();
    const double x = (t + T_) / h;
    if (x < -1e-9 || x > nn + 1e-9)
      throw Error(ErrorCode::OutOfDomain, "interpolation point " + std::to_string(t) + " outside grid");
    const double nearest = std::round(x);
    if (std::abs(x - nearest) <= 1e-9) return (*this)[static_cast<int>(nearest)];
    int j = static_cast<int>(std::floor(x)) - 1;
    j = std::clamp(j, 0, nn - 3);
    double acc = 0.0;
    for (int a = 0; a < 4; ++a) {
      double w = 1.0;
      for (int b = 0; b < 4; ++b)
        if (b != a) w *= (x - (j + b)) / static_cast<double>(a - b);
      acc += w * (*this)[j + a];
    }
    return acc;
  }

 private:
  double T_;
  std::vector<double> values_;
};

inline double sup_distance(const GridFunction& a, const GridFunction& b) {
  if (!a.same_grid(b)) throw Error(ErrorCode::GridMismatch, "grids differ");
  double d = 0.0;
  for (int i = 0; i <= a.n(); ++i) d = std::max(d, std::abs(a[i] - b[i]));
  return d;
}

inline double sup_norm(const GridFunction& a) {
  double d = 0.0;
  for (double v : a.values()) d = std::max(d, std::abs(v));
  return d;
}

/// 17 significant digits: enough for an exact binary64 round trip.
inline std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

inline void write_csv(std::ostream& os, const GridFunction& u) {
  os << "t,value\n";
  for (int i = 0; i <= u.n(); ++i) os << format_double(u.node(i)) << ',' << format_double(u[i]) << '\n';
}

inline GridFunction read_csv(std::istream& is) {
  std::string line;
  if (!std::getline(is, line) || line.rfind("t,value", 0) != 0)
    throw Error(ErrorCode::InvalidArgument, "expected header 't,value'");
  std::vector<double> ts, vs;
  while (std::getline(is, line)) {
    if (line.empty() || line == "\r") continue;
    const auto comma = line.find(',');
    if (comma == std::string::npos) throw Error(ErrorCode::InvalidArgument, "malformed row: " + line);
    try {
      ts.push_back(std::stod(line.substr(0, comma)));
      vs.push_back(std::stod(line.substr(comma + 1)));
    } catch (const std::exception&) {
      throw Error(ErrorCode::InvalidArgument, "malformed row: " + line);
    }
  }
  if (ts.size() < 3) throw Error(ErrorCode::InvalidArgument, "need at least three rows");
  const double T = ts.back();
  GridFunction u(T, std::move(vs));
  for (int i = 0; i <= u.n(); ++i)
    if (std::abs(ts[static_cast<std::size_t>(i)] - u.node(i)) > 1e-12 * T)
      throw Error(ErrorCode::GridMismatch, "rows are not a uniform grid on [-T, T]");
  return u;
}

}  // namespace reflect
