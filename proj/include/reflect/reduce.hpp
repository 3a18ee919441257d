#pragma once

/**
 * @file reduce.hpp
 * @brief Reductions of equations with involutions to ordinary differential
 * equations, and the machinery to integrate and filter them.
 *
 * Two routes are provided.
 *
 * Second-order route, for x'(t) = f(x(phi(t))), x(c) = x_c with phi an
 * involution fixing c and f a diffeomorphism:
 *
 *   x''(t) = f'(f^{-1}(x'(t))) f(x(t)) phi'(t),   x(c) = x_c,  x'(c) = f(x_c).
 *
 * Reflected-system route, for x'(t) = f(t, x(-t), x(t)) on I = [-T, T]:
 * with y(t) = x(-t) the pair (y, x) solves
 *
 *   x'(t) =  f( t, y, x)
 *   y'(t) = -f(-t, x, y)
 *
 * with (y,x)(-T) = (x,y)(T) for periodic problems or (y,x)(0) = (x0,x0) for
 * initial-value problems. The even/odd parts z = (x+y)/2, w = (x-y)/2 give an
 * equivalent system via xi(t,z,w) = (t, z-w, z+w).
 *
 * Every genuine solution appears among the system solutions but not the other
 * way round, so periodic system solutions must be passed through
 * filter_reflection_solution before being reported as solutions.
 */

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <limits>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "reflect/error.hpp"
#include "reflect/grid.hpp"

namespace reflect {

// ---------------------------------------------------------------------------
// Involutions and the second-order reduction

struct Involution {
  std::function<double(double)> phi;
  std::function<double(double)> dphi;
  double fixed_point = 0.0;

  static Involution reflection() {
    return {[](double t) { return -t; }, [](double) { return -1.0; }, 0.0};
  }
};

struct InvolutionCheck {
  bool valid = false;
  double max_defect = 0.0;  ///< max |phi(phi(t)) - t| over the samples
  std::string reason;
};

inline InvolutionCheck validate(const Involution& inv, std::span<const double> samples, double tol = 1e-10) {
  InvolutionCheck c;
  if (!inv.phi || !inv.dphi) {
    c.reason = "phi and dphi must be set";
    return c;
  }
  bool moves = false;
  for (double t : samples) {
    const double p = inv.phi(t);
    c.max_defect = std::max(c.max_defect, std::abs(inv.phi(p) - t));
    if (std::abs(p - t) > tol) moves = true;
  }
  if (c.max_defect > tol) {
    c.reason = "phi(phi(t)) != t";
  } else if (!moves) {
    c.reason = "phi is the identity on the samples";
  } else if (std::abs(inv.phi(inv.fixed_point) - inv.fixed_point) > tol) {
    c.reason = "declared fixed point is not fixed";
  } else {
    c.valid = true;
  }
  return c;
}

/// f together with its inverse and derivative; f^{-1} is only defined on
/// [range_lo, range_hi].
struct Diffeomorphism {
  std::function<double(double)> f;
  std::function<double(double)> inverse;
  std::function<double(double)> derivative;
  double range_lo = -std::numeric_limits<double>::infinity();
  double range_hi = std::numeric_limits<double>::infinity();
};

struct SecondOrderOde {
  std::function<double(double t, double x, double xp)> rhs;
  double t0 = 0.0;
  double x0 = 0.0;
  double xp0 = 0.0;
};

inline SecondOrderOde reduce_second_order(const Diffeomorphism& fd, const Involution& inv, double x_c) {
  if (!fd.f || !fd.inverse || !fd.derivative)
    throw Error(ErrorCode::InvalidArgument, "diffeomorphism needs f, inverse and derivative");
  if (!inv.phi || !inv.dphi) throw Error(ErrorCode::InvalidArgument, "involution needs phi and dphi");
  const double c = inv.fixed_point;
  if (std::abs(inv.phi(c) - c) > 1e-10)
    throw Error(ErrorCode::InvalidArgument, "involution does not fix the declared point");
  SecondOrderOde ode;
  ode.rhs = [fd, dphi = inv.dphi](double t, double x, double xp) {
    if (!(xp >= fd.range_lo && xp <= fd.range_hi))
      throw Error(ErrorCode::DomainViolation,
                  "x' = " + std::to_string(xp) + " left the range of f at t = " + std::to_string(t));
    return fd.derivative(fd.inverse(xp)) * fd.f(x) * dphi(t);
  };
  ode.t0 = c;
  ode.x0 = x_c;
  ode.xp0 = fd.f(x_c);
  return ode;
}

// ---------------------------------------------------------------------------
// Fixed-step RK4

template <std::size_t N>
using State = std::array<double, N>;

template <std::size_t N>
struct Trajectory {
  std::vector<double> t;
  std::vector<State<N>> x;
};

template <std::size_t N, class Rhs>
Trajectory<N> integrate_rk4(Rhs&& rhs, double start, double end, State<N> init, int n_steps) {
  if (n_steps < 1) throw Error(ErrorCode::InvalidArgument, "n_steps must be >= 1");
  const double h = (end - start) / n_steps;
  Trajectory<N> tr;
  tr.t.reserve(static_cast<std::size_t>(n_steps) + 1);
  tr.x.reserve(static_cast<std::size_t>(n_steps) + 1);
  tr.t.push_back(start);
  tr.x.push_back(init);
  auto axpy = [](const State<N>& a, double s, const State<N>& b) {
    State<N> r;
    for (std::size_t i = 0; i < N; ++i) r[i] = a[i] + s * b[i];
    return r;
  };
  State<N> x = init;
  for (int k = 0; k < n_steps; ++k) {
    const double t = start + h * k;
    const State<N> k1 = rhs(t, x);
    const State<N> k2 = rhs(t + 0.5 * h, axpy(x, 0.5 * h, k1));
    const State<N> k3 = rhs(t + 0.5 * h, axpy(x, 0.5 * h, k2));
    const State<N> k4 = rhs(t + h, axpy(x, h, k3));
    for (std::size_t i = 0; i < N; ++i) {
      x[i] += h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
      if (!std::isfinite(x[i]))
        throw Error(ErrorCode::NonFinite, "state blew up at t = " + std::to_string(t + h));
    }
    tr.t.push_back(k + 1 == n_steps ? end : start + h * (k + 1));
    tr.x.push_back(x);
  }
  return tr;
}

/// Values of the second-order ODE's solution on a uniform grid of n_steps
/// intervals over [t0 - half_width, t0 + half_width], integrating outward from t0.
inline std::vector<double> integrate_second_order_symmetric(const SecondOrderOde& ode, double half_width,
                                                            int n_steps) {
  if (n_steps < 2 || n_steps % 2 != 0) throw Error(ErrorCode::InvalidArgument, "n_steps must be even");
  auto rhs = [&](double t, const State<2>& s) { return State<2>{s[1], ode.rhs(t, s[0], s[1])}; };
  const State<2> init{ode.x0, ode.xp0};
  const int half = n_steps / 2;
  const auto fwd = integrate_rk4<2>(rhs, ode.t0, ode.t0 + half_width, init, half);
  const auto bwd = integrate_rk4<2>(rhs, ode.t0, ode.t0 - half_width, init, half);
  std::vector<double> out(static_cast<std::size_t>(n_steps) + 1);
  for (int i = 0; i <= half; ++i) {
    out[static_cast<std::size_t>(half + i)] = fwd.x[static_cast<std::size_t>(i)][0];
    out[static_cast<std::size_t>(half - i)] = bwd.x[static_cast<std::size_t>(i)][0];
  }
  return out;
}

// ---------------------------------------------------------------------------
// The reflected system

/// f(t, y, x) where y stands for x(-t) and x for x(t).
using Nonlinearity3 = std::function<double(double t, double y, double x)>;

enum class BoundaryMode { Periodic, InitialValue };

struct NonlinearProblem {
  Nonlinearity3 f;
  double T = 1.0;
  BoundaryMode mode = BoundaryMode::Periodic;
  double x0 = 0.0;  ///< used in InitialValue mode
};

inline std::array<double, 3> xi(double t, double z, double w) { return {t, z - w, z + w}; }
inline std::array<double, 3> xi_inverse(double t, double y, double x) { return {t, 0.5 * (x + y), 0.5 * (x - y)}; }

struct ReflectionSystem {
  Nonlinearity3 f;
  double T = 1.0;
  BoundaryMode mode = BoundaryMode::Periodic;
  double x0 = 0.0;

  /// d/dt (y, x) = (-f(-t, x, y), f(t, y, x)).
  State<2> operator()(double t, const State<2>& yx) const {
    return {-f(-t, yx[1], yx[0]), f(t, yx[0], yx[1])};
  }

  /// The same flow in even/odd coordinates (z, w).
  State<2> even_odd(double t, const State<2>& zw) const {
    auto composed = [this](double tt, double z, double w) {
      const auto p = xi(tt, z, w);
      return f(p[0], p[1], p[2]);
    };
    const double a = composed(t, zw[0], zw[1]);
    const double b = composed(-t, zw[0], -zw[1]);
    return {0.5 * (a - b), 0.5 * (a + b)};
  }

  /// (y(-T) - x(T), x(-T) - y(T)); zero for a solution of the periodic system.
  State<2> periodic_defect(const State<2>& yx_minus_T, const State<2>& yx_T) const {
    return {yx_minus_T[0] - yx_T[1], yx_minus_T[1] - yx_T[0]};
  }

  State<2> initial_state() const { return {x0, x0}; }
};

inline ReflectionSystem reduce_system(const NonlinearProblem& p) {
  if (!p.f) throw Error(ErrorCode::InvalidArgument, "nonlinearity is empty");
  if (!(p.T > 0.0)) throw Error(ErrorCode::InvalidArgument, "T must be positive");
  return ReflectionSystem{p.f, p.T, p.mode, p.x0};
}

/// Trajectory of the reflected system on the uniform grid t_i = -T + 2T i/n.
struct SystemSolution {
  double T = 1.0;
  std::vector<double> t;
  std::vector<double> y;
  std::vector<double> x;

  int n() const { return static_cast<int>(t.size()) - 1; }
  double z(int i) const { return 0.5 * (x[static_cast<std::size_t>(i)] + y[static_cast<std::size_t>(i)]); }
  double w(int i) const { return 0.5 * (x[static_cast<std::size_t>(i)] - y[static_cast<std::size_t>(i)]); }
  GridFunction x_grid() const { return GridFunction(T, x); }
};

inline SystemSolution to_solution(double T, const Trajectory<2>& tr) {
  SystemSolution s;
  s.T = T;
  s.t = tr.t;
  for (const auto& st : tr.x) {
    s.y.push_back(st[0]);
    s.x.push_back(st[1]);
  }
  return s;
}

/// Integrates the system from (y, x)(-T) = start across I.
inline SystemSolution integrate_from_left(const ReflectionSystem& sys, State<2> start, int n_steps) {
  if (n_steps < 2 || n_steps % 2 != 0) throw Error(ErrorCode::InvalidArgument, "n_steps must be even");
  auto tr = integrate_rk4<2>(sys, -sys.T, sys.T, start, n_steps);
  auto sol = to_solution(sys.T, tr);
  for (int i = 0; i <= n_steps; ++i) sol.t[static_cast<std::size_t>(i)] = GridFunction::node(sys.T, n_steps, i);
  return sol;
}

/// Initial-value problem: integrate outward from (y, x)(0) = (x0, x0).
inline SystemSolution solve_initial_value(const NonlinearProblem& p, int n_steps) {
  if (n_steps < 2 || n_steps % 2 != 0) throw Error(ErrorCode::InvalidArgument, "n_steps must be even");
  const auto sys = reduce_system(p);
  const int half = n_steps / 2;
  const auto fwd = integrate_rk4<2>(sys, 0.0, p.T, sys.initial_state(), half);
  const auto bwd = integrate_rk4<2>(sys, 0.0, -p.T, sys.initial_state(), half);
  SystemSolution s;
  s.T = p.T;
  s.t.resize(static_cast<std::size_t>(n_steps) + 1);
  s.y.resize(s.t.size());
  s.x.resize(s.t.size());
  for (int i = 0; i <= n_steps; ++i) s.t[static_cast<std::size_t>(i)] = GridFunction::node(p.T, n_steps, i);
  for (int i = 0; i <= half; ++i) {
    const auto up = static_cast<std::size_t>(half + i), dn = static_cast<std::size_t>(half - i);
    s.y[up] = fwd.x[static_cast<std::size_t>(i)][0];
    s.x[up] = fwd.x[static_cast<std::size_t>(i)][1];
    s.y[dn] = bwd.x[static_cast<std::size_t>(i)][0];
    s.x[dn] = bwd.x[static_cast<std::size_t>(i)][1];
  }
  return s;
}

// ---------------------------------------------------------------------------
// Shooting for the periodic system

enum class ShootingConstraint {
  SystemOnly,      ///< residual (x(T) - a, y(T) - b): boundary conditions of the system
  WithReflection,  ///< adds b - a = x(-T) - y(-T), necessary for a genuine solution
};

struct ShootOptions {
  int n_steps = 2000;
  double newton_tol = 1e-10;
  int max_newton = 60;
  ShootingConstraint constraint = ShootingConstraint::WithReflection;
};

struct NewtonIterate {
  double a = 0.0;  ///< y(-T)
  double b = 0.0;  ///< x(-T)
  double defect_norm = 0.0;
  double damping = 1.0;  ///< step fraction accepted to reach this iterate
};

struct ShootResult {
  SystemSolution solution;
  std::vector<NewtonIterate> trace;
  double defect_norm = 0.0;
};

namespace detail {

inline double norm2(std::span<const double> v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  return std::sqrt(s);
}

/// Minimum-norm least-squares step for J d = -F with J of size rows x 2,
/// falling back to the rank-one pseudo-inverse when J^T J is singular.
inline State<2> least_squares_step(const std::vector<State<2>>& J, const std::vector<double>& F) {
  double a11 = 0, a12 = 0, a22 = 0, g1 = 0, g2 = 0;
  for (std::size_t r = 0; r < J.size(); ++r) {
    a11 += J[r][0] * J[r][0];
    a12 += J[r][0] * J[r][1];
    a22 += J[r][1] * J[r][1];
    g1 -= J[r][0] * F[r];
    g2 -= J[r][1] * F[r];
  }
  // Eigen-decomposition of the symmetric 2x2 normal matrix.
  const double tr = a11 + a22;
  const double diff = a11 - a22;
  const double disc = std::sqrt(diff * diff + 4.0 * a12 * a12);
  const double l1 = 0.5 * (tr + disc), l2 = 0.5 * (tr - disc);
  if (!(l1 > 0.0)) throw Error(ErrorCode::SingularJacobian, "shooting Jacobian vanishes");
  State<2> v1;
  if (std::abs(a12) > 0.0) {
    v1 = {l1 - a22, a12};
  } else {
    v1 = a11 >= a22 ? State<2>{1.0, 0.0} : State<2>{0.0, 1.0};
  }
  const double nv = std::hypot(v1[0], v1[1]);
  v1 = {v1[0] / nv, v1[1] / nv};
  const State<2> v2{-v1[1], v1[0]};
  const double c1 = (v1[0] * g1 + v1[1] * g2) / l1;
  State<2> d{c1 * v1[0], c1 * v1[1]};
  if (l2 > 1e-12 * l1) {
    const double c2 = (v2[0] * g1 + v2[1] * g2) / l2;
    d[0] += c2 * v2[0];
    d[1] += c2 * v2[1];
  }
  return d;
}

}  // namespace detail

/// Finds (a, b) = (y(-T), x(-T)) by damped Gauss-Newton with a forward
/// difference Jacobian. Shooting is local: the returned solution is the one
/// reached from `guess`, not an enumeration of all periodic solutions.
inline ShootResult shoot_periodic(const NonlinearProblem& p, State<2> guess, const ShootOptions& opt = {}) {
  if (p.mode != BoundaryMode::Periodic)
    throw Error(ErrorCode::InvalidArgument, "shoot_periodic needs a periodic problem");
  if (opt.max_newton < 0 || !(opt.newton_tol > 0))
    throw Error(ErrorCode::InvalidArgument, "bad Newton options");
  const auto sys = reduce_system(p);
  const bool reflect_row = opt.constraint == ShootingConstraint::WithReflection;

  auto residuals = [&](const State<2>& ab) {
    const auto tr = integrate_rk4<2>(sys, -p.T, p.T, ab, opt.n_steps);
    const State<2>& end = tr.x.back();
    std::vector<double> F{end[1] - ab[0], end[0] - ab[1]};
    if (reflect_row) F.push_back(ab[1] - ab[0]);
    return F;
  };

  ShootResult res;
  State<2> u = guess;
  std::vector<double> F = residuals(u);
  double fn = detail::norm2(F);
  res.trace.push_back({u[0], u[1], fn, 1.0});

  for (int it = 0; it < opt.max_newton && fn > opt.newton_tol; ++it) {
    std::vector<State<2>> J(F.size());
    for (int j = 0; j < 2; ++j) {
      State<2> up = u;
      const double hstep = 1e-7 * (1.0 + std::abs(u[static_cast<std::size_t>(j)]));
      up[static_cast<std::size_t>(j)] += hstep;
      const auto Fp = residuals(up);
      for (std::size_t r = 0; r < F.size(); ++r) J[r][static_cast<std::size_t>(j)] = (Fp[r] - F[r]) / hstep;
    }
    const State<2> d = detail::least_squares_step(J, F);

    double lam = 1.0;
    bool accepted = false;
    for (int halving = 0; halving <= 30; ++halving, lam *= 0.5) {
      const State<2> trial{u[0] + lam * d[0], u[1] + lam * d[1]};
      std::vector<double> Ft;
      try {
        Ft = residuals(trial);
      } catch (const Error& e) {
        if (e.code() == ErrorCode::NonFinite) continue;
        throw;
      }
      const double ftn = detail::norm2(Ft);
      if (ftn < fn) {
        u = trial;
        F = std::move(Ft);
        fn = ftn;
        accepted = true;
        break;
      }
    }
    if (!accepted) break;
    res.trace.push_back({u[0], u[1], fn, lam});
  }

  if (!(fn <= opt.newton_tol))
    throw Error(ErrorCode::NoConvergence, "shooting stopped at (a, b) = (" + std::to_string(u[0]) + ", " +
                                              std::to_string(u[1]) + ") with defect " + std::to_string(fn));
  res.defect_norm = fn;
  res.solution = integrate_from_left(sys, u, opt.n_steps);
  return res;
}

// ---------------------------------------------------------------------------
// Spurious-solution filter

struct FilterVerdict {
  bool genuine = false;
  double reflection_defect = 0.0;  ///< max_i |y(t_i) - x(-t_i)|
  double reflection_t = 0.0;       ///< where it peaks
  double boundary_defect = 0.0;    ///< |x(T) - x(-T)|, periodic mode only
};

inline FilterVerdict filter_reflection_solution(const SystemSolution& sol, double tol,
                                                BoundaryMode mode = BoundaryMode::Periodic) {
  FilterVerdict v;
  const int n = sol.n();
  for (int i = 0; i <= n; ++i) {
    const double d = std::abs(sol.y[static_cast<std::size_t>(i)] - sol.x[static_cast<std::size_t>(n - i)]);
    if (d > v.reflection_defect) {
      v.reflection_defect = d;
      v.reflection_t = sol.t[static_cast<std::size_t>(i)];
    }
  }
  if (mode == BoundaryMode::Periodic) v.boundary_defect = std::abs(sol.x.back() - sol.x.front());
  v.genuine = v.reflection_defect <= tol && v.boundary_defect <= tol;
  return v;
}

/// max_i of |z(t_i) - z(-t_i)| and |w(t_i) + w(-t_i)|: zero when z is even and w odd.
inline double even_odd_defect(const SystemSolution& sol) {
  const int n = sol.n();
  double d = 0.0;
  for (int i = 0; i <= n; ++i) {
    d = std::max(d, std::abs(sol.z(i) - sol.z(n - i)));
    d = std::max(d, std::abs(sol.w(i) + sol.w(n - i)));
  }
  return d;
}

inline void write_trajectory_csv(std::ostream& os, const SystemSolution& sol) {
  os << "t,y,x,z,w\n";
  for (int i = 0; i <= sol.n(); ++i) {
    const auto k = static_cast<std::size_t>(i);
    os << format_double(sol.t[k]) << ',' << format_double(sol.y[k]) << ',' << format_double(sol.x[k]) << ','
       << format_double(sol.z(i)) << ',' << format_double(sol.w(i)) << '\n';
  }
}

}  // namespace reflect
