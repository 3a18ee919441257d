#pragma once

/**
 * @file linsolve.hpp
 * @brief Linear problem x'(t) + m x(-t) = h(t), x(-T) - x(T) = lambda.
 *
 * For non-resonant m the unique solution is
 *
 *   u(t) = \int_{-T}^{T} Gbar(t,s) h(s) ds + lambda Gbar(t,-T),
 *
 * evaluated here by composite Newton-Cotes quadrature with the s-interval
 * broken at s = t (jump of Gbar) and s = -t (kink), so the rule keeps its
 * fourth order on every piece.
 */

#include <cmath>
#include <functional>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "reflect/error.hpp"
#include "reflect/grid.hpp"
#include "reflect/kernel.hpp"
#include "reflect/quadrature.hpp"

namespace reflect {

using Forcing = std::function<double(double)>;

struct ReflectionProblem {
  ProblemParams params;
  Forcing h;
  double lambda = 0.0;
};

inline constexpr int kMinQuadPanels = 8;

namespace detail {

inline void check_quad(int n_quad) {
  if (n_quad < kMinQuadPanels || n_quad % 2 != 0)
    throw Error(ErrorCode::InvalidArgument, "n_quad must be even and >= 8");
}

template <class H>
double checked_eval(H& h, double s) {
  double v;
  try {
    v = h(s);
  } catch (const std::exception& e) {
    throw Error(ErrorCode::QuadratureFailure, std::string("forcing raised: ") + e.what());
  }
  if (!std::isfinite(v))
    throw Error(ErrorCode::QuadratureFailure, "forcing is not finite at s = " + std::to_string(s));
  return v;
}

}  // namespace detail

/// \int_{-T}^{T} Gbar(t,s) h(s) ds, split at s = -|t| and s = |t|. The panel
/// count of each piece is proportional to its length, so when t is a node of
/// an n_quad-interval grid every quadrature node is a grid node too.
template <class H>
double kernel_integral(const Kernel& k, double t, H&& h, int n_quad) {
  const double T = k.T();
  const double breaks[4] = {-T, -std::abs(t), std::abs(t), T};
  double total = 0.0;
  for (int p = 0; p < 3; ++p) {
    const double a = breaks[p], b = breaks[p + 1];
    const double len = b - a;
    if (!(len > 0.0)) continue;
    int panels = static_cast<int>(std::llround(len / (2.0 * T) * n_quad));
    if (panels < 1) panels = 1;
    total += newton_cotes(
        [&](double s, Side side) { return k.Gbar(t, s, side) * detail::checked_eval(h, s); }, a, b,
        panels);
  }
  return total;
}

/// Value of the boundary-jump term Gbar(t, -T). s = -T sits below t for every
/// t > -T; at t = -T the same one-sided value keeps u continuous on I.
inline double jump_term(const Kernel& k, double t) { return k.Gbar(t, -k.T(), Side::Below); }

inline std::vector<double> solve_at(const ReflectionProblem& problem, int n_quad,
                                    std::span<const double> eval_points) {
  detail::check_quad(n_quad);
  if (!problem.h) throw Error(ErrorCode::InvalidArgument, "forcing h is empty");
  const Kernel k = Kernel::make(problem.params);
  std::vector<double> out;
  out.reserve(eval_points.size());
  for (double t : eval_points) {
    if (!problem.params.contains(t))
      throw Error(ErrorCode::OutOfDomain, "evaluation point " + std::to_string(t) + " outside I");
    double u = kernel_integral(k, t, problem.h, n_quad);
    if (problem.lambda != 0.0) u += problem.lambda * jump_term(k, t);
    out.push_back(u);
  }
  return out;
}

/// Solution sampled on the n_grid-interval grid.
inline GridFunction solve(const ReflectionProblem& problem, int n_quad, int n_grid) {
  if (n_grid < 2 || n_grid % 2 != 0) throw Error(ErrorCode::InvalidArgument, "n_grid must be even");
  const double T = problem.params.T();
  std::vector<double> nodes(static_cast<std::size_t>(n_grid) + 1);
  for (int i = 0; i <= n_grid; ++i) nodes[static_cast<std::size_t>(i)] = GridFunction::node(T, n_grid, i);
  return GridFunction(T, solve_at(problem, n_quad, nodes));
}

inline GridFunction solve(const ReflectionProblem& problem, int n) { return solve(problem, n, n); }

struct Residual {
  double equation = 0.0;  ///< max_i |u'(t_i) + m u(-t_i) - h(t_i)|
  double boundary = 0.0;  ///< |(u(-T) - u(T)) - lambda|
  double worst_t = 0.0;   ///< node where the equation defect peaks
  double total() const noexcept { return equation + boundary; }
};

/// Defect of a sampled function in the linear equation. u' uses centred
/// differences inside and second-order one-sided differences at the ends.
inline Residual residual(const ReflectionProblem& problem, const GridFunction& u) {
  if (std::abs(u.T() - problem.params.T()) > 1e-12 * problem.params.T())
    throw Error(ErrorCode::GridMismatch, "grid half-length differs from T");
  const int n = u.n();
  const double h = u.step();
  const double m = problem.params.m();
  Residual r;
  for (int i = 0; i <= n; ++i) {
    double du;
    if (i == 0)
      du = (-3.0 * u[0] + 4.0 * u[1] - u[2]) / (2.0 * h);
    else if (i == n)
      du = (3.0 * u[n] - 4.0 * u[n - 1] + u[n - 2]) / (2.0 * h);
    else
      du = (u[i + 1] - u[i - 1]) / (2.0 * h);
    const double t = u.node(i);
    const double d = std::abs(du + m * u.reflected(i) - detail::checked_eval(problem.h, t));
    if (d > r.equation) {
      r.equation = d;
      r.worst_t = t;
    }
  }
  r.boundary = std::abs((u[0] - u[n]) - problem.lambda);
  return r;
}

/// x0 (cos mt - sin mt): the solution of x'(t) + m x(-t) = 0, x(0) = x0, which
/// is also the harmonic oscillator with x(0) = x0, x'(0) = -m x0.
inline double homogeneous_closed_form(double m, double x0, double t) {
  return x0 * (std::cos(m * t) - std::sin(m * t));
}

// ---------------------------------------------------------------------------
// Comparison of two parameters

struct ComparisonReport {
  double m1 = 0.0;
  double m2 = 0.0;
  double T = 0.0;
  int n = 0;
  int grid_n = 0;
  bool positive_window = false;  ///< 0 < m1 < m2 <= pi/(4T)
  bool negative_window = false;  ///< -pi/(4T) <= m1 < m2 < 0
  PointValue min_solution_gap;   ///< min over the grid of u1 - u2 (s unused)
  PointValue min_kernel_gap;     ///< min over the grid of Gbar_m1 - Gbar_m2
  bool solutions_ordered = false;
  bool kernels_ordered = false;
};

inline ComparisonReport compare(double m1, double m2, double T, const Forcing& h, int n, int grid_n) {
  if (!(m1 < m2)) throw Error(ErrorCode::InvalidArgument, "compare expects m1 < m2");
  const auto p1 = ProblemParams::make(m1, T), p2 = ProblemParams::make(m2, T);
  ComparisonReport rep;
  rep.m1 = m1;
  rep.m2 = m2;
  rep.T = T;
  rep.n = n;
  rep.grid_n = grid_n;
  const double w = p1.sign_window();
  rep.positive_window = m1 > 0 && m2 <= w;
  rep.negative_window = m1 >= -w && m2 < 0;

  const auto u1 = solve(ReflectionProblem{p1, h, 0.0}, n);
  const auto u2 = solve(ReflectionProblem{p2, h, 0.0}, n);
  rep.min_solution_gap.value = std::numeric_limits<double>::infinity();
  for (int i = 0; i <= n; ++i) {
    const double gap = u1[i] - u2[i];
    if (gap < rep.min_solution_gap.value) rep.min_solution_gap = {u1.node(i), 0.0, gap};
  }
  rep.min_kernel_gap = min_kernel_gap(Kernel::make(p1), Kernel::make(p2), grid_n);
  rep.solutions_ordered = rep.min_solution_gap.value > 0;
  rep.kernels_ordered = rep.min_kernel_gap.value > 0;
  return rep;
}

}  // namespace reflect
