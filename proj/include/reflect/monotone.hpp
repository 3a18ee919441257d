#pragma once

/**
 * @file monotone.hpp
 * @brief Lower and upper solutions for x'(t) = f(t, x(-t)), x(-T) = x(T).
 *
 * With m chosen so that the operator x' + m x(-t) keeps a sign, each step of
 * the method solves the linear problem
 *
 *   x'(t) + m x(-t) = f(t, x_n(-t)) + m x_n(-t),   x(-T) = x(T),
 *
 * starting from the lower solution and from the upper solution. When the
 * one-sided Lipschitz condition holds on the bracket, the two sequences are
 * monotone and squeeze towards the extremal solutions.
 *
 * All inequality checks are made on grid samples with explicit slack. They are
 * evidence, not proof, and the limits are approximations of the extremal
 * solutions only: extremality itself is not certified.
 */

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <string>
#include <vector>

#include "reflect/error.hpp"
#include "reflect/grid.hpp"
#include "reflect/kernel.hpp"
#include "reflect/linsolve.hpp"

namespace reflect {

/// f(t, y) where y stands for x(-t).
using Nonlinearity2 = std::function<double(double t, double y)>;

enum class Ordering {
  LowerAboveUpper,  ///< alpha >= beta, m in (0, pi/(4T)]
  LowerBelowUpper,  ///< alpha <= beta, m in [-pi/(4T), 0)
};

constexpr const char* to_string(Ordering o) {
  return o == Ordering::LowerAboveUpper ? "LowerAboveUpper" : "LowerBelowUpper";
}

inline constexpr double kDerivativeSlack = 1e-8;
inline constexpr double kBoundarySlack = 1e-12;
inline constexpr double kMonotoneSlack = 1e-10;

struct LowerUpperPair {
  GridFunction lower;  ///< alpha
  GridFunction upper;  ///< beta
  Ordering ordering;

  /// Checks the grids agree and the declared ordering holds node by node.
  static LowerUpperPair make(GridFunction lower, GridFunction upper, Ordering ordering) {
    if (!lower.same_grid(upper)) throw Error(ErrorCode::GridMismatch, "lower and upper use different grids");
    const double sgn = ordering == Ordering::LowerAboveUpper ? 1.0 : -1.0;
    for (int i = 0; i <= lower.n(); ++i)
      if (sgn * (lower[i] - upper[i]) < 0.0)
        throw Error(ErrorCode::InvalidArgument, std::string("bracket is not ") + to_string(ordering) +
                                                    " at t = " + std::to_string(lower.node(i)));
    return {std::move(lower), std::move(upper), ordering};
  }

  const GridFunction& top() const { return ordering == Ordering::LowerAboveUpper ? lower : upper; }
  const GridFunction& bottom() const { return ordering == Ordering::LowerAboveUpper ? upper : lower; }
};

struct Violation {
  double t = 0.0;
  double margin = 0.0;  ///< negative amount by which the inequality fails
  std::string what;
};

struct SolutionCheck {
  bool valid = true;
  double min_margin = std::numeric_limits<double>::infinity();
  std::vector<Violation> violations;
};

namespace detail {

inline SolutionCheck check_bracket_function(const GridFunction& c, const Nonlinearity2& f, double sign) {
  SolutionCheck out;
  const int n = c.n();
  const double h = c.step();
  for (int i = 1; i < n; ++i) {
    const double t = c.node(i);
    const double du = (c[i + 1] - c[i - 1]) / (2.0 * h);
    const double margin = sign * (du - f(t, c.reflected(i)));
    out.min_margin = std::min(out.min_margin, margin);
    if (margin < -kDerivativeSlack) out.violations.push_back({t, margin, "derivative"});
  }
  const double bmargin = sign * (c[0] - c[n]);
  out.min_margin = std::min(out.min_margin, bmargin);
  if (bmargin < -kBoundarySlack) out.violations.push_back({-c.T(), bmargin, "boundary"});
  out.valid = out.violations.empty();
  return out;
}

}  // namespace detail

/// alpha'(t) >= f(t, alpha(-t)) at interior nodes and alpha(-T) - alpha(T) >= 0.
inline SolutionCheck check_lower(const GridFunction& candidate, const Nonlinearity2& f) {
  return detail::check_bracket_function(candidate, f, 1.0);
}

/// beta'(t) <= f(t, beta(-t)) at interior nodes and beta(-T) - beta(T) <= 0.
inline SolutionCheck check_upper(const GridFunction& candidate, const Nonlinearity2& f) {
  return detail::check_bracket_function(candidate, f, -1.0);
}

inline bool in_monotone_window(Ordering o, double m, double T) {
  const double w = kPi / (4.0 * T) * (1.0 + 1e-12);
  return o == Ordering::LowerAboveUpper ? (m > 0 && m <= w) : (m < 0 && m >= -w);
}

struct LipschitzCheck {
  bool holds = true;
  double min_margin = std::numeric_limits<double>::infinity();
  double t = 0.0, x = 0.0, y = 0.0;  ///< where the margin is smallest
  long samples = 0;
  std::string reason;
};

/// Samples f(t,x) - f(t,y) >= -m (x - y) for bottom(t) <= y <= x <= top(t)
/// (or the reversed inequality in the mirrored regime) on `density` values of
/// t and `density` levels across the bracket.
inline LipschitzCheck one_sided_lipschitz_check(const Nonlinearity2& f, const LowerUpperPair& bracket, double m,
                                                int density = 41) {
  if (density < 2) throw Error(ErrorCode::InvalidArgument, "density must be >= 2");
  LipschitzCheck out;
  const double T = bracket.lower.T();
  if (!in_monotone_window(bracket.ordering, m, T)) {
    out.holds = false;
    out.reason = "m outside the admissible window for this ordering";
    return out;
  }
  const double sign = bracket.ordering == Ordering::LowerAboveUpper ? 1.0 : -1.0;
  const auto ts = uniform_nodes(T, density);
  std::vector<double> levels(static_cast<std::size_t>(density));
  for (double t : ts) {
    const double lo = bracket.bottom()(t), hi = bracket.top()(t);
    for (int k = 0; k < density; ++k) levels[static_cast<std::size_t>(k)] = lo + (hi - lo) * k / (density - 1);
    for (std::size_t j = 0; j < levels.size(); ++j) {
      const double fy = f(t, levels[j]);
      for (std::size_t i = j + 1; i < levels.size(); ++i) {
        const double x = levels[i], y = levels[j];
        const double margin = sign * (f(t, x) - fy + m * (x - y));
        ++out.samples;
        if (margin < out.min_margin) {
          out.min_margin = margin;
          out.t = t;
          out.x = x;
          out.y = y;
        }
      }
    }
  }
  if (out.min_margin < 0.0) {
    out.holds = false;
    out.reason = "one-sided Lipschitz inequality fails";
  }
  return out;
}

struct IterateOptions {
  int n_quad = 0;  ///< quadrature panels; 0 means the bracket's grid size
  int max_iters = 60;
  double tol = 1e-8;
};

struct IterationReport {
  std::vector<GridFunction> iterates_lower;
  std::vector<GridFunction> iterates_upper;
  std::vector<double> gaps;        ///< sup |alpha_n - beta_n|, one per iterate
  std::vector<double> increments;  ///< max of sup |alpha_n - alpha_{n-1}|, sup |beta_n - beta_{n-1}|
  bool converged = false;
  int converged_at = -1;  ///< first n with alpha_n, beta_n already fixed to tol
  int iterations = 0;
  double final_gap = 0.0;
  double residual_lower = 0.0;
  double residual_upper = 0.0;
  double residual = 0.0;
  double m_used = 0.0;
  bool inside_bracket = true;
  bool monotone = true;
  Ordering ordering = Ordering::LowerAboveUpper;
};

/// One application of the monotone map: solve the linear problem whose
/// forcing is f(t, x(-t)) + m x(-t).
inline GridFunction monotone_step(const Nonlinearity2& f, const GridFunction& x, const ProblemParams& p,
                                  int n_quad) {
  const ReflectionProblem problem{p, [&](double t) { return f(t, x(-t)) + p.m() * x(-t); }, 0.0};
  return solve(problem, n_quad, x.n());
}

/// Residual of x in x' = f(t, x(-t)) with periodic conditions.
inline double nonlinear_residual(const Nonlinearity2& f, const GridFunction& x, const ProblemParams& p) {
  const ReflectionProblem problem{p, [&](double t) { return f(t, x(-t)) + p.m() * x(-t); }, 0.0};
  return residual(problem, x).total();
}

inline IterationReport iterate(const Nonlinearity2& f, const LowerUpperPair& bracket, double m,
                               const IterateOptions& opt = {}) {
  if (!f) throw Error(ErrorCode::InvalidArgument, "nonlinearity is empty");
  if (opt.max_iters < 1) throw Error(ErrorCode::InvalidArgument, "max_iters must be >= 1");
  if (!(opt.tol > 0)) throw Error(ErrorCode::InvalidArgument, "tol must be positive");
  const double T = bracket.lower.T();
  if (!in_monotone_window(bracket.ordering, m, T))
    throw Error(ErrorCode::BadWindow, "m = " + std::to_string(m) + " outside the window for " +
                                          to_string(bracket.ordering));
  const auto params = ProblemParams::make(m, T);
  (void)Kernel::make(params);
  const int n_quad = opt.n_quad == 0 ? bracket.lower.n() : opt.n_quad;

  IterationReport rep;
  rep.m_used = m;
  rep.ordering = bracket.ordering;
  rep.iterates_lower.push_back(bracket.lower);
  rep.iterates_upper.push_back(bracket.upper);
  rep.gaps.push_back(sup_distance(bracket.lower, bracket.upper));

  // "top" decreases and "bottom" increases in both regimes.
  const bool lower_is_top = bracket.ordering == Ordering::LowerAboveUpper;
  const GridFunction& top0 = bracket.top();
  const GridFunction& bottom0 = bracket.bottom();

  auto broken = [](int it, double t, const std::string& what) {
    return Error(ErrorCode::MonotonicityBroken,
                 what + " at iteration " + std::to_string(it) + ", t = " + std::to_string(t));
  };

  for (int it = 1; it <= opt.max_iters; ++it) {
    const GridFunction& lo_prev = rep.iterates_lower.back();
    const GridFunction& up_prev = rep.iterates_upper.back();
    GridFunction lo = monotone_step(f, lo_prev, params, n_quad);
    GridFunction up = monotone_step(f, up_prev, params, n_quad);

    const GridFunction& top_prev = lower_is_top ? lo_prev : up_prev;
    const GridFunction& bot_prev = lower_is_top ? up_prev : lo_prev;
    const GridFunction& top = lower_is_top ? lo : up;
    const GridFunction& bot = lower_is_top ? up : lo;
    for (int i = 0; i <= lo.n(); ++i) {
      const double t = lo.node(i);
      if (top[i] > top_prev[i] + kMonotoneSlack) throw broken(it, t, "upper sequence increased");
      if (bot[i] < bot_prev[i] - kMonotoneSlack) throw broken(it, t, "lower sequence decreased");
      if (bot[i] > top[i] + kMonotoneSlack) throw broken(it, t, "sequences crossed");
      if (top[i] > top0[i] + kMonotoneSlack || bot[i] < bottom0[i] - kMonotoneSlack)
        throw broken(it, t, "iterate left the initial bracket");
    }

    const double inc = std::max(sup_distance(lo, lo_prev), sup_distance(up, up_prev));
    rep.increments.push_back(inc);
    rep.gaps.push_back(sup_distance(lo, up));
    rep.iterates_lower.push_back(std::move(lo));
    rep.iterates_upper.push_back(std::move(up));
    rep.iterations = it;
    if (inc <= opt.tol) {
      rep.converged = true;
      rep.converged_at = it - 1;
      break;
    }
  }

  rep.final_gap = rep.gaps.back();
  rep.residual_lower = nonlinear_residual(f, rep.iterates_lower.back(), params);
  rep.residual_upper = nonlinear_residual(f, rep.iterates_upper.back(), params);
  rep.residual = std::max(rep.residual_lower, rep.residual_upper);
  return rep;
}

}  // namespace reflect
