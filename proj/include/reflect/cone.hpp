#pragma once

/**
 * @file cone.hpp
 * @brief Sampled checks of the compression-expansion hypotheses for
 * x'(t) = f(t, x(-t), x(t)), x(-T) = x(T).
 *
 * Solutions are fixed points of
 *
 *   (A x)(t) = \int_{-T}^{T} Gbar(t,s) [f(s, x(-s), x(s)) + m x(-s)] ds.
 *
 * The existence statements ask for sign and growth conditions on
 * F(t,x,y) = f(t,x,y) + m x over annuli built from r < R and the kernel bounds
 * M = sup Gbar, L = inf Gbar. Arguments follow the statements: x is the value
 * at -t and y the value at t. Each condition here is sampled over a lattice in
 * (t, x, y); a positive verdict means "holds on N samples with minimum margin
 * delta", never a proof.
 */

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "reflect/error.hpp"
#include "reflect/grid.hpp"
#include "reflect/kernel.hpp"
#include "reflect/linsolve.hpp"

namespace reflect {

/// f(t, x, y) with x = x(-t) and y = x(t).
using ConeNonlinearity = std::function<double(double t, double x, double y)>;

struct ConeBounds {
  double M = 0.0;
  double L = 0.0;
  double m = 0.0;
  double T = 0.0;
  double r = 0.0;
  double R = 0.0;

  static ConeBounds make(double m, double T, double r, double R, int grid_n = 401, int refine_iters = 3) {
    if (!(r > 0.0) || !(r < R) || !std::isfinite(R))
      throw Error(ErrorCode::InvalidArgument, "radii must satisfy 0 < r < R");
    const auto kb = kernel_bounds(ProblemParams::make(m, T), grid_n, refine_iters);
    return {kb.M, kb.L, m, T, r, R};
  }

  ConeBounds with_radii(double r_, double R_) const {
    if (!(r_ > 0.0) || !(r_ < R_)) throw Error(ErrorCode::InvalidArgument, "radii must satisfy 0 < r < R");
    ConeBounds b = *this;
    b.r = r_;
    b.R = R_;
    return b;
  }
};

enum class ConeTheorem {
  PositiveSolutionThm,   ///< m in (0, pi/(4T)), positive solution
  NegativeSolutionCor1,  ///< m in (0, pi/(4T)), negative solution
  PositiveSolutionTeo2,  ///< m in (-pi/(4T), 0), positive solution
  NegativeSolutionCor2,  ///< m in (-pi/(4T), 0), negative solution
  EasyCorollary,         ///< limits of f/x at 0 and infinity
};

constexpr const char* to_string(ConeTheorem t) {
  switch (t) {
    case ConeTheorem::PositiveSolutionThm: return "PositiveSolutionThm";
    case ConeTheorem::NegativeSolutionCor1: return "NegativeSolutionCor1";
    case ConeTheorem::PositiveSolutionTeo2: return "PositiveSolutionTeo2";
    case ConeTheorem::NegativeSolutionCor2: return "NegativeSolutionCor2";
    case ConeTheorem::EasyCorollary: return "EasyCorollary";
  }
  return "Unknown";
}

enum class Relation { GreaterEq, LessEq };

constexpr const char* to_string(Relation r) { return r == Relation::GreaterEq ? ">=" : "<="; }

/// F(t,x,y) rel coefficient * x for x, y in [lo, hi] and t in I.
struct Inequality {
  std::string name;
  Relation rel = Relation::GreaterEq;
  double coefficient = 0.0;
  double lo = 0.0;
  double hi = 0.0;
};

struct Witness {
  double t = 0.0, x = 0.0, y = 0.0;
  double margin = 0.0;
  std::string inequality;
};

struct InequalityResult {
  Inequality inequality;
  long samples = 0;
  double min_margin = std::numeric_limits<double>::infinity();
  Witness worst;
  bool holds = true;
};

struct BranchResult {
  int branch = 0;
  bool holds = false;
  std::vector<InequalityResult> inequalities;
};

struct ExistenceReport {
  ConeTheorem theorem = ConeTheorem::PositiveSolutionThm;
  ConeBounds bounds;
  int sample_density = 0;
  InequalityResult sign_condition;
  std::array<BranchResult, 2> branches;
  int branch_held = 0;  ///< 1 or 2, 0 when neither branch holds
  bool hypotheses_hold = false;
  double min_margin = 0.0;  ///< over the sign condition and the branch that held
  bool zero_margin = false;
  std::optional<Witness> violation;
  long pairs_tried = 0;  ///< sweep mode only
};

inline bool theorem_window_ok(ConeTheorem th, double m, double T) {
  const double w = kPi / (4.0 * T);
  switch (th) {
    case ConeTheorem::PositiveSolutionThm:
    case ConeTheorem::NegativeSolutionCor1:
    case ConeTheorem::EasyCorollary:
      return m > 0 && m < w;
    case ConeTheorem::PositiveSolutionTeo2:
    case ConeTheorem::NegativeSolutionCor2:
      return m < 0 && m > -w;
  }
  return false;
}

struct HypothesisSet {
  Inequality sign_condition;
  std::array<std::array<Inequality, 2>, 2> branches;
};

/// Interval systems and growth constants as stated for each result.
inline HypothesisSet hypotheses(ConeTheorem th, const ConeBounds& b) {
  const double M = b.M, L = b.L, T = b.T, r = b.r, R = b.R;
  using enum Relation;
  HypothesisSet h;
  switch (th) {
    case ConeTheorem::PositiveSolutionThm: {
      const double big = M / (2 * T * L * L), small = 1 / (2 * T * M);
      const double a0 = L / M * r, a1 = r, b0 = R, b1 = M / L * R;
      h.sign_condition = {"sign", GreaterEq, 0.0, a0, b1};
      h.branches[0] = {Inequality{"inner", GreaterEq, big, a0, a1}, Inequality{"outer", LessEq, small, b0, b1}};
      h.branches[1] = {Inequality{"inner", LessEq, small, a0, a1}, Inequality{"outer", GreaterEq, big, b0, b1}};
      break;
    }
    case ConeTheorem::NegativeSolutionCor1: {
      const double big = M / (2 * T * L * L), small = 1 / (2 * T * M);
      const double a0 = -r, a1 = -L / M * r, b0 = -M / L * R, b1 = -R;
      h.sign_condition = {"sign", LessEq, 0.0, b0, a1};
      h.branches[0] = {Inequality{"inner", LessEq, big, a0, a1}, Inequality{"outer", GreaterEq, small, b0, b1}};
      h.branches[1] = {Inequality{"inner", GreaterEq, small, a0, a1}, Inequality{"outer", LessEq, big, b0, b1}};
      break;
    }
    case ConeTheorem::PositiveSolutionTeo2: {
      const double c1 = L / (2 * T * M * M), c2 = 1 / (2 * T * L);
      const double a0 = M / L * r, a1 = r, b0 = R, b1 = L / M * R;
      h.sign_condition = {"sign", LessEq, 0.0, a0, b1};
      h.branches[0] = {Inequality{"inner", LessEq, c1, a0, a1}, Inequality{"outer", GreaterEq, c2, b0, b1}};
      h.branches[1] = {Inequality{"inner", GreaterEq, c2, a0, a1}, Inequality{"outer", LessEq, c1, b0, b1}};
      break;
    }
    case ConeTheorem::NegativeSolutionCor2: {
      const double c1 = L / (2 * T * M * M), c2 = 1 / (2 * T * L);
      const double a0 = -r, a1 = -M / L * r, b0 = -L / M * R, b1 = -R;
      h.sign_condition = {"sign", GreaterEq, 0.0, b0, a1};
      h.branches[0] = {Inequality{"inner", GreaterEq, c1, a0, a1}, Inequality{"outer", LessEq, c2, b0, b1}};
      h.branches[1] = {Inequality{"inner", LessEq, c2, a0, a1}, Inequality{"outer", GreaterEq, c1, b0, b1}};
      break;
    }
    case ConeTheorem::EasyCorollary:
      throw Error(ErrorCode::InvalidArgument, "the limit corollary has no interval system");
  }
  return h;
}

/// Samples the hypotheses of one result for one nonlinearity. Violations found
/// at any density are remembered and re-checked first on later calls, so a
/// denser lattice can never turn a violation back into a pass.
class HypothesisChecker {
 public:
  HypothesisChecker(ConeNonlinearity f, ConeTheorem theorem) : f_(std::move(f)), theorem_(theorem) {
    if (!f_) throw Error(ErrorCode::InvalidArgument, "nonlinearity is empty");
    if (theorem_ == ConeTheorem::EasyCorollary)
      throw Error(ErrorCode::InvalidArgument, "use check_asymptotic_corollary for the limit corollary");
  }

  ExistenceReport check(const ConeBounds& b, int density = 41) {
    if (density < 2) throw Error(ErrorCode::InvalidArgument, "sample density must be >= 2");
    if (!theorem_window_ok(theorem_, b.m, b.T))
      throw Error(ErrorCode::BadWindow,
                  std::string("m = ") + std::to_string(b.m) + " outside the window of " + to_string(theorem_));
    const HypothesisSet hs = hypotheses(theorem_, b);
    ExistenceReport rep;
    rep.theorem = theorem_;
    rep.bounds = b;
    rep.sample_density = density;
    rep.sign_condition = sample(hs.sign_condition, b, density);
    for (int k = 0; k < 2; ++k) {
      BranchResult& br = rep.branches[static_cast<std::size_t>(k)];
      br.branch = k + 1;
      br.holds = true;
      for (const auto& ineq : hs.branches[static_cast<std::size_t>(k)]) {
        br.inequalities.push_back(sample(ineq, b, density));
        br.holds = br.holds && br.inequalities.back().holds;
      }
    }
    const auto& b1 = rep.branches[0];
    const auto& b2 = rep.branches[1];
    rep.branch_held = b1.holds ? 1 : (b2.holds ? 2 : 0);
    rep.hypotheses_hold = rep.sign_condition.holds && rep.branch_held != 0;

    auto branch_margin = [](const BranchResult& br) {
      double mm = std::numeric_limits<double>::infinity();
      const InequalityResult* worst = nullptr;
      for (const auto& ir : br.inequalities)
        if (ir.min_margin < mm) {
          mm = ir.min_margin;
          worst = &ir;
        }
      return std::make_pair(mm, worst);
    };
    if (rep.hypotheses_hold) {
      const auto [mm, _] = branch_margin(rep.branches[static_cast<std::size_t>(rep.branch_held - 1)]);
      rep.min_margin = std::min(rep.sign_condition.min_margin, mm);
      rep.zero_margin = std::abs(rep.min_margin) <= kZeroMargin;
    } else if (!rep.sign_condition.holds) {
      rep.min_margin = rep.sign_condition.min_margin;
      rep.violation = rep.sign_condition.worst;
    } else {
      const auto m1 = branch_margin(b1), m2 = branch_margin(b2);
      const auto& pick = m1.first >= m2.first ? m1 : m2;
      rep.min_margin = pick.first;
      rep.violation = pick.second->worst;
    }
    return rep;
  }

  const std::vector<Witness>& cached_violations() const noexcept { return cache_; }

  static constexpr double kZeroMargin = 1e-12;

 private:
  double margin(const Inequality& ineq, double m, double t, double x, double y) const {
    const double F = f_(t, x, y) + m * x;
    const double target = ineq.coefficient * x;
    const double d = ineq.rel == Relation::GreaterEq ? F - target : target - F;
    return std::isnan(d) ? -std::numeric_limits<double>::infinity() : d;
  }

  InequalityResult sample(const Inequality& ineq, const ConeBounds& b, int density) {
    InequalityResult res;
    res.inequality = ineq;
    auto consider = [&](double t, double x, double y) {
      const double d = margin(ineq, b.m, t, x, y);
      ++res.samples;
      if (d < res.min_margin) res.min_margin = d;
      if (d < res.worst.margin || res.samples == 1) res.worst = {t, x, y, d, ineq.name};
    };
    // Earlier violations that still fall inside this inequality's box.
    for (const auto& w : cache_)
      if (w.inequality == ineq.name && w.x >= ineq.lo && w.x <= ineq.hi && w.y >= ineq.lo && w.y <= ineq.hi)
        consider(w.t, w.x, w.y);
    const auto ts = uniform_nodes(b.T, density);
    std::vector<double> xs(static_cast<std::size_t>(density));
    for (int k = 0; k < density; ++k)
      xs[static_cast<std::size_t>(k)] = k + 1 == density ? ineq.hi : ineq.lo + (ineq.hi - ineq.lo) * k / (density - 1);
    for (double t : ts)
      for (double x : xs)
        for (double y : xs) consider(t, x, y);
    res.holds = !(res.min_margin < -kZeroMargin);
    if (!res.holds) cache_.push_back(res.worst);
    return res;
  }

  ConeNonlinearity f_;
  ConeTheorem theorem_;
  std::vector<Witness> cache_;
};

inline ExistenceReport check_positive_existence(const ConeNonlinearity& f, const ConeBounds& b, int density = 41) {
  const ConeTheorem th = b.m > 0 ? ConeTheorem::PositiveSolutionThm : ConeTheorem::PositiveSolutionTeo2;
  if (!theorem_window_ok(th, b.m, b.T))
    throw Error(ErrorCode::BadWindow, "m must lie in (-pi/(4T), 0) or (0, pi/(4T))");
  return HypothesisChecker(f, th).check(b, density);
}

/// `variant` must be NegativeSolutionCor1 (m > 0) or NegativeSolutionCor2 (m < 0).
inline ExistenceReport check_negative_existence(const ConeNonlinearity& f, const ConeBounds& b, ConeTheorem variant,
                                                int density = 41) {
  if (variant != ConeTheorem::NegativeSolutionCor1 && variant != ConeTheorem::NegativeSolutionCor2)
    throw Error(ErrorCode::InvalidArgument, "variant must be one of the negative-solution results");
  return HypothesisChecker(f, variant).check(b, density);
}

struct SweepOptions {
  double lo = 1e-3;
  double hi = 1e3;
  int count = 13;
  int density = 41;
};

/// Log-spaced radii; lattice[i] = lo (hi/lo)^(i/(count-1)).
inline std::vector<double> radius_lattice(const SweepOptions& o) {
  if (o.count < 2 || !(o.lo > 0) || !(o.lo < o.hi)) throw Error(ErrorCode::InvalidArgument, "bad sweep lattice");
  std::vector<double> v(static_cast<std::size_t>(o.count));
  for (int i = 0; i < o.count; ++i)
    v[static_cast<std::size_t>(i)] = o.lo * std::pow(o.hi / o.lo, static_cast<double>(i) / (o.count - 1));
  return v;
}

/// Scans pairs r < R of the lattice in lexicographic order and returns the
/// report of the first pair whose hypotheses hold, or, when none does, the
/// report with the largest (least negative) margin.
inline ExistenceReport sweep_radii(const ConeNonlinearity& f, double m, double T, ConeTheorem theorem,
                                   const SweepOptions& opt = {}) {
  HypothesisChecker checker(f, theorem);
  if (!theorem_window_ok(theorem, m, T))
    throw Error(ErrorCode::BadWindow, std::string("m outside the window of ") + to_string(theorem));
  const auto radii = radius_lattice(opt);
  const ConeBounds base = ConeBounds::make(m, T, radii[0], radii[1]);
  std::optional<ExistenceReport> best;
  long tried = 0;
  for (std::size_t i = 0; i < radii.size(); ++i)
    for (std::size_t j = i + 1; j < radii.size(); ++j) {
      ExistenceReport rep = checker.check(base.with_radii(radii[i], radii[j]), opt.density);
      ++tried;
      if (rep.hypotheses_hold) {
        rep.pairs_tried = tried;
        return rep;
      }
      if (!best || rep.min_margin > best->min_margin) best = std::move(rep);
    }
  best->pairs_tried = tried;
  return *best;
}

// ---------------------------------------------------------------------------
// Limit corollary

enum class Cone { Positive, Negative };

constexpr const char* to_string(Cone c) { return c == Cone::Positive ? "positive" : "negative"; }

enum class LimitTrend { Zero, Infinity, Finite, Undetermined };

constexpr const char* to_string(LimitTrend l) {
  switch (l) {
    case LimitTrend::Zero: return "zero";
    case LimitTrend::Infinity: return "infinity";
    case LimitTrend::Finite: return "finite";
    case LimitTrend::Undetermined: return "undetermined";
  }
  return "unknown";
}

struct ProbeOptions {
  int t_samples = 40;         ///< t at cell midpoints, so t = 0 is never sampled
  int decades = 8;            ///< probes 10^-1 .. 10^-decades and 10^1 .. 10^decades
  double slope_threshold = 0.25;
};

struct AsymptoticReport {
  Cone cone = Cone::Positive;
  double m = 0.0;
  double T = 0.0;
  bool precondition_holds = true;
  std::string precondition_note;
  LimitTrend near_zero = LimitTrend::Undetermined;
  LimitTrend near_infinity = LimitTrend::Undetermined;
  double slope_zero_sup = 0.0;  ///< d log sup_t |f/x| / d log |x| along the small probes
  double slope_zero_inf = 0.0;  ///< same for inf_t |f/x|
  double slope_inf_sup = 0.0;
  double slope_inf_inf = 0.0;
  int condition = 0;  ///< 1, 2, or 0 when inconclusive
  std::string verdict;
};

namespace detail {

inline double loglog_slope(const std::vector<double>& xs, const std::vector<double>& ys) {
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const double n = static_cast<double>(xs.size());
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double a = std::log(xs[i]), b = std::log(ys[i]);
    sx += a;
    sy += b;
    sxx += a * a;
    sxy += a * b;
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

}  // namespace detail

/// Estimates lim f(t,x,x)/x as x -> 0 and as |x| -> infinity, uniformly over
/// the sampled t, from the log-log slope of sup_t and inf_t of |f/x|. For the
/// negative cone the probes are x = y < 0 and magnitudes are compared.
inline AsymptoticReport check_asymptotic_corollary(const ConeNonlinearity& f, double m, double T, Cone cone,
                                                   const ProbeOptions& opt = {}) {
  if (!f) throw Error(ErrorCode::InvalidArgument, "nonlinearity is empty");
  if (opt.t_samples < 1 || opt.decades < 2) throw Error(ErrorCode::InvalidArgument, "bad probe options");
  const ConeTheorem th = cone == Cone::Positive ? ConeTheorem::EasyCorollary : ConeTheorem::NegativeSolutionCor1;
  if (!theorem_window_ok(th, m, T)) throw Error(ErrorCode::BadWindow, "m must lie in (0, pi/(4T))");

  AsymptoticReport rep;
  rep.cone = cone;
  rep.m = m;
  rep.T = T;
  const double sgn = cone == Cone::Positive ? 1.0 : -1.0;
  std::vector<double> ts(static_cast<std::size_t>(opt.t_samples));
  for (int i = 0; i < opt.t_samples; ++i)
    ts[static_cast<std::size_t>(i)] = -T + 2.0 * T * (i + 0.5) / opt.t_samples;

  int ratio_sign = 0;
  auto probe = [&](int direction, double& slope_sup, double& slope_inf) {
    std::vector<double> mags, sups, infs;
    bool sup_zero = true, inf_positive = true;
    for (int d = 1; d <= opt.decades; ++d) {
      const double mag = std::pow(10.0, direction * d);
      const double x = sgn * mag;
      double sup = 0.0, inf = std::numeric_limits<double>::infinity();
      for (double t : ts) {
        const double v = f(t, x, x);
        const double ratio = v / x;
        if (cone == Cone::Positive && v < 0) {
          rep.precondition_holds = false;
          rep.precondition_note = "f < 0 at a positive probe";
        }
        const int s = ratio > 0 ? 1 : (ratio < 0 ? -1 : 0);
        if (s != 0) {
          if (ratio_sign != 0 && s != ratio_sign) {
            rep.precondition_holds = false;
            rep.precondition_note = "f/x changes sign";
          }
          ratio_sign = s;
        }
        sup = std::max(sup, std::abs(ratio));
        inf = std::min(inf, std::abs(ratio));
      }
      mags.push_back(mag);
      sups.push_back(sup);
      infs.push_back(inf);
      sup_zero = sup_zero && sup == 0.0;
      inf_positive = inf_positive && inf > 0.0;
    }
    // A sup that is identically zero tends to zero; logs need positive values.
    if (sup_zero) {
      slope_sup = std::numeric_limits<double>::infinity() * direction;
      slope_inf = slope_sup;
      return LimitTrend::Zero;
    }
    const bool sup_positive = std::all_of(sups.begin(), sups.end(), [](double v) { return v > 0; });
    slope_sup = sup_positive ? detail::loglog_slope(mags, sups) : std::numeric_limits<double>::quiet_NaN();
    slope_inf = inf_positive ? detail::loglog_slope(mags, infs) : std::numeric_limits<double>::quiet_NaN();
    // Near zero (direction -1) growth of |f/x| means a negative slope in |x|.
    const double th = opt.slope_threshold;
    const bool to_zero = sup_positive && direction * slope_sup <= -th;
    const bool to_inf = inf_positive && direction * slope_inf >= th;
    if (to_zero) return LimitTrend::Zero;
    if (to_inf) return LimitTrend::Infinity;
    if (sup_positive && inf_positive && std::abs(slope_sup) < th && std::abs(slope_inf) < th) return LimitTrend::Finite;
    return LimitTrend::Undetermined;
  };
  rep.near_zero = probe(-1, rep.slope_zero_sup, rep.slope_zero_inf);
  rep.near_infinity = probe(1, rep.slope_inf_sup, rep.slope_inf_inf);

  if (rep.precondition_holds) {
    if (rep.near_zero == LimitTrend::Infinity && rep.near_infinity == LimitTrend::Zero) rep.condition = 1;
    if (rep.near_zero == LimitTrend::Zero && rep.near_infinity == LimitTrend::Infinity) rep.condition = 2;
  }
  if (rep.condition == 0) {
    rep.verdict = "inconclusive";
  } else {
    rep.verdict = std::string(cone == Cone::Positive ? "positive" : "negative") + " solution (condition " +
                  std::to_string(rep.condition) + " on samples)";
  }
  return rep;
}

// ---------------------------------------------------------------------------
// The fixed-point operator

/// A x on the grid of x, by the same split quadrature as the linear solver.
inline GridFunction fixed_point_operator(const ConeNonlinearity& f, double m, double T, const GridFunction& x,
                                         int n_quad = 0) {
  if (!f) throw Error(ErrorCode::InvalidArgument, "nonlinearity is empty");
  if (std::abs(x.T() - T) > 1e-12 * T) throw Error(ErrorCode::GridMismatch, "grid half-length differs from T");
  const auto p = ProblemParams::make(m, T);
  const ReflectionProblem problem{p, [&](double s) { return f(s, x(-s), x(s)) + m * x(-s); }, 0.0};
  return solve(problem, n_quad == 0 ? x.n() : n_quad, x.n());
}

}  // namespace reflect
