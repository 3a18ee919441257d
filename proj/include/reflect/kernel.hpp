#pragma once

/**
 * @file kernel.hpp
 * @brief Green's functions of the periodic problem with reflection.
 *
 * Two kernels live here:
 *
 *   G(t,s)    Green's function of x'' + m^2 x = f with periodic conditions
 *             on I = [-T, T]:
 *               2 m sin(mT) G(t,s) = cos m(T+s-t)   s <= t
 *                                    cos m(T-s+t)   s >  t
 *
 *   Gbar(t,s) Green's function of x'(t) + m x(-t) = h(t), x(T) = x(-T),
 *             Gbar(t,s) = m G(t,-s) - dG/ds(t,s). In closed form, with the
 *             plane split into four wedges by the two diagonals,
 *
 *               2 sin(mT) Gbar = cos m(T-s-t) + sin m(T+s-t)   right  (t >= |s|, s != t)
 *                                cos m(T-s-t) - sin m(T-s+t)   top    (s >= |t|, s != t)
 *                                cos m(T+s+t) + sin m(T+s-t)   bottom (s < -|t|)
 *                                cos m(T+s+t) - sin m(T-s+t)   left   (t < -|s|)
 *
 * Gbar jumps by -1 when s crosses t upwards and is continuous elsewhere.
 * On the diagonal the value is the one-sided limit s -> t+ for m > 0 and
 * s -> t- for m < 0; corners follow by continuity along the diagonal.
 *
 * The kernel is non-resonant only when alpha = mT is not an integer
 * multiple of pi; construction refuses resonant parameters.
 */

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>
#include <string>
#include <utility>
#include <vector>

#include "reflect/error.hpp"

namespace reflect {

inline constexpr double kPi = std::numbers::pi;

/// Default absolute tolerance on |alpha - k pi| below which a kernel is refused.
inline constexpr double kResonanceTol = 1e-9;

/// Tolerance used to decide that |alpha| sits exactly on the pi/4 sign threshold.
inline constexpr double kSignWindowTol = 1e-12;

class ProblemParams {
 public:
  static ProblemParams make(double m, double T) {
    if (!std::isfinite(m) || !std::isfinite(T))
      throw Error(ErrorCode::InvalidArgument, "m and T must be finite");
    if (m == 0.0) throw Error(ErrorCode::InvalidArgument, "m must be non-zero");
    if (!(T > 0.0)) throw Error(ErrorCode::InvalidArgument, "T must be strictly positive");
    return ProblemParams(m, T);
  }

  double m() const noexcept { return m_; }
  double T() const noexcept { return T_; }
  double alpha() const noexcept { return alpha_; }

  /// pi / (4T): edge of the window where the reflection operator keeps its sign.
  double sign_window() const noexcept { return kPi / (4.0 * T_); }

  bool contains(double t) const noexcept { return std::abs(t) <= T_ * (1.0 + 1e-12); }

 private:
  ProblemParams(double m, double T) : m_(m), T_(T), alpha_(m * T) {}
  double m_;
  double T_;
  double alpha_;
};

struct Resonance {
  bool resonant = false;
  std::int64_t k = 0;      // nearest non-negative integer to |alpha| / pi
  double distance = 0.0;   // | |alpha| - k pi |
};

inline Resonance check_resonance(const ProblemParams& p, double tol = kResonanceTol) {
  const double a = std::abs(p.alpha());
  const double k = std::round(a / kPi);
  const double dist = std::abs(a - k * kPi);
  return Resonance{dist <= tol, static_cast<std::int64_t>(k), dist};
}

/// Direction from which s approaches the evaluation point.
enum class Side { Exact, Below, Above };

enum class DiagonalConvention { LimitFromAbove, LimitFromBelow };

/// Wedges of I^2 cut out by the diagonal and the anti-diagonal.
enum class Region { Right, Top, Bottom, Left };

class Kernel {
 public:
  static Kernel make(const ProblemParams& p, double tol_res = kResonanceTol) {
    const Resonance r = check_resonance(p, tol_res);
    if (r.resonant)
      throw Error(ErrorCode::ResonantKernel,
                  "alpha = mT = " + std::to_string(p.alpha()) + " is within " +
                      std::to_string(tol_res) + " of " + std::to_string(r.k) + "*pi");
    return Kernel(p);
  }

  static Kernel make(double m, double T, double tol_res = kResonanceTol) {
    return make(ProblemParams::make(m, T), tol_res);
  }

  const ProblemParams& params() const noexcept { return p_; }
  double m() const noexcept { return p_.m(); }
  double T() const noexcept { return p_.T(); }
  double alpha() const noexcept { return p_.alpha(); }

  DiagonalConvention diagonal_convention() const noexcept {
    return p_.m() > 0 ? DiagonalConvention::LimitFromAbove : DiagonalConvention::LimitFromBelow;
  }

  /// Hill Green's function (continuous on I^2).
  double G(double t, double s) const {
    check_domain(t, s);
    const double m = p_.m(), T = p_.T();
    const double num = s <= t ? std::cos(m * (T + s - t)) : std::cos(m * (T - s + t));
    return num / (2.0 * m * sin_alpha_);
  }

  /// Wedge used to evaluate Gbar at (t, s) approached from `side`.
  Region region(double t, double s, Side side = Side::Exact) const noexcept {
    if (side == Side::Exact && s == t)
      side = p_.m() > 0 ? Side::Above : Side::Below;
    bool below_diag, above_anti;
    if (side == Side::Below) {
      below_diag = s <= t;
      above_anti = s > -t;
    } else {
      below_diag = s < t;
      above_anti = s >= -t;
    }
    if (below_diag) return above_anti ? Region::Right : Region::Bottom;
    return above_anti ? Region::Top : Region::Left;
  }

  /// Reflection Green's function from the four-branch trigonometric form.
  double Gbar(double t, double s, Side side = Side::Exact) const {
    check_domain(t, s);
    const double m = p_.m(), T = p_.T();
    double num = 0.0;
    switch (region(t, s, side)) {
      case Region::Right: num = std::cos(m * (T - s - t)) + std::sin(m * (T + s - t)); break;
      case Region::Top: num = std::cos(m * (T - s - t)) - std::sin(m * (T - s + t)); break;
      case Region::Bottom: num = std::cos(m * (T + s + t)) + std::sin(m * (T + s - t)); break;
      case Region::Left: num = std::cos(m * (T + s + t)) - std::sin(m * (T - s + t)); break;
    }
    return num / (2.0 * sin_alpha_);
  }

  /// Same kernel through the product form in rescaled variables z = t/T, y = s/T,
  /// using cos(a-b) +- sin(a+b) = (cos a +- sin a)(cos b +- sin b).
  double Gbar_factorized(double t, double s, Side side = Side::Exact) const {
    check_domain(t, s);
    const double a = p_.alpha();
    const double z = t / p_.T(), y = s / p_.T();
    auto cps = [a](double u) { return std::cos(a * u) + std::sin(a * u); };
    auto cms = [a](double u) { return std::cos(a * u) - std::sin(a * u); };
    double num = 0.0;
    switch (region(t, s, side)) {
      case Region::Right: num = cps(1.0 - z) * cps(y); break;
      case Region::Top: num = cms(z) * cps(y - 1.0); break;
      case Region::Bottom: num = cps(1.0 + y) * cms(z); break;
      case Region::Left: num = cps(y) * cms(z + 1.0); break;
    }
    return num / (2.0 * sin_alpha_);
  }

  /// dGbar/dt(t,s) = -m Gbar(-t,s), valid off both diagonals.
  double Gbar_dt(double t, double s) const {
    check_domain(t, s);
    const double eps = 1e-12 * p_.T();
    if (std::abs(std::abs(t) - std::abs(s)) <= eps)
      throw Error(ErrorCode::OnDiagonal, "dGbar/dt undefined where |t| = |s|");
    return -p_.m() * Gbar(-t, s);
  }

 private:
  explicit Kernel(const ProblemParams& p) : p_(p), sin_alpha_(std::sin(p.alpha())) {}

  void check_domain(double t, double s) const {
    if (!p_.contains(t) || !p_.contains(s))
      throw Error(ErrorCode::OutOfDomain, "(t, s) = (" + std::to_string(t) + ", " +
                                              std::to_string(s) + ") outside [-T, T]^2");
  }

  ProblemParams p_;
  double sin_alpha_;
};

/// `count` uniformly spaced points on [-T, T]. Endpoints are exactly +-T,
/// node(count-1-i) == -node(i) bit for bit, and 0 is a node when count is odd.
inline std::vector<double> uniform_nodes(double T, int count) {
  if (count < 2) throw Error(ErrorCode::InvalidArgument, "need at least two nodes");
  std::vector<double> nodes(static_cast<std::size_t>(count));
  const double den = static_cast<double>(count - 1);
  for (int i = 0; i < count; ++i)
    nodes[static_cast<std::size_t>(i)] = T * (static_cast<double>(2 * i - (count - 1)) / den);
  return nodes;
}

/// Gbar_alpha(t,s) + Gbar_{-alpha}(-t,-s); zero when both kernels are consistent.
inline double reflect_negate_residual(const Kernel& k, const Kernel& k_neg, double t, double s) {
  if (k.T() != k_neg.T() || k.m() != -k_neg.m())
    throw Error(ErrorCode::ParameterMismatch, "kernels must share T and have opposite m");
  return k.Gbar(t, s) + k_neg.Gbar(-t, -s);
}

inline double max_reflect_negate_residual(const Kernel& k, const Kernel& k_neg, int grid_n) {
  const auto nodes = uniform_nodes(k.T(), grid_n);
  double worst = 0.0;
  for (double t : nodes)
    for (double s : nodes) worst = std::max(worst, std::abs(reflect_negate_residual(k, k_neg, t, s)));
  return worst;
}

// ---------------------------------------------------------------------------
// Sign classification

enum class SignClass {
  StrictlyPositive,
  StrictlyNegative,
  NonnegVanishingOnP,
  NonposVanishingOnP,
  MixedSign,
  Resonant,
};

constexpr const char* to_string(SignClass c) {
  switch (c) {
    case SignClass::StrictlyPositive: return "StrictlyPositive";
    case SignClass::StrictlyNegative: return "StrictlyNegative";
    case SignClass::NonnegVanishingOnP: return "NonnegVanishingOnP";
    case SignClass::NonposVanishingOnP: return "NonposVanishingOnP";
    case SignClass::MixedSign: return "MixedSign";
    case SignClass::Resonant: return "Resonant";
  }
  return "Unknown";
}

struct PointValue {
  double t = 0.0;
  double s = 0.0;
  double value = 0.0;
};

struct SignReport {
  SignClass classification = SignClass::Resonant;
  double m = 0.0;
  double T = 0.0;
  double alpha = 0.0;
  int grid_n = 0;
  std::int64_t resonance_k = 0;
  double grid_min = 0.0;
  double grid_max = 0.0;
  std::vector<PointValue> witnesses;
  std::vector<PointValue> vanishing_set;
};

/// Points where Gbar vanishes when |alpha| = pi/4. For alpha = pi/4 this is
/// {(-T,-T), (0,0), (T,T), (T,-T)}; for alpha = -pi/4 it is its image under
/// (t,s) -> (-t,-s), which swaps the last corner for (-T,T).
inline std::vector<std::pair<double, double>> vanishing_points(double T, bool positive_alpha) {
  const double c = positive_alpha ? 1.0 : -1.0;
  return {{-T, -T}, {0.0, 0.0}, {T, T}, {c * T, -c * T}};
}

namespace detail {

struct GridExtrema {
  PointValue min{0, 0, std::numeric_limits<double>::infinity()};
  PointValue max{0, 0, -std::numeric_limits<double>::infinity()};
};

template <class Skip>
GridExtrema scan_grid(const Kernel& k, int grid_n, Skip&& skip) {
  GridExtrema e;
  const auto nodes = uniform_nodes(k.T(), grid_n);
  for (double t : nodes) {
    for (double s : nodes) {
      if (skip(t, s)) continue;
      const double v = k.Gbar(t, s);
      if (v < e.min.value) e.min = {t, s, v};
      if (v > e.max.value) e.max = {t, s, v};
    }
  }
  return e;
}

}  // namespace detail

/// Classifies the sign of Gbar from alpha and backs the verdict with grid
/// evidence. Disagreement between the two is an implementation bug.
inline SignReport classify_sign(const ProblemParams& p, int grid_n, double tol_res = kResonanceTol) {
  if (grid_n < 3) throw Error(ErrorCode::InvalidArgument, "grid_n must be >= 3");
  SignReport rep;
  rep.m = p.m();
  rep.T = p.T();
  rep.alpha = p.alpha();
  rep.grid_n = grid_n;

  const Resonance res = check_resonance(p, tol_res);
  rep.resonance_k = res.k;
  if (res.resonant) {
    rep.classification = SignClass::Resonant;
    return rep;
  }

  const Kernel k = Kernel::make(p, tol_res);
  const double a = std::abs(p.alpha());
  const bool pos = p.alpha() > 0;
  const double quarter = kPi / 4.0;

  auto inconsistent = [&](const std::string& why) {
    return Error(ErrorCode::InternalInconsistency,
                 std::string("grid evidence contradicts ") + to_string(rep.classification) + ": " + why);
  };

  if (std::abs(a - quarter) <= kSignWindowTol) {
    rep.classification = pos ? SignClass::NonnegVanishingOnP : SignClass::NonposVanishingOnP;
    const auto zeros = vanishing_points(p.T(), pos);
    for (auto [t, s] : zeros) {
      const double v = k.Gbar(t, s);
      rep.vanishing_set.push_back({t, s, v});
      if (std::abs(v) > 1e-10) throw inconsistent("Gbar(" + std::to_string(t) + "," + std::to_string(s) + ") = " + std::to_string(v));
    }
    auto on_set = [&](double t, double s) {
      return std::any_of(zeros.begin(), zeros.end(), [&](auto z) { return z.first == t && z.second == s; });
    };
    const auto e = detail::scan_grid(k, grid_n, on_set);
    rep.grid_min = e.min.value;
    rep.grid_max = e.max.value;
    if (pos && !(e.min.value > 0)) throw inconsistent("non-positive value off P");
    if (!pos && !(e.max.value < 0)) throw inconsistent("non-negative value off -P");
    rep.witnesses.push_back(pos ? e.min : e.max);
    return rep;
  }

  if (a < quarter) {
    rep.classification = pos ? SignClass::StrictlyPositive : SignClass::StrictlyNegative;
    const auto e = detail::scan_grid(k, grid_n, [](double, double) { return false; });
    rep.grid_min = e.min.value;
    rep.grid_max = e.max.value;
    if (pos && !(e.min.value > 0)) throw inconsistent("grid minimum " + std::to_string(e.min.value));
    if (!pos && !(e.max.value < 0)) throw inconsistent("grid maximum " + std::to_string(e.max.value));
    rep.witnesses.push_back(pos ? e.min : e.max);
    return rep;
  }

  rep.classification = SignClass::MixedSign;
  int n = grid_n;
  for (int round = 0; round <= 6; ++round, n = 2 * n - 1) {
    const auto e = detail::scan_grid(k, n, [](double, double) { return false; });
    if (round == 0) {
      rep.grid_min = e.min.value;
      rep.grid_max = e.max.value;
    }
    if (e.min.value < 0 && e.max.value > 0) {
      rep.grid_min = e.min.value;
      rep.grid_max = e.max.value;
      rep.witnesses = {e.max, e.min};
      return rep;
    }
  }
  throw inconsistent("no sign change found up to grid " + std::to_string(n));
}

// ---------------------------------------------------------------------------
// Extremal values

struct KernelBounds {
  double M = 0.0;  ///< sup of Gbar over I^2, including one-sided diagonal limits
  double L = 0.0;  ///< inf of Gbar over I^2, same convention
  PointValue argmax;
  PointValue argmin;
  Side argmax_side = Side::Exact;
  Side argmin_side = Side::Exact;
};

/// Grid search over grid_n x grid_n points plus both one-sided limits on the
/// diagonal, followed by `refine_iters` rounds of local subdivision around each
/// extremizer.
inline KernelBounds kernel_bounds(const ProblemParams& p, int grid_n, int refine_iters,
                                  double tol_res = kResonanceTol) {
  if (grid_n < 3) throw Error(ErrorCode::InvalidArgument, "grid_n must be >= 3");
  if (refine_iters < 0) throw Error(ErrorCode::InvalidArgument, "refine_iters must be >= 0");
  const Kernel k = Kernel::make(p, tol_res);
  const double T = p.T();

  KernelBounds b;
  b.M = -std::numeric_limits<double>::infinity();
  b.L = std::numeric_limits<double>::infinity();
  auto consider = [&](double t, double s) {
    auto take = [&](Side side) {
      const double v = k.Gbar(t, s, side);
      if (v > b.M) { b.M = v; b.argmax = {t, s, v}; b.argmax_side = side; }
      if (v < b.L) { b.L = v; b.argmin = {t, s, v}; b.argmin_side = side; }
    };
    if (t == s) {
      take(Side::Below);
      take(Side::Above);
    } else {
      take(Side::Exact);
    }
  };

  const auto nodes = uniform_nodes(T, grid_n);
  for (double t : nodes)
    for (double s : nodes) consider(t, s);

  constexpr int kLocal = 21;
  auto refine_around = [&](PointValue centre, double half_width) {
    const double t0 = std::max(-T, centre.t - half_width), t1 = std::min(T, centre.t + half_width);
    const double s0 = std::max(-T, centre.s - half_width), s1 = std::min(T, centre.s + half_width);
    for (int i = 0; i < kLocal; ++i) {
      const double t = t0 + (t1 - t0) * i / (kLocal - 1);
      for (int j = 0; j < kLocal; ++j) consider(t, s0 + (s1 - s0) * j / (kLocal - 1));
      if (t >= s0 && t <= s1) consider(t, t);
    }
  };
  double hw = 2.0 * T / (grid_n - 1);
  for (int it = 0; it < refine_iters; ++it) {
    const PointValue mx = b.argmax, mn = b.argmin;
    refine_around(mx, hw);
    refine_around(mn, hw);
    hw /= 10.0;
  }
  return b;
}

/// Minimum of Gbar_1 - Gbar_2 over a grid; positive when kernel 1 dominates.
inline PointValue min_kernel_gap(const Kernel& k1, const Kernel& k2, int grid_n) {
  if (k1.T() != k2.T()) throw Error(ErrorCode::ParameterMismatch, "kernels must share T");
  const auto nodes = uniform_nodes(k1.T(), grid_n);
  PointValue worst{0, 0, std::numeric_limits<double>::infinity()};
  for (double t : nodes)
    for (double s : nodes) {
      const double gap = k1.Gbar(t, s) - k2.Gbar(t, s);
      if (gap < worst.value) worst = {t, s, gap};
    }
  return worst;
}

}  // namespace reflect
