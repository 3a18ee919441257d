#include <gtest/gtest.h>

#include <cmath>
#include <stdexcept>

#include "reflect/linsolve.hpp"

using namespace reflect;

namespace {

ReflectionProblem make(double m, double T, Forcing h, double lambda = 0.0) {
  return {ProblemParams::make(m, T), std::move(h), lambda};
}

double max_error(const GridFunction& u, const std::function<double(double)>& exact) {
  double e = 0.0;
  for (int i = 0; i <= u.n(); ++i) e = std::max(e, std::abs(u[i] - exact(u.node(i))));
  return e;
}

// Gbar(t,-T) written from the defining combination m G(t,T) - dG/ds(t,-T),
// valid for t > -T.
double oracle_jump(double m, double T, double t) {
  const double Gt = std::cos(m * (T - T + t)) / (2 * m * std::sin(m * T));  // G(t, T), T > t
  const double dGds = -std::sin(m * (T - T - t)) / (2 * std::sin(m * T));   // s = -T <= t
  return m * Gt - dGds;
}

}  // namespace

TEST(Solve, ConstantForcingGivesConstantSolution) {
  const auto u = solve(make(1, 1, [](double) { return 1.0; }), 1000);
  EXPECT_LE(max_error(u, [](double) { return 1.0; }), 1e-8);
  const auto v = solve(make(-0.4, 2, [](double) { return 2.0; }), 200);
  EXPECT_LE(max_error(v, [](double) { return 2.0 / -0.4; }), 1e-8);
}

TEST(Solve, ManufacturedCosine) {
  const auto p = make(1, 1, [](double t) { return std::cos(t) - std::sin(t); });
  const auto u = solve(p, 2000);
  EXPECT_LE(max_error(u, [](double t) { return std::cos(t); }), 1e-6);
  const double m = 2.3, T = 0.9;
  const auto q = make(m, T, [=](double t) { return m * (std::cos(m * t) - std::sin(m * t)); });
  EXPECT_LE(max_error(solve(q, 400), [=](double t) { return std::cos(m * t); }), 1e-6);
}

TEST(Solve, BoundaryJumpTerm) {
  const double m = 1, T = 1;
  const auto u = solve(make(m, T, [](double) { return 0.0; }, 1.0), 100);
  for (int i = 1; i <= u.n(); ++i) EXPECT_NEAR(u[i], oracle_jump(m, T, u.node(i)), 1e-13);
  EXPECT_NEAR(u[0], oracle_jump(m, T, -T + 1e-12), 1e-9);
  EXPECT_NEAR(u[0] - u[u.n()], 1.0, 1e-12);
  EXPECT_LE(residual(make(m, T, [](double) { return 0.0; }, 1.0), u).boundary, 1e-12);
}

TEST(Solve, ArbitraryEvaluationPoints) {
  const auto p = make(1, 1, [](double t) { return std::cos(t) - std::sin(t); });
  const std::vector<double> pts{-1, -0.77, -0.123, 0, 0.5, 0.999, 1};
  const auto v = solve_at(p, 400, pts);
  for (std::size_t i = 0; i < pts.size(); ++i) EXPECT_NEAR(v[i], std::cos(pts[i]), 1e-6);
}

TEST(Solve, FourthOrderQuadrature) {
  const auto p = make(1, 1, [](double t) { return std::cos(t) - std::sin(t); });
  const std::vector<double> pts{-0.9, -0.35, 0.2, 0.65};
  auto err = [&](int nq) {
    const auto v = solve_at(p, nq, pts);
    double e = 0;
    for (std::size_t i = 0; i < pts.size(); ++i) e = std::max(e, std::abs(v[i] - std::cos(pts[i])));
    return e;
  };
  const double e1 = err(20), e2 = err(40), e3 = err(80);
  EXPECT_GE(std::log2(e1 / e2), 3.5);
  EXPECT_GE(std::log2(e2 / e3), 3.5);
}

TEST(Solve, Linearity) {
  const double m = 0.6, T = 1.2;
  Forcing h1 = [](double t) { return std::exp(t); };
  Forcing h2 = [](double t) { return t * t - 0.3; };
  const auto u1 = solve(make(m, T, h1), 200), u2 = solve(make(m, T, h2), 200);
  const auto u = solve(make(m, T, [&](double t) { return 2.5 * h1(t) - 1.5 * h2(t); }), 200);
  for (int i = 0; i <= u.n(); ++i) EXPECT_NEAR(u[i], 2.5 * u1[i] - 1.5 * u2[i], 1e-12);
}

TEST(Solve, SignPropagation) {
  const double T = 1;
  Forcing h = [](double t) { return t > 0.2 ? 1.0 + t : 0.0; };
  for (double m : {0.1, 0.5, kPi / 4}) {
    for (double lambda : {0.0, 0.5}) {
      const auto u = solve(make(m, T, h, lambda), 200);
      for (int i = 0; i <= u.n(); ++i) EXPECT_GT(u[i], 0.0) << m << ' ' << u.node(i);
    }
    const auto v = solve(make(-m, T, h), 200);
    for (int i = 0; i <= v.n(); ++i) EXPECT_LT(v[i], 0.0) << -m << ' ' << v.node(i);
  }
}

TEST(Solve, Errors) {
  try {
    solve(make(kPi, 1, [](double) { return 1.0; }), 100);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::ResonantKernel);
  }
  try {
    solve(make(1, 1, [](double) -> double { throw std::runtime_error("boom"); }), 100);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::QuadratureFailure);
  }
  try {
    solve(make(1, 1, [](double t) { return t > 0.5 ? NAN : 0.0; }), 100);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::QuadratureFailure);
  }
  EXPECT_THROW(solve(make(1, 1, [](double) { return 1.0; }), 6, 10), Error);
  EXPECT_THROW(solve(make(1, 1, [](double) { return 1.0; }), 11, 10), Error);
  const std::vector<double> outside{1.5};
  try {
    solve_at(make(1, 1, [](double) { return 1.0; }), 10, outside);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::OutOfDomain);
  }
}

TEST(RowIntegral, EqualsOneOverM) {
  for (auto [m, T] : {std::pair{0.3, 1.0}, {-0.3, 1.0}, {1.5, 1.0}, {0.5, 2.0}, {2.0, 0.7}}) {
    const auto k = Kernel::make(m, T);
    for (double t : uniform_nodes(T, 11))
      EXPECT_NEAR(kernel_integral(k, t, [](double) { return 1.0; }, 2000), 1.0 / m, 1e-8);
  }
}

TEST(Residual, ExactAndPerturbed) {
  const auto p = make(1, 1, [](double) { return 1.0; });
  const auto exact = GridFunction::constant(1, 1000, 1.0);
  EXPECT_LE(residual(p, exact).total(), 1e-12);
  auto bumped = exact;
  for (int i = 0; i <= bumped.n(); ++i) bumped[i] += 0.1 * bumped.node(i);
  EXPECT_GE(residual(p, bumped).total(), 0.05);

  const auto q = make(1, 1, [](double t) { return std::cos(t) - std::sin(t); });
  EXPECT_LE(residual(q, solve(q, 2000, 1000)).total(), 1e-4);
  try {
    residual(q, GridFunction::constant(2, 10, 0.0));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::GridMismatch);
  }
}

TEST(Residual, SecondOrderInGridStep) {
  const auto q = make(1, 1, [](double t) { return std::cos(t) - std::sin(t); });
  auto r = [&](int n) {
    return residual(q, GridFunction::sample(1, n, [](double t) { return std::cos(t); })).equation;
  };
  const double r1 = r(50), r2 = r(100), r3 = r(200);
  EXPECT_NEAR(std::log2(r1 / r2), 2.0, 0.2);
  EXPECT_NEAR(std::log2(r2 / r3), 2.0, 0.2);
}

TEST(Homogeneous, ClosedForm) {
  EXPECT_EQ(homogeneous_closed_form(1, 1, 0), 1.0);
  // x' + m x(-t) = 0 checked with the analytic derivative and by differences.
  const double m = 1.3, x0 = -0.7;
  for (double t = -2; t <= 2; t += 0.05) {
    const double d = x0 * (-m * std::sin(m * t) - m * std::cos(m * t));
    EXPECT_NEAR(d + m * homogeneous_closed_form(m, x0, -t), 0.0, 1e-12);
    const double fd = (homogeneous_closed_form(m, x0, t + 1e-6) - homogeneous_closed_form(m, x0, t - 1e-6)) / 2e-6;
    EXPECT_NEAR(fd, d, 1e-8);
  }
  const double h = 1e-6;
  const double dx0 = (homogeneous_closed_form(2, 3, h) - homogeneous_closed_form(2, 3, -h)) / (2 * h);
  EXPECT_NEAR(dx0, -6.0, 1e-8);
  // Second-order form x'' + m^2 x = 0.
  const double t = kPi / 8, h2 = 1e-4;
  const double xpp = (homogeneous_closed_form(2, 3, t + h2) - 2 * homogeneous_closed_form(2, 3, t) +
                      homogeneous_closed_form(2, 3, t - h2)) /
                     (h2 * h2);
  EXPECT_NEAR(xpp + 4 * homogeneous_closed_form(2, 3, t), 0.0, 1e-5);
}

TEST(Compare, OrderingInsideWindow) {
  const auto r = compare(0.3, 0.7, 1, [](double) { return 1.0; }, 400, 201);
  EXPECT_TRUE(r.positive_window);
  EXPECT_TRUE(r.solutions_ordered);
  EXPECT_TRUE(r.kernels_ordered);
  EXPECT_GT(r.min_kernel_gap.value, 0);
  const auto n = compare(-0.7, -0.3, 1, [](double) { return 1.0; }, 400, 201);
  EXPECT_TRUE(n.negative_window);
  EXPECT_TRUE(n.solutions_ordered);
  EXPECT_TRUE(n.kernels_ordered);
  EXPECT_THROW(compare(0.7, 0.3, 1, [](double) { return 1.0; }, 100, 21), Error);
}
