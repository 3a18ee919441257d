#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

#include "reflect/catalog.hpp"
#include "reflect/linsolve.hpp"
#include "reflect/reduce.hpp"

using namespace reflect;

TEST(Involution, ReflectionIsValid) {
  const auto inv = Involution::reflection();
  const std::vector<double> samples{-2, -0.5, 0.1, 1.7};
  const auto c = validate(inv, samples);
  EXPECT_TRUE(c.valid) << c.reason;
  EXPECT_EQ(c.max_defect, 0.0);
  EXPECT_EQ(inv.phi(inv.fixed_point), inv.fixed_point);
}

TEST(Involution, RejectsNonInvolutionsAndIdentity) {
  const std::vector<double> samples{-1, 0.3, 2};
  Involution shift{[](double t) { return -t + 0.1 * t * t; }, [](double t) { return -1 + 0.2 * t; }, 0.0};
  EXPECT_FALSE(validate(shift, samples).valid);
  Involution id{[](double t) { return t; }, [](double) { return 1.0; }, 0.0};
  EXPECT_FALSE(validate(id, samples).valid);
  // t -> 1/t on (0, inf) fixes 1.
  Involution recip{[](double t) { return 1.0 / t; }, [](double t) { return -1.0 / (t * t); }, 1.0};
  const std::vector<double> pos{0.5, 1.5, 3.0};
  EXPECT_TRUE(validate(recip, pos).valid);
}

TEST(SecondOrder, SinhRightHandSide) {
  const auto ode = reduce_second_order(catalog::sinh_diffeomorphism(), Involution::reflection(), 0.5);
  EXPECT_EQ(ode.t0, 0.0);
  EXPECT_EQ(ode.x0, 0.5);
  EXPECT_DOUBLE_EQ(ode.xp0, std::sinh(0.5));
  for (double x : {-1.0, 0.2, 0.9})
    for (double xp : {-2.0, 0.0, 0.4})
      EXPECT_NEAR(ode.rhs(0.3, x, xp), -std::sqrt(1 + xp * xp) * std::sinh(x), 1e-14);
}

TEST(SecondOrder, DomainViolation) {
  // exp has range (0, inf); feeding x' <= 0 to its inverse must be refused.
  Diffeomorphism e{[](double x) { return std::exp(x); }, [](double v) { return std::log(v); },
                   [](double x) { return std::exp(x); }, 0.0, std::numeric_limits<double>::infinity()};
  const auto ode = reduce_second_order(e, Involution::reflection(), 0.0);
  EXPECT_NO_THROW(ode.rhs(0, 0, 1.0));
  try {
    ode.rhs(0, 0, -1.0);
    FAIL();
  } catch (const Error& err) {
    EXPECT_EQ(err.code(), ErrorCode::DomainViolation);
  }
}

TEST(SecondOrder, AgreesWithReflectedSystemForSinh) {
  for (double x0 : {-1.0, -0.3, 0.5, 1.0}) {
    const auto ode = reduce_second_order(catalog::sinh_diffeomorphism(), Involution::reflection(), x0);
    const auto second = integrate_second_order_symmetric(ode, 0.5, 1000);
    NonlinearProblem p{catalog::sinh_reflection(), 0.5, BoundaryMode::InitialValue, x0};
    const auto first = solve_initial_value(p, 1000);
    double d = 0;
    for (std::size_t i = 0; i < second.size(); ++i) d = std::max(d, std::abs(second[i] - first.x[i]));
    EXPECT_LE(d, 1e-6) << x0;
    // x(0) = x0 and the reflection y(t) = x(-t) is preserved.
    EXPECT_EQ(first.x[500], x0);
    EXPECT_TRUE(filter_reflection_solution(first, 1e-9, BoundaryMode::InitialValue).genuine);
  }
}

TEST(SecondOrder, ZeroIsAFixedPoint) {
  const auto ode = reduce_second_order(catalog::sinh_diffeomorphism(), Involution::reflection(), 0.0);
  for (double v : integrate_second_order_symmetric(ode, 0.5, 100)) EXPECT_EQ(v, 0.0);
  NonlinearProblem p{catalog::sinh_reflection(), 0.5, BoundaryMode::InitialValue, 0.0};
  for (double v : solve_initial_value(p, 100).x) EXPECT_EQ(v, 0.0);
}

TEST(Rk4, ExponentialAndOrder) {
  auto rhs = [](double, const State<1>& x) { return State<1>{x[0]}; };
  const auto tr = integrate_rk4<1>(rhs, 0.0, 1.0, {1.0}, 1000);
  EXPECT_NEAR(tr.x.back()[0], std::exp(1.0), 1e-9);
  EXPECT_EQ(tr.t.back(), 1.0);
  EXPECT_EQ(tr.t.size(), 1001u);
  const double e1 = std::abs(integrate_rk4<1>(rhs, 0.0, 1.0, {1.0}, 10).x.back()[0] - std::exp(1.0));
  const double e2 = std::abs(integrate_rk4<1>(rhs, 0.0, 1.0, {1.0}, 20).x.back()[0] - std::exp(1.0));
  EXPECT_NEAR(e1 / e2, 16.0, 1.5);
}

TEST(Rk4, BlowUpIsReported) {
  auto rhs = [](double, const State<1>& x) { return State<1>{x[0] * x[0]}; };
  try {
    integrate_rk4<1>(rhs, 0.0, 2.0, {1.0}, 200);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::NonFinite);
  }
  EXPECT_THROW(integrate_rk4<1>(rhs, 0.0, 1.0, {1.0}, 0), Error);
}

TEST(System, EexFamilyIsReproduced) {
  const double c = 1.0, T = 1.0;
  const auto sys = reduce_system({catalog::e_ex(), T});
  const auto s0 = catalog::e_ex_family(c, -T);
  const auto sol = integrate_from_left(sys, {s0.y, s0.x}, 2000);
  for (int i = 0; i <= sol.n(); ++i) {
    const auto ex = catalog::e_ex_family(c, sol.t[static_cast<std::size_t>(i)]);
    EXPECT_NEAR(sol.x[static_cast<std::size_t>(i)], ex.x, 1e-8);
    EXPECT_NEAR(sol.y[static_cast<std::size_t>(i)], ex.y, 1e-8);
  }
  // x + y = c along the family.
  EXPECT_NEAR(sol.x[1000] + sol.y[1000], c, 1e-12);
}

TEST(System, RightHandSideAndEvenOddForm) {
  const auto sys = reduce_system({[](double t, double y, double x) { return t + 2 * y - x * x; }, 1.0});
  const State<2> yx{0.3, -0.8};
  const auto d = sys(0.4, yx);
  EXPECT_DOUBLE_EQ(d[1], 0.4 + 2 * 0.3 - 0.64);
  EXPECT_DOUBLE_EQ(d[0], -(-0.4 + 2 * -0.8 - 0.09));
  const auto zw = xi_inverse(0.4, yx[0], yx[1]);
  const auto dzw = sys.even_odd(0.4, {zw[1], zw[2]});
  EXPECT_NEAR(dzw[0], 0.5 * (d[1] + d[0]), 1e-15);
  EXPECT_NEAR(dzw[1], 0.5 * (d[1] - d[0]), 1e-15);
}

TEST(System, XiRoundTrip) {
  for (double t : {-1.0, 0.25})
    for (double z : {-3.0, 0.1, 7.5})
      for (double w : {-0.2, 2.0}) {
        const auto p = xi(t, z, w);
        const auto q = xi_inverse(p[0], p[1], p[2]);
        EXPECT_EQ(q[0], t);
        EXPECT_NEAR(q[1], z, 1e-15 * (1 + std::abs(z)));
        EXPECT_NEAR(q[2], w, 1e-15 * (1 + std::abs(z) + std::abs(w)));
      }
}

TEST(System, DecoupledCase) {
  // f independent of y: x' = -x, and y(t) = x(-t) comes out of the system.
  NonlinearProblem p{[](double, double, double x) { return -x; }, 1.0, BoundaryMode::InitialValue, 2.0};
  const auto sol = solve_initial_value(p, 200);
  for (int i = 0; i <= 200; ++i) {
    const double t = sol.t[static_cast<std::size_t>(i)];
    EXPECT_NEAR(sol.x[static_cast<std::size_t>(i)], 2 * std::exp(-t), 1e-9);
    EXPECT_NEAR(sol.y[static_cast<std::size_t>(i)], 2 * std::exp(t), 1e-9);
  }
  EXPECT_LE(even_odd_defect(sol), 1e-12);
}

TEST(Shoot, EexConvergesToZero) {
  NonlinearProblem p{catalog::e_ex(), 1.0};
  for (auto g : {State<2>{0.1, 0.1}, State<2>{-0.05, 0.08}, State<2>{0.02, -0.03}}) {
    const auto r = shoot_periodic(p, g);
    EXPECT_LE(r.defect_norm, 1e-10);
    const auto v = filter_reflection_solution(r.solution, 1e-4);
    EXPECT_TRUE(v.genuine);
    for (double x : r.solution.x) EXPECT_NEAR(x, 0.0, 1e-4);
    EXPECT_GE(r.trace.size(), 2u);
  }
}

TEST(Shoot, SystemOnlyResidualLandsOnSpuriousMember) {
  NonlinearProblem p{catalog::e_ex(), 1.0};
  ShootOptions o;
  o.constraint = ShootingConstraint::SystemOnly;
  const auto r = shoot_periodic(p, {0.1, 0.1}, o);
  const auto v = filter_reflection_solution(r.solution, 1e-6);
  EXPECT_FALSE(v.genuine);
  EXPECT_GT(v.boundary_defect, 1e-3);
  // It is a member of the closed-form family with c = x + y.
  const double c = r.solution.x[0] + r.solution.y[0];
  EXPECT_NEAR(r.solution.x[1000], catalog::e_ex_family(c, 0.0).x, 1e-8);
}

TEST(Shoot, DegenerateZeroField) {
  NonlinearProblem p{[](double, double, double) { return 0.0; }, 1.0};
  const auto r = shoot_periodic(p, {0.2, 0.6});
  // Newton stops once the defect is below 1e-10.
  EXPECT_NEAR(r.solution.x[0], 0.4, 1e-9);
  EXPECT_NEAR(r.solution.y[0], 0.4, 1e-9);
  ShootOptions o;
  o.constraint = ShootingConstraint::SystemOnly;
  const auto s = shoot_periodic(p, {0.2, 0.6}, o);
  EXPECT_NEAR(s.solution.x[0], 0.4, 1e-9);
  EXPECT_TRUE(filter_reflection_solution(s.solution, 1e-9).genuine);
}

TEST(Shoot, LinearProblemMatchesGreenSolution) {
  const double m = 0.5, T = 1.0;
  for (auto h : {Forcing([](double) { return 1.0; }), Forcing([](double t) { return std::cos(2 * t) + t; })}) {
    NonlinearProblem p{catalog::linear(h, m), T};
    const auto r = shoot_periodic(p, {0.0, 0.0});
    const auto u = solve(ReflectionProblem{ProblemParams::make(m, T), h, 0.0}, 2000);
    double d = 0;
    for (int i = 0; i <= 2000; ++i) d = std::max(d, std::abs(u[i] - r.solution.x[static_cast<std::size_t>(i)]));
    EXPECT_LE(d, 1e-5);
    EXPECT_TRUE(filter_reflection_solution(r.solution, 1e-6).genuine);
    EXPECT_LE(even_odd_defect(r.solution), 1e-6);
  }
}

TEST(Shoot, Errors) {
  NonlinearProblem ivp{catalog::e_ex(), 1.0, BoundaryMode::InitialValue, 0.0};
  EXPECT_THROW(shoot_periodic(ivp, {0, 0}), Error);
  // x' = 1 has no periodic solution.
  NonlinearProblem none{[](double, double, double) { return 1.0; }, 1.0};
  ShootOptions o;
  o.max_newton = 5;
  try {
    shoot_periodic(none, {0, 0}, o);
    FAIL();
  } catch (const Error& e) {
    EXPECT_TRUE(e.code() == ErrorCode::NoConvergence || e.code() == ErrorCode::SingularJacobian);
  }
}

TEST(Filter, FamilyMemberIsSpurious) {
  const double c = 1.0, T = 1.0;
  const auto sys = reduce_system({catalog::e_ex(), T});
  const auto s0 = catalog::e_ex_family(c, -T);
  const auto sol = integrate_from_left(sys, {s0.y, s0.x}, 2000);
  const auto v = filter_reflection_solution(sol, 1e-6);
  EXPECT_FALSE(v.genuine);
  const double analytic = std::abs(std::exp(1.0) / (std::exp(1.0) + 1) - std::exp(-1.0) / (std::exp(-1.0) + 1));
  EXPECT_NEAR(analytic, std::tanh(0.5), 1e-15);
  EXPECT_NEAR(v.boundary_defect, analytic, 1e-8);
  EXPECT_NEAR(v.boundary_defect, 0.462117157260010, 1e-8);
}

TEST(Filter, LiftedLinearSolutionIsGenuine) {
  const auto u = solve(ReflectionProblem{ProblemParams::make(0.7, 1.0), [](double t) { return std::exp(t); }, 0.0}, 200);
  SystemSolution s;
  s.T = 1.0;
  s.t = u.nodes();
  s.x = u.values();
  for (int i = 0; i <= u.n(); ++i) s.y.push_back(u.reflected(i));
  EXPECT_TRUE(filter_reflection_solution(s, 1e-9).genuine);
  EXPECT_LE(even_odd_defect(s), 1e-12);
}

TEST(TrajectoryCsv, HeaderAndRows) {
  NonlinearProblem p{catalog::sinh_reflection(), 0.5, BoundaryMode::InitialValue, 0.5};
  const auto sol = solve_initial_value(p, 10);
  std::stringstream ss;
  write_trajectory_csv(ss, sol);
  std::string line;
  std::getline(ss, line);
  EXPECT_EQ(line, "t,y,x,z,w");
  int rows = 0;
  while (std::getline(ss, line)) ++rows;
  EXPECT_EQ(rows, 11);
}
