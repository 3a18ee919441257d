#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <sstream>

#include "reflect/grid.hpp"
#include "reflect/quadrature.hpp"

using namespace reflect;

TEST(GridFunction, NodesAreExactAndSymmetric) {
  const auto u = GridFunction::sample(2.5, 10, [](double t) { return t; });
  EXPECT_EQ(u.n(), 10);
  EXPECT_EQ(u.node(0), -2.5);
  EXPECT_EQ(u.node(10), 2.5);
  EXPECT_EQ(u.node(5), 0.0);
  for (int i = 0; i <= 10; ++i) EXPECT_EQ(u.node(i), -u.node(10 - i));
  EXPECT_DOUBLE_EQ(u.step(), 0.5);
  EXPECT_EQ(u.reflected(2), u[8]);
}

TEST(GridFunction, RejectsOddOrTinyGrids) {
  EXPECT_THROW(GridFunction(1.0, std::vector<double>{1, 2}), Error);
  EXPECT_THROW(GridFunction(1.0, std::vector<double>{1, 2, 3, 4}), Error);
  EXPECT_THROW(GridFunction(0.0, std::vector<double>{1, 2, 3}), Error);
  EXPECT_THROW(GridFunction::sample(1.0, 3, [](double) { return 0.0; }), Error);
}

TEST(GridFunction, InterpolationSnapsToNodesAndIsCubic) {
  const auto u = GridFunction::sample(1.0, 20, [](double t) { return t * t * t - 2 * t; });
  EXPECT_EQ(u(u.node(7)), u[7]);
  EXPECT_EQ(u(-u.node(7)), u.reflected(7));
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> d(-1, 1);
  for (int i = 0; i < 200; ++i) {
    const double t = d(rng);
    EXPECT_NEAR(u(t), t * t * t - 2 * t, 1e-13);
  }
  EXPECT_THROW(u(1.1), Error);
}

TEST(GridFunction, PeriodicFlagAndNorms) {
  const auto u = GridFunction::sample(1.0, 8, [](double t) { return std::cos(3 * t); });
  EXPECT_TRUE(u.is_periodic(1e-15));
  const auto v = GridFunction::sample(1.0, 8, [](double t) { return t; });
  EXPECT_FALSE(v.is_periodic(1e-3));
  EXPECT_DOUBLE_EQ(sup_norm(v), 1.0);
  EXPECT_DOUBLE_EQ(sup_distance(v, v), 0.0);
  const auto w = GridFunction::sample(1.0, 10, [](double t) { return t; });
  try {
    sup_distance(v, w);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::GridMismatch);
  }
}

TEST(GridCsv, RoundTripIsBitExact) {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> d(-1e3, 1e3);
  const auto u = GridFunction::sample(0.7, 50, [&](double) { return d(rng) / 3.0; });
  std::stringstream ss;
  write_csv(ss, u);
  const auto v = read_csv(ss);
  ASSERT_EQ(v.n(), u.n());
  EXPECT_EQ(v.T(), u.T());
  for (int i = 0; i <= u.n(); ++i) EXPECT_EQ(v[i], u[i]);
}

TEST(GridCsv, RejectsMalformedInput) {
  std::stringstream bad_header("x,y\n-1,0\n0,0\n1,0\n");
  EXPECT_THROW(read_csv(bad_header), Error);
  std::stringstream bad_row("t,value\n-1,0\n0;0\n1,0\n");
  EXPECT_THROW(read_csv(bad_row), Error);
  std::stringstream not_uniform("t,value\n-1,0\n0.2,0\n1,0\n");
  try {
    read_csv(not_uniform);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::GridMismatch);
  }
}

TEST(FormatDouble, SeventeenDigits) {
  EXPECT_EQ(format_double(0.1), "0.10000000000000001");
  EXPECT_EQ(format_double(1.0), "1");
}

TEST(NewtonCotes, ExactForCubics) {
  auto cubic = [](double s, Side) { return 4 * s * s * s - 3 * s * s + s - 2; };
  auto exact = [](double a, double b) {
    auto F = [](double s) { return s * s * s * s - s * s * s + 0.5 * s * s - 2 * s; };
    return F(b) - F(a);
  };
  for (int panels : {1, 2, 3, 4, 5, 7, 10}) EXPECT_NEAR(newton_cotes(cubic, -0.3, 1.1, panels), exact(-0.3, 1.1), 1e-13);
}

TEST(NewtonCotes, FourthOrderOnSmoothIntegrand) {
  auto g = [](double s, Side) { return std::exp(s) * std::sin(3 * s); };
  const double exact = (std::exp(1.0) * (std::sin(3.0) - 3 * std::cos(3.0)) + 3) / 10.0;
  const double e1 = std::abs(newton_cotes(g, 0, 1, 20) - exact);
  const double e2 = std::abs(newton_cotes(g, 0, 1, 40) - exact);
  EXPECT_GT(std::log2(e1 / e2), 3.8);
  EXPECT_THROW(newton_cotes(g, 0, 1, 0), Error);
}

TEST(NewtonCotes, EndpointsAreOneSided) {
  // A jump at each end: the value from inside the interval is 1, the value
  // from outside is 5.
  auto g = [](double s, Side side) {
    if (s == 0.0) return side == Side::Above ? 1.0 : 5.0;
    if (s == 2.0) return side == Side::Below ? 1.0 : 5.0;
    return 1.0;
  };
  EXPECT_NEAR(newton_cotes(g, 0, 2, 6), 2.0, 1e-15);
  EXPECT_NEAR(newton_cotes(g, 0, 2, 5), 2.0, 1e-15);
  int above = 0, below = 0;
  auto probe = [&](double, Side side) {
    above += side == Side::Above;
    below += side == Side::Below;
    return 0.0;
  };
  newton_cotes(probe, 0, 1, 7);
  EXPECT_GE(above, 1);
  EXPECT_GE(below, 1);
}
