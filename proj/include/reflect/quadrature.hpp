#pragma once

#include "reflect/error.hpp"
#include "reflect/kernel.hpp"

namespace reflect {

/// Closed Newton-Cotes integration of g over [a, b] with `panels` equal panels:
/// composite Simpson for an even count, Simpson followed by a 3/8 tail for an
/// odd count, Simpson on the midpoint for a single panel. g is called as g(s, side); the end
/// points are requested as one-sided values from inside the interval so that
/// integrands with a jump at either end are handled correctly.
template <class F>
double newton_cotes(F&& g, double a, double b, int panels) {
  if (panels < 1) throw Error(ErrorCode::InvalidArgument, "need at least one panel");
  const double h = (b - a) / panels;
  auto node = [&](int j) { return j == panels ? b : a + h * j; };
  auto value = [&](int j) {
    const Side side = j == 0 ? Side::Above : (j == panels ? Side::Below : Side::Exact);
    return g(node(j), side);
  };
  if (panels == 1) return h / 6.0 * (value(0) + 4.0 * g(a + 0.5 * h, Side::Exact) + value(1));

  const int simpson_panels = panels % 2 == 0 ? panels : panels - 3;
  double sum = 0.0;
  if (simpson_panels > 0) {
    double acc = value(0) + value(simpson_panels);
    for (int j = 1; j < simpson_panels; ++j) acc += (j % 2 == 1 ? 4.0 : 2.0) * value(j);
    sum += acc * h / 3.0;
  }
  if (simpson_panels != panels) {
    const int j = simpson_panels;
    sum += 3.0 * h / 8.0 * (value(j) + 3.0 * value(j + 1) + 3.0 * value(j + 2) + value(j + 3));
  }
  return sum;
}

}  // namespace reflect
