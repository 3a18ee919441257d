// Solutions of x' + m x(-t) = 1 + 0.5 cos 3t for increasing m inside the
// positive window decrease pointwise.

#include <cmath>
#include <cstdio>
#include <vector>

#include "reflect/reflect.hpp"

int main() {
  using namespace reflect;
  const double T = 1.0;
  const Forcing h = [](double t) { return 1.0 + 0.5 * std::cos(3 * t); };
  const std::vector<double> ms{0.1, 0.3, 0.5, kPi / 4};
  std::vector<GridFunction> u;
  for (double m : ms) u.push_back(solve({ProblemParams::make(m, T), h, 0.0}, 200));

  std::printf("     t");
  for (double m : ms) std::printf("   m=%-7.4f", m);
  std::printf("\n");
  for (int i = 0; i <= 200; i += 25) {
    std::printf("%6.2f", u[0].node(i));
    for (const auto& v : u) std::printf("  %10.6f", v[i]);
    std::printf("\n");
  }

  for (std::size_t j = 0; j + 1 < ms.size(); ++j) {
    const auto r = compare(ms[j], ms[j + 1], T, h, 200, 101);
    std::printf("m1 = %.4f, m2 = %.4f: solutions ordered %s (min gap %.3e), kernels ordered %s (min gap %.3e)\n",
                ms[j], ms[j + 1], r.solutions_ordered ? "yes" : "no", r.min_solution_gap.value,
                r.kernels_ordered ? "yes" : "no", r.min_kernel_gap.value);
  }
}
