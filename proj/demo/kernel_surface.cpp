// Prints Gbar for m = 0.5, T = 1 on a coarse grid and the sign summary for a
// few values of alpha = mT.

#include <cstdio>

#include "reflect/reflect.hpp"

int main() {
  using namespace reflect;
  const auto k = Kernel::make(0.5, 1.0);
  const auto nodes = uniform_nodes(1.0, 9);
  std::printf("Gbar(t, s) for m = 0.5, T = 1 (rows t, columns s)\n       ");
  for (double s : nodes) std::printf("%8.2f", s);
  std::printf("\n");
  for (double t : nodes) {
    std::printf("%7.2f", t);
    for (double s : nodes) std::printf("%8.4f", k.Gbar(t, s));
    std::printf("\n");
  }

  std::printf("\nalpha    class                 grid min      grid max\n");
  for (double alpha : {0.3, kPi / 4, 1.0, 2.5, -0.3, -kPi / 4}) {
    const auto r = classify_sign(ProblemParams::make(alpha, 1.0), 101);
    std::printf("%7.4f  %-20s %12.4e  %12.4e\n", alpha, to_string(r.classification), r.grid_min, r.grid_max);
  }

  const auto b = kernel_bounds(ProblemParams::make(0.5, 1.0), 201, 3);
  std::printf("\nbounds for m = 0.5: M = %.12f, L = %.12f\n", b.M, b.L);
}
