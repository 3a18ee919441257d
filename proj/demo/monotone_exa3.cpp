// Monotone iteration for x'(t) = 0.1 sinh(t - x(-t)) on [-1, 1] between the
// constant lower solution 1 and upper solution -1.

#include <cmath>
#include <cstdio>

#include "reflect/reflect.hpp"

int main() {
  using namespace reflect;
  const double T = 1.0, m = kPi / 4;
  const auto pair = LowerUpperPair::make(GridFunction::constant(T, 400, 1.0), GridFunction::constant(T, 400, -1.0),
                                         Ordering::LowerAboveUpper);
  const auto f = catalog::exa3(0.1);
  const auto lip = one_sided_lipschitz_check(f, pair, m);
  std::printf("one-sided Lipschitz condition: %s (min margin %.4e)\n", lip.holds ? "holds" : "fails", lip.min_margin);

  const auto r = iterate(f, pair, m, {0, 200, 1e-10});
  for (std::size_t n = 0; n < r.gaps.size(); n += 10) std::printf("n = %3zu  gap %.3e\n", n, r.gaps[n]);
  std::printf("converged %s at n = %d, final gap %.3e, residual %.3e\n", r.converged ? "yes" : "no", r.converged_at,
              r.final_gap, r.residual);

  const auto& x = r.iterates_lower.back();
  for (int i = 0; i <= x.n(); i += 50) std::printf("x(%+.2f) = %+.10f\n", x.node(i), x[i]);
}
