// reflect: command line front end for the reflection-equation library.
//
// Exit codes: 0 success, 1 invalid input, 2 numerical failure. Errors are
// written to stderr as {"error": {"code": ..., "message": ...}}.

#include <cmath>
#include <fstream>
#include <functional>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "report_json.hpp"
#include "reflect/reflect.hpp"

namespace {

using reflect::Error;
using reflect::ErrorCode;
using reflect::json::Json;

/// Runs `write` against stdout when path is empty or "-", else against the file.
void with_output(const std::string& path, const std::function<void(std::ostream&)>& write) {
  if (path.empty() || path == "-") {
    write(std::cout);
    std::cout.flush();
    return;
  }
  std::ofstream os(path);
  if (!os) throw Error(ErrorCode::InvalidArgument, "cannot open '" + path + "' for writing");
  write(os);
  if (!os) throw Error(ErrorCode::InvalidArgument, "failed writing '" + path + "'");
}

void print_json(const std::string& path, const Json& j) {
  with_output(path, [&](std::ostream& os) { os << j.dump(2) << '\n'; });
}

bool to_stdout(const std::string& path) { return path.empty() || path == "-"; }

/// Writes `report` next to a CSV: to --report if given, otherwise to stdout
/// when the CSV went to a file.
void emit_report(const std::string& csv_path, const std::string& report_path, const Json& report) {
  if (!report_path.empty())
    print_json(report_path, report);
  else if (!to_stdout(csv_path))
    print_json("", report);
}

void require_even(int n, const char* what) {
  if (n < 2 || n % 2 != 0) throw Error(ErrorCode::InvalidArgument, std::string(what) + " must be even and >= 2");
}

// --------------------------------------------------------------------------

struct KernelArgs {
  double m = 0, T = 1;
  int grid = 101;
  std::string which = "Gbar";
  std::string out;
};

void run_kernel(const KernelArgs& a) {
  if (a.grid < 2) throw Error(ErrorCode::InvalidArgument, "--grid must be >= 2");
  const auto k = reflect::Kernel::make(a.m, a.T);
  const auto nodes = reflect::uniform_nodes(a.T, a.grid);
  const bool gbar = a.which == "Gbar";
  with_output(a.out, [&](std::ostream& os) {
    os << "t,s,value\n";
    for (double t : nodes)
      for (double s : nodes)
        os << reflect::format_double(t) << ',' << reflect::format_double(s) << ','
           << reflect::format_double(gbar ? k.Gbar(t, s) : k.G(t, s)) << '\n';
  });
}

struct SignArgs {
  double m = 0, T = 1;
  int grid = 201;
  std::string out;
};

void run_sign(const SignArgs& a) {
  const auto rep = reflect::classify_sign(reflect::ProblemParams::make(a.m, a.T), a.grid);
  print_json(a.out, reflect::json::to_json(rep));
}

struct ResonanceArgs {
  double m = 0, T = 1;
  double tol = reflect::kResonanceTol;
  std::string out;
};

void run_resonance(const ResonanceArgs& a) {
  const auto p = reflect::ProblemParams::make(a.m, a.T);
  const auto r = reflect::check_resonance(p, a.tol);
  Json j;
  j["m"] = p.m();
  j["T"] = p.T();
  j["alpha"] = p.alpha();
  j["verdict"] = r.resonant ? "Resonant" : "NonResonant";
  j["k"] = r.k;
  j["nearest_eigenvalue_m"] = static_cast<double>(r.k) * reflect::kPi / p.T();
  j["distance"] = r.distance;
  j["tol"] = a.tol;
  print_json(a.out, j);
}

struct SolveArgs {
  double m = 0, T = 1, lambda = 0;
  std::string h = "const:1";
  int n = 1000;
  int n_quad = 0;
  std::string out, report;
};

void run_solve(const SolveArgs& a) {
  require_even(a.n, "--n");
  const int n_quad = a.n_quad == 0 ? std::max(a.n, reflect::kMinQuadPanels) : a.n_quad;
  const auto params = reflect::ProblemParams::make(a.m, a.T);
  const auto forcing = reflect::catalog::forcing(a.h, a.m);
  const reflect::ReflectionProblem problem{params, forcing.h, a.lambda};
  const auto u = reflect::solve(problem, n_quad, a.n);
  const auto res = reflect::residual(problem, u);
  with_output(a.out, [&](std::ostream& os) { reflect::write_csv(os, u); });

  Json j;
  j["m"] = a.m;
  j["T"] = a.T;
  j["h"] = a.h;
  j["lambda"] = a.lambda;
  j["n"] = a.n;
  j["n_quad"] = n_quad;
  j["residual"] = reflect::json::to_json(res);
  if (forcing.exact && a.lambda == 0.0) {
    double err = 0.0;
    for (int i = 0; i <= u.n(); ++i) err = std::max(err, std::abs(u[i] - forcing.exact(u.node(i))));
    j["max_error_vs_exact"] = err;
  }
  emit_report(a.out, a.report, j);
}

struct CompareArgs {
  double m1 = 0, m2 = 0, T = 1;
  std::string h = "const:1";
  int n = 400;
  int grid = 201;
  std::string out;
};

void run_compare(const CompareArgs& a) {
  require_even(a.n, "--n");
  if (a.n < reflect::kMinQuadPanels) throw Error(ErrorCode::InvalidArgument, "--n must be >= 8");
  // Both parameters share h's definition; parameterised forcings use m1.
  const auto forcing = reflect::catalog::forcing(a.h, a.m1);
  const auto rep = reflect::compare(a.m1, a.m2, a.T, forcing.h, a.n, a.grid);
  Json j = reflect::json::to_json(rep);
  j["h"] = a.h;
  print_json(a.out, j);
}

struct ReduceArgs {
  std::string example = "e-ex";
  std::string mode = "periodic";
  std::string constraint = "reflection";
  double T = 1, x0 = 0.5, m = 0.5, tol = 1e-6;
  std::vector<double> guess{0.1, 0.1};
  std::optional<double> family_c;
  std::string h = "const:1";
  int n = 2000;
  std::string out, report;
};

void run_reduce(const ReduceArgs& a) {
  require_even(a.n, "--n");
  if (a.guess.size() != 2) throw Error(ErrorCode::InvalidArgument, "--guess takes two values a b");
  if (a.family_c && a.example != "e-ex") throw Error(ErrorCode::InvalidArgument, "--family-c needs --example e-ex");
  reflect::NonlinearProblem p;
  p.T = a.T;
  p.x0 = a.x0;
  p.mode = a.mode == "ivp" ? reflect::BoundaryMode::InitialValue : reflect::BoundaryMode::Periodic;
  if (a.example == "e-ex") {
    p.f = reflect::catalog::e_ex();
  } else if (a.example == "sinh") {
    p.f = reflect::catalog::sinh_reflection();
  } else {
    p.f = reflect::catalog::linear(reflect::catalog::forcing(a.h, a.m).h, a.m);
  }
  const auto sys = reflect::reduce_system(p);

  Json j;
  j["example"] = a.example;
  j["mode"] = a.mode;
  j["T"] = a.T;
  j["n_steps"] = a.n;
  reflect::SystemSolution sol;
  if (a.family_c) {
    const double c = *a.family_c;
    const auto start = reflect::catalog::e_ex_family(c, -a.T);
    sol = reflect::integrate_from_left(sys, {start.y, start.x}, a.n);
    const auto end = reflect::catalog::e_ex_family(c, a.T);
    j["family_c"] = c;
    j["system_boundary_defect"] = std::max(std::abs(sol.y.front() - sol.x.back()), std::abs(sol.x.front() - sol.y.back()));
    j["analytic_boundary_defect"] = std::abs(end.x - start.x);
  } else if (p.mode == reflect::BoundaryMode::InitialValue) {
    j["x0"] = a.x0;
    sol = reflect::solve_initial_value(p, a.n);
    if (a.example == "sinh") {
      const auto ode = reflect::reduce_second_order(reflect::catalog::sinh_diffeomorphism(),
                                                    reflect::Involution::reflection(), a.x0);
      const auto x2 = reflect::integrate_second_order_symmetric(ode, a.T, a.n);
      double d = 0.0;
      for (int i = 0; i <= a.n; ++i) d = std::max(d, std::abs(x2[static_cast<std::size_t>(i)] - sol.x[static_cast<std::size_t>(i)]));
      j["second_order_discrepancy"] = d;
    }
  } else {
    reflect::ShootOptions opt;
    opt.n_steps = a.n;
    opt.constraint = a.constraint == "system" ? reflect::ShootingConstraint::SystemOnly
                                               : reflect::ShootingConstraint::WithReflection;
    const auto shot = reflect::shoot_periodic(p, {a.guess[0], a.guess[1]}, opt);
    sol = shot.solution;
    j["constraint"] = a.constraint;
    j["newton"] = Json{{"defect_norm", shot.defect_norm}, {"trace", reflect::json::to_json(shot.trace)}};
  }
  const auto verdict = reflect::filter_reflection_solution(sol, a.tol, p.mode);
  j["filter_tol"] = a.tol;
  j["filter"] = reflect::json::to_json(verdict);
  j["even_odd_defect"] = reflect::even_odd_defect(sol);
  with_output(a.out, [&](std::ostream& os) { reflect::write_trajectory_csv(os, sol); });
  emit_report(a.out, a.report, j);
}

struct IterateArgs {
  std::string example = "exa3";
  double lambda = 0.1, m = reflect::kPi / 4.0, T = 1, tol = 1e-8;
  int max_iters = 60;
  int n = 400;
  std::string out, dump_prefix;
};

void run_iterate(const IterateArgs& a) {
  require_even(a.n, "--n");
  if (a.n < reflect::kMinQuadPanels) throw Error(ErrorCode::InvalidArgument, "--n must be >= 8");
  if (a.lambda < 0) throw Error(ErrorCode::InvalidArgument, "--lambda must be >= 0");
  const auto f = reflect::catalog::exa3(a.lambda);
  // alpha = T and beta = -T bracket every solution for lambda >= 0.
  const auto pair = reflect::LowerUpperPair::make(reflect::GridFunction::constant(a.T, a.n, a.T),
                                                  reflect::GridFunction::constant(a.T, a.n, -a.T),
                                                  reflect::Ordering::LowerAboveUpper);
  Json j;
  j["example"] = a.example;
  j["lambda"] = a.lambda;
  j["T"] = a.T;
  j["n"] = a.n;
  j["lower_check"] = reflect::json::to_json(reflect::check_lower(pair.lower, f));
  j["upper_check"] = reflect::json::to_json(reflect::check_upper(pair.upper, f));
  j["lipschitz_check"] = reflect::json::to_json(reflect::one_sided_lipschitz_check(f, pair, a.m));
  const auto rep = reflect::iterate(f, pair, a.m, {0, a.max_iters, a.tol});
  j["report"] = reflect::json::to_json(rep);
  if (!a.dump_prefix.empty()) {
    with_output(a.dump_prefix + "_lower.csv", [&](std::ostream& os) { reflect::write_csv(os, rep.iterates_lower.back()); });
    with_output(a.dump_prefix + "_upper.csv", [&](std::ostream& os) { reflect::write_csv(os, rep.iterates_upper.back()); });
  }
  print_json(a.out, j);
}

struct ExistsArgs {
  std::string example = "exa2";
  std::string cone = "positive";
  double m = 0.5, T = 1;
  std::optional<double> r, R;
  bool sweep = false;
  int density = 41;
  std::string out;
};

void run_exists(const ExistsArgs& a) {
  if (a.r.has_value() != a.R.has_value()) throw Error(ErrorCode::InvalidArgument, "--r and --R go together");
  if (a.sweep && a.r) throw Error(ErrorCode::InvalidArgument, "--sweep picks r and R itself");
  const auto f = reflect::catalog::exa2_cone();
  const bool positive = a.cone == "positive";
  using reflect::ConeTheorem;
  const ConeTheorem th = positive ? (a.m > 0 ? ConeTheorem::PositiveSolutionThm : ConeTheorem::PositiveSolutionTeo2)
                                  : (a.m > 0 ? ConeTheorem::NegativeSolutionCor1 : ConeTheorem::NegativeSolutionCor2);
  Json j;
  if (a.sweep) {
    reflect::SweepOptions so;
    so.density = a.density;
    j = reflect::json::to_json(reflect::sweep_radii(f, a.m, a.T, th, so));
  } else if (a.r) {
    if (!reflect::theorem_window_ok(th, a.m, a.T))
      throw Error(ErrorCode::BadWindow, std::string("m outside the window of ") + to_string(th));
    const auto b = reflect::ConeBounds::make(a.m, a.T, *a.r, *a.R);
    j = reflect::json::to_json(positive ? reflect::check_positive_existence(f, b, a.density)
                                        : reflect::check_negative_existence(f, b, th, a.density));
  } else {
    j = reflect::json::to_json(reflect::check_asymptotic_corollary(
        f, a.m, a.T, positive ? reflect::Cone::Positive : reflect::Cone::Negative));
  }
  j["example"] = a.example;
  print_json(a.out, j);
}

int fail(const std::string& code, const std::string& message, int status) {
  std::cerr << reflect::json::error_json(code, message).dump() << '\n';
  return status;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Green's functions, linear solves and existence checks for x'(t) + m x(-t) = h(t)", "reflect"};
  app.require_subcommand(1);
  // -h would collide with the forcing option --h.
  app.set_help_flag("--help", "print this help and exit");

  std::function<void()> action;
  auto bind = [&](CLI::App* sub, auto run, auto& args) {
    sub->callback([&action, run, &args] { action = [run, &args] { run(args); }; });
  };

  KernelArgs ka;
  auto* kernel = app.add_subcommand("kernel", "dump G or Gbar on an N x N grid as CSV t,s,value");
  kernel->add_option("--m", ka.m, "coefficient of x(-t)")->required();
  kernel->add_option("--T", ka.T, "half-length of I")->capture_default_str();
  kernel->add_option("--grid", ka.grid, "points per axis")->capture_default_str();
  kernel->add_option("--which", ka.which, "G or Gbar")->check(CLI::IsMember({"G", "Gbar"}))->capture_default_str();
  kernel->add_option("--out", ka.out, "output file (default stdout)");
  bind(kernel, run_kernel, ka);

  SignArgs sa;
  auto* sign = app.add_subcommand("sign", "classify the sign of Gbar");
  sign->add_option("--m", sa.m, "coefficient of x(-t)")->required();
  sign->add_option("--T", sa.T, "half-length of I")->capture_default_str();
  sign->add_option("--grid", sa.grid, "points per axis")->capture_default_str();
  sign->add_option("--out", sa.out, "output file (default stdout)");
  bind(sign, run_sign, sa);

  ResonanceArgs ra;
  auto* resonance = app.add_subcommand("resonance", "check whether mT is an integer multiple of pi");
  resonance->add_option("--m", ra.m, "coefficient of x(-t)")->required();
  resonance->add_option("--T", ra.T, "half-length of I")->capture_default_str();
  resonance->add_option("--tol", ra.tol, "absolute tolerance on |mT - k pi|")->capture_default_str();
  resonance->add_option("--out", ra.out, "output file (default stdout)");
  bind(resonance, run_resonance, ra);

  SolveArgs so;
  auto* solve = app.add_subcommand("solve", "solve x' + m x(-t) = h, x(-T) - x(T) = lambda; CSV t,value");
  solve->add_option("--m", so.m, "coefficient of x(-t)")->required();
  solve->add_option("--T", so.T, "half-length of I")->capture_default_str();
  solve->add_option("--h", so.h, "forcing: const:<c>, cos or zero")->capture_default_str();
  solve->add_option("--lambda", so.lambda, "boundary jump x(-T) - x(T)")->capture_default_str();
  solve->add_option("--n", so.n, "grid intervals (even)")->capture_default_str();
  solve->add_option("--n-quad", so.n_quad, "quadrature panels (even, >= 8; default --n)");
  solve->add_option("--out", so.out, "solution CSV (default stdout)");
  solve->add_option("--report", so.report, "residual JSON (default stdout when --out is a file)");
  bind(solve, run_solve, so);

  CompareArgs ca;
  auto* compare = app.add_subcommand("compare", "pointwise ordering of solutions and kernels for m1 < m2");
  compare->add_option("--m1", ca.m1, "smaller parameter")->required();
  compare->add_option("--m2", ca.m2, "larger parameter")->required();
  compare->add_option("--T", ca.T, "half-length of I")->capture_default_str();
  compare->add_option("--h", ca.h, "forcing: const:<c>, cos or zero")->capture_default_str();
  compare->add_option("--n", ca.n, "solution grid intervals (even)")->capture_default_str();
  compare->add_option("--grid", ca.grid, "kernel grid points per axis")->capture_default_str();
  compare->add_option("--out", ca.out, "output file (default stdout)");
  bind(compare, run_compare, ca);

  ReduceArgs rd;
  auto* reduce = app.add_subcommand("reduce", "integrate the reflected (y, x) system; CSV t,y,x,z,w");
  reduce->add_option("--example", rd.example, "e-ex, sinh or custom (x' = h - m x(-t))")
      ->check(CLI::IsMember({"e-ex", "sinh", "custom"}))
      ->capture_default_str();
  reduce->add_option("--mode", rd.mode, "periodic or ivp")->check(CLI::IsMember({"periodic", "ivp"}))->capture_default_str();
  reduce->add_option("--T", rd.T, "half-length of I")->capture_default_str();
  reduce->add_option("--x0", rd.x0, "x(0) in ivp mode")->capture_default_str();
  reduce->add_option("--guess", rd.guess, "shooting guess a b = y(-T) x(-T)")->expected(2);
  reduce->add_option("--constraint", rd.constraint, "reflection or system")
      ->check(CLI::IsMember({"reflection", "system"}))
      ->capture_default_str();
  reduce->add_option("--family-c", rd.family_c, "e-ex: integrate the closed-form family member c instead of shooting");
  reduce->add_option("--m", rd.m, "custom: coefficient m")->capture_default_str();
  reduce->add_option("--h", rd.h, "custom: forcing id")->capture_default_str();
  reduce->add_option("--n", rd.n, "RK4 steps across I (even)")->capture_default_str();
  reduce->add_option("--tol", rd.tol, "filter tolerance")->capture_default_str();
  reduce->add_option("--out", rd.out, "trajectory CSV (default stdout)");
  reduce->add_option("--report", rd.report, "verdict JSON (default stdout when --out is a file)");
  bind(reduce, run_reduce, rd);

  IterateArgs ia;
  auto* iterate = app.add_subcommand("iterate", "monotone iteration for x' = lambda sinh(t - x(-t))");
  iterate->add_option("--example", ia.example, "exa3")->check(CLI::IsMember({"exa3"}))->capture_default_str();
  iterate->add_option("--lambda", ia.lambda, "lambda >= 0")->capture_default_str();
  iterate->add_option("--m", ia.m, "linearisation parameter in (0, pi/(4T)]")->capture_default_str();
  iterate->add_option("--T", ia.T, "half-length of I")->capture_default_str();
  iterate->add_option("--tol", ia.tol, "stop when iterates move less than this")->capture_default_str();
  iterate->add_option("--max-iters", ia.max_iters, "iteration cap")->capture_default_str();
  iterate->add_option("--n", ia.n, "grid intervals (even)")->capture_default_str();
  iterate->add_option("--dump-prefix", ia.dump_prefix, "write final iterates to <prefix>_lower.csv, <prefix>_upper.csv");
  iterate->add_option("--out", ia.out, "report JSON (default stdout)");
  bind(iterate, run_iterate, ia);

  ExistsArgs ea;
  auto* exists = app.add_subcommand("exists", "sampled existence hypotheses for x' = t^2 x^2 [cos^2(x(-t)^2) + 1]");
  exists->add_option("--example", ea.example, "exa2")->check(CLI::IsMember({"exa2"}))->capture_default_str();
  exists->add_option("--cone", ea.cone, "positive or negative")->check(CLI::IsMember({"positive", "negative"}))->capture_default_str();
  exists->add_option("--m", ea.m, "coefficient m")->capture_default_str();
  exists->add_option("--T", ea.T, "half-length of I")->capture_default_str();
  exists->add_option("--r", ea.r, "inner radius");
  exists->add_option("--R", ea.R, "outer radius");
  exists->add_flag("--sweep", ea.sweep, "scan a log-spaced (r, R) lattice");
  exists->add_option("--density", ea.density, "samples per axis")->capture_default_str();
  exists->add_option("--out", ea.out, "report JSON (default stdout)");
  bind(exists, run_exists, ea);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    return fail("InvalidArgument", e.what(), 1);
  }

  try {
    action();
  } catch (const Error& e) {
    return fail(std::string(reflect::to_string(e.code())), e.what(), reflect::is_validation_error(e.code()) ? 1 : 2);
  } catch (const std::exception& e) {
    return fail("Internal", e.what(), 2);
  }
  return 0;
}
