#pragma once

/**
 * @file catalog.hpp
 * @brief Named forcings and nonlinearities used by the command line tool and
 * the demos.
 *
 * Forcings (linear problem, parameter m):
 *   const:<c>   h = c, exact solution c/m
 *   cos         h = m (cos mt - sin mt), exact solution cos mt
 *   zero        h = 0
 *
 * Nonlinearities:
 *   e-ex        x' = x(t) x(-t)
 *   sinh        x' = sinh(x(-t))
 *   exa3        x' = lambda sinh(t - x(-t))
 *   exa2        x' = t^2 x(t)^2 [cos^2(x(-t)^2) + 1]
 *   linear      x' = h(t) - m x(-t)
 */

#include <cmath>
#include <functional>
#include <optional>
#include <string>

#include "reflect/cone.hpp"
#include "reflect/error.hpp"
#include "reflect/linsolve.hpp"
#include "reflect/monotone.hpp"
#include "reflect/reduce.hpp"

namespace reflect::catalog {

struct NamedForcing {
  Forcing h;
  std::function<double(double)> exact;  ///< empty when no closed form is known
};

inline NamedForcing forcing(const std::string& id, double m) {
  if (id == "zero") return {[](double) { return 0.0; }, [](double) { return 0.0; }};
  if (id == "cos")
    return {[m](double t) { return m * (std::cos(m * t) - std::sin(m * t)); },
            [m](double t) { return std::cos(m * t); }};
  if (id.rfind("const:", 0) == 0) {
    double c = 0.0;
    try {
      std::size_t used = 0;
      c = std::stod(id.substr(6), &used);
      if (used != id.size() - 6) throw std::invalid_argument(id);
    } catch (const std::exception&) {
      throw Error(ErrorCode::InvalidArgument, "bad constant in forcing id '" + id + "'");
    }
    return {[c](double) { return c; }, [c, m](double) { return c / m; }};
  }
  throw Error(ErrorCode::InvalidArgument, "unknown forcing '" + id + "' (expected const:<c>, cos or zero)");
}

/// x' = x(t) x(-t); every member of x = c e^{ct}/(e^{ct}+1), y = c/(e^{ct}+1)
/// solves the reflected system with its boundary conditions.
inline Nonlinearity3 e_ex() {
  return [](double, double y, double x) { return x * y; };
}

struct EexMember {
  double x;
  double y;
};

inline EexMember e_ex_family(double c, double t) {
  const double e = std::exp(c * t);
  return {c * e / (e + 1.0), c / (e + 1.0)};
}

inline Nonlinearity3 sinh_reflection() {
  return [](double, double y, double) { return std::sinh(y); };
}

/// sinh as a diffeomorphism of the real line, for the second-order reduction.
inline Diffeomorphism sinh_diffeomorphism() {
  return {[](double x) { return std::sinh(x); }, [](double v) { return std::asinh(v); },
          [](double x) { return std::cosh(x); }};
}

inline Nonlinearity2 exa3(double lambda) {
  return [lambda](double t, double y) { return lambda * std::sinh(t - y); };
}

/// exa2 in the (t, x, y) order of the existence statements, with x squared in
/// front and y inside the cosine.
inline ConeNonlinearity exa2_cone() {
  return [](double t, double x, double y) {
    const double c = std::cos(y * y);
    return t * t * x * x * (c * c + 1.0);
  };
}

/// exa2 as the equation x'(t) = t^2 x(t)^2 [cos^2(x(-t)^2) + 1].
inline Nonlinearity3 exa2_equation() {
  return [](double t, double y, double x) {
    const double c = std::cos(y * y);
    return t * t * x * x * (c * c + 1.0);
  };
}

inline Nonlinearity3 linear(Forcing h, double m) {
  return [h = std::move(h), m](double t, double y, double) { return h(t) - m * y; };
}

}  // namespace reflect::catalog
