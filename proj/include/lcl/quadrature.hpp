// Adaptive one-dimensional quadrature on top of Boost.Math Gauss-Kronrod.
#pragma once

#include <functional>

namespace lcl {

struct QuadResult {
  double value = 0.0;
  double error = 0.0;
};

using RealFunction = std::function<double(double)>;

/// Adaptive 31-point Gauss-Kronrod on [a, b]. Throws NumericError if the error estimate
/// stays above max(abs_tol, rel_tol * |value|).
QuadResult integrate(const RealFunction& f, double a, double b, double abs_tol = 1e-13,
                     double rel_tol = 1e-12, unsigned max_depth = 15);

/// Double-exponential (tanh-sinh) quadrature on [a, b] for integrands with logarithmic or
/// algebraic endpoint singularities. Same convergence contract as integrate.
QuadResult integrate_singular(const RealFunction& f, double a, double b, double abs_tol = 1e-13,
                              double rel_tol = 1e-12);

/// Integral over [a, b] of an integrand with (integrable) square-root type singularities at
/// both ends: the left half uses x = a + t^2, the right half x = b - t^2.
QuadResult integrate_edges(const RealFunction& f, double a, double b, double abs_tol = 1e-13,
                           double rel_tol = 1e-12);

}  // namespace lcl
