#include "lcl/quadrature.hpp"

#include <cmath>
#include <sstream>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>

#include "lcl/dense.hpp"

namespace lcl {

QuadResult integrate(const RealFunction& f, double a, double b, double abs_tol, double rel_tol,
                     unsigned max_depth) {
  if (a == b) return {};
  double err = 0.0;
  double l1 = 0.0;
  const double value =
      boost::math::quadrature::gauss_kronrod<double, 31>::integrate(f, a, b, max_depth, rel_tol, &err, &l1);
  // Boost stops refining a panel once its Kronrod-Gauss gap is below rel_tol times the panel
  // estimate, so the summed gap is compared against the L1 norm.
  if (!std::isfinite(value) || err > std::max(abs_tol, rel_tol * l1)) {
    std::ostringstream msg;
    msg << "quadrature on [" << a << ", " << b << "] did not converge (value " << value
        << ", error estimate " << err << ")";
    throw NumericError(msg.str());
  }
  return {value, err};
}

QuadResult integrate_singular(const RealFunction& f, double a, double b, double abs_tol, double rel_tol) {
  if (a == b) return {};
  thread_local boost::math::quadrature::tanh_sinh<double> ts;
  double err = 0.0;
  double l1 = 0.0;
  const double value = ts.integrate(f, a, b, rel_tol, &err, &l1);
  if (!std::isfinite(value) || err > std::max(abs_tol, rel_tol * l1)) {
    std::ostringstream msg;
    msg << "tanh-sinh quadrature on [" << a << ", " << b << "] did not converge (value " << value
        << ", error estimate " << err << ")";
    throw NumericError(msg.str());
  }
  return {value, err};
}

QuadResult integrate_edges(const RealFunction& f, double a, double b, double abs_tol, double rel_tol) {
  if (!(b > a)) return {};
  const double half = std::sqrt(0.5 * (b - a));
  const auto left = integrate([&](double t) { return 2.0 * t * f(a + t * t); }, 0.0, half, abs_tol, rel_tol);
  const auto right = integrate([&](double t) { return 2.0 * t * f(b - t * t); }, 0.0, half, abs_tol, rel_tol);
  return {left.value + right.value, left.error + right.error};
}

}  // namespace lcl
