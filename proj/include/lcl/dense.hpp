// Common dense types, error classes, and small Eigen helpers shared by every module.
#pragma once

#include <complex>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace lcl {

using Index = Eigen::Index;
using Complex = std::complex<double>;

template <typename Scalar>
using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
template <typename Scalar>
using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

using MatrixXc = Matrix<Complex>;
using VectorXc = Vector<Complex>;

/// A theorem hypothesis (e.g. ||z|-1| >= tau) does not hold for the requested input.
class HypothesisError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// A numerical routine did not reach its contracted accuracy.
class NumericError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Y = X - zI for any dense square X; real inputs are promoted to complex.
template <typename Derived>
MatrixXc shifted(const Eigen::MatrixBase<Derived>& x, Complex z) {
  MatrixXc y = x.template cast<Complex>();
  y.diagonal().array() -= z;
  return y;
}

/// Squared singular values of y in ascending order.
template <typename Derived>
Eigen::VectorXd squared_singular_values(const Eigen::MatrixBase<Derived>& y) {
  using Plain = typename Derived::PlainObject;
  Eigen::BDCSVD<Plain> svd(y.derived());
  Eigen::VectorXd s = svd.singularValues().reverse();
  return s.array().square();
}

inline double max_abs(const MatrixXc& a) { return a.size() == 0 ? 0.0 : a.cwiseAbs().maxCoeff(); }

}  // namespace lcl
