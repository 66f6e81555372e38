#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <complex>
#include <type_traits>

#include "gcs/error.hpp"

namespace gcs {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;
using Complex = std::complex<double>;

template <class Scalar>
using VecX = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
template <class Scalar>
using MatX = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

template <class Scalar>
inline constexpr bool is_complex_v = !std::is_same_v<Scalar, double>;

/// |sinh z| below this is treated as a coth pole.
inline constexpr double kPoleThreshold = 1e-12;

template <class Scalar>
Scalar checked_coth(Scalar z) {
  using std::abs;
  const Scalar sh = std::sinh(z);
  if (abs(sh) < kPoleThreshold) {
    throw PoleError("coth evaluated at a pole (|sinh z| < 1e-12)");
  }
  return std::cosh(z) / sh;
}

template <class Derived>
double max_abs(const Eigen::MatrixBase<Derived>& m) {
  return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
}

/// Largest |a - b| over |b| with a floor, used for block-wise relative deviations.
template <class A, class B>
double relative_deviation(const Eigen::MatrixBase<A>& a, const Eigen::MatrixBase<B>& b) {
  const double denom = std::max({max_abs(a), max_abs(b), 1e-300});
  return max_abs(a - b) / denom;
}

inline double real_part(double x) { return x; }
inline double real_part(const Complex& x) { return x.real(); }

}  // namespace gcs
