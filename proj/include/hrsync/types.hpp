#pragma once

#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>
#include <string>

#include <Eigen/Core>

namespace hrsync {

using Index = Eigen::Index;

template <typename Real>
using Complex = std::complex<Real>;

template <typename Real>
using CMatrix = Eigen::Matrix<Complex<Real>, Eigen::Dynamic, Eigen::Dynamic>;

template <typename Real>
using CVector = Eigen::Matrix<Complex<Real>, Eigen::Dynamic, 1>;

template <typename Real>
using RVector = Eigen::Matrix<Real, Eigen::Dynamic, 1>;

using cd = Complex<double>;
using CMatrixXd = CMatrix<double>;
using CVectorXd = CVector<double>;
using RVectorXd = RVector<double>;

inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

/// Invalid configuration or input shape. The CLI maps this to exit code 2.
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Numerical failure inside an estimator (rank loss, unresolved ambiguity).
class EstimationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// e^{i 2 pi x}
inline cd cis2pi(double x) { return std::polar(1.0, kTwoPi * x); }

/// Wraps x into [0, 1).
inline double wrap_unit(double x) {
  double w = x - std::floor(x);
  return w >= 1.0 ? 0.0 : w;
}

/// Wraps x into (-0.5, 0.5]. Exact half-cycle ties resolve to +0.5.
inline double wrap_half(double x) {
  double w = x - std::floor(x + 0.5);
  return w <= -0.5 ? w + 1.0 : w;
}

}  // namespace hrsync
