#pragma once

#include <Eigen/Core>

#include "hrsync/types.hpp"

namespace hrsync {

/// Observation model for the bound: mu[j] = lambda exp(i (varphi + omega1 m_j + omega2 k_j))
/// with j = m N + k, observed in CN(0, N N0) noise.
struct FisherInputs {
  int M = 2;
  int N = 64;
  double N0 = 1.0;
  double lambda = 1.0;
  double varphi = 0.0;
  double omega1 = 0.0;
  double omega2 = 0.0;
};

struct CrlbResult {
  double crlb_omega1 = 0.0;  ///< rad^2
  double crlb_omega2 = 0.0;
  double crlb_f1 = 0.0;  ///< cycles^2
  double crlb_f2 = 0.0;
  double crlb_eps = 0.0;  ///< subcarrier spacings^2, integer CFO known
  double crlb_p = 0.0;    ///< samples^2
};

using Matrix4d = Eigen::Matrix4d;

CVectorXd mean_vector(const FisherInputs& in);

/// Columns are d mu / d [omega1, omega2, lambda, varphi].
CMatrixXd mean_partials(const FisherInputs& in);

/// W = 2 / (N N0) Re{ D^H D } with D = mean_partials(in).
Matrix4d fisher_matrix(const FisherInputs& in);

/// Diagonal of W^-1.
Eigen::Vector4d crlb_numeric(const FisherInputs& in);

/// Closed-form bounds
///   CRLB(omega1) = 6 N N0 / (lambda^2 M N (M^2 - 1))
///   CRLB(omega2) = 6 N N0 / (lambda^2 M N (N^2 - 1))
/// mapped to (eps, p) through f1 = eps (1 + alpha) and f2 = -p / N.
CrlbResult crlb_analytic(int M, int N, double N0, double lambda, double alpha);

}  // namespace hrsync
