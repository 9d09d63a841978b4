#include "hrsync/crlb.hpp"

#include <Eigen/LU>

namespace hrsync {

namespace {

void check(const FisherInputs& in) {
  if (in.M < 2 || in.N < 2) throw ConfigError("Fisher matrix needs M >= 2 and N >= 2");
  if (!(in.N0 > 0.0)) throw ConfigError("Fisher matrix needs N0 > 0");
  if (!(in.lambda > 0.0)) throw ConfigError("Fisher matrix is singular for lambda = 0");
}

}  // namespace

CVectorXd mean_vector(const FisherInputs& in) {
  CVectorXd mu(static_cast<Index>(in.M) * in.N);
  for (int m = 0; m < in.M; ++m)
    for (int k = 0; k < in.N; ++k)
      mu[static_cast<Index>(m) * in.N + k] =
          std::polar(in.lambda, in.varphi + in.omega1 * m + in.omega2 * k);
  return mu;
}

CMatrixXd mean_partials(const FisherInputs& in) {
  const CVectorXd mu = mean_vector(in);
  const cd I(0.0, 1.0);
  CMatrixXd D(mu.size(), 4);
  for (int m = 0; m < in.M; ++m)
    for (int k = 0; k < in.N; ++k) {
      const Index j = static_cast<Index>(m) * in.N + k;
      D(j, 0) = I * double(m) * mu[j];
      D(j, 1) = I * double(k) * mu[j];
      D(j, 2) = mu[j] / in.lambda;
      D(j, 3) = I * mu[j];
    }
  return D;
}

Matrix4d fisher_matrix(const FisherInputs& in) {
  check(in);
  const CMatrixXd D = mean_partials(in);
  return (2.0 / (in.N * in.N0)) * (D.adjoint() * D).real();
}

Eigen::Vector4d crlb_numeric(const FisherInputs& in) {
  return fisher_matrix(in).inverse().diagonal();
}

CrlbResult crlb_analytic(int M, int N, double N0, double lambda, double alpha) {
  if (M < 2 || N < 2) throw ConfigError("CRLB is undefined for M < 2 or N < 2");
  if (!(N0 > 0.0) || !(lambda > 0.0)) throw ConfigError("CRLB needs N0 > 0 and lambda > 0");
  const double m = M, n = N;
  const double noise = 6.0 * n * N0 / (lambda * lambda * m * n);
  CrlbResult r;
  r.crlb_omega1 = noise / (m * m - 1.0);
  r.crlb_omega2 = noise / (n * n - 1.0);
  r.crlb_f1 = r.crlb_omega1 / (kTwoPi * kTwoPi);
  r.crlb_f2 = r.crlb_omega2 / (kTwoPi * kTwoPi);
  r.crlb_eps = r.crlb_f1 / ((1.0 + alpha) * (1.0 + alpha));
  r.crlb_p = n * n * r.crlb_f2;
  return r;
}

}  // namespace hrsync
