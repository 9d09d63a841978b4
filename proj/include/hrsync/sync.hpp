#pragma once

#include <span>
#include <vector>

#include "hrsync/types.hpp"

namespace hrsync {

struct SyncEstimate {
  double f1_hat = 0.0;
  double f2_hat = 0.0;
  double eps_frac_hat = 0.0;
  int ell_hat = 0;
  double eps_total_hat = 0.0;
  int p_hat = 0;
  double p_hat_frac = 0.0;  ///< -N f2_hat before rounding
  bool low_confidence = false;
};

/// Inverts f1 = eps_frac (1 + alpha) + ell alpha and f2 = -p / N.
///
/// f1 is only observed modulo 1, so ell comes from a caller-supplied candidate
/// set: each candidate yields eps_frac = wrap_half(f1 - ell alpha) / (1 + alpha),
/// and the candidate with the smallest |eps_frac| wins (ties go to the smallest ell).
SyncEstimate invert_frequencies(double f1_hat, double f2_hat, double alpha, int N,
                                std::span<const int> ell_candidates);

inline SyncEstimate invert_frequencies(double f1_hat, double f2_hat, double alpha, int N) {
  const int zero = 0;
  return invert_frequencies(f1_hat, f2_hat, alpha, N, std::span<const int>(&zero, 1));
}

double mean_squared_error(std::span<const double> estimates, std::span<const double> truths);

/// MSE of the total CFO estimate.
double cfo_mse(std::span<const SyncEstimate> estimates, std::span<const double> eps_truths);

/// MSE of the integer misalignment estimate, in samples^2.
double sto_mse(std::span<const SyncEstimate> estimates, std::span<const int> p_truths);

/// Mean and standard error of a sample of squared errors.
struct MseStat {
  double mse = 0.0;
  double se = 0.0;
  std::size_t count = 0;
};

MseStat mse_stat(std::span<const double> squared_errors);

}  // namespace hrsync
