#include "hrsync/sync.hpp"

#include <cmath>
#include <limits>
#include <string>

namespace hrsync {

SyncEstimate invert_frequencies(double f1_hat, double f2_hat, double alpha, int N,
                                std::span<const int> ell_candidates) {
  if (N < 1) throw ConfigError("N must be >= 1");
  SyncEstimate est;
  est.f1_hat = f1_hat;
  est.f2_hat = f2_hat;
  est.p_hat_frac = -N * f2_hat;
  est.p_hat = static_cast<int>(((std::lround(est.p_hat_frac) % N) + N) % N);

  bool found = false;
  double best = std::numeric_limits<double>::infinity();
  for (int ell : ell_candidates) {
    const double frac = wrap_half(f1_hat - ell * alpha) / (1.0 + alpha);
    if (std::abs(frac) > 0.5) continue;
    const double score = std::abs(frac);
    if (score < best || (score == best && ell < est.ell_hat)) {
      best = score;
      est.eps_frac_hat = frac;
      est.ell_hat = ell;
      found = true;
    }
  }
  if (!found) throw EstimationError("integer CFO unresolved: no admissible candidate");
  est.eps_total_hat = est.eps_frac_hat + est.ell_hat;
  return est;
}

double mean_squared_error(std::span<const double> estimates, std::span<const double> truths) {
  if (estimates.size() != truths.size())
    throw ConfigError("MSE inputs differ in length (" + std::to_string(estimates.size()) + " vs " +
                      std::to_string(truths.size()) + ")");
  if (estimates.empty()) throw ConfigError("MSE of an empty sample");
  double acc = 0.0;
  for (std::size_t i = 0; i < estimates.size(); ++i) {
    const double d = estimates[i] - truths[i];
    acc += d * d;
  }
  return acc / static_cast<double>(estimates.size());
}

double cfo_mse(std::span<const SyncEstimate> estimates, std::span<const double> eps_truths) {
  std::vector<double> eps(estimates.size());
  for (std::size_t i = 0; i < estimates.size(); ++i) eps[i] = estimates[i].eps_total_hat;
  return mean_squared_error(eps, eps_truths);
}

double sto_mse(std::span<const SyncEstimate> estimates, std::span<const int> p_truths) {
  std::vector<double> p(estimates.size()), truth(p_truths.size());
  for (std::size_t i = 0; i < estimates.size(); ++i) p[i] = estimates[i].p_hat;
  for (std::size_t i = 0; i < p_truths.size(); ++i) truth[i] = p_truths[i];
  return mean_squared_error(p, truth);
}

MseStat mse_stat(std::span<const double> squared_errors) {
  MseStat s;
  s.count = squared_errors.size();
  if (s.count == 0) return {std::nan(""), std::nan(""), 0};
  double sum = 0.0;
  for (double e : squared_errors) sum += e;
  s.mse = sum / static_cast<double>(s.count);
  if (s.count > 1) {
    double var = 0.0;
    for (double e : squared_errors) var += (e - s.mse) * (e - s.mse);
    var /= static_cast<double>(s.count - 1);
    s.se = std::sqrt(var / static_cast<double>(s.count));
  }
  return s;
}

}  // namespace hrsync
