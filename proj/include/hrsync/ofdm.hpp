#pragma once

#include <vector>

#include "hrsync/types.hpp"

namespace hrsync {

/// Frame layout shared by every transmitter and receiver in the lab.
struct OfdmConfig {
  int N = 64;   ///< subcarriers
  int Ng = 16;  ///< cyclic-prefix samples
  int M = 2;    ///< pilot frames per observation

  int Nt() const { return N + Ng; }
  double alpha() const { return static_cast<double>(Ng) / static_cast<double>(N); }

  /// Throws ConfigError unless N >= 1, 0 <= Ng < N and M >= 0.
  void validate() const;
};

struct TimeFrame {
  CVectorXd samples;  ///< Nt samples, cyclic prefix first
};

struct PilotSpec {
  cd X{1.0, 0.0};
};

/// OFDM modulator with cyclic prefix:
///   x[n] = (1/N) sum_k X[k] exp(i 2 pi k (n - Ng) / N),  0 <= n < Nt.
TimeFrame idft_modulate(const CVectorXd& freq_symbols, const OfdmConfig& cfg);

/// Unscaled forward DFT of exactly N samples.
CVectorXd dft_demodulate(const CVectorXd& samples, int N);

/// Drops the first Ng samples of a frame.
CVectorXd strip_cp(const TimeFrame& frame, const OfdmConfig& cfg);

/// M identical frames carrying the constant pilot on every subcarrier.
std::vector<TimeFrame> make_pilot_frames(const PilotSpec& pilot, const OfdmConfig& cfg);

/// Maximum |x[n] - x[n+N]| over the cyclic prefix.
double cp_mismatch(const TimeFrame& frame, const OfdmConfig& cfg);

double energy(const CVectorXd& v);

}  // namespace hrsync
