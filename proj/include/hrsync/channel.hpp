#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "hrsync/ofdm.hpp"

namespace hrsync {

/// Total normalized CFO split into its nearest integer and the remainder.
struct CfoSplit {
  double frac = 0.0;  ///< |frac| <= 0.5
  int ell = 0;
};

CfoSplit split_cfo(double epsilon);

struct ChannelParams {
  double epsilon = 0.0;  ///< total CFO in subcarrier spacings
  int p = 0;             ///< frame misalignment in samples, 0 <= p < N
  double N0 = 0.0;       ///< noise power per complex time-domain sample
};

struct RngSeed {
  std::uint64_t master_seed = 0;
  std::uint64_t stream_index = 0;
};

using Rng = std::mt19937_64;

/// Independent generator for each (master_seed, stream_index) pair.
Rng make_rng(const RngSeed& seed);

/// n draws of CN(0, variance).
CVectorXd complex_normal(Index n, double variance, Rng& rng);

/// Frame m as seen by the receiver:
///   r_m[n] = exp(i 2 pi eps m (1 + alpha)) exp(i 2 pi eps n / N) x_m[n - p]
/// with x_m extended N-periodically, i.e. the DFT window opens p samples
/// ahead of the frame boundary. No noise is added.
TimeFrame apply_impairments(int m, const std::vector<TimeFrame>& frames, const ChannelParams& ch,
                            const OfdmConfig& cfg);

TimeFrame add_awgn(const TimeFrame& frame, double N0, const RngSeed& seed);
void add_awgn_inplace(CVectorXd& samples, double N0, Rng& rng);

/// Multiplies a sample stream by exp(i 2 pi eps (n + n0) / N).
void rotate_cfo(CVectorXd& stream, double epsilon, int N, double n0 = 0.0);

/// Es / 10^(snr_db / 10)
double noise_power_from_snr_db(double snr_db, double Es = 1.0);

}  // namespace hrsync
