#include "hrsync/channel.hpp"

#include <cmath>
#include <string>

namespace hrsync {

CfoSplit split_cfo(double epsilon) {
  const double ell = std::round(epsilon);
  return {epsilon - ell, static_cast<int>(ell)};
}

Rng make_rng(const RngSeed& seed) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed.master_seed),
                    static_cast<std::uint32_t>(seed.master_seed >> 32),
                    static_cast<std::uint32_t>(seed.stream_index),
                    static_cast<std::uint32_t>(seed.stream_index >> 32)};
  return Rng(seq);
}

CVectorXd complex_normal(Index n, double variance, Rng& rng) {
  std::normal_distribution<double> gauss(0.0, std::sqrt(variance / 2.0));
  CVectorXd out(n);
  for (Index i = 0; i < n; ++i) {
    const double re = gauss(rng);
    const double im = gauss(rng);
    out[i] = cd(re, im);
  }
  return out;
}

TimeFrame apply_impairments(int m, const std::vector<TimeFrame>& frames, const ChannelParams& ch,
                            const OfdmConfig& cfg) {
  if (m < 0 || m >= static_cast<int>(frames.size()))
    throw ConfigError("frame index " + std::to_string(m) + " outside [0, " +
                      std::to_string(frames.size()) + ")");
  if (ch.p < 0 || ch.p >= cfg.N)
    throw ConfigError("misalignment p=" + std::to_string(ch.p) + " outside [0, " +
                      std::to_string(cfg.N) + ")");
  const CVectorXd& x = frames[static_cast<std::size_t>(m)].samples;
  if (x.size() != cfg.Nt()) throw ConfigError("frame length does not match Nt");

  const int Nt = cfg.Nt();
  const cd frame_rot = cis2pi(ch.epsilon * m * (1.0 + cfg.alpha()));
  TimeFrame out;
  out.samples.resize(Nt);
  for (int n = 0; n < Nt; ++n) {
    int j = n - ch.p;
    if (j < 0) j += cfg.N;
    out.samples[n] = frame_rot * cis2pi(ch.epsilon * n / cfg.N) * x[j];
  }
  return out;
}

void add_awgn_inplace(CVectorXd& samples, double N0, Rng& rng) {
  if (!(N0 >= 0.0)) throw ConfigError("noise power must be non-negative");
  if (N0 == 0.0) return;
  samples += complex_normal(samples.size(), N0, rng);
}

TimeFrame add_awgn(const TimeFrame& frame, double N0, const RngSeed& seed) {
  Rng rng = make_rng(seed);
  TimeFrame out = frame;
  add_awgn_inplace(out.samples, N0, rng);
  return out;
}

void rotate_cfo(CVectorXd& stream, double epsilon, int N, double n0) {
  for (Index n = 0; n < stream.size(); ++n)
    stream[n] *= cis2pi(epsilon * (static_cast<double>(n) + n0) / N);
}

double noise_power_from_snr_db(double snr_db, double Es) {
  return Es / std::pow(10.0, snr_db / 10.0);
}

}  // namespace hrsync
