#include "hrsync/ofdm.hpp"

#include <string>

#include <unsupported/Eigen/FFT>

namespace hrsync {

namespace {

Eigen::FFT<double>& fft_engine() {
  thread_local Eigen::FFT<double> engine;
  return engine;
}

}  // namespace

void OfdmConfig::validate() const {
  if (N < 1) throw ConfigError("N must be >= 1, got " + std::to_string(N));
  if (Ng < 0 || Ng >= N)
    throw ConfigError("Ng must satisfy 0 <= Ng < N, got Ng=" + std::to_string(Ng));
  if (M < 0) throw ConfigError("M must be >= 0, got " + std::to_string(M));
}

TimeFrame idft_modulate(const CVectorXd& freq_symbols, const OfdmConfig& cfg) {
  cfg.validate();
  if (freq_symbols.size() != cfg.N)
    throw ConfigError("idft_modulate: expected " + std::to_string(cfg.N) + " symbols, got " +
                      std::to_string(freq_symbols.size()));
  CVectorXd body = freq_symbols;
  if (cfg.N > 1) fft_engine().inv(body, freq_symbols);  // carries the 1/N

  TimeFrame frame;
  frame.samples.resize(cfg.Nt());
  frame.samples.head(cfg.Ng) = body.tail(cfg.Ng);
  frame.samples.tail(cfg.N) = body;
  return frame;
}

CVectorXd dft_demodulate(const CVectorXd& samples, int N) {
  if (samples.size() != N)
    throw ConfigError("dft_demodulate: expected " + std::to_string(N) + " samples, got " +
                      std::to_string(samples.size()));
  CVectorXd out = samples;
  if (N > 1) fft_engine().fwd(out, samples);
  return out;
}

CVectorXd strip_cp(const TimeFrame& frame, const OfdmConfig& cfg) {
  if (frame.samples.size() != cfg.Nt())
    throw ConfigError("frame length " + std::to_string(frame.samples.size()) +
                      " does not match Nt=" + std::to_string(cfg.Nt()));
  return frame.samples.tail(cfg.N);
}

std::vector<TimeFrame> make_pilot_frames(const PilotSpec& pilot, const OfdmConfig& cfg) {
  if (std::abs(pilot.X) <= 0.0) throw ConfigError("pilot value must be nonzero");
  const TimeFrame frame = idft_modulate(CVectorXd::Constant(cfg.N, pilot.X), cfg);
  return std::vector<TimeFrame>(static_cast<std::size_t>(cfg.M), frame);
}

double cp_mismatch(const TimeFrame& frame, const OfdmConfig& cfg) {
  if (cfg.Ng == 0) return 0.0;
  return (frame.samples.head(cfg.Ng) - frame.samples.segment(cfg.N, cfg.Ng)).cwiseAbs().maxCoeff();
}

double energy(const CVectorXd& v) { return v.squaredNorm(); }

}  // namespace hrsync
