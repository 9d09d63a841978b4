#include "hrsync/rx_frontend.hpp"

#include <cmath>
#include <string>

#include "hrsync/channel.hpp"

namespace hrsync {

FrameGrid receive_grid(const std::vector<TimeFrame>& frames, const OfdmConfig& cfg) {
  cfg.validate();
  FrameGrid grid;
  grid.values.resize(static_cast<Index>(frames.size()), cfg.N);
  for (std::size_t m = 0; m < frames.size(); ++m) {
    if (frames[m].samples.size() != cfg.Nt())
      throw ConfigError("frame " + std::to_string(m) + " has length " +
                        std::to_string(frames[m].samples.size()) + ", expected " +
                        std::to_string(cfg.Nt()));
    grid.values.row(static_cast<Index>(m)) =
        dft_demodulate(strip_cp(frames[m], cfg), cfg.N).transpose();
  }
  return grid;
}

double dirichlet(double x, int N) {
  const double den = N * std::sin(std::numbers::pi * x / N);
  if (std::abs(den) < 1e-12 * N) {
    // limit at x = jN is (-1)^{j (N - 1)}
    const long long j = std::llround(x / N);
    return ((j * (N - 1)) % 2 == 0) ? 1.0 : -1.0;
  }
  return std::sin(std::numbers::pi * x) / den;
}

double mode_phase(double eps_frac, int ell, int p, const OfdmConfig& cfg) {
  const double N = cfg.N;
  return kTwoPi * ((eps_frac + ell) * cfg.alpha() + ell * p / N + eps_frac * (N - 1.0) / (2.0 * N));
}

cd mode_coefficient(double eps_frac, int ell, int p, cd X, const OfdmConfig& cfg) {
  if (std::abs(eps_frac) > 0.5) throw ConfigError("fractional CFO must satisfy |eps_frac| <= 0.5");
  const double N = cfg.N;
  const double slope = (1.0 - N) / (2.0 * N) + p / N;
  cd sum{0.0, 0.0};
  for (int r = 0; r < cfg.N; ++r) sum += dirichlet(eps_frac - r, cfg.N) * cis2pi(r * slope);
  return std::polar(1.0, mode_phase(eps_frac, ell, p, cfg)) * X * sum;
}

ModeParams mode_from_sync(double epsilon, int p, cd X, const OfdmConfig& cfg) {
  const CfoSplit split = split_cfo(epsilon);
  ModeParams mode;
  mode.f1 = wrap_unit(split.frac * (1.0 + cfg.alpha()) + split.ell * cfg.alpha());
  mode.f2 = wrap_half(-static_cast<double>(p) / cfg.N);
  mode.psi = mode_phase(split.frac, split.ell, p, cfg);
  mode.c = mode_coefficient(split.frac, split.ell, p, X, cfg);
  return mode;
}

FrameGrid closed_form_grid(const ModeParams& mode, Index M, Index N) {
  FrameGrid grid;
  grid.values.resize(M, N);
  for (Index m = 0; m < M; ++m) {
    const cd row = mode.c * cis2pi(mode.f1 * static_cast<double>(m));
    for (Index k = 0; k < N; ++k) grid.values(m, k) = row * cis2pi(mode.f2 * static_cast<double>(k));
  }
  return grid;
}

}  // namespace hrsync
