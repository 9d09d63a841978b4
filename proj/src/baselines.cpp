#include "hrsync/baselines.hpp"

#include <cmath>
#include <numeric>
#include <string>

namespace hrsync {

namespace {

int window_or_default(int window, const OfdmConfig& cfg) {
  if (window < 0) throw ConfigError("search window must be non-negative");
  return window == 0 ? cfg.Nt() : window;
}

void require_length(const CVectorXd& rx, int needed, const char* who) {
  if (rx.size() < needed)
    throw ConfigError(std::string(who) + ": stream has " + std::to_string(rx.size()) +
                      " samples, needs " + std::to_string(needed));
}

cd qpsk(Rng& rng) {
  static constexpr double h = 0.70710678118654752440;
  const auto bits = rng() & 3u;
  return {(bits & 1u) ? h : -h, (bits & 2u) ? h : -h};
}

}  // namespace

TimeFrame random_data_frame(const OfdmConfig& cfg, Rng& rng) {
  CVectorXd X(cfg.N);
  for (Index k = 0; k < cfg.N; ++k) X[k] = qpsk(rng);
  return idft_modulate(X, cfg);
}

CVectorXd embed_in_stream(const TimeFrame& frame, int offset, int length, const OfdmConfig& cfg,
                          Rng& rng) {
  const int Nt = cfg.Nt();
  if (offset < 0 || offset > Nt)
    throw ConfigError("frame offset " + std::to_string(offset) + " outside [0, Nt]");
  if (frame.samples.size() != Nt) throw ConfigError("frame length does not match Nt");
  const int lead = Nt - offset;
  const int total = lead + length;
  const int frames = 1 + (total + Nt - 1) / Nt;

  CVectorXd all(static_cast<Index>(frames) * Nt);
  all.head(Nt) = random_data_frame(cfg, rng).samples;
  all.segment(Nt, Nt) = frame.samples;
  for (int f = 2; f < frames; ++f) all.segment(static_cast<Index>(f) * Nt, Nt) = random_data_frame(cfg, rng).samples;
  return all.segment(lead, length);
}

// --- Beek ---------------------------------------------------------------------

double beek_rho(double N0, const OfdmConfig& cfg, double Es) {
  const double signal = Es / cfg.N;
  return signal / (signal + N0);
}

int beek_stream_length(const OfdmConfig& cfg, const BeekConfig& bc) {
  return window_or_default(bc.search_window, cfg) + cfg.Nt() - 1;
}

BaselineEstimate beek_estimate(const CVectorXd& rx, const OfdmConfig& cfg, const BeekConfig& bc) {
  cfg.validate();
  if (!(bc.rho >= 0.0 && bc.rho <= 1.0)) throw ConfigError("Beek rho must lie in [0, 1]");
  if (cfg.Ng < 1) throw ConfigError("Beek's estimator needs a cyclic prefix");
  const int W = window_or_default(bc.search_window, cfg);
  require_length(rx, beek_stream_length(cfg, bc), "beek_estimate");

  BaselineEstimate best;
  best.metric = -INFINITY;
  cd best_gamma{};
  for (int t = 0; t < W; ++t) {
    cd gamma{};
    double phi = 0.0;
    for (int n = t; n < t + cfg.Ng; ++n) {
      gamma += rx[n] * std::conj(rx[n + cfg.N]);
      phi += std::norm(rx[n]) + std::norm(rx[n + cfg.N]);
    }
    const double metric = std::abs(gamma) - bc.rho * 0.5 * phi;
    if (metric > best.metric) {
      best.metric = metric;
      best.theta_hat = t;
      best_gamma = gamma;
    }
  }
  best.eps_hat = -std::arg(best_gamma) / kTwoPi;
  return best;
}

// --- Minn -----------------------------------------------------------------------

namespace {

double minn_sign(int part, const MinnConfig& mc) { return part == mc.D - 2 ? -1.0 : 1.0; }

void check_minn(const OfdmConfig& cfg, const MinnConfig& mc) {
  if (mc.D < 2) throw ConfigError("Minn needs D >= 2 parts");
  if (cfg.N % mc.D != 0)
    throw ConfigError("Minn needs N mod D == 0 (N=" + std::to_string(cfg.N) +
                      ", D=" + std::to_string(mc.D) + ")");
}

}  // namespace

TimeFrame minn_preamble(const OfdmConfig& cfg, const MinnConfig& mc) {
  cfg.validate();
  check_minn(cfg, mc);
  const int L = cfg.N / mc.D;
  // fixed pseudo-random part, identical for every call
  Rng rng(0x4d696e6eULL);
  CVectorXd part(L);
  for (Index i = 0; i < L; ++i) part[i] = qpsk(rng);

  CVectorXd body(cfg.N);
  for (int q = 0; q < mc.D; ++q) body.segment(static_cast<Index>(q) * L, L) = minn_sign(q, mc) * part;
  body /= body.norm();

  TimeFrame frame;
  frame.samples.resize(cfg.Nt());
  frame.samples.head(cfg.Ng) = body.tail(cfg.Ng);
  frame.samples.tail(cfg.N) = body;
  return frame;
}

int minn_stream_length(const OfdmConfig& cfg, const MinnConfig& mc) {
  return window_or_default(mc.search_window, cfg) + cfg.Nt() - 1;
}

namespace {

/// Sign-weighted correlation of adjacent parts and the energy of the later parts.
std::pair<cd, double> minn_correlation(const CVectorXd& rx, int d, const OfdmConfig& cfg,
                                       const MinnConfig& mc) {
  const int L = cfg.N / mc.D;
  cd P{};
  double R = 0.0;
  for (int k = 0; k + 1 < mc.D; ++k) {
    const double w = minn_sign(k, mc) * minn_sign(k + 1, mc);
    for (int m = 0; m < L; ++m) {
      const cd a = rx[d + k * L + m];
      const cd b = rx[d + (k + 1) * L + m];
      P += w * std::conj(a) * b;
      R += std::norm(b);
    }
  }
  return {P, R};
}

}  // namespace

double minn_metric(const CVectorXd& rx, int d, const OfdmConfig& cfg, const MinnConfig& mc) {
  check_minn(cfg, mc);
  if (d < 0 || d + cfg.N > rx.size()) throw ConfigError("minn_metric: window outside the stream");
  const auto [P, R] = minn_correlation(rx, d, cfg, mc);
  return R > 0.0 ? std::norm(P) / (R * R) : 0.0;
}

BaselineEstimate minn_estimate(const CVectorXd& rx, const OfdmConfig& cfg, const MinnConfig& mc) {
  cfg.validate();
  check_minn(cfg, mc);
  const int W = window_or_default(mc.search_window, cfg);
  require_length(rx, minn_stream_length(cfg, mc), "minn_estimate");

  BaselineEstimate best;
  best.metric = -INFINITY;
  for (int t = 0; t < W; ++t) {
    const double metric = minn_metric(rx, t + cfg.Ng, cfg, mc);
    if (metric > best.metric) {
      best.metric = metric;
      best.theta_hat = t;
    }
  }
  const cd P = minn_correlation(rx, best.theta_hat + cfg.Ng, cfg, mc).first;
  // adjacent parts are N / D samples apart
  best.eps_hat = std::arg(P) * mc.D / kTwoPi;
  return best;
}

// --- PSS ------------------------------------------------------------------------

CVectorXd zadoff_chu(int root, int length) {
  if (length < 1) throw ConfigError("Zadoff-Chu length must be positive");
  if (std::gcd(root, length) != 1)
    throw ConfigError("Zadoff-Chu root " + std::to_string(root) + " is not coprime with length " +
                      std::to_string(length));
  CVectorXd zc(length);
  const double cf = length % 2;
  for (int n = 0; n < length; ++n) {
    const double num = static_cast<double>(root) * n * (n + cf);
    // reduce modulo 2 * length to keep the phase argument small
    const double red = std::fmod(num, 2.0 * length);
    zc[n] = std::polar(1.0, -std::numbers::pi * red / length);
  }
  return zc;
}

TimeFrame pss_frame(const OfdmConfig& cfg, const PssConfig& pc) {
  cfg.validate();
  if (pc.zc_length > cfg.N) throw ConfigError("Zadoff-Chu length exceeds N");
  CVectorXd X = CVectorXd::Zero(cfg.N);
  X.head(pc.zc_length) = zadoff_chu(pc.zc_root, pc.zc_length);
  // body energy = |X|^2 / N
  X *= std::sqrt(static_cast<double>(cfg.N) / pc.zc_length);
  return idft_modulate(X, cfg);
}

int pss_stream_length(const OfdmConfig& cfg, const PssConfig& pc) {
  return window_or_default(pc.search_window, cfg) + cfg.Nt() - 1;
}

PssReceiver::PssReceiver(const OfdmConfig& cfg, const PssConfig& pc) : cfg_(cfg), pc_(pc) {
  if (pc.G < 2) throw ConfigError("PSS CFO grid needs G >= 2");
  if (!(pc.cfo_hi > pc.cfo_lo)) throw ConfigError("PSS CFO range is empty");
  replica_conj_ = strip_cp(pss_frame(cfg, pc), cfg).conjugate();
  derotate_.resize(pc.G, cfg.N);
  for (int g = 0; g < pc.G; ++g) {
    const cd step = cis2pi(-grid_point(g) / cfg.N);
    cd w{1.0, 0.0};
    for (int n = 0; n < cfg.N; ++n) {
      derotate_(g, n) = w;
      w *= step;
    }
  }
}

double PssReceiver::grid_step() const { return (pc_.cfo_hi - pc_.cfo_lo) / (pc_.G - 1); }

double PssReceiver::grid_point(int g) const { return pc_.cfo_lo + g * grid_step(); }

BaselineEstimate PssReceiver::estimate(const CVectorXd& rx) const {
  const int W = window_or_default(pc_.search_window, cfg_);
  require_length(rx, pss_stream_length(cfg_, pc_), "pss_estimate");
  CMatrixXd Y(cfg_.N, W);
  for (int t = 0; t < W; ++t)
    Y.col(t) = rx.segment(t + cfg_.Ng, cfg_.N).cwiseProduct(replica_conj_);
  const Eigen::MatrixXd corr = (derotate_ * Y).cwiseAbs2();

  Index g = 0, t = 0;
  BaselineEstimate out;
  out.metric = std::sqrt(corr.maxCoeff(&g, &t));
  out.theta_hat = static_cast<int>(t);
  out.eps_hat = grid_point(static_cast<int>(g));
  return out;
}

BaselineEstimate pss_estimate(const CVectorXd& rx, const PssConfig& pc, const OfdmConfig& cfg) {
  return PssReceiver(cfg, pc).estimate(rx);
}

}  // namespace hrsync
