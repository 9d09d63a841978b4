#pragma once

#include "hrsync/channel.hpp"
#include "hrsync/ofdm.hpp"

namespace hrsync {

/// Timing/CFO pair returned by the comparison estimators. theta is the index
/// of the first cyclic-prefix sample of the frame of interest in the stream.
struct BaselineEstimate {
  int theta_hat = 0;
  double eps_hat = 0.0;
  double metric = 0.0;
};

// --- transmit signals ------------------------------------------------------

/// Random unit-modulus QPSK on every subcarrier; body energy 1.
TimeFrame random_data_frame(const OfdmConfig& cfg, Rng& rng);

/// Places `frame` at sample `offset` between random data frames and returns
/// exactly `length` samples. Needs 0 <= offset <= Nt.
CVectorXd embed_in_stream(const TimeFrame& frame, int offset, int length, const OfdmConfig& cfg,
                          Rng& rng);

// --- van de Beek: ML timing and CFO from cyclic-prefix correlation ---------

struct BeekConfig {
  double rho = 0.0;      ///< SNR / (SNR + 1), with SNR per time sample; 1 when noiseless
  int search_window = 0; ///< candidate starts [0, window); 0 means Nt
};

/// rho for a stream whose per-sample signal power is Es / N.
double beek_rho(double N0, const OfdmConfig& cfg, double Es = 1.0);

/// Maximizes |gamma(t)| - rho Phi(t) with
///   gamma(t) = sum_{n=t}^{t+Ng-1} r[n] conj(r[n+N]),
///   Phi(t)   = 1/2 sum_{n=t}^{t+Ng-1} |r[n]|^2 + |r[n+N]|^2,
/// and returns eps = -arg(gamma(t_hat)) / (2 pi).
BaselineEstimate beek_estimate(const CVectorXd& rx, const OfdmConfig& cfg, const BeekConfig& bc);

// --- Minn: sign-alternated repeated preamble --------------------------------

struct MinnConfig {
  int D = 4;  ///< repeated parts of length N / D
  int search_window = 0;
};

/// Preamble body of D equal parts with signs b = [+ ... + - +] (part D-2
/// negated), e.g. [A A -A A] for D = 4, plus cyclic prefix; body energy 1.
TimeFrame minn_preamble(const OfdmConfig& cfg, const MinnConfig& mc);

/// Minn timing metric at body start d: |P(d)|^2 / R(d)^2 with
///   P(d) = sum_{k=0}^{D-2} b_k b_{k+1} sum_m conj(r[d + kL + m]) r[d + (k+1)L + m]
///   R(d) = sum_{k=0}^{D-2} sum_m |r[d + (k+1)L + m]|^2,   L = N / D.
double minn_metric(const CVectorXd& rx, int d, const OfdmConfig& cfg, const MinnConfig& mc);

BaselineEstimate minn_estimate(const CVectorXd& rx, const OfdmConfig& cfg, const MinnConfig& mc);

// --- PSS: Zadoff-Chu cross-correlation over a CFO grid ----------------------

struct PssConfig {
  int G = 500;
  int zc_root = 25;
  int zc_length = 63;
  double cfo_lo = -0.5;
  double cfo_hi = 0.5;
  int search_window = 0;
};

CVectorXd zadoff_chu(int root, int length);

/// ZC sequence on subcarriers 0..zc_length-1, remaining subcarriers zero,
/// scaled to body energy 1.
TimeFrame pss_frame(const OfdmConfig& cfg, const PssConfig& pc);

/// Holds the local replica and the CFO de-rotation table for repeated use.
class PssReceiver {
 public:
  PssReceiver(const OfdmConfig& cfg, const PssConfig& pc);

  /// argmax over (timing, grid CFO) of |sum_n r[t + Ng + n] conj(s[n]) e^{-i 2 pi eps_g n / N}|.
  BaselineEstimate estimate(const CVectorXd& rx) const;

  double grid_point(int g) const;
  double grid_step() const;

 private:
  OfdmConfig cfg_;
  PssConfig pc_;
  CVectorXd replica_conj_;
  CMatrixXd derotate_;  ///< G x N
};

BaselineEstimate pss_estimate(const CVectorXd& rx, const PssConfig& pc, const OfdmConfig& cfg);

/// Stream length each estimator needs for its search window.
int beek_stream_length(const OfdmConfig& cfg, const BeekConfig& bc);
int minn_stream_length(const OfdmConfig& cfg, const MinnConfig& mc);
int pss_stream_length(const OfdmConfig& cfg, const PssConfig& pc);

}  // namespace hrsync
