#pragma once

#include <vector>

#include "hrsync/ofdm.hpp"

namespace hrsync {

/// Post-DFT samples R[m, k]; row m is frame m, column k is subcarrier k.
struct FrameGrid {
  CMatrixXd values;

  Index M() const { return values.rows(); }
  Index N() const { return values.cols(); }
};

/// The single 2-D harmonic c * exp(i 2 pi (f1 m + f2 k)).
struct ModeParams {
  double f1 = 0.0;  ///< cycles per frame, in [0, 1)
  double f2 = 0.0;  ///< cycles per subcarrier, in (-0.5, 0.5]
  cd c{1.0, 0.0};
  double psi = 0.0;  ///< phase term carried inside c (radians)

  double lambda() const { return std::abs(c); }
  double varphi() const { return std::arg(c); }
};

/// Strips the prefix from each frame and stacks their DFTs as grid rows.
FrameGrid receive_grid(const std::vector<TimeFrame>& frames, const OfdmConfig& cfg);

/// sin(pi x) / (N sin(pi x / N)), continuous across its removable singularities.
double dirichlet(double x, int N);

/// psi = 2 pi [(eps_frac + ell) alpha + ell p / N + eps_frac (N - 1) / (2N)]
double mode_phase(double eps_frac, int ell, int p, const OfdmConfig& cfg);

/// c = e^{i psi} X sum_r D(eps_frac - r) exp(i 2 pi r ((1 - N) / 2N + p / N)).
cd mode_coefficient(double eps_frac, int ell, int p, cd X, const OfdmConfig& cfg);

/// Forward map from synchronization parameters to the harmonic mode:
/// f1 = eps_frac (1 + alpha) + ell alpha, f2 = -p / N, both wrapped.
ModeParams mode_from_sync(double epsilon, int p, cd X, const OfdmConfig& cfg);

FrameGrid closed_form_grid(const ModeParams& mode, Index M, Index N);

}  // namespace hrsync
