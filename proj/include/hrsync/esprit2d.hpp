#pragma once

// 2-D ESPRIT for a small number of undamped 2-D harmonics sampled on an M x N grid.
//
// The grid is embedded into a block-Hankel matrix (P x Q observation window),
// extended with its conjugate-reversed copy, and the dominant left singular
// vectors are used for two shift-invariance equations: one across Hankel blocks
// (the m axis) and one inside each block (the k axis). Both operators come from
// the same subspace so a single eigenvector basis diagonalizes them jointly.

#include <algorithm>
#include <sstream>
#include <string>
#include <vector>

#include <Eigen/Eigenvalues>
#include <Eigen/LU>
#include <Eigen/SVD>

#include "hrsync/types.hpp"

namespace hrsync {

enum class InvarianceSolver { LeastSquares, TotalLeastSquares };
enum class ShiftAxis { M, K };

struct EspritConfig {
  int P = 2;
  int Q = 2;
  double beta = 8.0;
  InvarianceSolver solver = InvarianceSolver::TotalLeastSquares;
  int order = 1;
  /// sigma_{r+1} / sigma_r above this marks the estimate low-confidence.
  double confidence_ratio = 0.99;
  /// Largest accepted condition number of the pairing eigenvector matrix.
  double max_condition = 1e10;
};

template <typename Real>
struct HankelEmbedding {
  CMatrix<Real> Re;   ///< PQ x (M-P+1)(N-Q+1)
  CMatrix<Real> Ree;  ///< PQ x 2(M-P+1)(N-Q+1)
  int P = 0;
  int Q = 0;
};

template <typename Real>
struct SignalSubspace {
  CMatrix<Real> U;                 ///< PQ x r, orthonormal columns
  RVector<Real> singular_values;  ///< all singular values of Ree, descending
};

struct FrequencyPair {
  double f1 = 0.0;  ///< [0, 1)
  double f2 = 0.0;  ///< (-0.5, 0.5]
};

struct PairingResult {
  std::vector<FrequencyPair> modes;
  double condition = 1.0;
};

template <typename Real>
struct EspritResult {
  std::vector<FrequencyPair> modes;
  RVector<Real> singular_values;
  double condition = 1.0;
  bool low_confidence = false;
};

inline void validate_window(Index M, Index N, int P, int Q) {
  auto fail = [](const std::string& what) { throw ConfigError("window size: " + what); };
  if (!(P >= 1 && P <= M))
    fail("M >= P >= 1 violated (M=" + std::to_string(M) + ", P=" + std::to_string(P) + ")");
  if (!(Q >= 1 && Q <= N))
    fail("N >= Q >= 1 violated (N=" + std::to_string(N) + ", Q=" + std::to_string(Q) + ")");
}

/// Largest model order both invariance equations can support.
inline int max_model_order(int P, int Q) { return std::min((P - 1) * Q, P * (Q - 1)); }

/// Anti-diagonal exchange matrix.
template <typename Real>
CMatrix<Real> exchange_matrix(Index n) {
  CMatrix<Real> pi = CMatrix<Real>::Zero(n, n);
  for (Index i = 0; i < n; ++i) pi(i, n - 1 - i) = Complex<Real>(1);
  return pi;
}

/// [Re, Pi conj(Re) Pi]
template <typename Derived>
auto forward_backward(const Eigen::MatrixBase<Derived>& Re) {
  using Scalar = typename Derived::Scalar;
  Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> out(Re.rows(), 2 * Re.cols());
  out << Re, Re.conjugate().reverse();
  return out;
}

/// Block (a, b) of Re is the Q x (N-Q+1) Hankel matrix of grid row a + b.
template <typename Derived>
auto hankel_block_embed(const Eigen::MatrixBase<Derived>& grid, int P, int Q) {
  using Real = typename Derived::Scalar::value_type;
  const Index M = grid.rows();
  const Index N = grid.cols();
  validate_window(M, N, P, Q);
  const Index block_cols = N - Q + 1;
  const Index blocks = M - P + 1;

  HankelEmbedding<Real> emb;
  emb.P = P;
  emb.Q = Q;
  emb.Re.resize(static_cast<Index>(P) * Q, blocks * block_cols);
  for (int a = 0; a < P; ++a)
    for (Index b = 0; b < blocks; ++b)
      for (int q = 0; q < Q; ++q)
        emb.Re.row(static_cast<Index>(a) * Q + q).segment(b * block_cols, block_cols) =
            grid.row(a + b).segment(q, block_cols);
  emb.Ree = forward_backward(emb.Re);
  return emb;
}

template <typename Derived>
auto signal_subspace(const Eigen::MatrixBase<Derived>& Ree, int r) {
  using Real = typename Derived::Scalar::value_type;
  if (r < 1 || r > std::min(Ree.rows(), Ree.cols()))
    throw ConfigError("model order " + std::to_string(r) + " exceeds the embedding dimensions");
  Eigen::JacobiSVD<CMatrix<Real>> svd(Ree.eval(), Eigen::ComputeThinU);
  SignalSubspace<Real> out;
  out.U = svd.matrixU().leftCols(r);
  out.singular_values = svd.singularValues();
  return out;
}

namespace detail {

template <typename Real>
CMatrix<Real> select_rows(const CMatrix<Real>& U, const std::vector<Index>& rows) {
  CMatrix<Real> out(static_cast<Index>(rows.size()), U.cols());
  for (std::size_t i = 0; i < rows.size(); ++i) out.row(static_cast<Index>(i)) = U.row(rows[i]);
  return out;
}

inline const char* axis_name(ShiftAxis axis) { return axis == ShiftAxis::M ? "m-shift" : "k-shift"; }

}  // namespace detail

/// Solves U_lo F ~= U_hi for the selected axis.
///   m-shift: U_lo / U_hi are the first / last (P-1)Q rows.
///   k-shift: inside every block, rows 0..Q-2 / 1..Q-1.
template <typename Derived>
auto shift_invariance_operator(const Eigen::MatrixBase<Derived>& Us, int P, int Q, ShiftAxis axis,
                               InvarianceSolver solver) {
  using Real = typename Derived::Scalar::value_type;
  using Mat = CMatrix<Real>;
  const Index r = Us.cols();
  if (Us.rows() != static_cast<Index>(P) * Q)
    throw ConfigError("subspace has " + std::to_string(Us.rows()) + " rows, expected PQ=" +
                      std::to_string(P * Q));
  if (axis == ShiftAxis::M && P < 2) throw ConfigError("m-shift invariance needs P >= 2");
  if (axis == ShiftAxis::K && Q < 2) throw ConfigError("k-shift invariance needs Q >= 2");

  std::vector<Index> lo, hi;
  if (axis == ShiftAxis::M) {
    for (Index i = 0; i < static_cast<Index>(P - 1) * Q; ++i) {
      lo.push_back(i);
      hi.push_back(i + Q);
    }
  } else {
    for (int a = 0; a < P; ++a)
      for (int q = 0; q + 1 < Q; ++q) {
        lo.push_back(static_cast<Index>(a) * Q + q);
        hi.push_back(static_cast<Index>(a) * Q + q + 1);
      }
  }
  const Mat U = Us;
  const Mat U_lo = detail::select_rows(U, lo);
  const Mat U_hi = detail::select_rows(U, hi);

  const std::string name = detail::axis_name(axis);
  if (U_lo.rows() < r)
    throw EstimationError(name + " selection has " + std::to_string(U_lo.rows()) +
                          " rows for model order " + std::to_string(r));
  Eigen::JacobiSVD<Mat> lo_svd(U_lo, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const auto& sv = lo_svd.singularValues();
  if (sv(r - 1) <= Real(1e-10) * std::max(Real(1), sv(0)))
    throw EstimationError(name + " selection is rank deficient");

  if (solver == InvarianceSolver::LeastSquares) return Mat(lo_svd.solve(U_hi));

  Mat stacked(U_lo.rows(), 2 * r);
  stacked << U_lo, U_hi;
  Eigen::JacobiSVD<Mat> tls(stacked, Eigen::ComputeFullV);
  const Mat V = tls.matrixV();
  const Mat V12 = V.topRightCorner(r, r);
  const Mat V22 = V.bottomRightCorner(r, r);
  Eigen::FullPivLU<Mat> lu(V22);
  if (!lu.isInvertible()) throw EstimationError(name + " total least squares is degenerate");
  return Mat(-V12 * lu.inverse());
}

/// Eigendecomposes beta F1 + (1 - beta) F2 = T S T^-1 and reads paired
/// frequencies off the diagonals of T^-1 F1 T and T^-1 F2 T.
template <typename D1, typename D2>
PairingResult pair_and_extract(const Eigen::MatrixBase<D1>& F1, const Eigen::MatrixBase<D2>& F2,
                               double beta, double max_condition = 1e10) {
  using Real = typename D1::Scalar::value_type;
  using Mat = CMatrix<Real>;
  if (F1.rows() != F1.cols() || F1.rows() != F2.rows() || F2.rows() != F2.cols())
    throw ConfigError("pairing needs two square operators of equal size");
  const Index r = F1.rows();
  const Mat A = Real(beta) * F1 + (Real(1) - Real(beta)) * F2;

  Eigen::ComplexEigenSolver<Mat> eig(A);
  if (eig.info() != Eigen::Success) throw EstimationError("pairing eigendecomposition failed");
  const Mat T = eig.eigenvectors();

  const auto tsv = Eigen::JacobiSVD<Mat>(T).singularValues();
  const double cond = tsv(r - 1) > Real(0) ? double(tsv(0) / tsv(r - 1)) : INFINITY;
  if (!(cond <= max_condition)) {
    std::ostringstream msg;
    msg << "pairing basis is ill-conditioned (cond(T) = " << cond << ")";
    throw EstimationError(msg.str());
  }

  Eigen::PartialPivLU<Mat> lu(T);
  const Mat D1m = lu.solve(Mat(F1 * T));
  const Mat D2m = lu.solve(Mat(F2 * T));

  PairingResult out;
  out.condition = cond;
  for (Index i = 0; i < r; ++i) {
    const double a1 = double(std::arg(D1m(i, i))) / kTwoPi;
    const double a2 = double(std::arg(D2m(i, i))) / kTwoPi;
    out.modes.push_back({wrap_unit(a1), wrap_half(a2)});
  }
  std::sort(out.modes.begin(), out.modes.end(),
            [](const FrequencyPair& x, const FrequencyPair& y) {
              return x.f1 != y.f1 ? x.f1 < y.f1 : x.f2 < y.f2;
            });
  return out;
}

template <typename Derived>
auto esprit_2d(const Eigen::MatrixBase<Derived>& grid, const EspritConfig& cfg) {
  using Real = typename Derived::Scalar::value_type;
  if (cfg.P < 2 || cfg.Q < 2) throw ConfigError("2-D ESPRIT needs P >= 2 and Q >= 2");
  if (cfg.order < 1 || cfg.order > max_model_order(cfg.P, cfg.Q))
    throw ConfigError("model order " + std::to_string(cfg.order) +
                      " exceeds what a " + std::to_string(cfg.P) + "x" + std::to_string(cfg.Q) +
                      " window supports");

  const auto emb = hankel_block_embed(grid, cfg.P, cfg.Q);
  const auto sub = signal_subspace(emb.Ree, cfg.order);
  const auto F1 = shift_invariance_operator(sub.U, cfg.P, cfg.Q, ShiftAxis::M, cfg.solver);
  const auto F2 = shift_invariance_operator(sub.U, cfg.P, cfg.Q, ShiftAxis::K, cfg.solver);
  const PairingResult paired = pair_and_extract(F1, F2, cfg.beta, cfg.max_condition);

  EspritResult<Real> out;
  out.modes = paired.modes;
  out.condition = paired.condition;
  out.singular_values = sub.singular_values;
  const Index r = cfg.order;
  if (sub.singular_values.size() > r) {
    const Real top = sub.singular_values(r - 1);
    out.low_confidence = top <= Real(0) || sub.singular_values(r) / top > Real(cfg.confidence_ratio);
  }
  return out;
}

}  // namespace hrsync
