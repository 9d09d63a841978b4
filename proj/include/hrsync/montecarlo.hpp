#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "hrsync/baselines.hpp"
#include "hrsync/esprit2d.hpp"
#include "hrsync/channel.hpp"
#include "hrsync/ofdm.hpp"
#include "hrsync/rx_frontend.hpp"
#include "hrsync/sync.hpp"

namespace hrsync {

enum class Method { Esprit2d = 0, Beek = 1, Minn = 2, Pss = 3 };
inline constexpr std::array<Method, 4> kAllMethods{Method::Esprit2d, Method::Beek, Method::Minn,
                                                  Method::Pss};

std::string_view method_name(Method m);
Method parse_method(std::string_view name);

struct SweepConfig {
  OfdmConfig ofdm{};
  EspritConfig esprit{};
  std::vector<double> snr_db = default_snr_grid();
  int trials = 2000;
  double eps_lo = 0.2;
  double eps_hi = 0.25;
  int p_true = 2;
  std::uint64_t master_seed = 1;
  std::vector<Method> methods{kAllMethods.begin(), kAllMethods.end()};
  std::vector<int> ell_candidates{0};
  MinnConfig minn{};
  PssConfig pss{};
  int beek_window = 0;
  /// Test mode: inject no noise regardless of the SNR label.
  bool noiseless = false;
  int jobs = 1;

  /// -10, -9, ..., 20 dB
  static std::vector<double> default_snr_grid();
  void validate() const;
};

struct MethodOutcome {
  bool ran = false;
  bool ok = false;
  bool low_confidence = false;
  double eps_hat = 0.0;
  int p_hat = 0;
  double cfo_err2 = 0.0;
  double sto_err2 = 0.0;
  std::string failure;
};

struct TrialOutcome {
  double eps_true = 0.0;
  std::array<MethodOutcome, 4> methods{};

  const MethodOutcome& operator[](Method m) const { return methods[static_cast<std::size_t>(m)]; }
};

struct EspritRun {
  EspritResult<double> esprit;
  SyncEstimate sync;
};

/// Pilot frames -> impairments -> noise (unit draws scaled by sqrt(N0)) ->
/// grid -> 2-D ESPRIT -> (eps, p). Throws EstimationError on estimator failure.
EspritRun esprit_chain(const SweepConfig& cfg, const std::vector<TimeFrame>& pilots, double eps,
                       double N0, Rng& rng);

/// One diagnostic run at a fixed CFO, seeded by (master_seed, 0).
struct SimulationReport {
  double eps_true = 0.0;
  CfoSplit split;
  int p_true = 0;
  double snr_db = 0.0;
  double N0 = 0.0;
  ModeParams truth;
  EspritRun run;
};

SimulationReport simulate_once(const SweepConfig& cfg, double eps, double snr_db);

/// Draws the trial's CFO from (master_seed, trial_index) alone.
double draw_epsilon(const SweepConfig& cfg, std::uint64_t trial_index);

/// Caches per-configuration state (pilot frames, preambles, PSS receiver) so
/// many trials can share it. Const member functions are safe to call concurrently.
class TrialRunner {
 public:
  explicit TrialRunner(SweepConfig cfg);

  TrialOutcome run(double snr_db, std::uint64_t trial_index) const;
  double noise_power(double snr_db) const;
  const SweepConfig& config() const { return cfg_; }

 private:
  MethodOutcome run_esprit(double eps, double N0, std::uint64_t trial_index) const;
  MethodOutcome run_baseline(Method m, double eps, double N0, std::uint64_t trial_index) const;

  SweepConfig cfg_;
  std::vector<TimeFrame> pilots_;
  TimeFrame minn_frame_;
  std::optional<PssReceiver> pss_rx_;
  TimeFrame pss_frame_;
};

TrialOutcome run_trial(const SweepConfig& cfg, double snr_db, std::uint64_t trial_index);

struct SweepCell {
  double snr_db = 0.0;
  Method method = Method::Esprit2d;
  MseStat cfo;
  MseStat sto;
  int trials_ok = 0;
  int trials_failed = 0;  ///< estimator errors plus low-confidence trials
  int low_confidence = 0;
  int exact_p = 0;        ///< ok trials with p_hat == p

  double cfo_lo() const { return cfo.mse - 2.0 * cfo.se; }
  double cfo_hi() const { return cfo.mse + 2.0 * cfo.se; }
  double sto_lo() const { return sto.mse - 2.0 * sto.se; }
  double sto_hi() const { return sto.mse + 2.0 * sto.se; }
};

struct CrlbRow {
  double snr_db = 0.0;
  double crlb_eps = 0.0;
  double crlb_p = 0.0;
};

struct SweepResult {
  SweepConfig config;
  std::vector<SweepCell> cells;  ///< snr-major, methods in config order
  std::vector<CrlbRow> crlb;
  double wall_seconds = 0.0;

  const SweepCell& cell(double snr_db, Method m) const;
};

SweepResult run_sweep(const SweepConfig& cfg);

/// Mean CRLB in (eps, p) units over the trials' CFO draws, lambda from the mode coefficient.
CrlbRow sweep_crlb(const SweepConfig& cfg, double snr_db);

// --- flop counts --------------------------------------------------------------

struct ComplexityParams {
  int N = 64;
  int Ng = 16;
  int M = 2;
  int P = 2;
  int Q = 2;
  int G = 500;
  int D = 4;
  int K_pss = 4;
};

struct ComplexityRow {
  std::string method;
  std::string formula;
  long long evaluated = 0;
  long long printed = 0;
  bool match = false;
};

struct ComplexityReport {
  long long L = 0;
  long long K = 0;
  std::vector<ComplexityRow> rows;
};

ComplexityReport complexity_report(const ComplexityParams& p);

}  // namespace hrsync
