#include "hrsync/montecarlo.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <string>
#include <thread>

#include "hrsync/channel.hpp"
#include "hrsync/crlb.hpp"
#include "hrsync/rx_frontend.hpp"

namespace hrsync {

namespace {

constexpr std::uint64_t kMethodSalt = 0x9e3779b97f4a7c15ULL;

Rng method_rng(const SweepConfig& cfg, Method m, std::uint64_t trial_index) {
  const auto salt = kMethodSalt * (static_cast<std::uint64_t>(m) + 1);
  return make_rng({cfg.master_seed ^ salt, trial_index});
}

}  // namespace

std::string_view method_name(Method m) {
  switch (m) {
    case Method::Esprit2d: return "esprit2d";
    case Method::Beek: return "beek";
    case Method::Minn: return "minn";
    case Method::Pss: return "pss";
  }
  return "unknown";
}

Method parse_method(std::string_view name) {
  for (Method m : kAllMethods)
    if (method_name(m) == name) return m;
  throw ConfigError("unknown method '" + std::string(name) + "' (expected esprit2d, beek, minn, pss)");
}

std::vector<double> SweepConfig::default_snr_grid() {
  std::vector<double> grid;
  for (int s = -10; s <= 20; ++s) grid.push_back(s);
  return grid;
}

void SweepConfig::validate() const {
  ofdm.validate();
  if (ofdm.M < 1) throw ConfigError("need at least one pilot frame");
  validate_window(ofdm.M, ofdm.N, esprit.P, esprit.Q);
  if (esprit.P < 2 || esprit.Q < 2) throw ConfigError("2-D ESPRIT needs P >= 2 and Q >= 2");
  if (trials < 1) throw ConfigError("trials must be positive");
  if (!(eps_hi >= eps_lo)) throw ConfigError("eps range must satisfy lo <= hi");
  if (p_true < 0 || p_true >= ofdm.N)
    throw ConfigError("p=" + std::to_string(p_true) + " outside [0, " + std::to_string(ofdm.N) + ")");
  if (snr_db.empty()) throw ConfigError("SNR grid is empty");
  if (methods.empty()) throw ConfigError("no methods selected");
  if (ell_candidates.empty()) throw ConfigError("integer CFO candidate set is empty");
  if (jobs < 1) throw ConfigError("jobs must be >= 1");
}

double draw_epsilon(const SweepConfig& cfg, std::uint64_t trial_index) {
  Rng rng = make_rng({cfg.master_seed, trial_index});
  std::uniform_real_distribution<double> uni(cfg.eps_lo, cfg.eps_hi);
  return cfg.eps_hi > cfg.eps_lo ? uni(rng) : cfg.eps_lo;
}

TrialRunner::TrialRunner(SweepConfig cfg) : cfg_(std::move(cfg)) {
  cfg_.validate();
  pilots_ = make_pilot_frames(PilotSpec{}, cfg_.ofdm);
  const auto uses = [&](Method m) {
    return std::find(cfg_.methods.begin(), cfg_.methods.end(), m) != cfg_.methods.end();
  };
  if (uses(Method::Minn)) minn_frame_ = minn_preamble(cfg_.ofdm, cfg_.minn);
  if (uses(Method::Pss)) {
    pss_rx_.emplace(cfg_.ofdm, cfg_.pss);
    pss_frame_ = pss_frame(cfg_.ofdm, cfg_.pss);
  }
}

double TrialRunner::noise_power(double snr_db) const {
  return cfg_.noiseless ? 0.0 : noise_power_from_snr_db(snr_db);
}

EspritRun esprit_chain(const SweepConfig& cfg, const std::vector<TimeFrame>& pilots, double eps,
                       double N0, Rng& rng) {
  const OfdmConfig& ofdm = cfg.ofdm;
  const ChannelParams ch{eps, cfg.p_true, N0};
  std::vector<TimeFrame> rx;
  rx.reserve(pilots.size());
  for (int m = 0; m < ofdm.M; ++m) {
    TimeFrame frame = apply_impairments(m, pilots, ch, ofdm);
    // unit draws scaled per SNR keep the noise realization common across the grid
    frame.samples += std::sqrt(N0) * complex_normal(ofdm.Nt(), 1.0, rng);
    rx.push_back(std::move(frame));
  }
  const FrameGrid grid = receive_grid(rx, ofdm);
  EspritRun run{esprit_2d(grid.values, cfg.esprit), {}};
  const FrequencyPair& mode = run.esprit.modes.front();
  run.sync = invert_frequencies(mode.f1, mode.f2, ofdm.alpha(), ofdm.N, cfg.ell_candidates);
  run.sync.low_confidence = run.esprit.low_confidence;
  return run;
}

SimulationReport simulate_once(const SweepConfig& cfg, double eps, double snr_db) {
  cfg.validate();
  SimulationReport rep;
  rep.eps_true = eps;
  rep.split = split_cfo(eps);
  rep.p_true = cfg.p_true;
  rep.snr_db = snr_db;
  rep.N0 = cfg.noiseless ? 0.0 : noise_power_from_snr_db(snr_db);
  rep.truth = mode_from_sync(eps, cfg.p_true, PilotSpec{}.X, cfg.ofdm);
  Rng rng = make_rng({cfg.master_seed, 0});
  rep.run = esprit_chain(cfg, make_pilot_frames(PilotSpec{}, cfg.ofdm), eps, rep.N0, rng);
  return rep;
}

MethodOutcome TrialRunner::run_esprit(double eps, double N0, std::uint64_t trial_index) const {
  MethodOutcome out;
  out.ran = true;
  Rng rng = method_rng(cfg_, Method::Esprit2d, trial_index);
  try {
    const EspritRun run = esprit_chain(cfg_, pilots_, eps, N0, rng);
    const SyncEstimate& sync = run.sync;
    out.low_confidence = sync.low_confidence;
    out.ok = !sync.low_confidence;
    out.eps_hat = sync.eps_total_hat;
    out.p_hat = sync.p_hat;
    out.cfo_err2 = (sync.eps_total_hat - eps) * (sync.eps_total_hat - eps);
    out.sto_err2 = double(sync.p_hat - cfg_.p_true) * double(sync.p_hat - cfg_.p_true);
    if (sync.low_confidence) out.failure = "low confidence";
  } catch (const EstimationError& e) {
    out.ok = false;
    out.failure = e.what();
  }
  return out;
}

MethodOutcome TrialRunner::run_baseline(Method m, double eps, double N0,
                                        std::uint64_t trial_index) const {
  MethodOutcome out;
  out.ran = true;
  const OfdmConfig& ofdm = cfg_.ofdm;
  Rng rng = method_rng(cfg_, m, trial_index);

  int length = 0;
  TimeFrame frame;
  switch (m) {
    case Method::Beek:
      length = beek_stream_length(ofdm, BeekConfig{0.0, cfg_.beek_window});
      frame = random_data_frame(ofdm, rng);
      break;
    case Method::Minn:
      length = minn_stream_length(ofdm, cfg_.minn);
      frame = minn_frame_;
      break;
    case Method::Pss:
      length = pss_stream_length(ofdm, cfg_.pss);
      frame = pss_frame_;
      break;
    case Method::Esprit2d:
      throw ConfigError("run_baseline called for esprit2d");
  }
  CVectorXd rx = embed_in_stream(frame, cfg_.p_true, length, ofdm, rng);
  rotate_cfo(rx, eps, ofdm.N);
  rx += std::sqrt(N0) * complex_normal(rx.size(), 1.0, rng);

  BaselineEstimate est;
  switch (m) {
    case Method::Beek:
      est = beek_estimate(rx, ofdm, BeekConfig{beek_rho(N0, ofdm), cfg_.beek_window});
      break;
    case Method::Minn:
      est = minn_estimate(rx, ofdm, cfg_.minn);
      break;
    default:
      est = pss_rx_->estimate(rx);
      break;
  }
  out.ok = true;
  out.eps_hat = est.eps_hat;
  out.p_hat = est.theta_hat;
  out.cfo_err2 = (est.eps_hat - eps) * (est.eps_hat - eps);
  out.sto_err2 = double(est.theta_hat - cfg_.p_true) * double(est.theta_hat - cfg_.p_true);
  return out;
}

TrialOutcome TrialRunner::run(double snr_db, std::uint64_t trial_index) const {
  TrialOutcome out;
  out.eps_true = draw_epsilon(cfg_, trial_index);
  const double N0 = noise_power(snr_db);
  for (Method m : cfg_.methods) {
    auto& slot = out.methods[static_cast<std::size_t>(m)];
    slot = m == Method::Esprit2d ? run_esprit(out.eps_true, N0, trial_index)
                                 : run_baseline(m, out.eps_true, N0, trial_index);
  }
  return out;
}

TrialOutcome run_trial(const SweepConfig& cfg, double snr_db, std::uint64_t trial_index) {
  return TrialRunner(cfg).run(snr_db, trial_index);
}

const SweepCell& SweepResult::cell(double snr_db, Method m) const {
  for (const auto& c : cells)
    if (c.snr_db == snr_db && c.method == m) return c;
  throw ConfigError("no sweep cell for " + std::string(method_name(m)) + " at " +
                    std::to_string(snr_db) + " dB");
}

CrlbRow sweep_crlb(const SweepConfig& cfg, double snr_db) {
  const double N0 = noise_power_from_snr_db(snr_db);
  // the bound scales with 1 / lambda^2, so average that over the CFO draws
  double inv_lambda2 = 0.0;
  for (int t = 0; t < cfg.trials; ++t) {
    const double eps = draw_epsilon(cfg, static_cast<std::uint64_t>(t));
    const CfoSplit s = split_cfo(eps);
    const double lambda = std::abs(mode_coefficient(s.frac, s.ell, cfg.p_true, PilotSpec{}.X, cfg.ofdm));
    inv_lambda2 += 1.0 / (lambda * lambda);
  }
  inv_lambda2 /= cfg.trials;
  const CrlbResult unit = crlb_analytic(cfg.ofdm.M, cfg.ofdm.N, N0, 1.0, cfg.ofdm.alpha());
  return {snr_db, unit.crlb_eps * inv_lambda2, unit.crlb_p * inv_lambda2};
}

SweepResult run_sweep(const SweepConfig& cfg) {
  const auto start = std::chrono::steady_clock::now();
  const TrialRunner runner(cfg);
  SweepResult result;
  result.config = cfg;

  const std::size_t T = static_cast<std::size_t>(cfg.trials);
  std::vector<TrialOutcome> outcomes(T);
  for (double snr : cfg.snr_db) {
    const auto work = [&](std::size_t first, std::size_t stride) {
      for (std::size_t t = first; t < T; t += stride) outcomes[t] = runner.run(snr, t);
    };
    const std::size_t jobs = std::min<std::size_t>(static_cast<std::size_t>(cfg.jobs), T);
    if (jobs <= 1) {
      work(0, 1);
    } else {
      std::vector<std::jthread> pool;
      for (std::size_t j = 0; j < jobs; ++j) pool.emplace_back(work, j, jobs);
    }

    // reduction in trial order
    for (Method m : cfg.methods) {
      SweepCell cell;
      cell.snr_db = snr;
      cell.method = m;
      std::vector<double> cfo, sto;
      for (const auto& o : outcomes) {
        const MethodOutcome& r = o[m];
        if (r.low_confidence) ++cell.low_confidence;
        if (!r.ok) {
          ++cell.trials_failed;
          continue;
        }
        ++cell.trials_ok;
        if (r.p_hat == cfg.p_true) ++cell.exact_p;
        cfo.push_back(r.cfo_err2);
        sto.push_back(r.sto_err2);
      }
      cell.cfo = mse_stat(cfo);
      cell.sto = mse_stat(sto);
      result.cells.push_back(cell);
    }
    result.crlb.push_back(sweep_crlb(cfg, snr));
  }
  result.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return result;
}

}  // namespace hrsync
