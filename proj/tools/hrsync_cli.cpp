// hrsync: joint CFO / frame-misalignment estimation for OFDM links.
//
//   hrsync simulate   [--eps 0.2 --p 2 --snr-db 10 ...]
//   hrsync sweep      [--trials 2000 --snr-db -10:20:1 --out sweep.csv ...]
//   hrsync crlb       [--snr-db -10:20:5 ...]
//   hrsync complexity [--n 64 --g 500 ...]
//
// Every option can also come from --config FILE, either `key = value` lines
// named like the long flags or a JSON sidecar written by `sweep`. Flags
// override the file, the file overrides built-in defaults.

#include <chrono>
#include <ctime>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <list>
#include <map>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "hrsync/montecarlo.hpp"
#include "hrsync/sweep_io.hpp"

using namespace hrsync;

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitRuntime = 3;

using Settings = std::map<std::string, std::string>;

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::string unquote(std::string v) {
  if (v.size() >= 2 && (v.front() == '"' || v.front() == '\'') && v.back() == v.front())
    return v.substr(1, v.size() - 2);
  return v;
}

Settings read_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  const std::string text = buf.str();

  Settings out;
  if (trim(text).rfind('{', 0) == 0) {
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
      throw ConfigError("config file '" + path + "': " + e.what());
    }
    const nlohmann::json& cfg = j.contains("effective_config") ? j["effective_config"] : j;
    for (const auto& [k, v] : cfg.items())
      out[k] = v.is_string() ? v.get<std::string>() : v.dump();
    return out;
  }

  std::istringstream is(text);
  int lineno = 0;
  for (std::string line; std::getline(is, line);) {
    ++lineno;
    line = trim(line.substr(0, line.find('#')));
    if (line.empty() || line.front() == '[') continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError(path + ":" + std::to_string(lineno) + ": expected key = value");
    out[trim(line.substr(0, eq))] = unquote(trim(line.substr(eq + 1)));
  }
  return out;
}

int to_int(const std::string& key, const std::string& v) {
  const auto xs = parse_int_list(v);
  if (xs.size() != 1) throw ConfigError(key + ": expected one integer, got '" + v + "'");
  return xs.front();
}

double to_real(const std::string& key, const std::string& v) {
  const auto xs = parse_snr_grid(v);
  if (xs.size() != 1) throw ConfigError(key + ": expected one number, got '" + v + "'");
  return xs.front();
}

bool to_bool(const std::string& key, const std::string& v) {
  if (v == "true" || v == "1") return true;
  if (v == "false" || v == "0") return false;
  throw ConfigError(key + ": expected true or false, got '" + v + "'");
}

struct Invocation {
  SweepConfig sweep;
  ComplexityParams complexity;
  double eps = 0.2;
  double snr_single = 10.0;
  std::string out;
};

void apply(const std::string& key, const std::string& v, Invocation& inv) {
  SweepConfig& c = inv.sweep;
  if (key == "n") c.ofdm.N = inv.complexity.N = to_int(key, v);
  else if (key == "ng") c.ofdm.Ng = inv.complexity.Ng = to_int(key, v);
  else if (key == "m-frames") c.ofdm.M = inv.complexity.M = to_int(key, v);
  else if (key == "p-window") c.esprit.P = inv.complexity.P = to_int(key, v);
  else if (key == "q-window") c.esprit.Q = inv.complexity.Q = to_int(key, v);
  else if (key == "beta") c.esprit.beta = to_real(key, v);
  else if (key == "solver") {
    if (v == "ls") c.esprit.solver = InvarianceSolver::LeastSquares;
    else if (v == "tls") c.esprit.solver = InvarianceSolver::TotalLeastSquares;
    else throw ConfigError("solver: expected ls or tls, got '" + v + "'");
  } else if (key == "eps") inv.eps = to_real(key, v);
  else if (key == "eps-range") {
    const auto xs = parse_snr_grid(v);
    if (xs.size() != 2) throw ConfigError("eps-range: expected lo,hi, got '" + v + "'");
    c.eps_lo = xs[0];
    c.eps_hi = xs[1];
  } else if (key == "p") c.p_true = to_int(key, v);
  else if (key == "snr-db") {
    c.snr_db = parse_snr_grid(v);
    inv.snr_single = c.snr_db.front();
  } else if (key == "trials") c.trials = to_int(key, v);
  else if (key == "seed") {
    try {
      std::size_t used = 0;
      c.master_seed = std::stoull(v, &used);
      if (used != v.size() || v.front() == '-') throw std::invalid_argument(v);
    } catch (const std::exception&) {
      throw ConfigError("seed: expected a non-negative integer, got '" + v + "'");
    }
  } else if (key == "methods") c.methods = parse_methods(v);
  else if (key == "ell-candidates") c.ell_candidates = parse_int_list(v);
  else if (key == "jobs") c.jobs = to_int(key, v);
  else if (key == "g") c.pss.G = inv.complexity.G = to_int(key, v);
  else if (key == "d") c.minn.D = inv.complexity.D = to_int(key, v);
  else if (key == "k-pss") inv.complexity.K_pss = to_int(key, v);
  else if (key == "noiseless") c.noiseless = to_bool(key, v);
  else if (key == "out") inv.out = v;
  else throw ConfigError("unknown config key '" + key + "'");
}

struct Command {
  CLI::App* app = nullptr;
  std::string config_path;
  std::map<std::string, std::string> flags;
  std::map<std::string, CLI::Option*> options;
  bool noiseless = false;
  CLI::Option* noiseless_opt = nullptr;
};

Command& add_command(CLI::App& app, std::list<Command>& cmds, const std::string& name,
                     const std::string& help, const std::vector<std::pair<std::string, std::string>>& keys) {
  Command& cmd = cmds.emplace_back();
  cmd.app = app.add_subcommand(name, help);
  cmd.app->add_option("--config", cmd.config_path, "key = value file or JSON sidecar")->check(CLI::ExistingFile);
  for (const auto& [key, desc] : keys) {
    if (key == "noiseless") {
      cmd.noiseless_opt = cmd.app->add_flag("--noiseless", cmd.noiseless, desc);
      continue;
    }
    cmd.options[key] = cmd.app->add_option("--" + key, cmd.flags[key], desc);
  }
  return cmd;
}

Invocation resolve(const Command& cmd) {
  Invocation inv;
  if (!cmd.config_path.empty())
    for (const auto& [k, v] : read_config_file(cmd.config_path)) {
      if (k == "out" && !cmd.options.count("out")) continue;
      apply(k, v, inv);
    }
  for (const auto& [key, opt] : cmd.options)
    if (opt->count() > 0) apply(key, cmd.flags.at(key), inv);
  if (cmd.noiseless_opt && cmd.noiseless_opt->count() > 0) inv.sweep.noiseless = true;
  return inv;
}

std::string utc_timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write '" + path + "'");
  out << text;
  if (!out) throw std::runtime_error("write to '" + path + "' failed");
}

/// Writes to --out when given, else stdout.
void emit(const std::string& out, const std::string& text) {
  if (out.empty()) std::cout << text;
  else write_file(out, text);
}

std::string sidecar_json(const std::vector<std::pair<std::string, std::string>>& cfg, const char* tool,
                         std::uint64_t seed) {
  nlohmann::ordered_json meta;
  meta["tool"] = tool;
  nlohmann::ordered_json c;
  for (const auto& [k, v] : cfg) c[k] = v;
  meta["effective_config"] = c;
  meta["seed"] = seed;
  meta["timestamp"] = utc_timestamp();
  return meta.dump(2) + "\n";
}

int cmd_simulate(const Invocation& inv) {
  const SweepConfig& cfg = inv.sweep;
  const SimulationReport r = simulate_once(cfg, inv.eps, inv.snr_single);
  std::ostringstream os;
  os << std::setprecision(10);
  os << "N = " << cfg.ofdm.N << ", Ng = " << cfg.ofdm.Ng << ", M = " << cfg.ofdm.M
     << ", P = " << cfg.esprit.P << ", Q = " << cfg.esprit.Q << ", beta = " << cfg.esprit.beta
     << ", seed = " << cfg.master_seed << '\n';
  os << "snr_db = " << r.snr_db << ", N0 = " << r.N0 << (cfg.noiseless ? " (noiseless)" : "") << '\n';
  os << "true:      eps = " << r.eps_true << " (frac " << r.split.frac << ", ell " << r.split.ell
     << "), p = " << r.p_true << ", f1 = " << r.truth.f1 << ", f2 = " << r.truth.f2
     << ", |c| = " << std::abs(r.truth.c) << '\n';
  const SyncEstimate& s = r.run.sync;
  os << "estimated: eps = " << s.eps_total_hat << " (frac " << s.eps_frac_hat << ", ell " << s.ell_hat
     << "), p = " << s.p_hat << " (unrounded " << s.p_hat_frac << "), f1 = " << s.f1_hat
     << ", f2 = " << s.f2_hat << '\n';
  os << "singular values:";
  for (Index i = 0; i < r.run.esprit.singular_values.size(); ++i) os << ' ' << r.run.esprit.singular_values[i];
  os << "\npairing condition = " << r.run.esprit.condition
     << ", low confidence = " << (s.low_confidence ? "yes" : "no") << '\n';
  emit(inv.out, os.str());
  return 0;
}

int cmd_sweep(const Invocation& inv) {
  const std::string out = inv.out.empty() ? "sweep.csv" : inv.out;
  const SweepResult result = run_sweep(inv.sweep);
  std::ostringstream csv;
  write_sweep_csv(result, csv);
  write_file(out, csv.str());
  write_file(out + ".json", sweep_metadata_json(result, out, utc_timestamp()));

  int failed = 0;
  for (const auto& c : result.cells) failed += c.trials_failed;
  std::cout << "wrote " << out << " (" << result.config.snr_db.size() << " SNR points x "
            << result.config.methods.size() << " methods, " << result.config.trials
            << " trials each, " << failed << " flagged trials) and " << out << ".json in "
            << std::setprecision(3) << result.wall_seconds << " s\n";
  return 0;
}

int cmd_crlb(const Invocation& inv) {
  const SweepConfig& cfg = inv.sweep;
  cfg.ofdm.validate();
  if (cfg.p_true < 0 || cfg.p_true >= cfg.ofdm.N)
    throw ConfigError("p=" + std::to_string(cfg.p_true) + " outside [0, " + std::to_string(cfg.ofdm.N) + ")");
  std::ostringstream os;
  write_crlb_csv(crlb_table(cfg.ofdm, inv.eps, cfg.p_true, cfg.snr_db), os);
  emit(inv.out, os.str());
  if (!inv.out.empty()) {
    const std::vector<std::pair<std::string, std::string>> echo{
        {"n", std::to_string(cfg.ofdm.N)},   {"ng", std::to_string(cfg.ofdm.Ng)},
        {"m-frames", std::to_string(cfg.ofdm.M)}, {"eps", format_double(inv.eps)},
        {"p", std::to_string(cfg.p_true)},   {"snr-db", format_snr_grid(cfg.snr_db)}};
    write_file(inv.out + ".json", sidecar_json(echo, "hrsync crlb", cfg.master_seed));
  }
  return 0;
}

int cmd_complexity(const Invocation& inv) {
  const ComplexityParams& p = inv.complexity;
  std::ostringstream os;
  write_complexity(complexity_report(p), os);
  emit(inv.out, os.str());
  if (!inv.out.empty()) {
    const std::vector<std::pair<std::string, std::string>> echo{
        {"n", std::to_string(p.N)},        {"ng", std::to_string(p.Ng)},
        {"m-frames", std::to_string(p.M)}, {"p-window", std::to_string(p.P)},
        {"q-window", std::to_string(p.Q)}, {"g", std::to_string(p.G)},
        {"d", std::to_string(p.D)},        {"k-pss", std::to_string(p.K_pss)}};
    write_file(inv.out + ".json", sidecar_json(echo, "hrsync complexity", 0));
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Joint CFO and frame-misalignment estimation for OFDM via 2-D ESPRIT"};
  app.require_subcommand(1);

  const std::vector<std::pair<std::string, std::string>> ofdm{
      {"n", "subcarriers N"}, {"ng", "cyclic prefix length"}, {"m-frames", "pilot frames M"}};
  const std::vector<std::pair<std::string, std::string>> esprit{
      {"p-window", "window P along frames"},
      {"q-window", "window Q along subcarriers"},
      {"beta", "pairing scalar"},
      {"solver", "shift-invariance solver: ls or tls"},
      {"ell-candidates", "integer CFO candidates, comma list"}};
  auto join = [](std::vector<std::pair<std::string, std::string>> a,
                 const std::vector<std::pair<std::string, std::string>>& b) {
    a.insert(a.end(), b.begin(), b.end());
    return a;
  };

  std::list<Command> cmds;
  Command& simulate = add_command(
      app, cmds, "simulate", "one diagnostic trial of the 2-D ESPRIT chain",
      join(join(ofdm, esprit), {{"eps", "normalized CFO"},
                                {"p", "frame misalignment in samples"},
                                {"snr-db", "SNR in dB"},
                                {"seed", "master seed"},
                                {"noiseless", "inject no noise"},
                                {"out", "report file (default stdout)"}}));
  Command& sweep = add_command(
      app, cmds, "sweep", "Monte Carlo MSE sweep over SNR",
      join(join(ofdm, esprit), {{"eps-range", "uniform CFO interval lo,hi"},
                                {"p", "frame misalignment in samples"},
                                {"snr-db", "SNR grid start:stop:step or comma list"},
                                {"trials", "trials per SNR point"},
                                {"seed", "master seed"},
                                {"methods", "subset of esprit2d,beek,minn,pss"},
                                {"g", "PSS CFO grid size"},
                                {"d", "Minn preamble parts"},
                                {"jobs", "worker threads"},
                                {"noiseless", "inject no noise"},
                                {"out", "CSV path (default sweep.csv)"}}));
  Command& crlb = add_command(app, cmds, "crlb", "closed-form CRLB table over SNR",
                              join(ofdm, {{"eps", "normalized CFO"},
                                          {"p", "frame misalignment in samples"},
                                          {"snr-db", "SNR grid"},
                                          {"out", "CSV path (default stdout)"}}));
  Command& complexity = add_command(
      app, cmds, "complexity", "flop counts of the four methods",
      join(ofdm, {{"p-window", "window P"},
                  {"q-window", "window Q"},
                  {"g", "PSS CFO grid size"},
                  {"d", "Minn preamble parts"},
                  {"k-pss", "K in the PSS count"},
                  {"out", "output path (default stdout)"}}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitConfig;
  }

  try {
    if (*simulate.app) return cmd_simulate(resolve(simulate));
    if (*sweep.app) return cmd_sweep(resolve(sweep));
    if (*crlb.app) return cmd_crlb(resolve(crlb));
    if (*complexity.app) return cmd_complexity(resolve(complexity));
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitRuntime;
  }
  return kExitConfig;
}
