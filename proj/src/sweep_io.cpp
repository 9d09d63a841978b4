#include "hrsync/sweep_io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <sstream>

#include <json.hpp>

#include "hrsync/channel.hpp"
#include "hrsync/rx_frontend.hpp"

namespace hrsync {

namespace {

std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream is(text);
  while (std::getline(is, item, sep)) out.push_back(item);
  return out;
}

double to_double(const std::string& s) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception&) {
    throw ConfigError("not a number: '" + s + "'");
  }
  if (used != s.size()) throw ConfigError("not a number: '" + s + "'");
  return v;
}

std::string solver_name(InvarianceSolver s) {
  return s == InvarianceSolver::LeastSquares ? "ls" : "tls";
}

}  // namespace

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void write_sweep_csv(const SweepResult& result, std::ostream& os) {
  os << kSweepCsvHeader << '\n';
  std::size_t next = 0;
  for (const CrlbRow& crlb : result.crlb) {
    for (; next < result.cells.size() && result.cells[next].snr_db == crlb.snr_db; ++next) {
      const SweepCell& c = result.cells[next];
      os << format_double(c.snr_db) << ',' << method_name(c.method) << ',' << format_double(c.cfo.mse)
         << ',' << format_double(c.sto.mse) << ',' << format_double(c.cfo.se) << ','
         << format_double(c.sto.se) << ',' << c.trials_ok << ',' << c.trials_failed << '\n';
    }
    os << format_double(crlb.snr_db) << ",CRLB," << format_double(crlb.crlb_eps) << ','
       << format_double(crlb.crlb_p) << ",,,,\n";
  }
}

std::vector<std::pair<std::string, std::string>> effective_config(const SweepConfig& cfg) {
  std::string methods, ells;
  for (Method m : cfg.methods) methods += (methods.empty() ? "" : ",") + std::string(method_name(m));
  for (int l : cfg.ell_candidates) ells += (ells.empty() ? "" : ",") + std::to_string(l);
  return {
      {"n", std::to_string(cfg.ofdm.N)},
      {"ng", std::to_string(cfg.ofdm.Ng)},
      {"m-frames", std::to_string(cfg.ofdm.M)},
      {"p-window", std::to_string(cfg.esprit.P)},
      {"q-window", std::to_string(cfg.esprit.Q)},
      {"beta", format_double(cfg.esprit.beta)},
      {"solver", solver_name(cfg.esprit.solver)},
      {"eps-range", format_double(cfg.eps_lo) + "," + format_double(cfg.eps_hi)},
      {"p", std::to_string(cfg.p_true)},
      {"snr-db", format_snr_grid(cfg.snr_db)},
      {"trials", std::to_string(cfg.trials)},
      {"seed", std::to_string(cfg.master_seed)},
      {"methods", methods},
      {"ell-candidates", ells},
      {"g", std::to_string(cfg.pss.G)},
      {"d", std::to_string(cfg.minn.D)},
      {"noiseless", cfg.noiseless ? "true" : "false"},
      {"jobs", std::to_string(cfg.jobs)},
  };
}

std::string sweep_metadata_json(const SweepResult& result, const std::string& csv_name,
                                const std::string& timestamp) {
  nlohmann::ordered_json meta;
  meta["tool"] = "hrsync sweep";
  meta["csv"] = csv_name;
  nlohmann::ordered_json cfg;
  for (const auto& [k, v] : effective_config(result.config)) cfg[k] = v;
  meta["effective_config"] = cfg;
  meta["seed"] = result.config.master_seed;
  meta["wall_seconds"] = result.wall_seconds;
  meta["timestamp"] = timestamp;
  return meta.dump(2) + "\n";
}

std::vector<double> parse_snr_grid(const std::string& text) {
  const auto parts = split(text, ':');
  if (parts.size() == 3) {
    const double start = to_double(parts[0]), stop = to_double(parts[1]), step = to_double(parts[2]);
    if (!(step > 0.0) || stop < start) throw ConfigError("SNR grid needs start <= stop and step > 0");
    std::vector<double> grid;
    const long long n = std::llround(std::floor((stop - start) / step + 1e-9));
    for (long long i = 0; i <= n; ++i) grid.push_back(start + static_cast<double>(i) * step);
    return grid;
  }
  if (parts.size() != 1) throw ConfigError("SNR grid must be start:stop:step or a comma list");
  std::vector<double> grid;
  for (const auto& item : split(text, ',')) grid.push_back(to_double(item));
  if (grid.empty()) throw ConfigError("SNR grid is empty");
  return grid;
}

std::string format_snr_grid(const std::vector<double>& grid) {
  std::string out;
  for (double v : grid) out += (out.empty() ? "" : ",") + format_double(v);
  return out;
}

std::vector<Method> parse_methods(const std::string& text) {
  std::vector<Method> out;
  for (const auto& item : split(text, ',')) {
    const Method m = parse_method(item);
    if (std::find(out.begin(), out.end(), m) == out.end()) out.push_back(m);
  }
  if (out.empty()) throw ConfigError("no methods selected");
  return out;
}

std::vector<int> parse_int_list(const std::string& text) {
  std::vector<int> out;
  for (const auto& item : split(text, ',')) {
    const double v = to_double(item);
    if (v != std::floor(v)) throw ConfigError("not an integer: '" + item + "'");
    out.push_back(static_cast<int>(v));
  }
  return out;
}

std::vector<CrlbTableRow> crlb_table(const OfdmConfig& ofdm, double eps, int p,
                                     const std::vector<double>& snr_db) {
  const CfoSplit s = split_cfo(eps);
  const double lambda = std::abs(mode_coefficient(s.frac, s.ell, p, PilotSpec{}.X, ofdm));
  std::vector<CrlbTableRow> rows;
  for (double snr : snr_db) {
    const double N0 = noise_power_from_snr_db(snr);
    rows.push_back({snr, N0, lambda, crlb_analytic(ofdm.M, ofdm.N, N0, lambda, ofdm.alpha())});
  }
  return rows;
}

void write_crlb_csv(const std::vector<CrlbTableRow>& rows, std::ostream& os) {
  os << "snr_db,N0,lambda,crlb_omega1,crlb_omega2,crlb_f1,crlb_f2,crlb_eps,crlb_p\n";
  for (const auto& r : rows) {
    os << format_double(r.snr_db) << ',' << format_double(r.N0) << ',' << format_double(r.lambda)
       << ',' << format_double(r.bound.crlb_omega1) << ',' << format_double(r.bound.crlb_omega2)
       << ',' << format_double(r.bound.crlb_f1) << ',' << format_double(r.bound.crlb_f2) << ','
       << format_double(r.bound.crlb_eps) << ',' << format_double(r.bound.crlb_p) << '\n';
  }
}

void write_complexity(const ComplexityReport& report, std::ostream& os) {
  os << "L = " << report.L << ", K = " << report.K << '\n';
  os << "method,formula,evaluated,table,match\n";
  for (const auto& r : report.rows)
    os << r.method << ",\"" << r.formula << "\"," << r.evaluated << ',' << r.printed << ','
       << (r.match ? "yes" : "MISMATCH") << '\n';
}

}  // namespace hrsync
