#pragma once

#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "hrsync/crlb.hpp"
#include "hrsync/montecarlo.hpp"

namespace hrsync {

inline constexpr const char* kSweepCsvHeader =
    "snr_db,method,mse_cfo,mse_sto,se_cfo,se_sto,trials_ok,trials_failed";

/// One row per (snr, method) followed by `snr_db,CRLB,crlb_eps,crlb_p,,,,`.
void write_sweep_csv(const SweepResult& result, std::ostream& os);

/// Config keys use the CLI flag names, so a sidecar can be fed back via --config.
std::vector<std::pair<std::string, std::string>> effective_config(const SweepConfig& cfg);

/// JSON sidecar: effective config, seed, wall time, timestamp.
std::string sweep_metadata_json(const SweepResult& result, const std::string& csv_name,
                                const std::string& timestamp);

/// "start:stop:step", a comma list, or a single value.
std::vector<double> parse_snr_grid(const std::string& text);
std::string format_snr_grid(const std::vector<double>& grid);

std::vector<Method> parse_methods(const std::string& text);
std::vector<int> parse_int_list(const std::string& text);

/// %.17g, "nan" for NaN.
std::string format_double(double v);

struct CrlbTableRow {
  double snr_db = 0.0;
  double N0 = 0.0;
  double lambda = 1.0;
  CrlbResult bound;
};

std::vector<CrlbTableRow> crlb_table(const OfdmConfig& ofdm, double eps, int p,
                                     const std::vector<double>& snr_db);
void write_crlb_csv(const std::vector<CrlbTableRow>& rows, std::ostream& os);

void write_complexity(const ComplexityReport& report, std::ostream& os);

}  // namespace hrsync
