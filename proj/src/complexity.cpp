#include "hrsync/montecarlo.hpp"

namespace hrsync {

ComplexityReport complexity_report(const ComplexityParams& p) {
  if (p.N < 1 || p.Ng < 0 || p.M < 1 || p.P < 1 || p.Q < 1 || p.G < 1 || p.D < 1 || p.K_pss < 1)
    throw ConfigError("complexity parameters must be positive");
  ComplexityReport r;
  const long long N = p.N, Ng = p.Ng, Nt = N + Ng;
  r.L = static_cast<long long>(p.P) * p.Q;
  r.K = 2LL * (N - p.Q + 1) * (p.M - p.P + 1);
  const long long L = r.L, K = r.K;

  auto row = [](std::string method, std::string formula, long long value, long long printed) {
    return ComplexityRow{std::move(method), std::move(formula), value, printed, value == printed};
  };
  r.rows.push_back(row("esprit2d", "2LK^2 + K^3 + K + LK", 2 * L * K * K + K * K * K + K + L * K,
                       2127384));
  r.rows.push_back(row("pss", "(N K_pss + G)(15N + 5)", (N * p.K_pss + p.G) * (15 * N + 5), 729540));
  r.rows.push_back(row("beek", "24 Nt Ng + 10 Nt", 24 * Nt * Ng + 10 * Nt, 31520));
  r.rows.push_back(row("minn", "36 (N^2 / D) + 6N", 36 * (N * N / p.D) + 6 * N, 36480));
  return r;
}

}  // namespace hrsync
