#include <doctest.h>

#include <numeric>

#include "hrsync/baselines.hpp"
#include "hrsync/channel.hpp"

using namespace hrsync;

namespace {

const OfdmConfig kCfg{64, 16, 2};

CVectorXd stream_with(const TimeFrame& frame, int offset, int length, double eps, double N0,
                      std::uint64_t seed) {
  Rng rng = make_rng({seed, 0});
  CVectorXd rx = embed_in_stream(frame, offset, length, kCfg, rng);
  rotate_cfo(rx, eps, kCfg.N);
  if (N0 > 0) rx += std::sqrt(N0) * complex_normal(rx.size(), 1.0, rng);
  return rx;
}

}  // namespace

TEST_CASE("embed_in_stream places the frame at the offset") {
  Rng rng = make_rng({1, 0});
  const TimeFrame f = random_data_frame(kCfg, rng);
  CHECK(energy(strip_cp(f, kCfg)) == doctest::Approx(1.0));
  for (int off : {0, 3, 80}) {
    Rng r2 = make_rng({2, 0});
    const CVectorXd s = embed_in_stream(f, off, 200, kCfg, r2);
    REQUIRE(s.size() == 200);
    CHECK((s.segment(off, kCfg.Nt()) - f.samples).cwiseAbs().maxCoeff() == 0.0);
  }
  Rng r3 = make_rng({2, 0});
  CHECK_THROWS_AS(embed_in_stream(f, 81, 200, kCfg, r3), ConfigError);
}

TEST_CASE("Beek estimator") {
  Rng rng = make_rng({5, 0});
  const TimeFrame f = random_data_frame(kCfg, rng);
  const int len = beek_stream_length(kCfg, BeekConfig{});
  CHECK(len == 80 + 79);

  SUBCASE("noiseless, offset 0") {
    const auto e = beek_estimate(stream_with(f, 0, len, 0.2, 0.0, 1), kCfg, BeekConfig{1.0, 0});
    CHECK(e.theta_hat == 0);
    CHECK(std::abs(e.eps_hat - 0.2) < 1e-10);
  }
  SUBCASE("zero CFO") {
    const auto e = beek_estimate(stream_with(f, 7, len, 0.0, 0.0, 1), kCfg, BeekConfig{1.0, 0});
    CHECK(e.theta_hat == 7);
    CHECK(std::abs(e.eps_hat) < 1e-12);
  }
  SUBCASE("rho") {
    CHECK(beek_rho(1.0 / 64, kCfg) == doctest::Approx(0.5));
    CHECK(beek_rho(0.0, kCfg) == 1.0);
    CHECK_THROWS_AS(beek_estimate(stream_with(f, 0, len, 0.0, 0.0, 1), kCfg, BeekConfig{1.5, 0}), ConfigError);
  }
  SUBCASE("short stream") {
    CHECK_THROWS_AS(beek_estimate(CVectorXd::Ones(len - 1), kCfg, BeekConfig{}), ConfigError);
  }
  SUBCASE("deterministic") {
    const CVectorXd rx = stream_with(f, 2, len, 0.23, 0.01, 9);
    const auto a = beek_estimate(rx, kCfg, BeekConfig{0.5, 0});
    const auto b = beek_estimate(rx, kCfg, BeekConfig{0.5, 0});
    CHECK(a.theta_hat == b.theta_hat);
    CHECK(a.eps_hat == b.eps_hat);
  }
}

TEST_CASE("Minn estimator") {
  const MinnConfig mc;
  const TimeFrame pre = minn_preamble(kCfg, mc);
  CHECK(energy(strip_cp(pre, kCfg)) == doctest::Approx(1.0));
  const CVectorXd body = strip_cp(pre, kCfg);
  const int L = 16;
  CHECK((body.segment(L, L) - body.head(L)).cwiseAbs().maxCoeff() < 1e-15);
  CHECK((body.segment(2 * L, L) + body.head(L)).cwiseAbs().maxCoeff() < 1e-15);
  CHECK((body.segment(3 * L, L) - body.head(L)).cwiseAbs().maxCoeff() < 1e-15);

  const int len = minn_stream_length(kCfg, mc);
  SUBCASE("noiseless, offset 0") {
    const auto e = minn_estimate(stream_with(pre, 0, len, 0.1, 0.0, 1), kCfg, mc);
    CHECK(e.theta_hat == 0);
    CHECK(std::abs(e.eps_hat - 0.1) < 1e-10);
  }
  SUBCASE("zero CFO") {
    const auto e = minn_estimate(stream_with(pre, 4, len, 0.0, 0.0, 1), kCfg, mc);
    CHECK(e.theta_hat == 4);
    CHECK(std::abs(e.eps_hat) < 1e-12);
  }
  SUBCASE("metric has a sharp peak") {
    const CVectorXd rx = stream_with(pre, 30, len, 0.1, 0.0, 3);
    const int d = 30 + kCfg.Ng;
    const double peak = minn_metric(rx, d, kCfg, mc);
    CHECK(peak == doctest::Approx(1.0));
    CHECK(minn_metric(rx, d - L, kCfg, mc) < 0.5 * peak);
    CHECK(minn_metric(rx, d + L, kCfg, mc) < 0.5 * peak);
    for (int t = 0; t < 80; ++t)
      if (t != 30) CHECK(minn_metric(rx, t + kCfg.Ng, kCfg, mc) < peak);
  }
  SUBCASE("invalid D") {
    CHECK_THROWS_AS(minn_preamble(kCfg, MinnConfig{3, 0}), ConfigError);
    CHECK_THROWS_AS(minn_preamble(kCfg, MinnConfig{1, 0}), ConfigError);
    CHECK_THROWS_AS(minn_preamble(OfdmConfig{60, 15, 2}, MinnConfig{8, 0}), ConfigError);
  }
  SUBCASE("short stream") {
    CHECK_THROWS_AS(minn_estimate(CVectorXd::Ones(len - 1), kCfg, mc), ConfigError);
  }
}

TEST_CASE("PSS estimator") {
  const PssConfig pc;
  const CVectorXd zc = zadoff_chu(25, 63);
  CHECK(zc.cwiseAbs().minCoeff() == doctest::Approx(1.0));
  CHECK_THROWS_AS(zadoff_chu(21, 63), ConfigError);
  // constant-amplitude zero autocorrelation over cyclic shifts
  for (int s = 1; s < 63; ++s) {
    cd acc = 0;
    for (int n = 0; n < 63; ++n) acc += zc[n] * std::conj(zc[(n + s) % 63]);
    CHECK(std::abs(acc) < 1e-9);
  }
  CHECK(energy(strip_cp(pss_frame(kCfg, pc), kCfg)) == doctest::Approx(1.0));

  const PssReceiver rx(kCfg, pc);
  CHECK(rx.grid_step() == doctest::Approx(1.0 / 499).epsilon(1e-12));
  CHECK(rx.grid_step() == doctest::Approx(0.002004).epsilon(1e-3));
  const int len = pss_stream_length(kCfg, pc);
  const TimeFrame f = pss_frame(kCfg, pc);

  SUBCASE("CFO on a grid point") {
    const double eps = rx.grid_point(350);
    const auto e = rx.estimate(stream_with(f, 3, len, eps, 0.0, 1));
    CHECK(e.theta_hat == 3);
    CHECK(e.eps_hat == eps);
  }
  SUBCASE("CFO between grid points") {
    for (double eps : {0.2, 0.2231, -0.417}) {
      const auto e = pss_estimate(stream_with(f, 2, len, eps, 0.0, 1), pc, kCfg);
      CHECK(e.theta_hat == 2);
      CHECK(std::abs(e.eps_hat - eps) <= rx.grid_step() / 2 + 1e-12);
    }
  }
  SUBCASE("timing invariant to a constant phase rotation") {
    const CVectorXd s = stream_with(f, 5, len, 0.21, 0.05, 4);
    const auto a = rx.estimate(s);
    const auto b = rx.estimate(CVectorXd(std::polar(1.0, 1.3) * s));
    CHECK(a.theta_hat == b.theta_hat);
    CHECK(a.eps_hat == b.eps_hat);
  }
  SUBCASE("short stream") { CHECK_THROWS_AS(rx.estimate(CVectorXd::Ones(len - 1)), ConfigError); }
  SUBCASE("invalid grid") { CHECK_THROWS_AS(PssReceiver(kCfg, PssConfig{1}), ConfigError); }
}

TEST_CASE("Beek and Minn are unbiased at 30 dB") {
  const double N0 = std::pow(10.0, -3.0);
  const int trials = 2000;
  const TimeFrame pre = minn_preamble(kCfg, MinnConfig{});
  double beek_bias = 0.0, minn_bias = 0.0;
  for (int t = 0; t < trials; ++t) {
    Rng rng = make_rng({77, static_cast<std::uint64_t>(t)});
    const TimeFrame data = random_data_frame(kCfg, rng);
    const double eps = 0.2 + 0.05 * (t % 100) / 100.0;
    const auto b = beek_estimate(stream_with(data, 2, beek_stream_length(kCfg, {}), eps, N0, 1000 + t), kCfg,
                                 BeekConfig{beek_rho(N0, kCfg), 0});
    const auto m = minn_estimate(stream_with(pre, 2, minn_stream_length(kCfg, {}), eps, N0, 5000 + t), kCfg,
                                 MinnConfig{});
    beek_bias += b.eps_hat - eps;
    minn_bias += m.eps_hat - eps;
  }
  CHECK(std::abs(beek_bias / trials) < 1e-3);
  CHECK(std::abs(minn_bias / trials) < 1e-3);
}
