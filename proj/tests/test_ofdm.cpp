#include <doctest.h>

#include <random>

#include "hrsync/ofdm.hpp"
#include "oracles.hpp"

using namespace hrsync;

TEST_CASE("idft_modulate: single subcarrier without prefix is the identity") {
  const cd c(0.3, -1.7);
  const TimeFrame f = idft_modulate(CVectorXd::Constant(1, c), {1, 0, 1});
  REQUIRE(f.samples.size() == 1);
  CHECK(std::abs(f.samples[0] - c) < 1e-15);
}

TEST_CASE("idft_modulate: constant pilots give a shifted impulse") {
  const OfdmConfig cfg{4, 1, 1};
  const TimeFrame f = idft_modulate(CVectorXd::Ones(4), cfg);
  CVectorXd expected(5);
  expected << 0, 1, 0, 0, 0;
  CHECK((f.samples - expected).cwiseAbs().maxCoeff() < 1e-12);
  CHECK(std::abs(f.samples[0] - f.samples[4]) < 1e-12);
}

TEST_CASE("idft_modulate matches the literal modulator sum") {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 40; ++trial) {
    const int N = 1 + static_cast<int>(rng() % 96);
    const int Ng = static_cast<int>(rng() % N);
    const CVectorXd X = oracle::random_symbols(N, rng);
    const TimeFrame f = idft_modulate(X, {N, Ng, 1});
    CHECK((f.samples - oracle::modulate(X, Ng)).cwiseAbs().maxCoeff() < 1e-12);
    CHECK(cp_mismatch(f, {N, Ng, 1}) < 1e-12);
  }
}

TEST_CASE("dft_demodulate inverts the modulator after prefix removal") {
  std::mt19937_64 rng(5);
  const OfdmConfig cfg{8, 2, 1};
  const CVectorXd X = oracle::random_symbols(8, rng);
  const CVectorXd back = dft_demodulate(strip_cp(idft_modulate(X, cfg), cfg), cfg.N);
  CHECK((back - X).cwiseAbs().maxCoeff() < 1e-12);

  for (int trial = 0; trial < 30; ++trial) {
    const int N = 1 + static_cast<int>(rng() % 128);
    const OfdmConfig c{N, static_cast<int>(rng() % N), 1};
    const CVectorXd Y = oracle::random_symbols(N, rng);
    const double scale = Y.cwiseAbs().maxCoeff();
    CHECK((dft_demodulate(strip_cp(idft_modulate(Y, c), c), N) - Y).cwiseAbs().maxCoeff() < 1e-12 * scale * 10);
  }
}

TEST_CASE("dft_demodulate: direct evaluations") {
  CVectorXd expected(4);
  expected << 4, 0, 0, 0;
  CHECK((dft_demodulate(CVectorXd::Ones(4), 4) - expected).cwiseAbs().maxCoeff() < 1e-12);
  CHECK(dft_demodulate(CVectorXd::Zero(16), 16).cwiseAbs().maxCoeff() == 0.0);

  std::mt19937_64 rng(3);
  const CVectorXd x = oracle::random_symbols(64, rng);
  CHECK((dft_demodulate(x, 64) - oracle::dft(x)).cwiseAbs().maxCoeff() < 1e-11);
}

TEST_CASE("length mismatches are rejected") {
  CHECK_THROWS_AS(idft_modulate(CVectorXd::Ones(3), {4, 1, 1}), ConfigError);
  CHECK_THROWS_AS(dft_demodulate(CVectorXd::Ones(5), 4), ConfigError);
  TimeFrame bad{CVectorXd::Ones(4)};
  CHECK_THROWS_AS(strip_cp(bad, {4, 1, 1}), ConfigError);
  CHECK_THROWS_AS(idft_modulate(CVectorXd::Ones(4), {4, 4, 1}), ConfigError);
}

TEST_CASE("make_pilot_frames") {
  SUBCASE("two impulse frames") {
    const auto frames = make_pilot_frames(PilotSpec{}, {4, 1, 2});
    REQUIRE(frames.size() == 2);
    CVectorXd expected(5);
    expected << 0, 1, 0, 0, 0;
    for (const auto& f : frames) CHECK((f.samples - expected).cwiseAbs().maxCoeff() < 1e-12);
  }
  SUBCASE("degenerate single sample") {
    const auto frames = make_pilot_frames(PilotSpec{}, {1, 0, 1});
    REQUIRE(frames.size() == 1);
    CHECK(std::abs(frames[0].samples[0] - cd(1.0)) < 1e-15);
  }
  SUBCASE("frame energy equals |X|^2") {
    for (cd X : {cd(1.0), cd(0.6, -0.8), cd(2.0, 1.0)}) {
      const auto frames = make_pilot_frames(PilotSpec{X}, {64, 16, 2});
      for (const auto& f : frames) {
        CHECK(energy(f.samples) == doctest::Approx(std::norm(X)).epsilon(1e-12));
        CHECK(cp_mismatch(f, {64, 16, 2}) < 1e-12);
      }
    }
  }
  SUBCASE("zero pilot rejected") { CHECK_THROWS_AS(make_pilot_frames(PilotSpec{0.0}, {4, 1, 1}), ConfigError); }
}
