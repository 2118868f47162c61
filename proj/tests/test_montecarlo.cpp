#include <gtest/gtest.h>

#include <cmath>

#include "mcwin/error.hpp"
#include "mcwin/montecarlo.hpp"
#include "oracles.hpp"

using namespace mcwin;

TEST(Wilson, KnownInterval) {
  const auto w = wilson_interval(10, 100);
  // Reference values from the closed form with z = 1.96.
  EXPECT_NEAR(w.lower(), 0.05522914, 1e-6);
  EXPECT_NEAR(w.upper(), 0.17436566, 1e-6);
  const auto z = wilson_interval(0, 1000);
  EXPECT_GT(z.upper(), 0.0);
  EXPECT_NEAR(z.lower(), 0.0, 1e-15);
  EXPECT_THROW(wilson_interval(0, 0), Error);
}

TEST(Seeds, Splitmix64ReferenceValue) {
  // First output of the reference splitmix64 generator seeded with 0.
  EXPECT_EQ(splitmix64(0), 0xE220A8397B1DCDAFULL);
  EXPECT_NE(block_seed(1, 0), block_seed(1, 1));
  EXPECT_NE(block_seed(1, 0), block_seed(2, 0));
}

TEST(Simulate, DeterministicAcrossWorkers) {
  const auto p = table1_absorbing(0.2, 4, 1000);
  const auto w = DetectionWindow::continuous(0.034, 0.13);
  TrialConfig cfg;
  cfg.trials = 50000;
  cfg.seed = 42;
  cfg.workers = 1;
  const auto a = simulate_ber(p, w, 100, cfg);
  cfg.workers = 5;
  const auto b = simulate_ber(p, w, 100, cfg);
  EXPECT_EQ(a.errors, b.errors);
  EXPECT_EQ(a.trials, 50000);
  cfg.seed = 43;
  EXPECT_NE(simulate_ber(p, w, 100, cfg).errors, a.errors);
}

TEST(Simulate, AgreesWithAnalytic) {
  const auto p = table1_passive(1.0, 2, 500);
  const auto w = DetectionWindow::sampled(3, 20);
  const auto a = optimal_threshold(p, w);
  TrialConfig cfg;
  cfg.trials = 100000;
  for (bool exact : {true, false}) {
    cfg.exact_counts = exact;
    const auto m = simulate_ber(p, w, a.threshold, cfg);
    EXPECT_NEAR(m.value, a.value, 4 * m.ci_halfwidth + 0.1 * a.value) << exact;
  }
}

TEST(Simulate, MatchesExactOracleOnSmallInstance) {
  const auto p = table1_absorbing(0.2, 2, 15);
  const auto w = DetectionWindow::continuous(0.02, 0.2);
  const double thr = 2;
  const double exact = oracle::exact_ber(tap_profile(p, w), 15, thr);
  TrialConfig cfg;
  cfg.trials = 200000;
  const auto m = simulate_ber(p, w, thr, cfg);
  const double sigma = std::sqrt(exact * (1 - exact) / cfg.trials);
  EXPECT_NEAR(m.value, exact, 4 * sigma);
}

TEST(Simulate, ShiftedWindowSeesNextSymbol) {
  const auto p = table1_absorbing(0.2, 1, 2000);
  const auto w = DetectionWindow::full(p);
  const double tau = 0.05;
  const auto a = optimal_threshold(p, w, tau);
  TrialConfig cfg;
  cfg.trials = 100000;
  const auto m = simulate_ber(p, w, a.threshold, cfg, tau);
  EXPECT_NEAR(m.value, a.value, 4 * m.ci_halfwidth + 0.15 * a.value);
}

TEST(Simulate, ConfigErrors) {
  const auto p = table1_absorbing(0.2, 3, 100);
  const auto w = DetectionWindow::full(p);
  TrialConfig cfg;
  cfg.trials = 0;
  try {
    simulate_ber(p, w, 1, cfg);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::Config);
  }
  cfg.trials = 10;
  cfg.warmup_symbols = 1;
  EXPECT_THROW(simulate_ber(p, w, 1, cfg), Error);
  cfg.warmup_symbols = -1;
  EXPECT_THROW(simulate_ber(p, w, -1, cfg), Error);
}
