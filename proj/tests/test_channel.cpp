#include <gtest/gtest.h>

#include <cmath>

#include "mcwin/channel.hpp"
#include "mcwin/error.hpp"
#include "mcwin/params.hpp"
#include "mcwin/special.hpp"
#include "mcwin/taps.hpp"
#include "oracles.hpp"

using namespace mcwin;

namespace {

void expect_code(ErrorCode code, const auto& fn) {
  try {
    fn();
    ADD_FAILURE() << "expected " << to_string(code);
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), code) << e.what();
  }
}

}  // namespace

TEST(Special, QFunctionKnownValues) {
  EXPECT_DOUBLE_EQ(special::q_function(0.0), 0.5);
  EXPECT_NEAR(special::q_function(1.0), 0.15865525393145707, 1e-16);
  EXPECT_NEAR(special::q_function(5.0), 2.866515718791939e-07, 1e-21);
  EXPECT_NEAR(special::q_function(-2.0), 1.0 - 0.022750131948179195, 1e-15);
}

TEST(Special, ErfDifferenceKeepsPrecisionInTheTail) {
  // erf(6.5) - erf(6) = erfc(6) - erfc(6.5); plain erf differences lose every digit here.
  const double ref = std::erfc(6.0) - std::erfc(6.5);
  EXPECT_NEAR(special::erf_difference(6.5, 6.0), ref, std::abs(ref) * 1e-12);
  EXPECT_NEAR(special::erf_difference(0.3, 0.1), std::erf(0.3) - std::erf(0.1), 1e-16);
}

TEST(Special, CompensatedSumRecoversCancelledTerms) {
  const std::vector<double> xs = {1e16, 1.0, -1e16, 1.0};
  EXPECT_DOUBLE_EQ(special::compensated_sum(xs), 2.0);
}

TEST(Special, PrincipalCubeRoot) {
  const auto r = special::principal_cbrt({-8.0, 0.0});
  EXPECT_NEAR(std::abs(r), 2.0, 1e-15);
  EXPECT_NEAR(std::arg(r), std::numbers::pi / 3.0, 1e-15);
  const auto z = std::complex<double>(3.0, -4.0);
  const auto c = special::principal_cbrt(z);
  EXPECT_NEAR(std::abs(c * c * c - z), 0.0, 1e-13);
}

TEST(Params, Table1DerivedConstants) {
  const auto ab = table1_absorbing(0.2, 4, 1000);
  const auto c = derive(ab);
  EXPECT_NEAR(c.m2(), 0.078125, 1e-15);
  EXPECT_NEAR(c.t_max, 25e-12 / (6.0 * 80e-12), 1e-15);
  const auto pa = table1_passive(1.0, 2, 1000, SampleIntervalRule::PeakOverSix);
  const auto cp = derive(pa);
  EXPECT_NEAR(cp.m_hat2(), 0.3125, 1e-15);
  EXPECT_NEAR(cp.t_max, 100e-12 / (6.0 * 80e-12), 1e-15);
  EXPECT_NEAR(pa.sample_interval, cp.t_max / 6.0, 1e-15);
  EXPECT_EQ(pa.samples, 28);
  EXPECT_EQ(table1_passive(2.0, 2, 1000, SampleIntervalRule::PeakOverSix).samples, 57);
}

TEST(Params, ValidationRejectsBadValues) {
  auto p = table1_absorbing(0.2, 4, 1000);
  p.distance = 0.0;
  expect_code(ErrorCode::InvalidParams, [&] { p.validate(); });
  expect_code(ErrorCode::InvalidParams, [] { table1_absorbing(0.2, 4, -1); });
  expect_code(ErrorCode::InvalidParams, [] { table1_absorbing(-0.2, 4, 10); });
  expect_code(ErrorCode::InvalidParams, [] { table1_absorbing(0.2, -1, 10); });
  expect_code(ErrorCode::InvalidParams, [] { table1_absorbing(std::nan(""), 1, 10); });
  // Q = 0 is accepted: it is a valid (if useless) link.
  EXPECT_NO_THROW(table1_absorbing(0.2, 4, 0).validate());
}

TEST(Params, PassiveRadiusGuard) {
  EXPECT_NO_THROW(table1_passive(1.0, 2, 100, SampleIntervalRule::PeakOverSix).validate());
  expect_code(ErrorCode::InvalidParams, [] { make_passive(5e-6, 5e-6, 80e-12, 1.0, 2, 100); });
  auto p = table1_passive(1.0, 2, 100, SampleIntervalRule::PeakOverSix);
  p.samples = 200;
  expect_code(ErrorCode::InvalidParams, [&] { p.validate(); });
}

TEST(Params, FlooredSampleRuleIsRejectedForTable1) {
  // floor(t_max / 6) in seconds is zero.
  EXPECT_ANY_THROW(table1_passive(1.0, 2, 100, SampleIntervalRule::FlooredSeconds));
  const auto p = table1_passive(1.0, 2, 100, SampleIntervalRule::FlooredMilliseconds);
  EXPECT_NEAR(p.sample_interval, 0.034, 1e-15);
}

TEST(Channel, HittingDensityMatchesOracle) {
  const auto p = table1_absorbing(0.2, 4, 1000);
  for (double t : {1e-3, 0.01, 0.0520833, 0.2, 1.7}) {
    const double ref = static_cast<double>(oracle::hitting_density(p, t));
    EXPECT_NEAR(channel::hitting_density(p, t), ref, std::abs(ref) * 1e-13) << t;
  }
  expect_code(ErrorCode::Domain, [&] { channel::hitting_density(p, 0.0); });
}

TEST(Channel, AbsorbedFractionMatchesQuadrature) {
  const auto p = table1_absorbing(0.2, 4, 1000);
  const double pts[][2] = {{0.0, 0.2}, {0.03, 0.15}, {0.2, 0.4}, {0.6, 0.8}, {1.0, 1.2}};
  for (const auto& ab : pts) {
    const double ref = oracle::integrate_density(p, ab[0], ab[1]);
    EXPECT_NEAR(channel::absorbed_fraction(p, ab[0], ab[1]), ref, ref * 1e-10 + 1e-17) << ab[0] << "," << ab[1];
  }
  // Total absorption probability is r / (d + r).
  EXPECT_NEAR(channel::absorbed_fraction(p, 0.0, 1e12), 0.5, 1e-6);
}

TEST(Channel, PassiveProbabilityMatchesHighPrecision) {
  const auto p = table1_passive(1.0, 2, 1000, SampleIntervalRule::PeakOverSix);
  const double tm = derive(p).t_max;
  for (double t : {0.01, tm, 0.5, 3.0}) {
    const double ref = oracle::passive_probability_mp(p, t);
    EXPECT_NEAR(channel::passive_probability(p, t), ref, ref * 1e-13) << t;
  }
}

TEST(Channel, PeakTimesAreStationaryPoints) {
  const auto ab = table1_absorbing(0.2, 4, 1000);
  const double ta = channel::peak_time(ab);
  EXPECT_GT(channel::hitting_density(ab, ta), channel::hitting_density(ab, ta * 0.99));
  EXPECT_GT(channel::hitting_density(ab, ta), channel::hitting_density(ab, ta * 1.01));
  const auto pa = table1_passive(1.0, 2, 1000, SampleIntervalRule::PeakOverSix);
  const double tp = channel::peak_time(pa);
  EXPECT_GT(channel::passive_probability(pa, tp), channel::passive_probability(pa, tp * 0.99));
  EXPECT_GT(channel::passive_probability(pa, tp), channel::passive_probability(pa, tp * 1.01));
}

TEST(Channel, SampleProbabilityIndexesPastSymbols) {
  const auto p = table1_passive(1.0, 3, 1000, SampleIntervalRule::PeakOverSix);
  EXPECT_EQ(channel::sample_probability(p, 0, 0), 0.0);
  EXPECT_DOUBLE_EQ(channel::sample_probability(p, 3, 2),
                   channel::passive_probability(p, 3 * p.sample_interval + 2 * p.symbol_time));
}

TEST(Taps, ProfileIsCanonicalAndDropsZeros) {
  const auto p = table1_absorbing(0.2, 5, 1000);
  const auto prof = tap_profile(p, DetectionWindow::continuous(0.03, 0.15));
  EXPECT_EQ(prof.interferers.size(), 5u);
  for (std::size_t i = 1; i < prof.interferers.size(); ++i) {
    EXPECT_GE(prof.interferers[i - 1].fraction, prof.interferers[i].fraction);
  }
  const auto f = tap_fractions(p, DetectionWindow::continuous(0.03, 0.15));
  ASSERT_EQ(f.size(), 6u);
  EXPECT_DOUBLE_EQ(prof.signal.fraction, f[0]);
  EXPECT_DOUBLE_EQ(prof.fraction(3), f[3]);
  EXPECT_DOUBLE_EQ(prof.signal.variance_weight, f[0] * (1.0 - f[0]));
}

TEST(Taps, ShiftAddsNextSymbolTap) {
  const auto p = table1_absorbing(0.2, 2, 1000);
  const auto w = DetectionWindow::full(p);
  const auto plain = tap_profile(p, w);
  EXPECT_EQ(plain.fraction(-1), 0.0);
  const auto shifted = tap_profile(p, w, 0.04);
  EXPECT_NEAR(shifted.fraction(-1), channel::absorbed_fraction(p, 0.0, 0.04), 1e-15);
  EXPECT_NEAR(shifted.signal.fraction, channel::absorbed_fraction(p, 0.04, 0.24), 1e-15);
  expect_code(ErrorCode::Domain, [&] { tap_profile(p, w, -0.1); });
}

TEST(Taps, PassiveVarianceIsPoisson) {
  const auto p = table1_passive(1.0, 2, 1000, SampleIntervalRule::PeakOverSix);
  const auto prof = tap_profile(p, DetectionWindow::sampled(3, 20));
  EXPECT_DOUBLE_EQ(prof.signal.variance_weight, prof.signal.fraction);
  double s = 0.0;
  for (int n = 3; n <= 20; ++n) s += channel::passive_probability(p, n * p.sample_interval);
  EXPECT_NEAR(prof.signal.fraction, s, 1e-15);
}

TEST(Window, ValidationRejectsBadWindows) {
  const auto ab = table1_absorbing(0.2, 2, 100);
  expect_code(ErrorCode::Domain, [&] { validate_window(ab, DetectionWindow::continuous(0.1, 0.05)); });
  expect_code(ErrorCode::Domain, [&] { validate_window(ab, DetectionWindow::continuous(0.0, 0.3)); });
  expect_code(ErrorCode::Domain, [&] { validate_window(ab, DetectionWindow::sampled(0, 3)); });
  const auto pa = table1_passive(1.0, 2, 100, SampleIntervalRule::PeakOverSix);
  expect_code(ErrorCode::Domain, [&] { validate_window(pa, DetectionWindow::sampled(5, 29)); });
  EXPECT_NO_THROW(validate_window(pa, DetectionWindow::sampled(5, 5)));
}
