#include <gtest/gtest.h>

#include <cmath>

#include "mcwin/error.hpp"
#include "mcwin/optimizer.hpp"
#include "oracles.hpp"

using namespace mcwin;

namespace {

ErrorCode code_of(const auto& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no error thrown";
  return ErrorCode::Io;
}

double cubic(double lv, double gamma, double e, double x) {
  return ((lv * x + 3 * lv) * x + gamma) * x + 2 * e;
}

}  // namespace

TEST(Prop1, FirstEdgeFormula) {
  const auto p = table1_absorbing(0.2, 1, 10);
  const auto r = prop1_interval(p);
  const double m2 = 0.078125;
  EXPECT_NEAR(r.window.t1, 28 * m2 * 0.2 / (120 * 0.2 - 74 * m2), 1e-15);
  EXPECT_NEAR(r.window.t1, 0.02401, 1e-5);
  EXPECT_EQ(r.window.t2, 0.2);
  EXPECT_EQ(r.method, Method::Prop1);
  EXPECT_EQ(code_of([] { prop1_interval(table1_absorbing(0.2, 3, 10)); }), ErrorCode::Domain);
}

TEST(Prop2, IntermediatesMatchReference) {
  for (double ts : {0.2, 0.3}) {
    for (int L : {4, 5, 6, 8}) {
      const auto p = table1_absorbing(ts, L, 100);
      const auto r = prop2_interval(p);
      const auto ref = oracle::reference_prop2(p);
      const auto& cf = *r.intermediates;
      EXPECT_NEAR(cf.i_ratio, ref.i_ratio, 1e-12 * ref.i_ratio);
      EXPECT_NEAR(cf.v_ratio, ref.v_ratio, 1e-12 * ref.v_ratio);
      EXPECT_NEAR(cf.first_edge, ref.t1, 1e-12);
      EXPECT_NEAR(cf.gamma, ref.gamma, 1e-10);
      EXPECT_NEAR(cf.delta1, ref.delta1, 1e-9 * std::abs(ref.delta1));
      EXPECT_NEAR(cf.delta2, ref.delta2, 1e-9 * std::abs(ref.delta2));
    }
  }
}

TEST(Prop2, Delta1SignMatchesRootStructure) {
  for (double ts : {0.2, 0.3, 0.5}) {
    for (int L : {2, 4, 5, 6, 8}) {
      const auto p = table1_absorbing(ts, L, 100);
      const auto cf = *prop2_interval(p).intermediates;
      const double lv = std::log(cf.v_ratio), e = 0.078125 / ts;
      const auto roots = oracle::cubic_roots(lv, 3 * lv, cf.gamma, 2 * e);
      const double disc = oracle::discriminant_from_roots(lv, roots);
      // Shengjin delta < 0 <=> three distinct real roots <=> classical discriminant > 0.
      EXPECT_EQ(cf.delta1 < 0, disc > 0) << ts << " " << L;
    }
  }
}

TEST(Prop2, CubicBranchGivesARealRoot) {
  const auto p = table1_absorbing(0.2, 5, 100);
  const auto r = prop2_interval(p);
  const auto& cf = *r.intermediates;
  ASSERT_EQ(cf.branch, Branch::CubicNegDisc);
  const double lv = std::log(cf.v_ratio);
  const double x = cf.upper_fraction;
  EXPECT_NEAR(cubic(lv, cf.gamma, 0.078125 / 0.2, x), 0.0, 1e-9 * std::abs(lv));
  EXPECT_NEAR(r.window.t1, 0.03075, 1e-5);
  EXPECT_NEAR(r.window.t2, 0.18871, 1e-5);
}

TEST(Prop2, QuadraticBranchesUseTheirFormulas) {
  for (double ts : {0.2, 0.3}) {
    for (int L : {2, 3, 4, 6, 8}) {
      const auto cf = *prop2_interval(table1_absorbing(ts, L, 100)).intermediates;
      const double lv = std::log(cf.v_ratio);
      if (cf.branch == Branch::QuadPosDisc) {
        EXPECT_NEAR(cf.upper_fraction, (-cf.gamma + std::sqrt(cf.delta2)) / (6 * lv), 1e-14);
      } else if (cf.branch == Branch::QuadNegDisc) {
        EXPECT_NEAR(cf.upper_fraction, -cf.gamma / (6 * lv), 1e-14);
      } else if (cf.branch == Branch::CondTs) {
        EXPECT_LE(cf.condition, 1.0);
      }
    }
  }
}

TEST(Prop2, KnownWindow) {
  const auto r = prop2_interval(table1_absorbing(0.2, 8, 100));
  EXPECT_NEAR(r.window.t1, 0.03225, 1e-5);
  EXPECT_NEAR(r.window.t2, 0.13873, 1e-5);
}

TEST(QHat, ClosedFormValues) {
  EXPECT_EQ(closed_form_q_hat(table1_absorbing(0.2, 1, 10)), 57);
  EXPECT_EQ(closed_form_q_hat(table1_absorbing(0.2, 4, 10)), 879);
  EXPECT_EQ(closed_form_q_hat(table1_absorbing(0.2, 5, 10)), 1598);
  EXPECT_EQ(closed_form_q_hat(table1_absorbing(0.2, 8, 10)), 4881);
  EXPECT_EQ(closed_form_q_hat(table1_passive(1.0, 1, 10)), 1958);
  EXPECT_EQ(closed_form_q_hat(table1_passive(1.0, 10, 10)), 75642);
}

TEST(Regime, DispatchOnQhat) {
  const auto below = closed_form_interval(table1_absorbing(0.2, 4, 878));
  EXPECT_EQ(below.method, Method::Prop2);
  EXPECT_EQ(below.intermediates->regime, Regime::BelowQhat);
  EXPECT_EQ(below.intermediates->q_hat, 879);
  const auto above = closed_form_interval(table1_absorbing(0.2, 4, 879));
  EXPECT_EQ(above.method, Method::Prop3);
  EXPECT_EQ(above.intermediates->regime, Regime::AboveQhat);
  // The Prop3 window does not depend on Q itself.
  EXPECT_EQ(above.window, closed_form_interval(table1_absorbing(0.2, 4, 50000)).window);
}

TEST(Prop3, AnchorsAndGain) {
  const auto p = table1_absorbing(0.2, 5, 5000);
  const auto sub = prop2_interval(p);
  const auto r = prop3_interval(p);
  const auto& cf = *r.intermediates;
  ASSERT_TRUE(cf.q_hat.has_value());
  const Alphas a = alphas(p);
  const double q = static_cast<double>(*cf.q_hat);
  EXPECT_NEAR(cf.gain, g_factor(a, g_factor(a, q) * q), 1e-14);
  EXPECT_GT(cf.gain, 1.0);
  EXPECT_DOUBLE_EQ(cf.t1_anchor, sub.window.t1);
  EXPECT_DOUBLE_EQ(cf.t2_anchor, 0.5 * (sub.window.t2 + derive(p).t_max));
  // Inflated interference pushes the first edge later.
  EXPECT_GT(r.window.t1, sub.window.t1);
}

TEST(Prop3, SingleIsiUsesGainOnly) {
  const auto p = table1_absorbing(0.2, 1, 5000);
  const auto r = prop3_interval(p);
  const double g = r.intermediates->gain;
  const double m2 = 0.078125;
  EXPECT_NEAR(r.window.t1, 28 * m2 * 0.2 / (120 * 0.2 - 28 * 0.2 * std::log(g) - 74 * m2), 1e-15);
}

TEST(Prop4, BelowQhatWindows) {
  const auto r1 = prop4_interval(table1_passive(1.0, 1, 100), Regime::BelowQhat);
  EXPECT_EQ(r1.window, DetectionWindow::sampled(3, 28));
  const auto r10 = prop4_interval(table1_passive(1.0, 10, 100), Regime::BelowQhat);
  EXPECT_EQ(r10.window, DetectionWindow::sampled(4, 21));
  const auto& cf = *r10.intermediates;
  const auto p = table1_passive(1.0, 10, 100);
  EXPECT_EQ(cf.n2_anchor, std::ceil((derive(p).t_max + 1.0) / (2 * p.sample_interval)));
  EXPECT_EQ(cf.first_edge, std::floor(cf.first_edge));
}

TEST(Prop4, AboveQhatIsNarrowerOrLater) {
  const auto p = table1_passive(1.0, 3, 1000000);
  const auto below = prop4_interval(p, Regime::BelowQhat);
  const auto above = prop4_interval(p, Regime::AboveQhat);
  EXPECT_GE(above.window.n1, below.window.n1);
  EXPECT_LE(above.window.n2, below.window.n2);
  const auto autoreg = prop4_interval(p);
  EXPECT_EQ(autoreg.intermediates->regime, *closed_form_q_hat(p) <= 1000000 ? Regime::AboveQhat : Regime::BelowQhat);
}

TEST(ClosedForm, SymbolTooShort) {
  EXPECT_EQ(code_of([] { prop1_interval(table1_absorbing(0.04, 1, 10)); }), ErrorCode::SymbolTooShort);
}

TEST(ClosedForm, WindowsAreInsideTheSymbol) {
  for (double ts : {0.2, 0.3, 0.6}) {
    for (int L : {1, 2, 4, 8}) {
      for (std::int64_t q : {50, 5000, 500000}) {
        const auto p = table1_absorbing(ts, L, q);
        const auto r = closed_form_interval(p);
        EXPECT_NO_THROW(validate_window(p, r.window));
        EXPECT_LT(r.window.t1, r.window.t2);
      }
    }
  }
}

TEST(Search, NumericMsinarNearClosedForm) {
  const auto p = table1_absorbing(0.2, 8, 2000);
  const auto num = numeric_metric_search(p, Metric::Msinar, {400, 1});
  EXPECT_NEAR(num.window.t1, 0.033, 1e-9);
  EXPECT_NEAR(num.window.t2, 0.1255, 1e-9);
  const auto cf = closed_form_interval(p);
  EXPECT_NEAR(num.window.t1, cf.window.t1, 0.1 * cf.window.t1);
}

TEST(Search, WorkerCountDoesNotChangeResult) {
  const auto p = table1_absorbing(0.2, 4, 3000);
  const auto a = numeric_metric_search(p, Metric::Sinar, {200, 1});
  const auto b = numeric_metric_search(p, Metric::Sinar, {200, 4});
  EXPECT_EQ(a.window, b.window);
  EXPECT_EQ(a.objective, b.objective);
  const auto pp = table1_passive(1.0, 3, 3000);
  EXPECT_EQ(exhaustive_ber_search(pp, {1, 1}).window, exhaustive_ber_search(pp, {1, 3}).window);
}

TEST(Search, ExhaustiveBeatsMetricWindowOnSameGrid) {
  const auto p = table1_absorbing(0.2, 4, 1000);
  const SearchOptions o{50, 0};
  const auto ex = exhaustive_ber_search(p, o);
  for (Metric m : {Metric::Msinar, Metric::Sinar, Metric::Sir, Metric::Msid}) {
    const auto w = numeric_metric_search(p, m, o).window;
    EXPECT_LE(ex.objective, optimal_threshold(p, w).value) << to_string(m);
  }
  ASSERT_TRUE(ex.threshold.has_value());
  EXPECT_EQ(ex.objective, optimal_threshold(p, ex.window).value);
}

TEST(Search, SidDegenerateFallback) {
  // With L = 8 at T_s = 0.2 some ISI windows dominate; with L large enough
  // at a short symbol SID is never positive.
  const auto p = table1_absorbing(0.06, 12, 100);
  const auto r = numeric_metric_search(p, Metric::Sid, {100, 1});
  if (r.degenerate) {
    EXPECT_NEAR(r.window.t2 - r.window.t1, 0.06 / 100, 1e-12);
  } else {
    EXPECT_GT(r.objective, 0.0);
  }
}

TEST(Search, EnumerationLimit) {
  EXPECT_EQ(code_of([] { exhaustive_ber_search(table1_absorbing(0.2, 13, 100), {10, 1}); }), ErrorCode::EnumerationTooLarge);
}

TEST(ShiftTau, NeverWorseThanFullWindow) {
  for (int L : {1, 4}) {
    const auto p = table1_absorbing(0.2, L, 2000);
    const auto s = shift_tau_search(p, {50, 0});
    const auto f = full_window(p);
    EXPECT_LE(s.objective, f.objective);
    EXPECT_GE(s.shift, 0.0);
    EXPECT_LE(s.shift, derive(p).t_max);
  }
}
