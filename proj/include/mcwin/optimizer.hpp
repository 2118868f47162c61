#pragma once

// Detection-window optimization: closed-form windows for both receivers, grid
// searches on the metric family and on the analytic BER, and the shift-tau
// baseline.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <limits>
#include <optional>
#include <string_view>
#include <vector>

#include "mcwin/channel.hpp"
#include "mcwin/error.hpp"
#include "mcwin/metrics.hpp"
#include "mcwin/parallel.hpp"
#include "mcwin/params.hpp"
#include "mcwin/reception.hpp"
#include "mcwin/special.hpp"
#include "mcwin/taps.hpp"
#include "mcwin/window.hpp"

namespace mcwin {

enum class Regime { BelowQhat, AboveQhat };

/// How the upper window edge was obtained.
enum class Branch {
  CondTs,        ///< ISI never overtakes the signal late in the symbol: t2 = T_s
  CubicNegDisc,  ///< three real roots, Cardano form
  QuadPosDisc,   ///< quadratic reduction, non-negative discriminant
  QuadNegDisc,   ///< quadratic reduction, vertex
};

enum class Method { Prop1, Prop2, Prop3, Prop4, NumericMetric, ExhaustiveBer, ShiftTau, FullWindow };

constexpr std::string_view to_string(Regime r) noexcept {
  return r == Regime::BelowQhat ? "BelowQhat" : "AboveQhat";
}

constexpr std::string_view to_string(Branch b) noexcept {
  switch (b) {
    case Branch::CondTs: return "CondTs";
    case Branch::CubicNegDisc: return "CubicNegDisc";
    case Branch::QuadPosDisc: return "QuadPosDisc";
    case Branch::QuadNegDisc: return "QuadNegDisc";
  }
  return "?";
}

constexpr std::string_view to_string(Method m) noexcept {
  switch (m) {
    case Method::Prop1: return "Prop1";
    case Method::Prop2: return "Prop2";
    case Method::Prop3: return "Prop3";
    case Method::Prop4: return "Prop4";
    case Method::NumericMetric: return "NumericMetric";
    case Method::ExhaustiveBer: return "ExhaustiveBer";
    case Method::ShiftTau: return "ShiftTau";
    case Method::FullWindow: return "FullWindow";
  }
  return "?";
}

/// Every quantity the closed forms compute on the way to a window. Ratios that
/// a path does not use stay at 1; unused anchors stay at 0.
struct ClosedFormIntermediates {
  Regime regime = Regime::BelowQhat;
  double i_ratio = 1.0;  ///< interference ratio at the first-edge anchor (absorbing)
  double v_ratio = 1.0;  ///< interference ratio at the second-edge anchor (absorbing)
  double w_ratio = 1.0;  ///< passive analogue of i_ratio
  double a_ratio = 1.0;  ///< passive analogue of v_ratio
  double gamma = 0.0;
  double delta1 = 0.0;
  double delta2 = 0.0;
  std::complex<double> s1{};
  std::complex<double> s2{};
  double t1_anchor = 0.0;
  double t2_anchor = 0.0;
  double n1_anchor = 0.0;
  double n2_anchor = 0.0;
  Branch branch = Branch::CondTs;
  double condition = 0.0;     ///< gain * sum_k (1+k)^{-3/2} exp(k/(1+k) m^2/T_s); <= 1 selects CondTs
  double gain = 1.0;          ///< G applied to the ratios (1 below Q-hat)
  std::optional<std::int64_t> q_hat;
  double first_edge = 0.0;    ///< t1 (s) or n1 (samples) before clamping
  double upper_fraction = 1.0;///< t2 / T_s or n2 / N before clamping
  bool clamped = false;
};

struct OptimizationResult {
  DetectionWindow window;
  double shift = 0.0;  ///< delay of the window (shift-tau only)
  Method method = Method::FullWindow;
  std::optional<ClosedFormIntermediates> intermediates;
  double objective = 0.0;             ///< metric value or BER, depending on method
  std::optional<double> threshold;    ///< integer detection threshold for BER-scored methods
  bool degenerate = false;
};

namespace detail {

/// 28 m^2 T_s / (120 T_s - 28 T_s ln R - 74 m^2), the linearized first root.
inline double first_edge(double m2, double ts, double log_ratio) {
  const double denom = 120.0 * ts - 28.0 * ts * log_ratio - 74.0 * m2;
  if (!(denom > 0.0)) {
    throw Error(ErrorCode::SymbolTooShort, "closed-form first edge has a non-positive denominator");
  }
  return 28.0 * m2 * ts / denom;
}

inline double late_isi_condition(double m2, double ts, int isi_length) {
  double s = 0.0;
  for (int k = 1; k <= isi_length; ++k) {
    s += std::pow(1.0 + k, -1.5) * std::exp(k / (1.0 + k) * m2 / ts);
  }
  return s;
}

/// Fills gamma, the discriminants, s1/s2, the branch and upper_fraction.
///
/// x = t2 / T_s is a root of ln V x^3 + 3 ln V x^2 + gamma x + 2 m^2 / T_s with
/// gamma = 2 ln V + m^2 / T_s - 6. delta1 is the Shengjin discriminant B^2 - 4AC
/// of that cubic: negative means three real roots, and the Cardano sum with
/// complex-conjugate s1, s2 is real.
inline void upper_edge(ClosedFormIntermediates& cf, double m2, double ts, int isi_length, double log_v) {
  cf.condition = cf.gain * late_isi_condition(m2, ts, isi_length);
  const double lv = log_v;
  const double e = m2 / ts;
  cf.gamma = 2.0 * lv + e - 6.0;
  const double g = cf.gamma;
  cf.delta1 = lv * lv * ((3.0 * g - 18.0 * e) * (3.0 * g - 18.0 * e) -
                         (36.0 - 12.0 * g / lv) * (g * g - 18.0 * e * lv));
  cf.delta2 = (e - 6.0) * (e - 6.0) + 4.0 * lv * lv - (20.0 * e + 24.0) * lv;
  const std::complex<double> root = std::sqrt(std::complex<double>(9.0 * cf.delta1, 0.0));
  const double base = -(81.0 / lv + 27.0 * e / (2.0 * lv));
  cf.s1 = base + root / (2.0 * lv * lv);
  cf.s2 = base - root / (2.0 * lv * lv);

  if (cf.condition <= 1.0) {
    cf.branch = Branch::CondTs;
    cf.upper_fraction = 1.0;
  } else if (cf.delta1 < 0.0) {
    cf.branch = Branch::CubicNegDisc;
    const std::complex<double> x = (-3.0 + special::principal_cbrt(cf.s1) + special::principal_cbrt(cf.s2)) / 3.0;
    cf.upper_fraction = x.real();
  } else if (cf.delta2 >= 0.0) {
    cf.branch = Branch::QuadPosDisc;
    cf.upper_fraction = (-g + std::sqrt(cf.delta2)) / (6.0 * lv);
  } else {
    cf.branch = Branch::QuadNegDisc;
    cf.upper_fraction = -g / (6.0 * lv);
  }
}

inline double hitting_ratio_sum(const SystemParams& p, double anchor, int isi_length) {
  const double base = channel::hitting_density(p, p.symbol_time + anchor);
  double s = 0.0;
  for (int k = 1; k <= isi_length; ++k) s += channel::hitting_density(p, k * p.symbol_time + anchor) / base;
  return s;
}

inline double sample_ratio_sum(const SystemParams& p, double anchor, int isi_length) {
  const double base = channel::sample_probability(p, anchor, 1);
  double s = 0.0;
  for (int k = 1; k <= isi_length; ++k) s += channel::sample_probability(p, anchor, k) / base;
  return s;
}

inline DetectionWindow clamp_continuous(const SystemParams& p, ClosedFormIntermediates& cf, double t1, double t2) {
  const double c1 = std::clamp(t1, 0.0, p.symbol_time);
  const double c2 = std::clamp(t2, 0.0, p.symbol_time);
  if (c1 != t1 || c2 != t2 || !std::isfinite(t2)) cf.clamped = true;
  if (!(c2 > c1)) throw Error(ErrorCode::DegenerateWindow, "closed-form window is empty after clamping");
  return DetectionWindow::continuous(c1, c2);
}

inline DetectionWindow clamp_sampled(const SystemParams& p, ClosedFormIntermediates& cf, double n1, double n2) {
  if (n1 > p.samples) throw Error(ErrorCode::DegenerateWindow, "closed-form first sample lies past N");
  const double c1 = std::clamp(n1, 0.0, static_cast<double>(p.samples));
  const double c2 = std::isfinite(n2) ? std::clamp(n2, 0.0, static_cast<double>(p.samples)) : p.samples;
  if (c1 != n1 || c2 != n2) cf.clamped = true;
  if (c2 < c1) throw Error(ErrorCode::DegenerateWindow, "closed-form sample range is empty after clamping");
  return DetectionWindow::sampled(static_cast<int>(c1), static_cast<int>(c2));
}

inline void require(const SystemParams& p, Receiver rx, const char* what) {
  p.validate();
  if (p.receiver != rx) throw Error(ErrorCode::Domain, std::string(what) + " needs the " + std::string(to_string(rx)) + " receiver");
}

inline OptimizationResult closed_form_result(Method m, DetectionWindow w, const ClosedFormIntermediates& cf) {
  OptimizationResult r;
  r.window = w;
  r.method = m;
  r.intermediates = cf;
  return r;
}

/// Absorbing window below Q-hat: single-ISI form for L = 1, ratio form otherwise.
inline OptimizationResult absorbing_sub_qhat(const SystemParams& p);

/// Inflated gain G(G(Q-hat) Q-hat) used above the regime boundary.
inline double regime_gain(const Alphas& a, std::int64_t q_hat) {
  const double q = static_cast<double>(q_hat);
  return g_factor(a, g_factor(a, q) * q);
}

}  // namespace detail

/// Closed-form absorbing window for L = 1 below Q-hat.
inline OptimizationResult prop1_interval(const SystemParams& p) {
  detail::require(p, Receiver::Absorbing, "prop1_interval");
  if (p.isi_length != 1) throw Error(ErrorCode::Domain, "prop1_interval needs L = 1");
  const double m2 = derive(p).m2();
  ClosedFormIntermediates cf;
  cf.first_edge = detail::first_edge(m2, p.symbol_time, 0.0);
  cf.upper_fraction = 1.0;
  cf.branch = Branch::CondTs;
  const DetectionWindow w = detail::clamp_continuous(p, cf, cf.first_edge, p.symbol_time);
  return detail::closed_form_result(Method::Prop1, w, cf);
}

/// Closed-form absorbing window for L > 1 below Q-hat.
inline OptimizationResult prop2_interval(const SystemParams& p) {
  detail::require(p, Receiver::Absorbing, "prop2_interval");
  if (p.isi_length < 2) throw Error(ErrorCode::Domain, "prop2_interval needs L > 1");
  const DerivedConstants c = derive(p);
  const double ts = p.symbol_time;
  ClosedFormIntermediates cf;
  cf.t1_anchor = detail::first_edge(c.m2(), ts, 0.0);
  cf.i_ratio = detail::hitting_ratio_sum(p, cf.t1_anchor, p.isi_length);
  cf.first_edge = detail::first_edge(c.m2(), ts, std::log(cf.i_ratio));
  cf.t2_anchor = 0.5 * (c.t_max + ts);
  cf.v_ratio = detail::hitting_ratio_sum(p, cf.t2_anchor, p.isi_length);
  detail::upper_edge(cf, c.m2(), ts, p.isi_length, std::log(cf.v_ratio));
  const DetectionWindow w = detail::clamp_continuous(p, cf, cf.first_edge, cf.upper_fraction * ts);
  return detail::closed_form_result(Method::Prop2, w, cf);
}

inline OptimizationResult detail::absorbing_sub_qhat(const SystemParams& p) {
  return p.isi_length == 1 ? prop1_interval(p) : prop2_interval(p);
}

/// Closed-form absorbing window at or above Q-hat, for any L >= 1.
///
/// Q-hat is taken at the sub-Q-hat window. The ISI ratios are inflated by
/// G(Q) with Q = G(Q-hat) Q-hat and re-anchored at the sub-Q-hat edges.
inline OptimizationResult prop3_interval(const SystemParams& p) {
  detail::require(p, Receiver::Absorbing, "prop3_interval");
  if (p.isi_length < 1) throw Error(ErrorCode::Domain, "prop3_interval needs L >= 1");
  const DerivedConstants c = derive(p);
  const double ts = p.symbol_time;
  const OptimizationResult sub = detail::absorbing_sub_qhat(p);

  ClosedFormIntermediates cf;
  cf.regime = Regime::AboveQhat;
  cf.q_hat = q_hat(p, sub.window);
  cf.gain = detail::regime_gain(alphas(p), *cf.q_hat);
  const double log_gain = std::log(cf.gain);

  if (p.isi_length == 1) {
    cf.first_edge = detail::first_edge(c.m2(), ts, log_gain);
    cf.upper_fraction = 1.0;
    cf.branch = Branch::CondTs;
    const DetectionWindow w = detail::clamp_continuous(p, cf, cf.first_edge, ts);
    return detail::closed_form_result(Method::Prop3, w, cf);
  }
  cf.t1_anchor = sub.window.t1;
  cf.t2_anchor = 0.5 * (sub.window.t2 + c.t_max);
  cf.i_ratio = detail::hitting_ratio_sum(p, cf.t1_anchor, p.isi_length);
  cf.v_ratio = detail::hitting_ratio_sum(p, cf.t2_anchor, p.isi_length);
  cf.first_edge = detail::first_edge(c.m2(), ts, std::log(cf.i_ratio) + log_gain);
  detail::upper_edge(cf, c.m2(), ts, p.isi_length, std::log(cf.v_ratio) + log_gain);
  const DetectionWindow w = detail::clamp_continuous(p, cf, cf.first_edge, cf.upper_fraction * ts);
  return detail::closed_form_result(Method::Prop3, w, cf);
}

namespace detail {

inline OptimizationResult passive_below(const SystemParams& p) {
  const DerivedConstants c = derive(p);
  const double ts = p.symbol_time;
  const double step = p.sample_interval;
  const double n = static_cast<double>(p.samples);
  ClosedFormIntermediates cf;
  const double n1_single = std::ceil(first_edge(c.m_hat2(), ts, 0.0) / step);
  if (p.isi_length <= 1) {
    cf.first_edge = n1_single;
    cf.upper_fraction = 1.0;
    cf.branch = Branch::CondTs;
    return closed_form_result(Method::Prop4, clamp_sampled(p, cf, cf.first_edge, n), cf);
  }
  cf.n1_anchor = n1_single;
  cf.w_ratio = sample_ratio_sum(p, cf.n1_anchor, p.isi_length);
  cf.first_edge = std::ceil(first_edge(c.m_hat2(), ts, std::log(cf.w_ratio)) / step);
  cf.n2_anchor = std::ceil((c.t_max + ts) / (2.0 * step));
  cf.a_ratio = sample_ratio_sum(p, cf.n2_anchor, p.isi_length);
  upper_edge(cf, c.m_hat2(), ts, p.isi_length, std::log(cf.a_ratio));
  const double n2 = cf.branch == Branch::CondTs ? n : std::ceil(cf.upper_fraction * n);
  return closed_form_result(Method::Prop4, clamp_sampled(p, cf, cf.first_edge, n2), cf);
}

inline OptimizationResult passive_above(const SystemParams& p, const OptimizationResult& sub) {
  const DerivedConstants c = derive(p);
  const double ts = p.symbol_time;
  const double step = p.sample_interval;
  const double n = static_cast<double>(p.samples);
  ClosedFormIntermediates cf;
  cf.regime = Regime::AboveQhat;
  cf.q_hat = q_hat(p, sub.window);
  cf.gain = regime_gain(alphas(p), *cf.q_hat);
  const double log_gain = std::log(cf.gain);
  if (p.isi_length <= 1) {
    cf.first_edge = std::ceil(first_edge(c.m_hat2(), ts, log_gain) / step);
    cf.upper_fraction = 1.0;
    cf.branch = Branch::CondTs;
    return closed_form_result(Method::Prop4, clamp_sampled(p, cf, cf.first_edge, n), cf);
  }
  cf.n1_anchor = sub.window.n1;
  cf.n2_anchor = (sub.window.n2 * step + c.t_max) / (2.0 * step);
  cf.w_ratio = sample_ratio_sum(p, cf.n1_anchor, p.isi_length);
  cf.a_ratio = sample_ratio_sum(p, cf.n2_anchor, p.isi_length);
  cf.first_edge = std::ceil(first_edge(c.m_hat2(), ts, std::log(cf.w_ratio) + log_gain) / step);
  upper_edge(cf, c.m_hat2(), ts, p.isi_length, std::log(cf.a_ratio) + log_gain);
  const double n2 = cf.branch == Branch::CondTs ? n : std::ceil(cf.upper_fraction * n);
  return closed_form_result(Method::Prop4, clamp_sampled(p, cf, cf.first_edge, n2), cf);
}

}  // namespace detail

/// Closed-form passive sample range in the requested regime.
inline OptimizationResult prop4_interval(const SystemParams& p, Regime regime) {
  detail::require(p, Receiver::Passive, "prop4_interval");
  if (p.isi_length < 1) throw Error(ErrorCode::Domain, "prop4_interval needs L >= 1");
  const OptimizationResult sub = detail::passive_below(p);
  if (regime == Regime::BelowQhat) return sub;
  return detail::passive_above(p, sub);
}

/// Q-hat at the sub-Q-hat closed-form window, or empty if mSINAR cannot reach 1 there.
inline std::optional<std::int64_t> closed_form_q_hat(const SystemParams& p) {
  const OptimizationResult sub =
      p.receiver == Receiver::Absorbing ? detail::absorbing_sub_qhat(p) : prop4_interval(p, Regime::BelowQhat);
  try {
    return q_hat(p, sub.window);
  } catch (const Error& e) {
    if (e.code() == ErrorCode::NoFiniteQhat) return std::nullopt;
    throw;
  }
}

/// Passive closed form with the regime chosen from the configured Q.
inline OptimizationResult prop4_interval(const SystemParams& p) {
  detail::require(p, Receiver::Passive, "prop4_interval");
  if (p.isi_length < 1) throw Error(ErrorCode::Domain, "prop4_interval needs L >= 1");
  OptimizationResult sub = detail::passive_below(p);
  const auto qh = closed_form_q_hat(p);
  if (qh && p.molecules >= *qh) return detail::passive_above(p, sub);
  sub.intermediates->q_hat = qh;
  return sub;
}

/// Closed-form window for either receiver; the regime follows from Q against Q-hat.
///
/// When mSINAR cannot reach 1 at the sub-Q-hat window, the sub-Q-hat window is
/// returned with an empty q_hat.
inline OptimizationResult closed_form_interval(const SystemParams& p) {
  p.validate();
  if (p.isi_length < 1) throw Error(ErrorCode::Domain, "closed-form windows need L >= 1");
  if (p.receiver == Receiver::Passive) return prop4_interval(p);
  OptimizationResult sub = detail::absorbing_sub_qhat(p);
  const auto qh = closed_form_q_hat(p);
  if (qh && p.molecules >= *qh) return prop3_interval(p);
  sub.intermediates->q_hat = qh;
  return sub;
}

struct SearchOptions {
  int grid_steps = 400;  ///< continuous grid: delta t = T_s / grid_steps
  int workers = 0;       ///< 0 = default_workers()
};

namespace detail {

/// Candidate windows in tie-break order: t1 ascending, then t2 descending.
/// Continuous windows need t1 < t2; sampled ranges may hold a single sample.
struct WindowGrid {
  const SystemParams& p;
  int steps;

  std::size_t rows() const { return static_cast<std::size_t>(p.receiver == Receiver::Absorbing ? steps : p.samples + 1); }

  double time(int i) const { return i == steps ? p.symbol_time : p.symbol_time * i / steps; }

  template <class Fn>
  void row(std::size_t r, Fn&& fn) const {
    const int i = static_cast<int>(r);
    if (p.receiver == Receiver::Absorbing) {
      for (int j = steps; j > i; --j) fn(DetectionWindow::continuous(time(i), time(j)));
    } else {
      for (int j = p.samples; j >= i; --j) fn(DetectionWindow::sampled(i, j));
    }
  }
};

struct Candidate {
  DetectionWindow window;
  double score = -std::numeric_limits<double>::infinity();
  std::optional<double> threshold;
  bool found = false;
};

/// Best candidate per row (first strict improvement wins), reduced in row order.
template <class Score>
Candidate grid_argmax(const WindowGrid& grid, int workers, Score&& score) {
  std::vector<Candidate> best(grid.rows());
  parallel_for(grid.rows(), workers, [&](std::size_t r) {
    Candidate& b = best[r];
    grid.row(r, [&](const DetectionWindow& w) {
      std::optional<double> thr;
      const double s = score(w, thr);
      if (!b.found || s > b.score) b = Candidate{w, s, thr, true};
    });
  });
  Candidate out;
  for (const Candidate& c : best) {
    if (c.found && (!out.found || c.score > out.score)) out = c;
  }
  return out;
}

inline int check_steps(int steps) {
  if (steps < 1) throw Error(ErrorCode::Domain, "grid_steps must be >= 1");
  return steps;
}

}  // namespace detail

/// Grid window maximizing one metric under the strongest ISI pattern. mSINAR
/// is scored at min(Q, Q-hat); a SID search whose best value is not positive
/// returns the window at t_max widened by one grid step, flagged degenerate.
inline OptimizationResult numeric_metric_search(const SystemParams& p, Metric metric, const SearchOptions& opt = {}) {
  p.validate();
  if (p.isi_length < 1) throw Error(ErrorCode::Domain, "metric search needs L >= 1");
  const detail::WindowGrid grid{p, detail::check_steps(opt.grid_steps)};
  const double q = static_cast<double>(p.molecules);
  if (metric != Metric::Sir && metric != Metric::Sid && p.molecules < 1) {
    throw Error(ErrorCode::Domain, "noise-aware metrics need Q >= 1");
  }
  double q_eval = q;
  if (metric == Metric::Msinar) {
    const auto qh = closed_form_q_hat(p);
    if (qh) q_eval = std::min(q, static_cast<double>(*qh));
  }
  const double inf = std::numeric_limits<double>::infinity();
  auto score = [&](const DetectionWindow& w, std::optional<double>&) {
    const MetricTaps t = MetricTaps::from(p, w);
    switch (metric) {
      case Metric::Sir: return t.interference > 0.0 ? t.signal / t.interference : inf;
      case Metric::Sid: return q * (t.signal - t.interference);
      case Metric::Sinar: {
        const double den = q * t.interference + std::sqrt(q) * t.noise_root_sum;
        return den > 0.0 ? q * t.signal / den : -inf;
      }
      case Metric::Msinar: {
        const double den = t.interference + std::sqrt(2.0 / q_eval) * t.noise_root_sum;
        return den > 0.0 ? t.signal / den : -inf;
      }
      case Metric::Msid: return t.signal - t.interference - std::sqrt(2.0 / q) * t.noise_root_sum;
    }
    return -inf;
  };
  const detail::Candidate best = detail::grid_argmax(grid, opt.workers, score);
  if (!best.found) throw Error(ErrorCode::DegenerateWindow, "metric search has no feasible window");

  OptimizationResult r;
  r.method = Method::NumericMetric;
  r.window = best.window;
  r.objective = best.score;
  if (metric == Metric::Sid && !(best.score > 0.0)) {
    const double t_max = derive(p).t_max;
    r.degenerate = true;
    if (p.receiver == Receiver::Absorbing) {
      const double dt = p.symbol_time / grid.steps;
      const double a = std::min(t_max, p.symbol_time - dt);
      r.window = DetectionWindow::continuous(std::max(0.0, a), std::min(p.symbol_time, a + dt));
    } else {
      const int n = std::clamp(static_cast<int>(std::lround(t_max / p.sample_interval)), 0, p.samples);
      r.window = DetectionWindow::sampled(std::min(n, std::max(0, p.samples - 1)), std::min(n + 1, p.samples));
    }
    r.objective = sid(p, r.window);
  }
  return r;
}

/// Grid window with the smallest analytic BER at its own optimal threshold.
inline OptimizationResult exhaustive_ber_search(const SystemParams& p, const SearchOptions& opt = {}) {
  p.validate();
  if (p.isi_length > 12) throw Error(ErrorCode::EnumerationTooLarge, "exhaustive BER search supports L <= 12");
  const detail::WindowGrid grid{p, detail::check_steps(opt.grid_steps)};
  const double q = static_cast<double>(p.molecules);
  auto score = [&](const DetectionWindow& w, std::optional<double>& thr) {
    const BerEstimate e = BerModel(tap_profile(p, w), q).optimal_threshold();
    thr = e.threshold;
    return -e.value;
  };
  const detail::Candidate best = detail::grid_argmax(grid, opt.workers, score);
  if (!best.found) throw Error(ErrorCode::DegenerateWindow, "BER search has no feasible window");
  OptimizationResult r;
  r.method = Method::ExhaustiveBer;
  r.window = best.window;
  r.objective = -best.score;
  r.threshold = best.threshold;
  return r;
}

/// Whole-symbol window scored at its optimal threshold (conventional OOK).
inline OptimizationResult full_window(const SystemParams& p) {
  p.validate();
  OptimizationResult r;
  r.method = Method::FullWindow;
  r.window = DetectionWindow::full(p);
  const BerEstimate e = optimal_threshold(p, r.window);
  r.objective = e.value;
  r.threshold = e.threshold;
  return r;
}

/// Whole-symbol window delayed by tau in [0, t_max] on a grid of
/// `grid_steps` + 1 points, minimizing the analytic BER. The next symbol's
/// leakage into the delayed window counts as interference. Ties keep the
/// smaller tau.
inline OptimizationResult shift_tau_search(const SystemParams& p, const SearchOptions& opt = {}) {
  p.validate();
  const int steps = detail::check_steps(opt.grid_steps);
  const double t_max = derive(p).t_max;
  const DetectionWindow w = DetectionWindow::full(p);
  const double q = static_cast<double>(p.molecules);
  std::vector<BerEstimate> ber(static_cast<std::size_t>(steps) + 1);
  auto tau_at = [&](std::size_t i) { return i == static_cast<std::size_t>(steps) ? t_max : t_max * static_cast<double>(i) / steps; };
  parallel_for(ber.size(), opt.workers, [&](std::size_t i) {
    ber[i] = BerModel(tap_profile(p, w, tau_at(i)), q).optimal_threshold();
  });
  std::size_t best = 0;
  for (std::size_t i = 1; i < ber.size(); ++i) {
    if (ber[i].value < ber[best].value) best = i;
  }
  OptimizationResult r;
  r.method = Method::ShiftTau;
  r.window = w;
  r.shift = tau_at(best);
  r.objective = ber[best].value;
  r.threshold = ber[best].threshold;
  return r;
}

}  // namespace mcwin
