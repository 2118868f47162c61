#pragma once

// BER surrogate metrics of a detection window under the strongest ISI pattern
// (every past bit is 1), the mSINAR regime boundary Q-hat and the noise
// inflation factor G(Q) used above it.

#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>
#include <optional>
#include <string_view>
#include <vector>

#include "mcwin/channel.hpp"
#include "mcwin/error.hpp"
#include "mcwin/params.hpp"
#include "mcwin/taps.hpp"
#include "mcwin/window.hpp"

namespace mcwin {

enum class Metric { Sir, Sid, Sinar, Msinar, Msid };

constexpr std::string_view to_string(Metric m) noexcept {
  switch (m) {
    case Metric::Sir: return "sir";
    case Metric::Sid: return "sid";
    case Metric::Sinar: return "sinar";
    case Metric::Msinar: return "msinar";
    case Metric::Msid: return "msid";
  }
  return "?";
}

/// Signal fraction, interference fractions and per-molecule noise weights of a
/// window, offset order 0..L.
struct MetricTaps {
  double signal = 0.0;
  double interference = 0.0;   ///< sum over k >= 1 of f_k
  double noise_root_sum = 0.0; ///< sum over k >= 0 of sqrt(v_k)

  static MetricTaps from(const SystemParams& p, const DetectionWindow& w) {
    const std::vector<double> f = tap_fractions(p, w);
    MetricTaps t;
    t.signal = f[0];
    for (std::size_t k = 0; k < f.size(); ++k) {
      if (k > 0) t.interference += f[k];
      const double v = p.receiver == Receiver::Absorbing ? f[k] * (1.0 - f[k]) : f[k];
      t.noise_root_sum += std::sqrt(v);
    }
    return t;
  }
};

namespace detail {
inline void require_isi(const SystemParams& p) {
  if (p.isi_length < 1) throw Error(ErrorCode::Domain, "metrics need L >= 1");
}
inline void require_molecules(const SystemParams& p) {
  if (p.molecules < 1) throw Error(ErrorCode::Domain, "noise-aware metrics need Q >= 1");
}
}  // namespace detail

inline double sir(const SystemParams& p, const DetectionWindow& w) {
  detail::require_isi(p);
  const MetricTaps t = MetricTaps::from(p, w);
  if (t.interference == 0.0) throw Error(ErrorCode::InfiniteSir, "all ISI fractions are zero");
  return t.signal / t.interference;
}

inline double sid(const SystemParams& p, const DetectionWindow& w) {
  detail::require_isi(p);
  const MetricTaps t = MetricTaps::from(p, w);
  const double q = static_cast<double>(p.molecules);
  return q * t.signal - q * t.interference;
}

inline double sinar(const SystemParams& p, const DetectionWindow& w) {
  detail::require_isi(p);
  detail::require_molecules(p);
  const MetricTaps t = MetricTaps::from(p, w);
  const double q = static_cast<double>(p.molecules);
  const double denom = q * t.interference + std::sqrt(q) * t.noise_root_sum;
  if (denom == 0.0) throw Error(ErrorCode::InfiniteSinar, "SINAR denominator is zero");
  return q * t.signal / denom;
}

/// mSINAR in its equal-prior form: (f0/2) / (sum f_k/2 + sum sqrt(v_k / 2Q)).
inline double msinar(const SystemParams& p, const DetectionWindow& w) {
  detail::require_isi(p);
  detail::require_molecules(p);
  const MetricTaps t = MetricTaps::from(p, w);
  const double q = static_cast<double>(p.molecules);
  const double denom = 0.5 * t.interference + t.noise_root_sum / std::sqrt(2.0 * q);
  if (denom == 0.0) throw Error(ErrorCode::InfiniteSinar, "mSINAR denominator is zero");
  return 0.5 * t.signal / denom;
}

/// The same quantity written as the window objective: f0 / (sum f_k + sum sqrt(2 v_k / Q)).
inline double msinar_objective(const MetricTaps& t, double molecules) {
  const double denom = t.interference + std::sqrt(2.0 / molecules) * t.noise_root_sum;
  if (denom == 0.0) throw Error(ErrorCode::InfiniteSinar, "mSINAR denominator is zero");
  return t.signal / denom;
}

inline double msid(const SystemParams& p, const DetectionWindow& w) {
  detail::require_isi(p);
  detail::require_molecules(p);
  const MetricTaps t = MetricTaps::from(p, w);
  const double q = static_cast<double>(p.molecules);
  return t.signal - t.interference - std::sqrt(2.0 / q) * t.noise_root_sum;
}

/// 2 (sum sqrt(v_k) / (f0 - sum f_k))^2 before rounding up.
inline double q_hat_unrounded(const MetricTaps& t) {
  const double margin = t.signal - t.interference;
  if (!(margin > 0.0)) {
    throw Error(ErrorCode::NoFiniteQhat, "signal does not exceed interference, mSINAR cannot reach 1");
  }
  const double ratio = t.noise_root_sum / margin;
  return 2.0 * ratio * ratio;
}

/// Molecule count at which mSINAR of the window reaches 1 (rounded up).
inline std::int64_t q_hat(const SystemParams& p, const DetectionWindow& w) {
  detail::require_isi(p);
  return static_cast<std::int64_t>(std::ceil(q_hat_unrounded(MetricTaps::from(p, w))));
}

struct Alphas {
  double alpha1 = 0.0;
  double alpha2 = 0.0;
};

/// Noise-to-signal ratios of the current and first ISI tap over a full symbol.
///
/// Absorbing: alpha = sqrt((1 - F) / F) with F the fraction absorbed in
/// [0, T_s] and [T_s, 2 T_s]. Passive: alpha = 1 / sqrt(sum_n p_{n,k}) for
/// k = 0, 1 over all N + 1 samples.
inline Alphas alphas(const SystemParams& p) {
  Alphas a;
  if (p.receiver == Receiver::Absorbing) {
    const double f0 = channel::absorbed_fraction(p, 0.0, p.symbol_time);
    const double f1 = channel::absorbed_fraction(p, p.symbol_time, 2.0 * p.symbol_time);
    a.alpha1 = std::sqrt((1.0 - f0) / f0);
    a.alpha2 = std::sqrt((1.0 - f1) / f1);
  } else {
    double s0 = 0.0;
    double s1 = 0.0;
    for (int n = 0; n <= p.samples; ++n) {
      s0 += channel::sample_probability(p, n, 0);
      s1 += channel::sample_probability(p, n, 1);
    }
    a.alpha1 = 1.0 / std::sqrt(s0);
    a.alpha2 = 1.0 / std::sqrt(s1);
  }
  return a;
}

/// G(Q) = (sqrt(Q) + sqrt(2) alpha2) / (sqrt(Q) - sqrt(2) alpha1), defined for Q > 2 alpha1^2.
inline double g_factor(const Alphas& a, double q) {
  const double root = std::sqrt(q);
  const double pole = std::numbers::sqrt2 * a.alpha1;
  if (!(root > pole)) throw Error(ErrorCode::GainPole, "G(Q) needs Q > 2 alpha1^2");
  return (root + std::numbers::sqrt2 * a.alpha2) / (root - pole);
}

inline double g_factor(const SystemParams& p, double q) { return g_factor(alphas(p), q); }

struct MetricReport {
  double sir = 0.0;    ///< +inf when there is no interference
  double sid = 0.0;
  double sinar = 0.0;
  double msinar = 0.0;
  double msid = 0.0;
  std::optional<std::int64_t> q_hat;  ///< empty when mSINAR cannot reach 1
  std::optional<double> g_factor;     ///< G(Q) at the configured Q, empty at or below the pole
  double alpha1 = 0.0;
  double alpha2 = 0.0;
};

inline MetricReport metric_report(const SystemParams& p, const DetectionWindow& w) {
  detail::require_isi(p);
  detail::require_molecules(p);
  const MetricTaps t = MetricTaps::from(p, w);
  const double q = static_cast<double>(p.molecules);
  const double inf = std::numeric_limits<double>::infinity();
  MetricReport r;
  r.sir = t.interference == 0.0 ? inf : t.signal / t.interference;
  r.sid = q * t.signal - q * t.interference;
  const double sinar_den = q * t.interference + std::sqrt(q) * t.noise_root_sum;
  r.sinar = sinar_den == 0.0 ? inf : q * t.signal / sinar_den;
  const double msinar_den = 0.5 * t.interference + t.noise_root_sum / std::sqrt(2.0 * q);
  r.msinar = msinar_den == 0.0 ? inf : 0.5 * t.signal / msinar_den;
  r.msid = t.signal - t.interference - std::sqrt(2.0 / q) * t.noise_root_sum;
  if (t.signal > t.interference) r.q_hat = static_cast<std::int64_t>(std::ceil(q_hat_unrounded(t)));
  const Alphas a = alphas(p);
  r.alpha1 = a.alpha1;
  r.alpha2 = a.alpha2;
  if (q > 2.0 * a.alpha1 * a.alpha1) r.g_factor = g_factor(a, q);
  return r;
}

}  // namespace mcwin
