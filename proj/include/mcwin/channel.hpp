#pragma once

// Diffusion channel responses for a point transmitter and a spherical receiver.

#include <cmath>
#include <limits>
#include <numbers>

#include "mcwin/error.hpp"
#include "mcwin/params.hpp"
#include "mcwin/special.hpp"
#include "mcwin/window.hpp"

namespace mcwin::channel {

/// First-hitting-time density of the absorbing sphere, h(t) in 1/s.
///
/// h(t) = r/(d+r) * d / sqrt(4 pi D t^3) * exp(-d^2 / (4 D t)). Integrates to
/// r/(d+r) over (0, inf): a molecule escapes to infinity with the complementary
/// probability.
inline double hitting_density(const SystemParams& p, double t) {
  if (!(t > 0.0)) throw Error(ErrorCode::Domain, "hitting_density needs t > 0");
  const double d = p.distance;
  const double capture = p.radius / (d + p.radius);
  return capture * d / std::sqrt(4.0 * std::numbers::pi * p.diffusion * t * t * t) *
         std::exp(-d * d / (4.0 * p.diffusion * t));
}

namespace detail {
// erf argument d / sqrt(4 D t); t == 0 maps to +inf.
inline double erf_argument(const SystemParams& p, double t) {
  if (t == 0.0) return std::numeric_limits<double>::infinity();
  return p.distance / std::sqrt(4.0 * p.diffusion * t);
}
}  // namespace detail

/// Expected fraction of released molecules absorbed during [t1, t2].
inline double absorbed_fraction(const SystemParams& p, double t1, double t2) {
  if (!(t1 >= 0.0)) throw Error(ErrorCode::Domain, "absorbed_fraction needs t1 >= 0");
  if (t1 > t2) throw Error(ErrorCode::Domain, "absorbed_fraction needs t1 <= t2");
  if (t1 == t2) return 0.0;
  const double capture = p.radius / (p.distance + p.radius);
  const double a = detail::erf_argument(p, t1);
  const double b = std::isinf(t2) ? 0.0 : detail::erf_argument(p, t2);
  return capture * special::erf_difference(a, b);
}

/// Fraction absorbed in the window k symbols after the release, F_ab(t1 + k T_s, t2 + k T_s).
inline double isi_fraction(const SystemParams& p, const DetectionWindow& w, int k) {
  validate_window(p, w);
  if (k < 0) throw Error(ErrorCode::Domain, "tap index must be non-negative");
  const double shift = k * p.symbol_time;
  return absorbed_fraction(p, w.t1 + shift, w.t2 + shift);
}

/// Probability that one molecule is inside the passive receiver at time t.
///
/// p(t) = V / (4 pi D t)^(3/2) * exp(-(d+r)^2 / (4 D t)); p(0) is defined as the
/// limit value 0.
inline double passive_probability(const SystemParams& p, double t) {
  if (t == 0.0) return 0.0;
  if (!(t > 0.0)) throw Error(ErrorCode::Domain, "passive_probability needs t >= 0");
  const double span = p.distance + p.radius;
  const double volume = 4.0 * std::numbers::pi * p.radius * p.radius * p.radius / 3.0;
  return volume / std::pow(4.0 * std::numbers::pi * p.diffusion * t, 1.5) *
         std::exp(-span * span / (4.0 * p.diffusion * t));
}

/// p_{n,i} = p(n t_s + i T_s): sample n of the symbol sent i periods earlier.
inline double sample_probability(const SystemParams& p, double n, int i) {
  if (n < 0.0 || i < 0) throw Error(ErrorCode::Domain, "sample and tap indices must be non-negative");
  return passive_probability(p, n * p.sample_interval + i * p.symbol_time);
}

/// Peak of the response the receiver sees.
inline double peak_time(const SystemParams& p) { return derive(p).t_max; }

}  // namespace mcwin::channel
