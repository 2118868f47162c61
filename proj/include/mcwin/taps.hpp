#pragma once

// Per-symbol contributions to one detection window.
//
// Every scheme in the library (plain windows, shifted windows) reduces to the
// same description: the bit sent `offset` symbols before the current one
// contributes Binomial(Q, f) (absorbing) or Poisson(Q f) (passive) molecules to
// the count. Offset 0 is the desired signal, offsets 1..L are past symbols and
// offset -1 is the next symbol, which only reaches a window delayed past T_s.

#include <algorithm>
#include <tuple>
#include <vector>

#include "mcwin/channel.hpp"
#include "mcwin/params.hpp"
#include "mcwin/window.hpp"

namespace mcwin {

struct Tap {
  int offset = 0;                ///< symbols between the emitting bit and the current one
  double fraction = 0.0;         ///< expected fraction of Q counted in the window
  double variance_weight = 0.0;  ///< per-molecule variance: f(1-f) or f (Poisson)

  bool operator==(const Tap&) const = default;
};

struct TapProfile {
  Receiver receiver = Receiver::Absorbing;
  Tap signal;
  std::vector<Tap> interferers;  ///< canonical order, zero taps removed

  /// Fraction of tap `offset` or 0 if it has no contribution.
  double fraction(int offset) const {
    if (offset == 0) return signal.fraction;
    for (const Tap& t : interferers) {
      if (t.offset == offset) return t.fraction;
    }
    return 0.0;
  }

  double interference_sum() const {
    double s = 0.0;
    for (const Tap& t : interferers) s += t.fraction;
    return s;
  }
};

namespace detail {

inline Tap make_tap(Receiver rx, int offset, double f) {
  return Tap{offset, f, rx == Receiver::Absorbing ? f * (1.0 - f) : f};
}

/// Sorts interferers so that enumeration order does not depend on how the
/// caller listed them; drops taps that can never contribute.
inline void canonicalize(std::vector<Tap>& taps) {
  std::erase_if(taps, [](const Tap& t) { return t.fraction == 0.0; });
  std::sort(taps.begin(), taps.end(), [](const Tap& a, const Tap& b) {
    return std::tie(a.fraction, a.variance_weight, a.offset) >
           std::tie(b.fraction, b.variance_weight, b.offset);
  });
}

inline double sampled_sum(const SystemParams& p, int n1, int n2, double shift, int offset) {
  double s = 0.0;
  for (int n = n1; n <= n2; ++n) {
    const double t = n * p.sample_interval + shift + offset * p.symbol_time;
    if (t > 0.0) s += channel::passive_probability(p, t);
  }
  return s;
}

inline double continuous_fraction(const SystemParams& p, double t1, double t2, double shift, int offset) {
  const double base = shift + offset * p.symbol_time;
  const double a = std::max(0.0, t1 + base);
  const double b = std::max(0.0, t2 + base);
  return channel::absorbed_fraction(p, a, b);
}

}  // namespace detail

/// Tap profile of `window` delayed by `shift` seconds (0 for ordinary windows).
///
/// Past symbols 1..L are always included. The next symbol is included when the
/// delayed window reaches past the end of the current symbol period.
inline TapProfile tap_profile(const SystemParams& p, const DetectionWindow& w, double shift = 0.0) {
  validate_window(p, w);
  if (shift < 0.0) throw Error(ErrorCode::Domain, "window shift must be non-negative");
  TapProfile prof;
  prof.receiver = p.receiver;
  auto fraction_at = [&](int offset) {
    if (p.receiver == Receiver::Absorbing) return detail::continuous_fraction(p, w.t1, w.t2, shift, offset);
    return detail::sampled_sum(p, w.n1, w.n2, shift, offset);
  };
  prof.signal = detail::make_tap(p.receiver, 0, fraction_at(0));
  for (int k = 1; k <= p.isi_length; ++k) {
    prof.interferers.push_back(detail::make_tap(p.receiver, k, fraction_at(k)));
  }
  if (shift > 0.0) prof.interferers.push_back(detail::make_tap(p.receiver, -1, fraction_at(-1)));
  detail::canonicalize(prof.interferers);
  return prof;
}

/// Per-tap fractions in offset order 0..L (zeros kept), the strongest-ISI view
/// used by the metric family.
inline std::vector<double> tap_fractions(const SystemParams& p, const DetectionWindow& w) {
  validate_window(p, w);
  std::vector<double> out;
  out.reserve(static_cast<std::size_t>(p.isi_length) + 1);
  for (int k = 0; k <= p.isi_length; ++k) {
    out.push_back(p.receiver == Receiver::Absorbing ? detail::continuous_fraction(p, w.t1, w.t2, 0.0, k)
                                                    : detail::sampled_sum(p, w.n1, w.n2, 0.0, k));
  }
  return out;
}

}  // namespace mcwin
