#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <string>
#include <string_view>

#include "mcwin/error.hpp"

namespace mcwin {

enum class Receiver { Absorbing, Passive };

constexpr std::string_view to_string(Receiver r) noexcept {
  return r == Receiver::Absorbing ? "absorbing" : "passive";
}

/// Largest r/(r+d) for which the passive point-observation probability is used.
inline constexpr double kPassiveRadiusRatioLimit = 0.15;

/// Physical and protocol constants of one link. SI units throughout.
struct SystemParams {
  double distance = 0.0;        ///< transmitter to receiver surface d (m)
  double radius = 0.0;          ///< receiver radius r (m)
  double diffusion = 0.0;       ///< diffusion coefficient D (m^2/s)
  double symbol_time = 0.0;     ///< symbol duration T_s (s)
  int isi_length = 0;           ///< number of past symbols L that interfere
  std::int64_t molecules = 0;   ///< molecules released for bit "1" (Q)
  Receiver receiver = Receiver::Absorbing;
  int samples = 0;              ///< samples per symbol N (passive)
  double sample_interval = 0.0; ///< t_s (s, passive)

  bool operator==(const SystemParams&) const = default;

  /// Throws Error{InvalidParams} when an invariant does not hold.
  void validate() const {
    auto fail = [](const std::string& msg) { throw Error(ErrorCode::InvalidParams, msg); };
    if (!(distance > 0.0) || !std::isfinite(distance)) fail("distance must be positive");
    if (!(radius > 0.0) || !std::isfinite(radius)) fail("radius must be positive");
    if (!(diffusion > 0.0) || !std::isfinite(diffusion)) fail("diffusion coefficient must be positive");
    if (!(symbol_time > 0.0) || !std::isfinite(symbol_time)) fail("symbol time must be positive");
    if (isi_length < 0) fail("ISI length must be non-negative");
    if (molecules < 0) fail("molecule count must be non-negative");
    if (receiver == Receiver::Passive) {
      if (radius / (radius + distance) >= kPassiveRadiusRatioLimit) {
        fail("passive receiver requires r/(r+d) < 0.15");
      }
      if (samples < 1) fail("passive receiver needs at least one sample per symbol");
      if (!(sample_interval > 0.0) || !std::isfinite(sample_interval)) {
        fail("sample interval must be positive");
      }
      if (samples * sample_interval > symbol_time * (1.0 + 1e-12)) {
        fail("samples * sample_interval exceeds the symbol time");
      }
    }
  }

  SystemParams with_molecules(std::int64_t q) const {
    SystemParams p = *this;
    p.molecules = q;
    return p;
  }

  SystemParams with_isi_length(int l) const {
    SystemParams p = *this;
    p.isi_length = l;
    return p;
  }
};

/// Constants that follow from SystemParams.
struct DerivedConstants {
  double m = 0.0;          ///< d / sqrt(4D), s^(1/2)
  double m_hat = 0.0;      ///< (d + r) / sqrt(4D), s^(1/2)
  double t_max = 0.0;      ///< argmax of the receiver's response (s)
  double volume = 0.0;     ///< 4 pi r^3 / 3 (m^3)

  double m2() const { return m * m; }
  double m_hat2() const { return m_hat * m_hat; }
};

/// Peak time of the absorbing first-hitting density, d^2 / (6D).
inline double absorbing_peak_time(const SystemParams& p) {
  return p.distance * p.distance / (6.0 * p.diffusion);
}

/// Peak time of the passive observation probability, (d+r)^2 / (6D).
inline double passive_peak_time(const SystemParams& p) {
  const double span = p.distance + p.radius;
  return span * span / (6.0 * p.diffusion);
}

/// The (d+r)^2/(6D) value quoted for both receivers in the literature this
/// library follows. For the absorbing receiver it is not the argmax of the
/// hitting density; it is exposed only for side-by-side checks.
inline double literal_peak_time(const SystemParams& p) { return passive_peak_time(p); }

inline DerivedConstants derive(const SystemParams& p) {
  DerivedConstants c;
  const double scale = std::sqrt(4.0 * p.diffusion);
  c.m = p.distance / scale;
  c.m_hat = (p.distance + p.radius) / scale;
  c.t_max = p.receiver == Receiver::Absorbing ? absorbing_peak_time(p) : passive_peak_time(p);
  c.volume = 4.0 * std::numbers::pi * p.radius * p.radius * p.radius / 3.0;
  return c;
}

/// How the passive sampling interval is derived from the peak time.
enum class SampleIntervalRule {
  PeakOverSix,          ///< t_s = t_max / 6
  FlooredSeconds,       ///< t_s = floor(t_max / 6) with t_max in seconds
  FlooredMilliseconds,  ///< t_s = floor(1000 t_max / 6) ms
};

inline double sample_interval_for(double t_max, SampleIntervalRule rule) {
  switch (rule) {
    case SampleIntervalRule::PeakOverSix: return t_max / 6.0;
    case SampleIntervalRule::FlooredSeconds: return std::floor(t_max / 6.0);
    case SampleIntervalRule::FlooredMilliseconds: return std::floor(1000.0 * t_max / 6.0) / 1000.0;
  }
  return t_max / 6.0;
}

inline SystemParams make_absorbing(double distance, double radius, double diffusion,
                                   double symbol_time, int isi_length, std::int64_t molecules) {
  SystemParams p;
  p.distance = distance;
  p.radius = radius;
  p.diffusion = diffusion;
  p.symbol_time = symbol_time;
  p.isi_length = isi_length;
  p.molecules = molecules;
  p.receiver = Receiver::Absorbing;
  p.validate();
  return p;
}

/// Passive receiver with N = floor(T_s / t_s) samples and t_s from `rule`.
inline SystemParams make_passive(double distance, double radius, double diffusion,
                                 double symbol_time, int isi_length, std::int64_t molecules,
                                 SampleIntervalRule rule = SampleIntervalRule::PeakOverSix) {
  SystemParams p;
  p.distance = distance;
  p.radius = radius;
  p.diffusion = diffusion;
  p.symbol_time = symbol_time;
  p.isi_length = isi_length;
  p.molecules = molecules;
  p.receiver = Receiver::Passive;
  p.sample_interval = sample_interval_for(passive_peak_time(p), rule);
  if (p.sample_interval > 0.0) {
    p.samples = static_cast<int>(std::floor(symbol_time / p.sample_interval * (1.0 + 1e-12)));
  }
  p.validate();
  return p;
}

/// Absorbing receiver of the reference setup: r = d = 5 um, D = 80 um^2/s.
inline SystemParams table1_absorbing(double symbol_time, int isi_length, std::int64_t molecules) {
  return make_absorbing(5e-6, 5e-6, 80e-12, symbol_time, isi_length, molecules);
}

/// Passive receiver of the reference setup: r = 1 um, d = 9 um, D = 80 um^2/s.
inline SystemParams table1_passive(double symbol_time, int isi_length, std::int64_t molecules,
                                   SampleIntervalRule rule = SampleIntervalRule::PeakOverSix) {
  return make_passive(9e-6, 1e-6, 80e-12, symbol_time, isi_length, molecules, rule);
}

}  // namespace mcwin
