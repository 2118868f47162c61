#pragma once

#include <string>

#include "mcwin/error.hpp"
#include "mcwin/params.hpp"

namespace mcwin {

/// Part of a symbol period used for counting: a time interval for the absorbing
/// receiver, an inclusive range of sample indices for the passive receiver.
struct DetectionWindow {
  enum class Kind { Continuous, Sampled };

  Kind kind = Kind::Continuous;
  double t1 = 0.0;
  double t2 = 0.0;
  int n1 = 0;
  int n2 = 0;

  static DetectionWindow continuous(double t1, double t2) {
    DetectionWindow w;
    w.kind = Kind::Continuous;
    w.t1 = t1;
    w.t2 = t2;
    return w;
  }

  static DetectionWindow sampled(int n1, int n2) {
    DetectionWindow w;
    w.kind = Kind::Sampled;
    w.n1 = n1;
    w.n2 = n2;
    return w;
  }

  /// Whole symbol period for the receiver kind.
  static DetectionWindow full(const SystemParams& p) {
    return p.receiver == Receiver::Absorbing ? continuous(0.0, p.symbol_time) : sampled(0, p.samples);
  }

  bool is_sampled() const { return kind == Kind::Sampled; }

  bool operator==(const DetectionWindow& o) const {
    if (kind != o.kind) return false;
    return is_sampled() ? (n1 == o.n1 && n2 == o.n2) : (t1 == o.t1 && t2 == o.t2);
  }
};

inline std::string describe(const DetectionWindow& w) {
  if (w.is_sampled()) return "[" + std::to_string(w.n1) + "," + std::to_string(w.n2) + "]";
  return "[" + std::to_string(w.t1) + "," + std::to_string(w.t2) + "]";
}

/// Throws Error{Domain} unless the window fits the receiver and the symbol period.
inline void validate_window(const SystemParams& p, const DetectionWindow& w) {
  if (p.receiver == Receiver::Absorbing) {
    if (w.is_sampled()) throw Error(ErrorCode::Domain, "absorbing receiver needs a continuous window");
    if (!(w.t1 >= 0.0) || !(w.t1 <= w.t2) || !(w.t2 <= p.symbol_time)) {
      throw Error(ErrorCode::Domain, "continuous window must satisfy 0 <= t1 <= t2 <= T_s, got " + describe(w));
    }
  } else {
    if (!w.is_sampled()) throw Error(ErrorCode::Domain, "passive receiver needs a sampled window");
    if (w.n1 < 0 || w.n1 > w.n2 || w.n2 > p.samples) {
      throw Error(ErrorCode::Domain, "sampled window must satisfy 0 <= n1 <= n2 <= N, got " + describe(w));
    }
  }
}

}  // namespace mcwin
