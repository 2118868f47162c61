#pragma once

// Small numerical helpers shared by the channel, reception and optimizer code.

#include <cmath>
#include <complex>
#include <numbers>
#include <span>

namespace mcwin::special {

/// Gaussian tail probability Q(z) = P(N(0,1) > z).
inline double q_function(double z) { return 0.5 * std::erfc(z / std::numbers::sqrt2); }

/// Standard normal density.
inline double normal_pdf(double z) {
  return std::exp(-0.5 * z * z) / std::sqrt(2.0 * std::numbers::pi);
}

/// erf(a) - erf(b) for a >= b >= 0 without cancellation in the upper tail.
///
/// Both arguments large means both erf values are close to 1, so the difference
/// is taken between the complements instead.
inline double erf_difference(double a, double b) {
  if (b > 0.5) return std::erfc(b) - std::erfc(a);
  return std::erf(a) - std::erf(b);
}

/// Neumaier compensated summation.
class CompensatedSum {
 public:
  void add(double x) {
    const double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x)) {
      comp_ += (sum_ - t) + x;
    } else {
      comp_ += (x - t) + sum_;
    }
    sum_ = t;
  }
  double value() const { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

inline double compensated_sum(std::span<const double> xs) {
  CompensatedSum acc;
  for (double x : xs) acc.add(x);
  return acc.value();
}

/// Principal complex cube root. For a conjugate pair s, conj(s) the two principal
/// roots sum to a real number, which is what Cardano's formula needs when the
/// cubic has three real roots.
inline std::complex<double> principal_cbrt(std::complex<double> z) {
  if (z.imag() == 0.0 && z.real() >= 0.0) return {std::cbrt(z.real()), 0.0};
  return std::pow(z, 1.0 / 3.0);
}

}  // namespace mcwin::special
