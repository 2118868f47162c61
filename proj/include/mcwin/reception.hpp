#pragma once

// Received-count statistics and the Gaussian-approximation bit error rate of
// threshold detection with equiprobable bits.

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <limits>
#include <queue>
#include <string>
#include <vector>

#include "mcwin/error.hpp"
#include "mcwin/params.hpp"
#include "mcwin/special.hpp"
#include "mcwin/taps.hpp"
#include "mcwin/window.hpp"

namespace mcwin {

/// Largest number of interfering symbols enumerated by the analytic BER.
inline constexpr int kMaxEnumeratedTaps = 24;

/// The L bits preceding the current one, oldest first: x_{k-L}, ..., x_{k-1}.
struct IsiSequence {
  std::vector<int> bits;

  /// Bit sent `i` symbols before the current one, 1 <= i <= L.
  int past(int i) const { return bits[bits.size() - static_cast<std::size_t>(i)]; }
};

struct CountStatistics {
  double mu0 = 0.0;
  double mu1 = 0.0;
  double var0 = 0.0;
  double var1 = 0.0;
};

enum class BerSource { Analytical, MonteCarlo };

struct BerEstimate {
  double value = 0.0;
  double threshold = 0.0;
  BerSource source = BerSource::Analytical;
  double ci_halfwidth = 0.0;   ///< Monte Carlo only
  std::int64_t trials = 0;     ///< Monte Carlo only
  std::int64_t errors = 0;     ///< Monte Carlo only
};

/// Mean and variance of the count under both hypotheses for one ISI pattern.
inline CountStatistics count_stats(const SystemParams& p, const DetectionWindow& w, const IsiSequence& isi) {
  if (static_cast<int>(isi.bits.size()) != p.isi_length) {
    throw Error(ErrorCode::Domain, "ISI sequence length must equal L");
  }
  const std::vector<double> f = tap_fractions(p, w);
  const double q = static_cast<double>(p.molecules);
  auto weight = [&](double fk) { return p.receiver == Receiver::Absorbing ? fk * (1.0 - fk) : fk; };
  CountStatistics s;
  for (int i = 1; i <= p.isi_length; ++i) {
    if (isi.past(i) == 0) continue;
    s.mu0 += q * f[i];
    s.var0 += q * weight(f[i]);
  }
  s.mu1 = s.mu0 + q * f[0];
  s.var1 = s.var0 + q * weight(f[0]);
  return s;
}

/// Analytic BER of one tap profile at Q molecules, for any threshold.
///
/// Precomputes the count mean and deviation of all 2^M interference patterns
/// (M = number of non-zero interferers). The error probability of a pattern is
/// 1/2 [P(Y > xi | 0) + P(Y <= xi | 1)] with Gaussian Y; a zero deviation turns
/// the Q-function into its step limit.
class BerModel {
 public:
  BerModel(const TapProfile& profile, double molecules) {
    const int m = static_cast<int>(profile.interferers.size());
    if (m > kMaxEnumeratedTaps) {
      throw Error(ErrorCode::EnumerationTooLarge,
                  "analytic BER enumerates 2^" + std::to_string(m) + " ISI patterns; use Monte Carlo");
    }
    const std::size_t count = std::size_t{1} << m;
    mu0_.assign(count, 0.0);
    var0_.assign(count, 0.0);
    for (std::size_t x = 1; x < count; ++x) {
      const int low = std::countr_zero(x);
      const std::size_t rest = x & (x - 1);
      const Tap& tap = profile.interferers[static_cast<std::size_t>(low)];
      mu0_[x] = mu0_[rest] + molecules * tap.fraction;
      var0_[x] = var0_[rest] + molecules * tap.variance_weight;
    }
    sd0_.resize(count);
    mu1_.resize(count);
    sd1_.resize(count);
    const double sig_mu = molecules * profile.signal.fraction;
    const double sig_var = molecules * profile.signal.variance_weight;
    for (std::size_t x = 0; x < count; ++x) {
      sd0_[x] = std::sqrt(var0_[x]);
      mu1_[x] = mu0_[x] + sig_mu;
      sd1_[x] = std::sqrt(var0_[x] + sig_var);
    }
    mu1_max_ = *std::max_element(mu1_.begin(), mu1_.end());
    sd_max_ = *std::max_element(sd1_.begin(), sd1_.end());
  }

  std::size_t patterns() const { return mu0_.size(); }

  /// Upper end of the integer threshold scan, ceil(max mu1) + 6 max sigma.
  std::int64_t scan_limit() const {
    return static_cast<std::int64_t>(std::floor(std::ceil(mu1_max_) + 6.0 * sd_max_));
  }

  double ber(double xi) const {
    special::CompensatedSum acc;
    for (std::size_t x = 0; x < mu0_.size(); ++x) {
      const double false_alarm =
          sd0_[x] > 0.0 ? special::q_function((xi - mu0_[x]) / sd0_[x]) : (xi < mu0_[x] ? 1.0 : 0.0);
      const double miss =
          sd1_[x] > 0.0 ? special::q_function((mu1_[x] - xi) / sd1_[x]) : (xi >= mu1_[x] ? 1.0 : 0.0);
      acc.add(false_alarm + miss);
    }
    return 0.5 * acc.value() / static_cast<double>(mu0_.size());
  }

  const std::vector<double>& mean0() const { return mu0_; }
  const std::vector<double>& mean1() const { return mu1_; }
  const std::vector<double>& sd0() const { return sd0_; }
  const std::vector<double>& sd1() const { return sd1_; }

  /// Bound on |d ber / d xi| over [a, b], or +inf if a step term jumps inside (a, b].
  double slope_bound(double a, double b) const {
    double s0 = 0.0;
    double s1 = 0.0;
    auto gap = [&](double mu) { return mu < a ? a - mu : (mu > b ? mu - b : 0.0); };
    for (std::size_t x = 0; x < mu0_.size(); ++x) {
      if (sd0_[x] > 0.0) {
        s0 += special::normal_pdf(gap(mu0_[x]) / sd0_[x]) / sd0_[x];
      } else if (a < mu0_[x] && mu0_[x] <= b) {
        return std::numeric_limits<double>::infinity();
      }
      if (sd1_[x] > 0.0) {
        s1 += special::normal_pdf(gap(mu1_[x]) / sd1_[x]) / sd1_[x];
      } else if (a < mu1_[x] && mu1_[x] <= b) {
        return std::numeric_limits<double>::infinity();
      }
    }
    return 0.5 * std::max(s0, s1) / static_cast<double>(mu0_.size());
  }

  /// Smallest integer threshold in [0, scan_limit()] minimizing ber(), found by
  /// evaluating every candidate. Reference implementation.
  BerEstimate scan_threshold() const {
    const std::int64_t hi = scan_limit();
    BerEstimate best{ber(0.0), 0.0};
    for (std::int64_t xi = 1; xi <= hi; ++xi) {
      const double v = ber(static_cast<double>(xi));
      if (v < best.value) best = BerEstimate{v, static_cast<double>(xi)};
    }
    return best;
  }

  /// Same result as scan_threshold(), with branch and bound over the integer
  /// range: a segment is dropped when a Lipschitz lower bound proves every
  /// interior value larger than the incumbent.
  BerEstimate optimal_threshold() const {
    const std::int64_t hi = scan_limit();
    auto eval = [&](std::int64_t xi) { return ber(static_cast<double>(xi)); };

    BerEstimate best{eval(0), 0.0};
    auto offer = [&](std::int64_t xi, double v) {
      if (v < best.value || (v == best.value && static_cast<double>(xi) < best.threshold)) {
        best = BerEstimate{v, static_cast<double>(xi)};
      }
    };
    if (hi == 0) return best;

    struct Segment {
      std::int64_t a, b;
      double va, vb, bound;
      bool operator<(const Segment& o) const { return bound > o.bound; }  // min-heap on bound
    };
    auto lower_bound_of = [&](std::int64_t a, std::int64_t b, double va, double vb) {
      const double lip = slope_bound(static_cast<double>(a), static_cast<double>(b));
      if (!std::isfinite(lip)) return -std::numeric_limits<double>::infinity();
      const double len = static_cast<double>(b - a);
      const double lb = 0.5 * (va + vb - lip * len);
      // rounding slack so pruning never drops an exact tie
      return lb - 1e-12 * (va + vb + lip * len) - 1e-300;
    };

    std::priority_queue<Segment> heap;
    const std::int64_t pieces = std::min<std::int64_t>(hi, 16);
    std::int64_t prev = 0;
    double vprev = best.value;
    for (std::int64_t i = 1; i <= pieces; ++i) {
      const std::int64_t cur = hi * i / pieces;
      const double vcur = eval(cur);
      offer(cur, vcur);
      if (cur - prev >= 2) heap.push({prev, cur, vprev, vcur, lower_bound_of(prev, cur, vprev, vcur)});
      prev = cur;
      vprev = vcur;
    }
    while (!heap.empty()) {
      const Segment s = heap.top();
      heap.pop();
      if (s.bound > best.value) continue;
      const std::int64_t mid = s.a + (s.b - s.a) / 2;
      const double vm = eval(mid);
      offer(mid, vm);
      if (mid - s.a >= 2) heap.push({s.a, mid, s.va, vm, lower_bound_of(s.a, mid, s.va, vm)});
      if (s.b - mid >= 2) heap.push({mid, s.b, vm, s.vb, lower_bound_of(mid, s.b, vm, s.vb)});
    }
    return best;
  }

 private:
  std::vector<double> mu0_, var0_, sd0_, mu1_, sd1_;
  double mu1_max_ = 0.0;
  double sd_max_ = 0.0;
};

/// Average bit error probability of threshold detection at threshold xi.
inline BerEstimate analytic_ber(const SystemParams& p, const DetectionWindow& w, double threshold,
                                double shift = 0.0) {
  if (!(threshold >= 0.0)) throw Error(ErrorCode::Domain, "threshold must be non-negative");
  const BerModel model(tap_profile(p, w, shift), static_cast<double>(p.molecules));
  return BerEstimate{model.ber(threshold), threshold};
}

/// Minimum-BER integer threshold for the window; ties go to the smaller threshold.
inline BerEstimate optimal_threshold(const SystemParams& p, const DetectionWindow& w, double shift = 0.0) {
  const BerModel model(tap_profile(p, w, shift), static_cast<double>(p.molecules));
  return model.optimal_threshold();
}

}  // namespace mcwin
