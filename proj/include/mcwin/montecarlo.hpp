#pragma once

// Monte Carlo BER of threshold detection on a simulated bit stream.
//
// Trials are cut into fixed-size blocks. Block b draws from its own
// mt19937_64 seeded with splitmix64(seed + (b + 1) * golden), so error counts
// depend only on (seed, block size, trials), never on the worker count.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include "mcwin/error.hpp"
#include "mcwin/parallel.hpp"
#include "mcwin/params.hpp"
#include "mcwin/reception.hpp"
#include "mcwin/taps.hpp"
#include "mcwin/window.hpp"

namespace mcwin {

inline constexpr double kWilsonZ95 = 1.959963984540054;

struct TrialConfig {
  std::int64_t trials = 200000;
  std::uint64_t seed = 1;
  bool exact_counts = true;      ///< Binomial/Poisson draws; false = Gaussian draws
  int warmup_symbols = -1;       ///< symbols simulated before scoring; < 0 means L
  int workers = 0;               ///< 0 = default_workers()
  std::int64_t block_size = 8192;

  bool operator==(const TrialConfig&) const = default;
};

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

/// Seed of the RNG stream that simulates block `block` of a run seeded with `seed`.
inline std::uint64_t block_seed(std::uint64_t seed, std::uint64_t block) {
  return splitmix64(seed + (block + 1) * 0x9E3779B97F4A7C15ULL);
}

struct WilsonInterval {
  double center = 0.0;
  double halfwidth = 0.0;
  double lower() const { return center - halfwidth; }
  double upper() const { return center + halfwidth; }
};

inline WilsonInterval wilson_interval(std::int64_t errors, std::int64_t trials, double z = kWilsonZ95) {
  if (trials <= 0) throw Error(ErrorCode::Config, "Wilson interval needs trials >= 1");
  const double n = static_cast<double>(trials);
  const double phat = static_cast<double>(errors) / n;
  const double z2 = z * z;
  const double denom = 1.0 + z2 / n;
  WilsonInterval w;
  w.center = (phat + z2 / (2.0 * n)) / denom;
  w.halfwidth = z / denom * std::sqrt(phat * (1.0 - phat) / n + z2 / (4.0 * n * n));
  return w;
}

namespace detail {

struct BlockCounts {
  std::int64_t trials = 0;
  std::int64_t errors = 0;
};

class TapSampler {
 public:
  TapSampler(const TapProfile& prof, std::int64_t molecules, bool exact)
      : exact_(exact), molecules_(molecules), absorbing_(prof.receiver == Receiver::Absorbing) {
    taps_.push_back(prof.signal);
    taps_.insert(taps_.end(), prof.interferers.begin(), prof.interferers.end());
    for (const Tap& t : taps_) {
      min_offset_ = std::min(min_offset_, t.offset);
      max_offset_ = std::max(max_offset_, t.offset);
    }
  }

  int min_offset() const { return min_offset_; }
  int max_offset() const { return max_offset_; }

  /// Runs `n` scored symbols after `warmup` unscored ones.
  BlockCounts run(std::mt19937_64& rng, std::int64_t n, int warmup, double threshold) const {
    const int lookahead = std::max(0, -min_offset_);
    const std::size_t len = static_cast<std::size_t>(warmup + n + lookahead);
    std::vector<unsigned char> bits(len);
    std::uint64_t word = 0;
    int left = 0;
    for (auto& b : bits) {
      if (left == 0) {
        word = rng();
        left = 64;
      }
      b = static_cast<unsigned char>(word & 1U);
      word >>= 1;
      --left;
    }

    const double q = static_cast<double>(molecules_);
    std::vector<std::binomial_distribution<std::int64_t>> binom;
    std::vector<std::poisson_distribution<std::int64_t>> poisson;
    for (const Tap& t : taps_) {
      if (absorbing_) binom.emplace_back(molecules_, std::clamp(t.fraction, 0.0, 1.0));
      else poisson.emplace_back(std::max(q * t.fraction, 1e-300));
    }
    std::normal_distribution<double> normal(0.0, 1.0);

    BlockCounts out;
    for (std::int64_t s = warmup; s < warmup + n; ++s) {
      const int sent = bits[static_cast<std::size_t>(s)];
      double count = 0.0;
      if (exact_) {
        std::int64_t c = 0;
        for (std::size_t j = 0; j < taps_.size(); ++j) {
          if (!bits[static_cast<std::size_t>(s - taps_[j].offset)]) continue;
          c += absorbing_ ? binom[j](rng) : poisson[j](rng);
        }
        count = static_cast<double>(c);
      } else {
        double mu = 0.0;
        double var = 0.0;
        for (const Tap& t : taps_) {
          if (!bits[static_cast<std::size_t>(s - t.offset)]) continue;
          mu += q * t.fraction;
          var += q * t.variance_weight;
        }
        count = mu + std::sqrt(var) * normal(rng);
      }
      const int decided = count > threshold ? 1 : 0;
      ++out.trials;
      if (decided != sent) ++out.errors;
    }
    return out;
  }

 private:
  std::vector<Tap> taps_;
  bool exact_;
  std::int64_t molecules_;
  bool absorbing_;
  int min_offset_ = 0;
  int max_offset_ = 0;
};

}  // namespace detail

/// BER of deciding "1" iff the count exceeds `threshold`, for `window` delayed by `shift`.
inline BerEstimate simulate_ber(const SystemParams& p, const DetectionWindow& w, double threshold,
                                const TrialConfig& cfg, double shift = 0.0) {
  p.validate();
  if (cfg.trials < 1) throw Error(ErrorCode::Config, "trials must be >= 1");
  if (cfg.block_size < 1) throw Error(ErrorCode::Config, "block_size must be >= 1");
  if (!(threshold >= 0.0)) throw Error(ErrorCode::Domain, "threshold must be non-negative");
  const int warmup = cfg.warmup_symbols < 0 ? p.isi_length : cfg.warmup_symbols;
  if (warmup < p.isi_length) throw Error(ErrorCode::Config, "warmup_symbols must be >= L");

  const detail::TapSampler sampler(tap_profile(p, w, shift), p.molecules, cfg.exact_counts);
  const std::int64_t blocks = (cfg.trials + cfg.block_size - 1) / cfg.block_size;
  std::vector<detail::BlockCounts> counts(static_cast<std::size_t>(blocks));
  parallel_for(counts.size(), cfg.workers, [&](std::size_t b) {
    std::mt19937_64 rng(block_seed(cfg.seed, b));
    const std::int64_t start = static_cast<std::int64_t>(b) * cfg.block_size;
    const std::int64_t n = std::min(cfg.block_size, cfg.trials - start);
    counts[b] = sampler.run(rng, n, std::max(warmup, sampler.max_offset()), threshold);
  });

  BerEstimate e;
  e.source = BerSource::MonteCarlo;
  e.threshold = threshold;
  for (const auto& c : counts) {
    e.trials += c.trials;
    e.errors += c.errors;
  }
  e.value = static_cast<double>(e.errors) / static_cast<double>(e.trials);
  e.ci_halfwidth = wilson_interval(e.errors, e.trials).halfwidth;
  return e;
}

}  // namespace mcwin
