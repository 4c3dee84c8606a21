#pragma once

#include <cmath>
#include <cstdint>

#include "dynwalk/lattice.hpp"

namespace dynwalk {

// Identity of the generator recorded in run manifests. Changing any of the
// stream derivations below requires bumping the version.
inline constexpr const char* kRngName = "splitmix64";
inline constexpr int kRngVersion = 1;

constexpr std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

// Stream tags used to split a run seed into independent sub-streams.
namespace streams {
inline constexpr std::uint64_t kTimeline = 1;    // per step index of a realization
inline constexpr std::uint64_t kWalk = 2;        // time-0 steps of MC sample i
inline constexpr std::uint64_t kRefresh = 3;     // refresh decisions of MC sample i
inline constexpr std::uint64_t kRealization = 4; // realization seed of MC sample i
inline constexpr std::uint64_t kSquareWalk = 5;  // accelerated hitting walks
inline constexpr std::uint64_t kBootstrap = 6;
}  // namespace streams

// Sub-seed for item `index` of stream `stream`. Pure function, so any single
// sample or step index can be regenerated in isolation.
constexpr std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream, std::uint64_t index) {
  const std::uint64_t base = mix64(seed ^ (stream * 0xD1B54A32D192ED03ull));
  return mix64(base + (index + 1) * 0x9E3779B97F4A7C15ull);
}

class SplitMix64 {
 public:
  constexpr explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  constexpr std::uint64_t next() {
    state_ += 0x9E3779B97F4A7C15ull;
    return mix64(state_);
  }

  // Uniform on [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  Direction direction() { return direction_from_bits(next() >> 62); }

  // Exponential(1) by inverse CDF; strictly positive.
  double exponential() {
    for (;;) {
      const double u = uniform();
      const double gap = -std::log1p(-u);
      if (gap > 0.0) return gap;
    }
  }

 private:
  std::uint64_t state_;
};

// Buffered walk steps: 32 directions per 64-bit draw.
class StepStream {
 public:
  explicit StepStream(std::uint64_t seed) : rng_(seed) {}

  Direction next() {
    if (left_ == 0) {
      word_ = rng_.next();
      left_ = 32;
    }
    const auto d = direction_from_bits(word_);
    word_ >>= 2;
    --left_;
    return d;
  }

 private:
  SplitMix64 rng_;
  std::uint64_t word_ = 0;
  int left_ = 0;
};

// Two-slice coupling of a dynamical walk: the time-0 step comes from the same
// StepStream a single-walk estimator would use, the time-t step is kept with
// probability e^{-t} and otherwise replaced by a fresh uniform direction. The
// refresh uniforms are shared across t, so refreshed sets grow with t.
class CoupledStepStream {
 public:
  CoupledStepStream(std::uint64_t walk_seed, std::uint64_t refresh_seed, double t)
      : steps_(walk_seed), refresh_(refresh_seed) {
    const double p = -std::expm1(-t);  // 1 - e^{-t}
    if (p >= 1.0) {
      always_ = true;
    } else {
      threshold_ = static_cast<std::uint64_t>(std::ldexp(p, 53));
    }
  }

  struct Pair {
    Direction at_zero;
    Direction at_t;
  };

  Pair next() {
    const Direction d0 = steps_.next();
    const std::uint64_t w = refresh_.next();
    const bool refreshed = always_ || (w >> 11) < threshold_;
    return {d0, refreshed ? direction_from_bits(w) : d0};
  }

 private:
  StepStream steps_;
  SplitMix64 refresh_;
  std::uint64_t threshold_ = 0;
  bool always_ = false;
};

}  // namespace dynwalk
