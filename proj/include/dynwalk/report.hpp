#pragma once

#include <cmath>
#include <cstdint>
#include <span>

namespace dynwalk {

// Mergeable (count, sum, sum of squares) triple.
struct Accumulator {
  std::uint64_t count = 0;
  double sum = 0.0;
  double sum_sq = 0.0;

  void add(double v) {
    ++count;
    sum += v;
    sum_sq += v * v;
  }
  Accumulator& merge(const Accumulator& o) {
    count += o.count;
    sum += o.sum;
    sum_sq += o.sum_sq;
    return *this;
  }
  double mean() const { return count ? sum / static_cast<double>(count) : 0.0; }
  // Plug-in variance, equal to p(1-p) for 0/1 samples.
  double variance() const {
    if (!count) return 0.0;
    const double m = mean();
    const double v = sum_sq / static_cast<double>(count) - m * m;
    return v > 0.0 ? v : 0.0;
  }
};

struct EstimatorReport {
  double mean = 0.0;
  double stderr_ = 0.0;
  std::uint64_t n_samples = 0;
  double ci_level = 0.95;
  double ci_low = 0.0;
  double ci_high = 0.0;

  static EstimatorReport from(const Accumulator& acc, bool probability = true);
  static EstimatorReport from_samples(std::span<const double> samples, bool probability = true);
};

// f = numerator / denominator^2 with a delta-method standard error.
struct RatioReport {
  EstimatorReport numerator;
  EstimatorReport denominator;
  double ratio = 0.0;
  double stderr_ = 0.0;
  bool defined = false;  // false when the denominator is within 5 stderr of 0
};

}  // namespace dynwalk
