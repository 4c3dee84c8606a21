#include "dynwalk/square_exit.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace dynwalk {

std::vector<double> square_side_exit_law(std::int64_t m) {
  if (m < 1) throw std::invalid_argument("square half-width must be at least 1");
  const auto width = static_cast<std::size_t>(2 * m - 1);
  const double md = static_cast<double>(m);
  // odd k only: sin(k pi / 2) vanishes for even k
  std::vector<double> weight;
  std::vector<std::int64_t> ks;
  for (std::int64_t k = 1; k < 2 * m; k += 2) {
    const double c = 2.0 - std::cos(static_cast<double>(k) * std::numbers::pi / (2.0 * md));
    const double beta = std::acosh(c);
    const double sign = ((k - 1) / 2) % 2 == 0 ? 1.0 : -1.0;
    weight.push_back(sign / (md * 2.0 * std::cosh(md * beta)));
    ks.push_back(k);
  }
  std::vector<double> law(width, 0.0);
  double total = 0.0;
  for (std::size_t idx = 0; idx < width; ++idx) {
    const double y = static_cast<double>(idx + 1);  // j + m
    double h = 0.0;
    for (std::size_t q = 0; q < ks.size(); ++q) {
      if (weight[q] == 0.0) break;
      h += weight[q] * std::sin(static_cast<double>(ks[q]) * std::numbers::pi * y / (2.0 * md));
    }
    law[idx] = std::max(h, 0.0);
    total += law[idx];
  }
  for (auto& v : law) v /= total;
  return law;
}

SquareExitSampler::SquareExitSampler(std::int64_t max_half_width) : max_(max_half_width) {
  if (max_ < 1 || !std::has_single_bit(static_cast<std::uint64_t>(max_)))
    throw std::invalid_argument("max half-width must be a power of two");
  for (std::int64_t m = 1; m <= max_; m *= 2) {
    auto law = square_side_exit_law(m);
    double acc = 0.0;
    for (auto& v : law) {
      acc += v;
      v = acc;
    }
    law.back() = 1.0;
    cdf_.push_back(std::move(law));
  }
}

LatticePoint SquareExitSampler::sample(std::int64_t m, SplitMix64& rng) const {
  const auto level = static_cast<std::size_t>(std::countr_zero(static_cast<std::uint64_t>(m)));
  if (level >= cdf_.size() || (std::int64_t{1} << level) != m)
    throw std::invalid_argument("unsupported square half-width");
  const std::uint64_t w = rng.next();
  const double u = static_cast<double>(w >> 11) * 0x1.0p-53;
  const auto& cdf = cdf_[level];
  const auto idx = static_cast<std::int64_t>(std::upper_bound(cdf.begin(), cdf.end(), u) - cdf.begin());
  const std::int64_t j = std::min<std::int64_t>(idx, 2 * m - 2) - (m - 1);
  switch (w & 3u) {
    case 0: return {m, j};
    case 1: return {-m, j};
    case 2: return {j, m};
    default: return {j, -m};
  }
}

const SquareExitSampler& default_square_sampler() {
  static const SquareExitSampler sampler(1024);
  return sampler;
}

}  // namespace dynwalk
