#pragma once

#include <cstdint>
#include <vector>

#include "dynwalk/lattice.hpp"
#include "dynwalk/rng.hpp"

namespace dynwalk {

// Exit distribution of simple random walk started at the centre of the square
// {|dx| < m, |dy| < m}: the walk leaves through one of the 4 sides (each with
// probability 1/4) at offset j in (-m, m) along that side. The per-side law is
// evaluated from the separable discrete-Laplacian series
//   H_m(j) = (1/m) sum_k sin(k pi (j+m) / 2m) sin(k pi / 2) / (2 cosh(m beta_k)),
//   cosh beta_k = 2 - cos(k pi / 2m),
// and normalised to sum to one.
std::vector<double> square_side_exit_law(std::int64_t m);

// Sampling tables for half-widths 1, 2, 4, ..., max_half_width.
class SquareExitSampler {
 public:
  explicit SquareExitSampler(std::int64_t max_half_width = 1024);

  std::int64_t max_half_width() const { return max_; }

  // Exit point relative to the square centre.
  LatticePoint sample(std::int64_t m, SplitMix64& rng) const;

 private:
  std::int64_t max_;
  std::vector<std::vector<double>> cdf_;  // per power of two, cumulative over j = -(m-1)..m-1
};

const SquareExitSampler& default_square_sampler();

}  // namespace dynwalk
