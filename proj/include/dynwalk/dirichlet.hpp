#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "dynwalk/lattice.hpp"

namespace dynwalk {

enum class DirichletMethod { Auto, Direct, Multigrid };

// h(y) = P_y(walk hits the origin before reaching |S| >= n), the solution of
// the discrete Dirichlet problem on {|y| < n} with h(0) = 1 and h = 0 on and
// outside the circle. The field is symmetric under the lattice reflections
// and is stored on the first quadrant only.
class HittingField {
 public:
  HittingField(std::int64_t radius, std::vector<double> quadrant, double max_residual,
               std::size_t unknowns, DirichletMethod method, int iterations);

  std::int64_t radius() const { return radius_; }
  double at(const LatticePoint& y) const;
  // max |h(y) - mean of the 4 neighbours| over interior non-origin points
  double max_residual() const { return max_residual_; }
  std::size_t unknowns() const { return unknowns_; }
  DirichletMethod method() const { return method_; }
  int iterations() const { return iterations_; }

 private:
  std::int64_t radius_;
  std::vector<double> quadrant_;  // (radius+1)^2, row-major in |y1|
  double max_residual_;
  std::size_t unknowns_;
  DirichletMethod method_;
  int iterations_;
};

// Number of lattice points with 0 < |y| < n.
std::size_t disc_unknowns(std::int64_t n);

// Direct sparse factorisation below 1e5 unknowns, multigrid with a certified
// residual above. Throws std::runtime_error if the residual target is missed.
HittingField solve_hitting_field(std::int64_t n, DirichletMethod method = DirichletMethod::Auto,
                                 double residual_target = 1e-11);

// Requires 0 < |x| < n.
double hitting_prob_exact(std::int64_t n, const LatticePoint& x);

}  // namespace dynwalk
