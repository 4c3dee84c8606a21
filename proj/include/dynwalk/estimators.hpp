#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "dynwalk/dirichlet.hpp"
#include "dynwalk/lattice.hpp"
#include "dynwalk/parallel.hpp"
#include "dynwalk/report.hpp"
#include "dynwalk/schedule.hpp"

namespace dynwalk {

// --- hitting before exit -----------------------------------------------------

// MC estimate of P_x(hit 0 before |S| >= n). Each sample is an exact-in-law
// walk that jumps across the largest dyadic square around the current point
// that avoids the origin and stays inside the disc.
EstimatorReport hitting_prob_mc(std::int64_t n, const LatticePoint& x, std::uint64_t samples,
                                std::uint64_t seed, const Execution& exec = {});

// One sample, stepping one lattice edge at a time. Test oracle for the
// accelerated walk.
bool hits_before_exit_stepwise(std::int64_t n, const LatticePoint& x, std::uint64_t seed);
bool hits_before_exit_squares(std::int64_t n, const LatticePoint& x, std::uint64_t seed);

struct LawlerPoint {
  std::int64_t radius;
  LatticePoint start;
  double exact;
};

// Smallest C >= 0 with (log n - log|x| - C)/log n <= h <= (log n - log|x| + C)/log n
// at every point, logs base 2.
double fit_lawler_constant(std::span<const LawlerPoint> points);
// Cartesian grid radii x starts; every pair must satisfy 0 < |x| < n.
double fit_lawler_constant(std::span<const std::int64_t> radii, std::span<const LatticePoint> starts);

// --- single and coupled walks in a schedule window --------------------------

// P^{x,k-1}(R_k(0)): a walk started at x at step s_{k-1} hits the origin at
// some step in (s_{k-1}, s_k]. Requires x != 0.
EstimatorReport estimate_return_prob(const Schedule& sched, int k, const LatticePoint& x,
                                     std::uint64_t samples, std::uint64_t seed,
                                     const Execution& exec = {});

// P^{x,k-1}(G_k(0)^c): the same walk is outside the level-k annulus at s_k.
EstimatorReport estimate_g_event(const Schedule& sched, int k, const LatticePoint& x,
                                 std::uint64_t samples, std::uint64_t seed,
                                 const Execution& exec = {});

// P^{x,y,k-1}(R_k(0) and R_k(t)) under the two-slice coupling; walk 0 is
// sample-for-sample the walk of estimate_return_prob with the same seed.
EstimatorReport estimate_joint_return(const Schedule& sched, int k, const LatticePoint& x,
                                      const LatticePoint& y, double t, std::uint64_t samples,
                                      std::uint64_t seed, const Execution& exec = {});

// --- the level events E_M ----------------------------------------------------

// P(E_M(0)) with M = sched.levels().
EstimatorReport estimate_E_M_prob(const Schedule& sched, std::uint64_t samples, std::uint64_t seed,
                                  const Execution& exec = {});

// Per-sample levels passed at times 0 and t on one coupled pair of walks.
struct CoupledLevels {
  int at_zero = 0;
  int at_t = 0;
};
CoupledLevels coupled_levels(const Schedule& sched, double t, std::uint64_t seed, std::uint64_t sample);
// Levels passed at time 0 for sample i; the time-0 marginal of coupled_levels.
int single_levels(const Schedule& sched, std::uint64_t seed, std::uint64_t sample);

// f(t, M) = P(E_M(0,t)) / P(E_M(0))^2. The denominator is estimate_E_M_prob
// with the same seed, i.e. the time-0 marginal of the coupled samples, so the
// delta-method error uses the paired covariance.
RatioReport estimate_f(const Schedule& sched, double t, std::uint64_t samples, std::uint64_t seed,
                       const Execution& exec = {});

struct SummaryRow {
  int k = 0;
  std::uint64_t cond_single_n = 0;  // samples with E_{k-1}(0)
  EstimatorReport single;           // P(E_k(0) | E_{k-1}(0))
  std::uint64_t cond_joint_n = 0;   // samples with E_{k-1}(0,t)
  EstimatorReport joint;            // P(E_k(0,t) | E_{k-1}(0,t))
  double single_bound_c = 0.0;      // smallest C in (P)^2 > 1 - 4/k - C log k / k^2
  double joint_bound_c = 0.0;       // smallest C in P < 1 - 4/k + C log k / k^2
  bool joint_in_range = false;      // k > K(t)
  bool insufficient = false;        // fewer than min_conditioning samples
};

struct SummaryTable {
  double t = 0.0;
  int level_K = 0;
  std::vector<SummaryRow> rows;
  // max over levels k >= 2 (and k > K(t) for the joint bound)
  double fitted_c_single = 0.0;
  double fitted_c_joint = 0.0;
};

SummaryTable check_summary(const Schedule& sched, double t, std::uint64_t samples, std::uint64_t seed,
                           const Execution& exec = {}, std::uint64_t min_conditioning = 30);

// (mean L)^2 / mean(L^2), the lower bound for P(L > 0); 0 for all-zero input.
double second_moment_lower_bound(std::span<const double> l_samples);

struct LeaveReport {
  EstimatorReport far;    // P(exists n' < n: |S_n'| > m sqrt(n))
  EstimatorReport close;  // P(|S_n - x| < sqrt(n) / m)
  double bound;           // C / m^2
  bool far_within;
  bool close_within;
};

LeaveReport check_leave(std::uint64_t n, double m, std::uint64_t samples, std::uint64_t seed,
                        const LatticePoint& x = {}, double c = 1.0, const Execution& exec = {});

}  // namespace dynwalk
