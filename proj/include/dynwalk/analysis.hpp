#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "dynwalk/barrier.hpp"
#include "dynwalk/core_process.hpp"
#include "dynwalk/events.hpp"
#include "dynwalk/parallel.hpp"
#include "dynwalk/report.hpp"
#include "dynwalk/schedule.hpp"

namespace dynwalk {

struct DimensionReport {
  std::vector<int> depths;
  std::vector<double> box_sizes;
  std::vector<std::uint64_t> counts;
  double slope = 0.0;      // least squares slope of log2(count) against depth
  double r_squared = 0.0;
  bool empty_set = false;  // no box hit at any depth; slope reported as 0
};

// Dyadic box counting. An interval [a, b) with b > a covers the boxes
// [i 2^-d, (i+1) 2^-d) it meets; a zero-length interval [a, a] is the single
// point a. Depths with count 0 are dropped from the fit.
DimensionReport box_count_dimension(std::span<const Interval> set, std::span<const int> depths);
DimensionReport box_count_dimension(const PiecewiseIndicator& ind, std::span<const int> depths);

// Intervals of the depth-d middle-thirds Cantor construction on [0, 1].
std::vector<Interval> cantor_intervals(int depth);

struct EscapeTimeReport {
  double t = 0.0;
  bool survived = false;        // |S_n| >= barrier(n) for all n in [1, s_M]
  std::uint64_t max_n = 0;      // largest n0 with no violation in [1, n0]
};

struct EscapeReport {
  std::vector<EscapeTimeReport> times;  // in the order of the input grid
  std::size_t surviving = 0;
};

// For each grid time, scans the time-t walk over n in [1, s_M] against the
// barrier. The step vector is rebuilt incrementally between consecutive
// grid times by replaying refresh events; grid chunks run on separate
// workers, each replaying its own sub-interval.
EscapeReport escape_rate_scan(const DynamicalWalkRealization& r, const Schedule& sched,
                              const Barrier& barrier, std::span<const double> t_grid,
                              const Execution& exec = {});

// Lebesgue measure L(T_M) of the good time set over the window, one value per
// independent realization (realization i uses sub-seed i of the run seed).
std::vector<double> good_set_measures(const Schedule& sched, TimeWindow window, std::uint64_t realizations,
                                      std::uint64_t seed, const Execution& exec = {});

struct SecondMomentReport {
  std::uint64_t n = 0;
  EstimatorReport mean_L;
  double mean_L2 = 0.0;
  double bound = 0.0;           // (E L)^2 / E L^2
  double bound_stderr = 0.0;    // bootstrap over realizations
  EstimatorReport positive;     // empirical P(L > 0)
};

SecondMomentReport second_moment_report(std::span<const double> l_samples, std::uint64_t bootstrap_reps,
                                        std::uint64_t seed);

// Evenly spaced grid 0, h, 2h, ... up to t_max inclusive.
std::vector<double> uniform_grid(double t_max, double spacing);

}  // namespace dynwalk
