#pragma once

#include <span>
#include <vector>

#include "dynwalk/barrier.hpp"
#include "dynwalk/core_process.hpp"
#include "dynwalk/prefix_state.hpp"
#include "dynwalk/schedule.hpp"

namespace dynwalk {

// R_k: S_n = 0 for some n in [s_{k-1}, s_k] (both ends included).
bool event_R_k(const PrefixState& state, const Schedule& sched, int k);
// G_k: S_{s_k} lies in the closed annulus of level k.
bool event_G_k(const PrefixState& state, const Schedule& sched, int k);
// E_M = all G_k and no R_k for k = 1..M, with M = sched.levels().
bool event_E_M(const PrefixState& state, const Schedule& sched);

// Largest k such that E_k holds for the walk with the given steps (E_0 always
// holds). Streams over the steps and stops at the first failure; the step
// span must cover 1..s_M.
int levels_passed(std::span<const Direction> steps, const Schedule& sched);

// R^eps_k: |S_n| < barrier(n) for some n in [s_{k-1}, s_k]. Direct scan.
bool event_R_eps_k(std::span<const Direction> steps, const Schedule& sched, int k, double eps);
bool event_R_eps_k(std::span<const Direction> steps, const Schedule& sched, int k,
                   const Barrier& barrier);

struct Interval {
  double begin;
  double end;
  double length() const { return end - begin; }
  friend bool operator==(const Interval&, const Interval&) = default;
};

// Piecewise constant truth set over [domain_begin, domain_end]: sorted,
// disjoint, non-adjacent half-open intervals where the predicate holds.
class PiecewiseIndicator {
 public:
  PiecewiseIndicator() = default;
  PiecewiseIndicator(double domain_begin, double domain_end, std::vector<Interval> intervals);

  double domain_begin() const { return begin_; }
  double domain_end() const { return end_; }
  const std::vector<Interval>& intervals() const { return intervals_; }
  bool empty() const { return intervals_.empty(); }

  // Lebesgue measure of the truth set.
  double measure() const;
  bool contains(double t) const;
  PiecewiseIndicator restricted(double a, double b) const;

  // Interval endpoints strictly inside the domain.
  std::vector<double> interior_endpoints() const;

  friend bool operator==(const PiecewiseIndicator&, const PiecewiseIndicator&) = default;

 private:
  double begin_ = 0.0;
  double end_ = 0.0;
  std::vector<Interval> intervals_;
};

struct ScanStats {
  std::size_t events = 0;
  std::size_t flips = 0;
};

// Exact truth set of E_M(t) for t in [window.begin, window.end]. The state is
// built at window.begin and every refresh of an index <= s_M is replayed in
// time order; the predicate is re-evaluated in O(M) after each distinct
// event time using per-level zero counters.
PiecewiseIndicator scan_E_M(const DynamicalWalkRealization& r, const Schedule& sched,
                            TimeWindow window, ScanStats* stats = nullptr);

// Level-aligned prefix state: block boundaries fall on every s_k so that R_k
// reduces to one segment counter plus the shared endpoint s_{k-1}.
class LevelTracker {
 public:
  LevelTracker(std::span<const Direction> steps, const Schedule& sched);

  bool R(int k) const;
  bool G(int k) const;
  bool E() const;
  void update(std::size_t i, Direction d) { state_.point_update(i, d); }
  const PrefixState& state() const { return state_; }

 private:
  Schedule sched_;
  PrefixState state_;
};

}  // namespace dynwalk
