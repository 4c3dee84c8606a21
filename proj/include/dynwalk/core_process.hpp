#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

#include "dynwalk/lattice.hpp"

namespace dynwalk {

// Refresh history of one step index: the value at time 0 followed by the
// (time, new value) pairs of every Poisson clock ring in (0, t_max].
struct RefreshTimeline {
  Direction initial = Direction::East;
  std::vector<double> times;
  std::vector<Direction> values;

  std::size_t refresh_count() const { return times.size(); }
  friend bool operator==(const RefreshTimeline&, const RefreshTimeline&) = default;
};

// Timeline of step index n (1-based) is a pure function of (seed, n, t_max).
// Extending t_max only appends events.
RefreshTimeline sample_timeline(std::uint64_t seed, std::size_t n, double t_max);

struct RefreshEvent {
  double time;
  std::size_t index;
  Direction value;

  friend bool operator==(const RefreshEvent&, const RefreshEvent&) = default;
};

// Events are selected with time in the half-open window (begin, end].
struct TimeWindow {
  double begin = 0.0;
  double end = 0.0;
};

// Inclusive 1-based index range.
struct IndexRange {
  std::size_t first = 1;
  std::size_t last = 0;

  std::size_t size() const { return last >= first ? last - first + 1 : 0; }
};

// All randomness of one dynamical walk experiment over step indices 1..N and
// times [0, t_max]. Immutable after construction; stored flat so that large
// realizations stay cache friendly.
class DynamicalWalkRealization {
 public:
  DynamicalWalkRealization() = default;

  static DynamicalWalkRealization from_timelines(std::vector<RefreshTimeline> timelines,
                                                 double t_max, std::uint64_t seed = 0);

  std::size_t size() const { return initial_.size(); }
  double t_max() const { return t_max_; }
  std::uint64_t seed() const { return seed_; }

  Direction initial(std::size_t n) const;
  std::span<const double> refresh_times(std::size_t n) const;
  std::span<const Direction> refresh_values(std::size_t n) const;
  RefreshTimeline timeline(std::size_t n) const;
  std::size_t total_refreshes() const { return times_.size(); }

  // X_n(t) with the half-open convention: a query exactly at a refresh time
  // returns the new value.
  Direction step_at(std::size_t n, double t) const;
  std::vector<Direction> steps_at(double t, IndexRange range) const;
  std::vector<Direction> steps_at(double t) const { return steps_at(t, {1, size()}); }

  // Refresh events with time in (window.begin, window.end], sorted by time and
  // then by index.
  std::vector<RefreshEvent> refresh_events(TimeWindow window, IndexRange range) const;

  // Indices in range with at least one refresh in (0, t].
  std::vector<std::size_t> refreshed_indices(IndexRange range, double t) const;

  friend bool operator==(const DynamicalWalkRealization&, const DynamicalWalkRealization&) = default;

 private:
  void check_index(std::size_t n) const;
  void check_time(double t) const;
  void check_range(IndexRange range) const;

  double t_max_ = 0.0;
  std::uint64_t seed_ = 0;
  std::vector<Direction> initial_;
  std::vector<std::size_t> offsets_{0};  // CSR offsets into times_/values_, size N+1
  std::vector<double> times_;
  std::vector<Direction> values_;
};

DynamicalWalkRealization sample_realization(std::size_t n_steps, double t_max, std::uint64_t seed);

// Versioned, length-prefixed binary dump. Layout (little endian):
//   "DWRZ" u32 version | u64 N | f64 t_max | u64 seed
//   per index: u8 initial | u32 count | count * (f64 time, u8 value)
inline constexpr std::uint32_t kRealizationFormatVersion = 1;
void write_realization(std::ostream& os, const DynamicalWalkRealization& r);
DynamicalWalkRealization read_realization(std::istream& is);

}  // namespace dynwalk
