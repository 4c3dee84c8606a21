#include "dynwalk/events.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

namespace dynwalk {

namespace {

void require_level(const Schedule& sched, int k) {
  if (k < 1 || k > sched.levels())
    throw std::out_of_range("level " + std::to_string(k) + " outside [1, " +
                            std::to_string(sched.levels()) + "]");
}

void require_length(std::size_t have, std::uint64_t need) {
  if (have < need)
    throw std::invalid_argument("walk of length " + std::to_string(have) +
                                " is shorter than the schedule needs (" + std::to_string(need) + ")");
}

}  // namespace

bool event_R_k(const PrefixState& state, const Schedule& sched, int k) {
  require_level(sched, k);
  require_length(state.size(), sched.stop(k));
  return state.has_zero_in(sched.stop(k - 1), sched.stop(k));
}

bool event_G_k(const PrefixState& state, const Schedule& sched, int k) {
  require_level(sched, k);
  require_length(state.size(), sched.stop(k));
  return sched.in_annulus(k, state.position(sched.stop(k)));
}

bool event_E_M(const PrefixState& state, const Schedule& sched) {
  if (sched.levels() == 0) return true;  // E_0 is the sure event
  require_length(state.size(), sched.horizon());
  for (int k = 1; k <= sched.levels(); ++k)
    if (!event_G_k(state, sched, k) || event_R_k(state, sched, k)) return false;
  return true;
}

int levels_passed(std::span<const Direction> steps, const Schedule& sched) {
  require_length(steps.size(), sched.horizon());
  LatticePoint pos{};
  std::size_t n = 0;
  for (int k = 1; k <= sched.levels(); ++k) {
    const std::uint64_t end = sched.stop(k);
    // the shared endpoint s_{k-1} was already checked by level k-1
    while (n < end) {
      pos += step_vector(steps[n]);
      ++n;
      if (pos.is_origin()) return k - 1;
    }
    if (!sched.in_annulus(k, pos)) return k - 1;
  }
  return sched.levels();
}

bool event_R_eps_k(std::span<const Direction> steps, const Schedule& sched, int k,
                   const Barrier& barrier) {
  require_level(sched, k);
  require_length(steps.size(), sched.stop(k));
  const std::uint64_t first = sched.stop(k - 1);
  const std::uint64_t last = sched.stop(k);
  LatticePoint pos{};
  for (std::uint64_t n = 1; n <= last; ++n) {
    pos += step_vector(steps[n - 1]);
    if (n < first) continue;
    const double b = barrier(n);
    if (static_cast<double>(pos.norm2()) < b * b) return true;
  }
  return false;
}

bool event_R_eps_k(std::span<const Direction> steps, const Schedule& sched, int k, double eps) {
  if (!(eps > 0.0)) throw std::invalid_argument("eps must be positive");
  return event_R_eps_k(steps, sched, k, Barrier::log_corrected(eps));
}

PiecewiseIndicator::PiecewiseIndicator(double domain_begin, double domain_end,
                                       std::vector<Interval> intervals)
    : begin_(domain_begin), end_(domain_end) {
  if (!(domain_begin <= domain_end)) throw std::invalid_argument("indicator domain is reversed");
  for (const auto& iv : intervals) {
    if (!(iv.begin < iv.end)) throw std::invalid_argument("indicator intervals must have positive length");
    if (iv.begin < begin_ || iv.end > end_) throw std::invalid_argument("indicator interval outside domain");
    if (!intervals_.empty()) {
      if (iv.begin < intervals_.back().end) throw std::invalid_argument("indicator intervals overlap or are unsorted");
      if (iv.begin == intervals_.back().end) {
        intervals_.back().end = iv.end;
        continue;
      }
    }
    intervals_.push_back(iv);
  }
}

double PiecewiseIndicator::measure() const {
  double total = 0.0;
  for (const auto& iv : intervals_) total += iv.length();
  return total;
}

bool PiecewiseIndicator::contains(double t) const {
  auto it = std::upper_bound(intervals_.begin(), intervals_.end(), t,
                             [](double v, const Interval& iv) { return v < iv.begin; });
  if (it == intervals_.begin()) return false;
  --it;
  return t >= it->begin && t < it->end;
}

PiecewiseIndicator PiecewiseIndicator::restricted(double a, double b) const {
  if (!(a >= begin_ && b <= end_ && a <= b)) throw std::invalid_argument("restriction outside domain");
  std::vector<Interval> out;
  for (const auto& iv : intervals_) {
    const double lo = std::max(iv.begin, a);
    const double hi = std::min(iv.end, b);
    if (lo < hi) out.push_back({lo, hi});
  }
  return {a, b, std::move(out)};
}

std::vector<double> PiecewiseIndicator::interior_endpoints() const {
  std::vector<double> out;
  for (const auto& iv : intervals_) {
    if (iv.begin > begin_ && iv.begin < end_) out.push_back(iv.begin);
    if (iv.end > begin_ && iv.end < end_) out.push_back(iv.end);
  }
  return out;
}

LevelTracker::LevelTracker(std::span<const Direction> steps, const Schedule& sched)
    : sched_(sched) {
  require_length(steps.size(), sched.horizon());
  std::vector<std::size_t> cuts;
  for (int k = 1; k <= sched.levels(); ++k) cuts.push_back(sched.stop(k));
  state_ = PrefixState(steps.first(sched.horizon()), 0, cuts);
}

bool LevelTracker::R(int k) const {
  // segment k-1 is (s_{k-1}, s_k]; level 1's segment also holds s_0 = 1
  if (state_.segment_has_zero(static_cast<std::size_t>(k - 1))) return true;
  return k >= 2 && state_.position(sched_.stop(k - 1)).is_origin();
}

bool LevelTracker::G(int k) const { return sched_.in_annulus(k, state_.position(sched_.stop(k))); }

bool LevelTracker::E() const {
  if (sched_.levels() > 0 && state_.has_zero_anywhere()) return false;
  for (int k = 1; k <= sched_.levels(); ++k)
    if (!G(k) || R(k)) return false;
  return true;
}

PiecewiseIndicator scan_E_M(const DynamicalWalkRealization& r, const Schedule& sched,
                            TimeWindow window, ScanStats* stats) {
  if (!(window.begin >= 0.0 && window.begin <= window.end && window.end <= r.t_max()))
    throw std::invalid_argument("scan window must lie inside [0, t_max]");
  if (sched.levels() == 0) {
    std::vector<Interval> all;
    if (window.begin < window.end) all.push_back({window.begin, window.end});
    return {window.begin, window.end, std::move(all)};
  }
  const std::uint64_t horizon = sched.horizon();
  require_length(r.size(), horizon);
  const IndexRange indices{1, static_cast<std::size_t>(horizon)};

  const auto steps = r.steps_at(window.begin, indices);
  LevelTracker tracker(steps, sched);
  const auto events = r.refresh_events(window, indices);

  std::vector<Interval> intervals;
  bool current = tracker.E();
  double on_since = window.begin;
  std::size_t flips = 0;
  for (std::size_t i = 0; i < events.size();) {
    const double t = events[i].time;
    for (; i < events.size() && events[i].time == t; ++i) tracker.update(events[i].index, events[i].value);
    const bool value = tracker.E();
    if (value == current) continue;
    ++flips;
    if (current) {
      if (on_since < t) intervals.push_back({on_since, t});
    } else {
      on_since = t;
    }
    current = value;
  }
  if (current && on_since < window.end) intervals.push_back({on_since, window.end});
  if (stats) *stats = {events.size(), flips};
  return {window.begin, window.end, std::move(intervals)};
}

}  // namespace dynwalk
