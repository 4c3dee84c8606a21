#include "dynwalk/core_process.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <istream>
#include <ostream>
#include <stdexcept>
#include <string>

#include "dynwalk/rng.hpp"

namespace dynwalk {

double LatticePoint::norm() const { return std::sqrt(static_cast<double>(norm2())); }

char direction_letter(Direction d) {
  switch (d) {
    case Direction::East: return 'E';
    case Direction::West: return 'W';
    case Direction::North: return 'N';
    case Direction::South: return 'S';
  }
  return '?';
}

RefreshTimeline sample_timeline(std::uint64_t seed, std::size_t n, double t_max) {
  SplitMix64 rng(derive_seed(seed, streams::kTimeline, n));
  RefreshTimeline tl;
  tl.initial = rng.direction();
  double t = 0.0;
  for (;;) {
    const double next = t + rng.exponential();
    if (next > t_max) break;
    const Direction d = rng.direction();
    if (next <= t) continue;  // gap lost to rounding; keep times strictly increasing
    t = next;
    tl.times.push_back(t);
    tl.values.push_back(d);
  }
  return tl;
}

DynamicalWalkRealization DynamicalWalkRealization::from_timelines(
    std::vector<RefreshTimeline> timelines, double t_max, std::uint64_t seed) {
  if (!(t_max >= 0.0)) throw std::invalid_argument("t_max must be non-negative");
  DynamicalWalkRealization r;
  r.t_max_ = t_max;
  r.seed_ = seed;
  r.initial_.reserve(timelines.size());
  r.offsets_.reserve(timelines.size() + 1);
  for (std::size_t i = 0; i < timelines.size(); ++i) {
    const auto& tl = timelines[i];
    if (tl.times.size() != tl.values.size())
      throw std::invalid_argument("timeline times/values length mismatch");
    double prev = 0.0;
    for (double t : tl.times) {
      if (!(t > prev) || t > t_max)
        throw std::invalid_argument("timeline " + std::to_string(i + 1) +
                                    ": refresh times must be strictly increasing in (0, t_max]");
      prev = t;
    }
    r.initial_.push_back(tl.initial);
    r.times_.insert(r.times_.end(), tl.times.begin(), tl.times.end());
    r.values_.insert(r.values_.end(), tl.values.begin(), tl.values.end());
    r.offsets_.push_back(r.times_.size());
  }
  return r;
}

DynamicalWalkRealization sample_realization(std::size_t n_steps, double t_max, std::uint64_t seed) {
  if (!(t_max >= 0.0)) throw std::invalid_argument("t_max must be non-negative");
  std::vector<RefreshTimeline> timelines;
  timelines.reserve(n_steps);
  for (std::size_t n = 1; n <= n_steps; ++n) timelines.push_back(sample_timeline(seed, n, t_max));
  return DynamicalWalkRealization::from_timelines(std::move(timelines), t_max, seed);
}

void DynamicalWalkRealization::check_index(std::size_t n) const {
  if (n < 1 || n > size())
    throw std::out_of_range("step index " + std::to_string(n) + " outside [1, " +
                            std::to_string(size()) + "]");
}

void DynamicalWalkRealization::check_time(double t) const {
  if (!(t >= 0.0 && t <= t_max_))
    throw std::out_of_range("time " + std::to_string(t) + " outside [0, t_max]");
}

void DynamicalWalkRealization::check_range(IndexRange range) const {
  if (range.size() == 0) return;
  if (range.first < 1 || range.last > size()) throw std::out_of_range("index range outside [1, N]");
}

Direction DynamicalWalkRealization::initial(std::size_t n) const {
  check_index(n);
  return initial_[n - 1];
}

std::span<const double> DynamicalWalkRealization::refresh_times(std::size_t n) const {
  check_index(n);
  return {times_.data() + offsets_[n - 1], offsets_[n] - offsets_[n - 1]};
}

std::span<const Direction> DynamicalWalkRealization::refresh_values(std::size_t n) const {
  check_index(n);
  return {values_.data() + offsets_[n - 1], offsets_[n] - offsets_[n - 1]};
}

RefreshTimeline DynamicalWalkRealization::timeline(std::size_t n) const {
  const auto ts = refresh_times(n);
  const auto vs = refresh_values(n);
  return {initial_[n - 1], {ts.begin(), ts.end()}, {vs.begin(), vs.end()}};
}

Direction DynamicalWalkRealization::step_at(std::size_t n, double t) const {
  check_index(n);
  check_time(t);
  const auto ts = refresh_times(n);
  // number of refreshes at or before t
  const auto m = static_cast<std::size_t>(std::upper_bound(ts.begin(), ts.end(), t) - ts.begin());
  return m == 0 ? initial_[n - 1] : values_[offsets_[n - 1] + m - 1];
}

std::vector<Direction> DynamicalWalkRealization::steps_at(double t, IndexRange range) const {
  check_time(t);
  check_range(range);
  std::vector<Direction> out;
  out.reserve(range.size());
  for (std::size_t n = range.first; n <= range.last && range.size() > 0; ++n)
    out.push_back(step_at(n, t));
  return out;
}

std::vector<RefreshEvent> DynamicalWalkRealization::refresh_events(TimeWindow window,
                                                                   IndexRange range) const {
  if (!(window.begin >= 0.0 && window.end <= t_max_ && window.begin <= window.end))
    throw std::invalid_argument("time window must lie inside [0, t_max]");
  check_range(range);
  std::vector<RefreshEvent> events;
  if (range.size() == 0 || window.end <= window.begin) return events;
  for (std::size_t n = range.first; n <= range.last; ++n) {
    const auto ts = refresh_times(n);
    auto it = std::upper_bound(ts.begin(), ts.end(), window.begin);
    for (; it != ts.end() && *it <= window.end; ++it) {
      const auto m = static_cast<std::size_t>(it - ts.begin());
      events.push_back({*it, n, values_[offsets_[n - 1] + m]});
    }
  }
  std::sort(events.begin(), events.end(), [](const RefreshEvent& a, const RefreshEvent& b) {
    return a.time != b.time ? a.time < b.time : a.index < b.index;
  });
  return events;
}

std::vector<std::size_t> DynamicalWalkRealization::refreshed_indices(IndexRange range,
                                                                     double t) const {
  check_time(t);
  check_range(range);
  std::vector<std::size_t> out;
  for (std::size_t n = range.first; n <= range.last && range.size() > 0; ++n) {
    const auto ts = refresh_times(n);
    if (!ts.empty() && ts.front() <= t) out.push_back(n);
  }
  return out;
}

namespace {

static_assert(std::endian::native == std::endian::little, "binary dump assumes little endian");

template <class T>
void put(std::ostream& os, T v) {
  os.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <class T>
T get(std::istream& is) {
  T v{};
  is.read(reinterpret_cast<char*>(&v), sizeof(T));
  if (!is) throw std::runtime_error("truncated realization dump");
  return v;
}

Direction checked_direction(std::uint8_t b) {
  if (b > 3) throw std::runtime_error("corrupt direction byte in realization dump");
  return static_cast<Direction>(b);
}

}  // namespace

void write_realization(std::ostream& os, const DynamicalWalkRealization& r) {
  os.write("DWRZ", 4);
  put<std::uint32_t>(os, kRealizationFormatVersion);
  put<std::uint64_t>(os, r.size());
  put<double>(os, r.t_max());
  put<std::uint64_t>(os, r.seed());
  for (std::size_t n = 1; n <= r.size(); ++n) {
    put<std::uint8_t>(os, static_cast<std::uint8_t>(r.initial(n)));
    const auto ts = r.refresh_times(n);
    const auto vs = r.refresh_values(n);
    put<std::uint32_t>(os, static_cast<std::uint32_t>(ts.size()));
    for (std::size_t m = 0; m < ts.size(); ++m) {
      put<double>(os, ts[m]);
      put<std::uint8_t>(os, static_cast<std::uint8_t>(vs[m]));
    }
  }
}

DynamicalWalkRealization read_realization(std::istream& is) {
  char magic[4];
  is.read(magic, 4);
  if (!is || std::memcmp(magic, "DWRZ", 4) != 0) throw std::runtime_error("not a realization dump");
  const auto version = get<std::uint32_t>(is);
  if (version != kRealizationFormatVersion)
    throw std::runtime_error("unsupported realization dump version " + std::to_string(version));
  const auto n = get<std::uint64_t>(is);
  const auto t_max = get<double>(is);
  const auto seed = get<std::uint64_t>(is);
  std::vector<RefreshTimeline> timelines(n);
  for (auto& tl : timelines) {
    tl.initial = checked_direction(get<std::uint8_t>(is));
    const auto count = get<std::uint32_t>(is);
    tl.times.reserve(count);
    tl.values.reserve(count);
    for (std::uint32_t m = 0; m < count; ++m) {
      tl.times.push_back(get<double>(is));
      tl.values.push_back(checked_direction(get<std::uint8_t>(is)));
    }
  }
  return DynamicalWalkRealization::from_timelines(std::move(timelines), t_max, seed);
}

}  // namespace dynwalk
