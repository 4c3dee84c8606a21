#include <doctest.h>

#include <array>
#include <cmath>
#include <sstream>

#include "dynwalk/core_process.hpp"
#include "dynwalk/rng.hpp"
#include "oracles.hpp"

using namespace dynwalk;

TEST_SUITE("core-process") {

TEST_CASE("zero horizon gives only the time-0 entry") {
  const auto r = sample_realization(1, 0.0, 99);
  CHECK(r.size() == 1);
  CHECK(r.refresh_times(1).empty());
  CHECK(r.total_refreshes() == 0);
  CHECK(r.step_at(1, 0.0) == r.initial(1));
  CHECK(sample_realization(0, 1.0, 1).size() == 0);
}

TEST_CASE("sampling is deterministic in (N, t_max, seed)") {
  const auto a = sample_realization(500, 2.0, 12345);
  const auto b = sample_realization(500, 2.0, 12345);
  CHECK(a == b);
  const auto c = sample_realization(500, 2.0, 12346);
  CHECK_FALSE(a == c);
}

TEST_CASE("timelines extend by appending when t_max grows") {
  for (std::size_t n : {1u, 7u, 100u}) {
    const auto short_tl = sample_timeline(5, n, 0.5);
    const auto long_tl = sample_timeline(5, n, 3.0);
    CHECK(short_tl.initial == long_tl.initial);
    REQUIRE(short_tl.times.size() <= long_tl.times.size());
    for (std::size_t m = 0; m < short_tl.times.size(); ++m) {
      CHECK(short_tl.times[m] == long_tl.times[m]);
      CHECK(short_tl.values[m] == long_tl.values[m]);
    }
  }
}

TEST_CASE("refresh counts have mean one per unit time") {
  const std::size_t n = 100000;
  const auto r = sample_realization(n, 1.0, 2024);
  const double mean = static_cast<double>(r.total_refreshes()) / static_cast<double>(n);
  const double se = std::sqrt(1.0 / static_cast<double>(n));
  CHECK(std::abs(mean - 1.0) < 3.0 * se);
}

TEST_CASE("refresh counts fit Poisson(1)") {
  const std::size_t n = 100000;
  const auto r = sample_realization(n, 1.0, 77);
  std::array<double, 6> observed{};  // 0..4 and >= 5
  for (std::size_t i = 1; i <= n; ++i) observed[std::min<std::size_t>(r.refresh_times(i).size(), 5)] += 1.0;
  std::array<double, 6> p{};
  double fact = 1.0, tail = 1.0;
  for (int k = 0; k < 5; ++k) {
    if (k > 0) fact *= k;
    p[k] = std::exp(-1.0) / fact;
    tail -= p[k];
  }
  p[5] = tail;
  double chi2 = 0.0;
  for (int k = 0; k < 6; ++k) {
    const double e = p[k] * static_cast<double>(n);
    chi2 += (observed[k] - e) * (observed[k] - e) / e;
  }
  CHECK(chi2 < 20.515);  // 5 dof at 1e-3
}

TEST_CASE("directions at a fixed time are uniform") {
  for (double t : {0.0, 0.37, 1.0}) {
    const std::size_t n = 100000;
    const auto r = sample_realization(n, 1.0, 31337);
    std::array<double, 4> counts{};
    for (auto d : r.steps_at(t)) counts[static_cast<int>(d)] += 1.0;
    double chi2 = 0.0;
    for (double c : counts) chi2 += (c - n / 4.0) * (c - n / 4.0) / (n / 4.0);
    CHECK(chi2 < 16.266);  // 3 dof at 1e-3
  }
}

TEST_CASE("half-open step convention") {
  const auto r = sample_realization(200, 3.0, 8);
  int checked = 0;
  for (std::size_t n = 1; n <= r.size(); ++n) {
    CHECK(r.step_at(n, 0.0) == r.initial(n));
    const auto times = r.refresh_times(n);
    const auto values = r.refresh_values(n);
    if (times.empty()) {
      CHECK(r.step_at(n, 3.0) == r.initial(n));
      continue;
    }
    ++checked;
    CHECK(r.step_at(n, times[0]) == values[0]);
    CHECK(r.step_at(n, std::nextafter(times[0], 0.0)) == r.initial(n));
    CHECK(r.step_at(n, 3.0) == values.back());
  }
  CHECK(checked > 100);
  CHECK_THROWS_AS(r.step_at(0, 0.5), std::out_of_range);
  CHECK_THROWS_AS(r.step_at(201, 0.5), std::out_of_range);
  CHECK_THROWS_AS(r.step_at(1, 3.5), std::out_of_range);
  CHECK_THROWS_AS(r.step_at(1, -0.1), std::out_of_range);
}

TEST_CASE("refresh events replay onto the time-0 configuration") {
  const auto r = sample_realization(300, 2.0, 4242);
  const IndexRange all{1, r.size()};
  CHECK(r.refresh_events({0.7, 0.7}, all).empty());

  const auto events = r.refresh_events({0.0, 2.0}, all);
  CHECK(events.size() == r.total_refreshes());
  for (std::size_t i = 1; i < events.size(); ++i) {
    const bool ordered = events[i - 1].time < events[i].time ||
                         (events[i - 1].time == events[i].time && events[i - 1].index < events[i].index);
    CHECK(ordered);
  }

  auto steps = r.steps_at(0.0);
  for (std::size_t e = 0; e < events.size(); ++e) {
    steps[events[e].index - 1] = events[e].value;
    // midpoint between this event and the next
    const double next = e + 1 < events.size() ? events[e + 1].time : 2.0;
    if (next > events[e].time && e % 7 == 0) {
      const double mid = 0.5 * (events[e].time + next);
      CHECK(steps == r.steps_at(mid));
    }
  }
  CHECK(steps == r.steps_at(2.0));

  const auto sub = r.refresh_events({0.5, 1.5}, {10, 20});
  for (const auto& ev : sub) {
    CHECK(ev.time > 0.5);
    CHECK(ev.time <= 1.5);
    CHECK(ev.index >= 10);
    CHECK(ev.index <= 20);
  }
}

TEST_CASE("refreshed indices") {
  const auto r = sample_realization(1000, 1.0, 9);
  CHECK(r.refreshed_indices({1, 1000}, 0.0).empty());
  const auto set = r.refreshed_indices({1, 1000}, 0.4);
  std::size_t pos = 0;
  for (std::size_t n = 1; n <= 1000; ++n) {
    const auto times = r.refresh_times(n);
    const bool in = !times.empty() && times[0] <= 0.4;
    const bool listed = pos < set.size() && set[pos] == n;
    CHECK(in == listed);
    if (listed) ++pos;
  }

  // mean size (1 - e^{-t}) |range| over independent realizations
  const double t = 0.5;
  const std::size_t width = 64, reps = 10000;
  double sum = 0.0;
  for (std::size_t i = 0; i < reps; ++i)
    sum += static_cast<double>(sample_realization(width, t, derive_seed(1, 99, i)).refreshed_indices({1, width}, t).size());
  const double p = 1.0 - std::exp(-t);
  const double se = std::sqrt(width * p * (1.0 - p) / static_cast<double>(reps));
  CHECK(std::abs(sum / reps - width * p) < 3.0 * se);
}

TEST_CASE("two-step return probability at fixed times") {
  const double exact = oracle::path_fraction(2, [](const auto& p) {
    return oracle::prefix_sums(p)[2] == LatticePoint{};
  });
  CHECK(exact == doctest::Approx(0.25));
  for (double t : {0.0, 0.37, 1.0}) {
    const std::size_t reps = 100000;
    std::size_t hits = 0;
    for (std::size_t i = 0; i < reps; ++i) {
      const auto r = sample_realization(2, 1.0, derive_seed(3, 98, i));
      const auto a = step_vector(r.step_at(1, t)), b = step_vector(r.step_at(2, t));
      hits += (a + b).is_origin();
    }
    const double mean = static_cast<double>(hits) / reps;
    CHECK(std::abs(mean - exact) < 3.0 * std::sqrt(exact * (1 - exact) / reps));
  }
}

TEST_CASE("timeline validation") {
  RefreshTimeline good{Direction::East, {0.1, 0.5}, {Direction::North, Direction::West}};
  CHECK_NOTHROW(DynamicalWalkRealization::from_timelines({good}, 1.0));
  RefreshTimeline unsorted{Direction::East, {0.5, 0.1}, {Direction::North, Direction::West}};
  CHECK_THROWS(DynamicalWalkRealization::from_timelines({unsorted}, 1.0));
  RefreshTimeline at_zero{Direction::East, {0.0}, {Direction::North}};
  CHECK_THROWS(DynamicalWalkRealization::from_timelines({at_zero}, 1.0));
  RefreshTimeline late{Direction::East, {1.5}, {Direction::North}};
  CHECK_THROWS(DynamicalWalkRealization::from_timelines({late}, 1.0));
}

TEST_CASE("equal-time events are ordered by index") {
  RefreshTimeline a{Direction::East, {0.5}, {Direction::North}};
  RefreshTimeline b{Direction::West, {0.5}, {Direction::South}};
  const auto r = DynamicalWalkRealization::from_timelines({b, a, b}, 1.0);
  const auto ev = r.refresh_events({0.0, 1.0}, {1, 3});
  REQUIRE(ev.size() == 3);
  CHECK(ev[0].index == 1);
  CHECK(ev[1].index == 2);
  CHECK(ev[2].index == 3);
}

TEST_CASE("binary dump round trip") {
  const auto r = sample_realization(257, 1.5, 55);
  std::stringstream ss(std::ios::in | std::ios::out | std::ios::binary);
  write_realization(ss, r);
  const auto back = read_realization(ss);
  CHECK(back == r);
  std::stringstream bad("XXXX");
  CHECK_THROWS(read_realization(bad));
  std::string bytes;
  {
    std::ostringstream os(std::ios::binary);
    write_realization(os, r);
    bytes = os.str();
  }
  std::istringstream truncated(bytes.substr(0, bytes.size() / 2), std::ios::binary);
  CHECK_THROWS(read_realization(truncated));
}

TEST_CASE("coupled stream at t = 0 reproduces the single walk") {
  StepStream single(derive_seed(7, streams::kWalk, 3));
  CoupledStepStream coupled(derive_seed(7, streams::kWalk, 3), derive_seed(7, streams::kRefresh, 3), 0.0);
  for (int i = 0; i < 1000; ++i) {
    const auto p = coupled.next();
    const auto d = single.next();
    CHECK(p.at_zero == d);
    CHECK(p.at_t == d);
  }
}

TEST_CASE("coupled stream refresh fraction is 1 - e^{-t}") {
  const double t = 0.7;
  CoupledStepStream s(1, 2, t);
  const int n = 200000;
  int differ = 0;
  for (int i = 0; i < n; ++i) {
    const auto p = s.next();
    differ += p.at_zero != p.at_t;
  }
  // a refreshed step keeps its value with probability 1/4
  const double p = 0.75 * (1.0 - std::exp(-t));
  CHECK(std::abs(differ / double(n) - p) < 3.0 * std::sqrt(p * (1 - p) / n));
}

}  // TEST_SUITE
