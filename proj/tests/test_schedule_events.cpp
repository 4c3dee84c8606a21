#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <unordered_set>
#include <vector>

#include "dynwalk/core_process.hpp"
#include "dynwalk/events.hpp"
#include "dynwalk/rng.hpp"
#include "dynwalk/schedule.hpp"
#include "oracles.hpp"

using namespace dynwalk;
using D = Direction;

namespace {

std::vector<D> random_steps(std::size_t n, std::uint64_t seed, bool lazy = false) {
  SplitMix64 rng(seed);
  std::vector<D> w(n);
  for (auto& d : w) d = lazy ? static_cast<D>(rng.next() >> 63) : rng.direction();
  return w;
}

// Refresh times of indices 1..limit as a hash set for exact membership.
std::unordered_set<double> lambda_set(const DynamicalWalkRealization& r, std::size_t limit) {
  std::unordered_set<double> out;
  for (std::size_t n = 1; n <= limit; ++n)
    for (double t : r.refresh_times(n)) out.insert(t);
  return out;
}

}  // namespace

TEST_SUITE("schedule-events") {

TEST_CASE("paper schedule values") {
  const auto s = paper_schedule(2);
  CHECK(s.stops() == std::vector<std::uint64_t>{1, 4, 262144});
  CHECK(s.inner(1) == 2.0);
  CHECK(s.outer(1) == 2.0);
  CHECK(s.inner(2) == 16.0);
  CHECK(s.outer(2) == 16384.0);
  CHECK(paper_schedule(0).levels() == 0);
  CHECK(paper_schedule(4).stop(4) == (std::uint64_t{1} << 52));
  CHECK_THROWS_AS(paper_schedule(5), std::overflow_error);
  CHECK_THROWS(paper_schedule(-1));
}

TEST_CASE("desk schedule values") {
  const auto s = desk_schedule(3, 4.0, 2.0);
  CHECK(s.stops() == std::vector<std::uint64_t>{1, 4, 16, 64});
  CHECK(s.inner_radii() == std::vector<double>{1, 2, 4});
  CHECK(s.outer_radii() == std::vector<double>{4, 8, 16});
  const auto flat = desk_schedule(4, 3.0, 1.0);
  for (int k = 1; k <= 4; ++k) {
    CHECK(flat.inner(k) == flat.outer(k));
    CHECK(flat.inner(k) == std::ceil(std::sqrt(static_cast<double>(flat.stop(k)))));
  }
  for (double rho : {2.0, 2.5, 3.7, 8.0}) {
    const auto g = desk_schedule(12, rho, 1.5);
    for (int k = 1; k <= 12; ++k) CHECK(g.stop(k) > g.stop(k - 1));
  }
  CHECK_THROWS(desk_schedule(3, 1.0, 2.0));
  CHECK_THROWS(desk_schedule(3, 4.0, 0.5));
}

TEST_CASE("schedule validation and truncation") {
  CHECK_THROWS(Schedule({2, 4}, {1}, {2}));
  CHECK_THROWS(Schedule({1, 4, 4}, {1, 1}, {2, 2}));
  CHECK_THROWS(Schedule({1, 4}, {3}, {2}));
  CHECK_THROWS(Schedule({1, 4}, {0}, {2}));
  const auto s = desk_schedule(3, 4.0, 2.0);
  CHECK(s.truncated(2) == desk_schedule(2, 4.0, 2.0));
}

TEST_CASE("level index K(t)") {
  CHECK(level_for_time(1.0) == 0);
  CHECK(level_for_time(5.0) == 0);
  CHECK(level_for_time(0.25) == 2);
  CHECK(level_for_time(0.3) == 2);
  CHECK(level_for_time(0.5) == 1);
  for (double t : {0.9, 0.3, 0.01, 1e-5, 0.125}) {
    const double a = std::abs(std::log2(t));
    const int k = level_for_time(t);
    CHECK(k >= a);
    CHECK(k < 1 + a);
  }
  CHECK_THROWS(level_for_time(0.0));
  CHECK_THROWS(level_for_time(-1.0));
}

TEST_CASE("R_k includes the left endpoint") {
  const auto s = desk_schedule(2, 4.0, 2.0);  // s = 1, 4, 16
  std::vector<D> w{D::East, D::North, D::West, D::South};
  w.resize(16, D::East);
  PrefixState st(w);
  CHECK(st.position(4) == LatticePoint{});
  CHECK(event_R_k(st, s, 1));
  CHECK(event_R_k(st, s, 2));
  const std::vector<D> east(16, D::East);
  PrefixState e(east);
  CHECK_FALSE(event_R_k(e, s, 1));
  CHECK_FALSE(event_R_k(e, s, 2));
  CHECK_THROWS(event_R_k(PrefixState(std::vector<D>(10, D::East)), s, 2));
  CHECK_THROWS(event_R_k(e, s, 3));
}

TEST_CASE("G_k on the paper schedule") {
  const auto s = paper_schedule(1);  // s_1 = 4, annulus |x| = 2
  CHECK(event_G_k(PrefixState(std::vector<D>{D::East, D::East, D::North, D::South}), s, 1));
  CHECK_FALSE(event_G_k(PrefixState(std::vector<D>{D::East, D::North, D::East, D::West}), s, 1));
  // closed outer boundary
  const auto d = desk_schedule(1, 4.0, 2.0);  // r = 1, R = 4 at s_1 = 4
  CHECK(event_G_k(PrefixState(std::vector<D>(4, D::East)), d, 1));
}

TEST_CASE("E_M basics") {
  const Schedule empty;
  CHECK(event_E_M(PrefixState(std::vector<D>{}), empty));
  CHECK(event_E_M(PrefixState(std::vector<D>{D::East}), empty));
  const auto s = desk_schedule(2, 4.0, 2.0);
  std::vector<D> w{D::East, D::West};
  w.resize(16, D::North);
  CHECK_FALSE(event_E_M(PrefixState(w), s));
}

TEST_CASE("events match the naive oracle on random walks") {
  const auto s = desk_schedule(3, 4.0, 2.0);
  for (std::uint64_t q = 0; q < 3000; ++q) {
    const auto w = random_steps(64, q, q % 3 == 0);
    PrefixState st(w);
    const auto naive = oracle::prefix_sums(w);
    for (int k = 1; k <= 3; ++k) CHECK(event_R_k(st, s, k) == oracle::zero_in(naive, s.stop(k - 1), s.stop(k)));
    CHECK(event_E_M(st, s) == oracle::E_M(w, s));
    // levels_passed is the largest M' with E_M' on the truncated schedule
    int expect = 0;
    for (int m = 1; m <= 3; ++m)
      if (oracle::E_M(w, s.truncated(m))) expect = m;
      else break;
    CHECK(levels_passed(w, s) == expect);
    LevelTracker tr(w, s);
    CHECK(tr.E() == oracle::E_M(w, s));
  }
}

TEST_CASE("nesting of E_M over levels") {
  const auto s = desk_schedule(4, 3.0, 2.0);
  for (std::uint64_t q = 0; q < 2000; ++q) {
    const auto w = random_steps(s.horizon(), 100 + q);
    bool prev = true;
    for (int m = 0; m <= 4; ++m) {
      const bool e = event_E_M(PrefixState(w), s.truncated(m));
      if (!prev) CHECK_FALSE(e);
      prev = e;
    }
  }
}

TEST_CASE("level tracker stays exact under updates") {
  const auto s = desk_schedule(3, 4.0, 2.0);
  SplitMix64 rng(17);
  for (std::uint64_t q = 0; q < 200; ++q) {
    auto w = random_steps(64, 500 + q, true);
    LevelTracker tr(w, s);
    for (int u = 0; u < 100; ++u) {
      const std::size_t i = 1 + static_cast<std::size_t>(rng.uniform() * 64);
      const D d = q % 2 ? rng.direction() : static_cast<D>(rng.next() >> 63);
      tr.update(i, d);
      w[i - 1] = d;
      const auto naive = oracle::prefix_sums(w);
      for (int k = 1; k <= 3; ++k) CHECK(tr.R(k) == oracle::zero_in(naive, s.stop(k - 1), s.stop(k)));
      CHECK(tr.E() == oracle::E_M(w, s));
    }
  }
}

TEST_CASE("R^eps_k") {
  const auto s = desk_schedule(3, 4.0, 2.0);
  std::vector<D> w{D::East, D::West};
  w.resize(64, D::East);
  CHECK(event_R_eps_k(w, s, 1, 0.25));
  const std::vector<D> east(64, D::East);
  for (int k = 2; k <= 3; ++k) CHECK_FALSE(event_R_eps_k(east, s, k, 0.25));
  for (std::uint64_t q = 0; q < 500; ++q) {
    const auto r = random_steps(64, 900 + q);
    const auto naive = oracle::prefix_sums(r);
    for (double eps : {0.05, 0.25, 1.0})
      for (int k = 1; k <= 3; ++k) {
        bool expect = false;
        for (std::uint64_t n = s.stop(k - 1); n <= s.stop(k); ++n)
          expect = expect || std::sqrt(static_cast<double>(naive[n].norm2())) < oracle::barrier(n, eps);
        CHECK(event_R_eps_k(r, s, k, eps) == expect);
      }
  }
  CHECK_THROWS(event_R_eps_k(east, s, 1, 0.0));
}

TEST_CASE("piecewise indicator") {
  PiecewiseIndicator ind(0.0, 1.0, {{0.1, 0.2}, {0.2, 0.4}, {0.6, 1.0}});
  CHECK(ind.intervals().size() == 2);
  CHECK(ind.measure() == doctest::Approx(0.7));
  CHECK(ind.contains(0.1));
  CHECK(ind.contains(0.3));
  CHECK_FALSE(ind.contains(0.4));
  CHECK_FALSE(ind.contains(0.05));
  CHECK(ind.restricted(0.3, 0.7).measure() == doctest::Approx(0.2));
  CHECK(ind.interior_endpoints() == std::vector<double>{0.1, 0.4, 0.6});
  CHECK_THROWS(PiecewiseIndicator(0.0, 1.0, {{0.5, 0.6}, {0.55, 0.7}}));
  CHECK_THROWS(PiecewiseIndicator(0.0, 1.0, {{0.5, 1.2}}));
}

TEST_CASE("scan without events is constant") {
  const auto s = desk_schedule(2, 4.0, 2.0);
  for (std::uint64_t q = 0; q < 50; ++q) {
    const auto r = sample_realization(16, 0.0, q);
    const auto ind = scan_E_M(r, s, {0.0, 0.0});
    CHECK(ind.measure() == 0.0);
    const auto r2 = sample_realization(16, 1.0, q);
    // narrow window before the first event
    double first = 1.0;
    for (std::size_t n = 1; n <= 16; ++n)
      if (!r2.refresh_times(n).empty()) first = std::min(first, r2.refresh_times(n)[0]);
    const auto ind2 = scan_E_M(r2, s, {0.0, first / 2});
    const bool e0 = event_E_M(PrefixState(r2.steps_at(0.0, {1, 16})), s);
    CHECK(ind2.measure() == (e0 ? first / 2 : 0.0));
  }
}

TEST_CASE("scan with M = 0 covers the window") {
  const auto r = sample_realization(10, 1.0, 3);
  const auto ind = scan_E_M(r, Schedule{}, {0.2, 0.9});
  CHECK(ind.measure() == doctest::Approx(0.7));
}

TEST_CASE("scan matches per-time oracle at every gap midpoint") {
  const auto s = desk_schedule(3, 4.0, 2.0);  // s_M = 64
  int nonempty = 0;
  for (std::uint64_t q = 0; q < 300; ++q) {
    const auto r = sample_realization(64, 1.0, 7000 + q);
    const auto ind = scan_E_M(r, s, {0.0, 1.0});
    if (!ind.empty()) ++nonempty;
    std::vector<double> times{0.0};
    for (const auto& ev : r.refresh_events({0.0, 1.0}, {1, 64})) times.push_back(ev.time);
    times.push_back(1.0);
    for (std::size_t i = 0; i + 1 < times.size(); ++i) {
      if (!(times[i + 1] > times[i])) continue;
      const double mid = 0.5 * (times[i] + times[i + 1]);
      CHECK(ind.contains(mid) == oracle::E_M(r.steps_at(mid, {1, 64}), s));
    }
  }
  CHECK(nonempty > 0);
}

TEST_CASE("scan boundaries lie in the refresh-time set") {
  const auto s = desk_schedule(3, 4.0, 2.0);
  for (std::uint64_t q = 0; q < 100; ++q) {
    const auto r = sample_realization(200, 1.0, 300 + q);
    const auto lam = lambda_set(r, s.horizon());
    for (double t : scan_E_M(r, s, {0.0, 1.0}).interior_endpoints()) CHECK(lam.count(t) == 1);
  }
}

TEST_CASE("sub-window scan is the restriction of the full scan") {
  const auto s = desk_schedule(3, 4.0, 2.0);
  for (std::uint64_t q = 0; q < 100; ++q) {
    const auto r = sample_realization(64, 1.0, 40 + q);
    const auto full = scan_E_M(r, s, {0.0, 1.0});
    const auto sub = scan_E_M(r, s, {0.25, 0.75});
    CHECK(sub == full.restricted(0.25, 0.75));
  }
}

TEST_CASE("scan measure is non-increasing in M") {
  const auto s = desk_schedule(4, 4.0, 2.0);
  for (std::uint64_t q = 0; q < 100; ++q) {
    const auto r = sample_realization(256, 1.0, 60 + q);
    double prev = 2.0;
    for (int m = 0; m <= 4; ++m) {
      const double mu = scan_E_M(r, s.truncated(m), {0.0, 1.0}).measure();
      CHECK(mu <= prev);
      prev = mu;
    }
  }
}

TEST_CASE("pair probabilities are stationary") {
  const auto s = desk_schedule(2, 4.0, 2.0);
  const std::size_t reps = 40000;
  std::size_t a = 0, b = 0;
  for (std::size_t i = 0; i < reps; ++i) {
    const auto r = sample_realization(16, 0.5, derive_seed(5, 97, i));
    const auto at = [&](double t) { return oracle::E_M(r.steps_at(t, {1, 16}), s); };
    a += at(0.2) && at(0.5);
    b += at(0.0) && at(0.3);
  }
  const double pa = double(a) / reps, pb = double(b) / reps;
  const double se = std::sqrt(pa * (1 - pa) / reps + pb * (1 - pb) / reps);
  CAPTURE(pa);
  CAPTURE(pb);
  CHECK(std::abs(pa - pb) < 3.0 * se);
}

}  // TEST_SUITE
