#include "dynwalk/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "dynwalk/estimators.hpp"
#include "dynwalk/rng.hpp"

namespace dynwalk {

double barrier(std::uint64_t n, double eps) {
  if (!(eps > 0.0)) throw std::invalid_argument("eps must be positive");
  if (n < 2) return 0.0;
  const double ln = std::log2(static_cast<double>(n));
  const double exponent = 0.5 - 1.0 / std::pow(ln, 0.25 + eps);
  return std::exp2(ln * exponent);
}

Barrier Barrier::log_corrected(double eps) {
  if (!(eps > 0.0)) throw std::invalid_argument("eps must be positive");
  return {Kind::LogCorrected, eps};
}

Barrier Barrier::power(double alpha) {
  if (!(alpha >= 0.0 && alpha < 0.5)) throw std::invalid_argument("power barrier needs 0 <= alpha < 1/2");
  return {Kind::Power, alpha};
}

double Barrier::operator()(std::uint64_t n) const {
  if (kind == Kind::LogCorrected) return barrier(n, parameter);
  if (n < 1) return 0.0;
  return std::pow(static_cast<double>(n), parameter);
}

DimensionReport box_count_dimension(std::span<const Interval> set, std::span<const int> depths) {
  if (depths.empty()) throw std::invalid_argument("need at least one depth");
  DimensionReport rep;
  std::vector<Interval> sorted(set.begin(), set.end());
  std::sort(sorted.begin(), sorted.end(),
            [](const Interval& a, const Interval& b) { return a.begin < b.begin; });
  for (int d : depths) {
    if (d < 1 || d > 52) throw std::invalid_argument("depth must be in [1, 52]");
    const double scale = std::ldexp(1.0, d);
    // boxes covered by each interval, merged as integer ranges [lo, hi]
    std::uint64_t count = 0;
    std::int64_t covered_hi = -1;
    for (const auto& iv : sorted) {
      if (iv.end < iv.begin) throw std::invalid_argument("reversed interval");
      const auto lo = static_cast<std::int64_t>(std::floor(iv.begin * scale));
      const auto hi = iv.end > iv.begin ? static_cast<std::int64_t>(std::ceil(iv.end * scale)) - 1 : lo;
      const std::int64_t from = std::max(lo, covered_hi + 1);
      if (hi >= from) {
        count += static_cast<std::uint64_t>(hi - from + 1);
        covered_hi = hi;
      }
    }
    rep.depths.push_back(d);
    rep.box_sizes.push_back(1.0 / scale);
    rep.counts.push_back(count);
  }

  std::vector<double> xs, ys;
  for (std::size_t i = 0; i < rep.depths.size(); ++i)
    if (rep.counts[i] > 0) {
      xs.push_back(rep.depths[i]);
      ys.push_back(std::log2(static_cast<double>(rep.counts[i])));
    }
  if (xs.empty()) {
    rep.empty_set = true;
    return rep;
  }
  if (xs.size() == 1) return rep;
  const double n = static_cast<double>(xs.size());
  const double mx = std::accumulate(xs.begin(), xs.end(), 0.0) / n;
  const double my = std::accumulate(ys.begin(), ys.end(), 0.0) / n;
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxx += (xs[i] - mx) * (xs[i] - mx);
    sxy += (xs[i] - mx) * (ys[i] - my);
    syy += (ys[i] - my) * (ys[i] - my);
  }
  rep.slope = sxy / sxx;
  rep.r_squared = syy > 0.0 ? sxy * sxy / (sxx * syy) : 1.0;
  return rep;
}

DimensionReport box_count_dimension(const PiecewiseIndicator& ind, std::span<const int> depths) {
  if (!(ind.domain_end() > ind.domain_begin()))
    throw std::invalid_argument("indicator domain must have positive length");
  return box_count_dimension(std::span<const Interval>(ind.intervals()), depths);
}

std::vector<Interval> cantor_intervals(int depth) {
  if (depth < 0) throw std::invalid_argument("Cantor depth must be non-negative");
  std::vector<Interval> cur{{0.0, 1.0}};
  for (int d = 0; d < depth; ++d) {
    std::vector<Interval> next;
    next.reserve(cur.size() * 2);
    for (const auto& iv : cur) {
      const double third = (iv.end - iv.begin) / 3.0;
      next.push_back({iv.begin, iv.begin + third});
      next.push_back({iv.end - third, iv.end});
    }
    cur = std::move(next);
  }
  return cur;
}

namespace {

// First barrier violation index in [1, last], or 0 if none.
std::uint64_t first_violation(std::span<const Direction> steps, std::span<const double> squared_barrier) {
  LatticePoint pos{};
  for (std::size_t n = 1; n <= steps.size(); ++n) {
    pos += step_vector(steps[n - 1]);
    if (static_cast<double>(pos.norm2()) < squared_barrier[n]) return n;
  }
  return 0;
}

}  // namespace

EscapeReport escape_rate_scan(const DynamicalWalkRealization& r, const Schedule& sched,
                              const Barrier& barrier, std::span<const double> t_grid,
                              const Execution& exec) {
  const std::uint64_t horizon = sched.horizon();
  if (r.size() < horizon) throw std::invalid_argument("realization shorter than the schedule horizon");
  for (double t : t_grid)
    if (!(t >= 0.0 && t <= r.t_max())) throw std::invalid_argument("grid time outside [0, t_max]");
  const auto last = static_cast<std::size_t>(horizon);
  const IndexRange indices{1, last};

  std::vector<double> squared(last + 1, 0.0);
  for (std::size_t n = 1; n <= last; ++n) {
    const double b = barrier(n);
    squared[n] = b * b;
  }

  std::vector<std::size_t> order(t_grid.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return t_grid[a] < t_grid[b]; });

  EscapeReport rep;
  rep.times.resize(t_grid.size());
  const std::size_t chunks =
      std::max<std::size_t>(1, std::min<std::size_t>(order.size(), exec.is_serial() ? 1 : static_cast<std::size_t>(std::max(exec.workers, 1)) * 4));
  const std::size_t per = order.empty() ? 0 : (order.size() + chunks - 1) / chunks;

  auto run_chunk = [&](std::size_t c) {
    const std::size_t from = c * per;
    const std::size_t to = std::min(order.size(), from + per);
    if (from >= to) return 0;
    double t_prev = t_grid[order[from]];
    auto steps = r.steps_at(t_prev, indices);
    for (std::size_t q = from; q < to; ++q) {
      const double t = t_grid[order[q]];
      if (t > t_prev) {
        for (const auto& ev : r.refresh_events({t_prev, t}, indices)) steps[ev.index - 1] = ev.value;
        t_prev = t;
      }
      const std::uint64_t v = first_violation(steps, squared);
      auto& out = rep.times[order[q]];
      out.t = t;
      out.survived = v == 0;
      out.max_n = v == 0 ? horizon : v - 1;
    }
    return 0;
  };
  collect_samples<int>(chunks, exec, run_chunk);
  for (const auto& tr : rep.times) rep.surviving += tr.survived ? 1 : 0;
  return rep;
}

std::vector<double> good_set_measures(const Schedule& sched, TimeWindow window, std::uint64_t realizations,
                                      std::uint64_t seed, const Execution& exec) {
  if (!(window.begin >= 0.0 && window.end > window.begin)) throw std::invalid_argument("bad time window");
  const auto n = static_cast<std::size_t>(sched.horizon());
  return collect_samples<double>(realizations, exec, [&](std::size_t i) {
    const auto r = sample_realization(n, window.end, derive_seed(seed, streams::kRealization, i));
    return scan_E_M(r, sched, window).measure();
  });
}

SecondMomentReport second_moment_report(std::span<const double> l_samples, std::uint64_t bootstrap_reps,
                                        std::uint64_t seed) {
  SecondMomentReport rep;
  rep.n = l_samples.size();
  rep.bound = second_moment_lower_bound(l_samples);
  rep.mean_L = EstimatorReport::from_samples(l_samples, false);
  Accumulator sq, pos;
  for (double v : l_samples) {
    sq.add(v * v);
    pos.add(v > 0.0 ? 1.0 : 0.0);
  }
  rep.mean_L2 = sq.mean();
  rep.positive = EstimatorReport::from(pos);
  if (bootstrap_reps > 1) {
    SplitMix64 rng(derive_seed(seed, streams::kBootstrap, 0));
    std::vector<double> resample(l_samples.size());
    Accumulator boot;
    for (std::uint64_t b = 0; b < bootstrap_reps; ++b) {
      for (auto& v : resample) v = l_samples[static_cast<std::size_t>(rng.uniform() * l_samples.size())];
      boot.add(second_moment_lower_bound(resample));
    }
    rep.bound_stderr = std::sqrt(boot.variance() * boot.count / (boot.count - 1.0));
  }
  return rep;
}

std::vector<double> uniform_grid(double t_max, double spacing) {
  if (!(spacing > 0.0) || !(t_max >= 0.0)) throw std::invalid_argument("grid needs spacing > 0 and t_max >= 0");
  std::vector<double> grid;
  for (std::uint64_t i = 0;; ++i) {
    const double t = static_cast<double>(i) * spacing;
    if (t > t_max) break;
    grid.push_back(t);
  }
  return grid;
}

}  // namespace dynwalk
