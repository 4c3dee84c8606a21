#include "dynwalk/estimators.hpp"

#include <algorithm>
#include <bit>
#include <climits>
#include <cmath>
#include <stdexcept>
#include <string>

#include "dynwalk/rng.hpp"
#include "dynwalk/square_exit.hpp"

namespace dynwalk {

EstimatorReport EstimatorReport::from(const Accumulator& acc, bool probability) {
  EstimatorReport r;
  r.n_samples = acc.count;
  r.mean = acc.mean();
  r.stderr_ = acc.count ? std::sqrt(acc.variance() / static_cast<double>(acc.count)) : 0.0;
  constexpr double z95 = 1.959963984540054;
  r.ci_level = 0.95;
  r.ci_low = r.mean - z95 * r.stderr_;
  r.ci_high = r.mean + z95 * r.stderr_;
  if (probability) {
    r.ci_low = std::max(0.0, r.ci_low);
    r.ci_high = std::min(1.0, r.ci_high);
  }
  return r;
}

EstimatorReport EstimatorReport::from_samples(std::span<const double> samples, bool probability) {
  Accumulator acc;
  for (double v : samples) acc.add(v);
  return from(acc, probability);
}

namespace {

EstimatorReport bernoulli(std::span<const std::uint8_t> outcomes) {
  Accumulator acc;
  for (auto o : outcomes) acc.add(o ? 1.0 : 0.0);
  return EstimatorReport::from(acc);
}

void require_level(const Schedule& sched, int k) {
  if (k < 1 || k > sched.levels())
    throw std::out_of_range("level " + std::to_string(k) + " outside [1, " +
                            std::to_string(sched.levels()) + "]");
}

std::int64_t l1(const LatticePoint& p) { return std::abs(p.x1) + std::abs(p.x2); }

}  // namespace

// --- hitting before exit -----------------------------------------------------

bool hits_before_exit_stepwise(std::int64_t n, const LatticePoint& x, std::uint64_t seed) {
  StepStream steps(seed);
  const std::int64_t n2 = n * n;
  LatticePoint pos = x;
  for (;;) {
    pos += step_vector(steps.next());
    if (pos.is_origin()) return true;
    if (pos.norm2() >= n2) return false;
  }
}

bool hits_before_exit_squares(std::int64_t n, const LatticePoint& x, std::uint64_t seed) {
  const auto& sampler = default_square_sampler();
  SplitMix64 rng(seed);
  const std::int64_t n2 = n * n;
  LatticePoint pos = x;
  for (;;) {
    const std::int64_t a = std::abs(pos.x1), b = std::abs(pos.x2);
    // the open square of half-width m must miss the origin and stay in the disc
    const auto cap = static_cast<std::uint64_t>(std::min(std::max(a, b), sampler.max_half_width()));
    auto m = static_cast<std::int64_t>(std::bit_floor(cap));
    while (m > 1 && (a + m - 1) * (a + m - 1) + (b + m - 1) * (b + m - 1) >= n2) m /= 2;
    pos += sampler.sample(m, rng);
    if (pos.is_origin()) return true;
    if (pos.norm2() >= n2) return false;
  }
}

EstimatorReport hitting_prob_mc(std::int64_t n, const LatticePoint& x, std::uint64_t samples,
                                std::uint64_t seed, const Execution& exec) {
  if (x.is_origin()) throw std::invalid_argument("start at origin");
  if (n < 1 || x.norm2() >= n * n) throw std::invalid_argument("start outside the disc (|x| >= n)");
  const auto outcomes = collect_samples<std::uint8_t>(samples, exec, [&](std::size_t i) {
    return static_cast<std::uint8_t>(hits_before_exit_squares(n, x, derive_seed(seed, streams::kSquareWalk, i)));
  });
  return bernoulli(outcomes);
}

double fit_lawler_constant(std::span<const LawlerPoint> points) {
  double c = 0.0;
  for (const auto& p : points) {
    if (p.start.is_origin() || p.start.norm2() >= p.radius * p.radius)
      throw std::invalid_argument("bound fit point requires 0 < |x| < n");
    const double big_l = std::log2(static_cast<double>(p.radius));
    const double small_l = 0.5 * std::log2(static_cast<double>(p.start.norm2()));
    c = std::max(c, std::abs(p.exact * big_l - (big_l - small_l)));
  }
  return c;
}

double fit_lawler_constant(std::span<const std::int64_t> radii, std::span<const LatticePoint> starts) {
  std::vector<LawlerPoint> points;
  for (auto n : radii) {
    for (const auto& x : starts)
      if (x.is_origin() || x.norm2() >= n * n)
        throw std::invalid_argument("bound fit point requires 0 < |x| < n");
    const auto field = solve_hitting_field(n);
    for (const auto& x : starts) points.push_back({n, x, field.at(x)});
  }
  return fit_lawler_constant(points);
}

// --- single and coupled walks in a schedule window --------------------------

EstimatorReport estimate_return_prob(const Schedule& sched, int k, const LatticePoint& x,
                                     std::uint64_t samples, std::uint64_t seed, const Execution& exec) {
  require_level(sched, k);
  if (x.is_origin()) throw std::invalid_argument("start at origin: return is certain at s_{k-1}");
  const std::uint64_t len = sched.stop(k) - sched.stop(k - 1);
  if (static_cast<std::uint64_t>(l1(x)) > len) {
    Accumulator acc;
    acc.count = samples;
    return EstimatorReport::from(acc);
  }
  const auto outcomes = collect_samples<std::uint8_t>(samples, exec, [&](std::size_t i) -> std::uint8_t {
    StepStream steps(derive_seed(seed, streams::kWalk, i));
    LatticePoint pos = x;
    for (std::uint64_t n = 0; n < len; ++n) {
      pos += step_vector(steps.next());
      if (pos.is_origin()) return 1;
    }
    return 0;
  });
  return bernoulli(outcomes);
}

EstimatorReport estimate_g_event(const Schedule& sched, int k, const LatticePoint& x,
                                 std::uint64_t samples, std::uint64_t seed, const Execution& exec) {
  require_level(sched, k);
  const std::uint64_t len = sched.stop(k) - sched.stop(k - 1);
  const auto outcomes = collect_samples<std::uint8_t>(samples, exec, [&](std::size_t i) -> std::uint8_t {
    StepStream steps(derive_seed(seed, streams::kWalk, i));
    LatticePoint pos = x;
    for (std::uint64_t n = 0; n < len; ++n) pos += step_vector(steps.next());
    return sched.in_annulus(k, pos) ? 0 : 1;
  });
  return bernoulli(outcomes);
}

EstimatorReport estimate_joint_return(const Schedule& sched, int k, const LatticePoint& x,
                                      const LatticePoint& y, double t, std::uint64_t samples,
                                      std::uint64_t seed, const Execution& exec) {
  require_level(sched, k);
  if (x.is_origin() || y.is_origin()) throw std::invalid_argument("start at origin");
  if (!(t >= 0.0)) throw std::invalid_argument("t must be non-negative");
  const std::uint64_t len = sched.stop(k) - sched.stop(k - 1);
  const auto outcomes = collect_samples<std::uint8_t>(samples, exec, [&](std::size_t i) -> std::uint8_t {
    CoupledStepStream steps(derive_seed(seed, streams::kWalk, i), derive_seed(seed, streams::kRefresh, i), t);
    LatticePoint p0 = x, pt = y;
    bool hit0 = false, hitt = false;
    for (std::uint64_t n = 0; n < len; ++n) {
      const auto d = steps.next();
      p0 += step_vector(d.at_zero);
      pt += step_vector(d.at_t);
      hit0 = hit0 || p0.is_origin();
      hitt = hitt || pt.is_origin();
      if (hit0 && hitt) return 1;
    }
    return 0;
  });
  return bernoulli(outcomes);
}

// --- the level events E_M ----------------------------------------------------

int single_levels(const Schedule& sched, std::uint64_t seed, std::uint64_t sample) {
  StepStream steps(derive_seed(seed, streams::kWalk, sample));
  LatticePoint pos{};
  std::uint64_t n = 0;
  for (int k = 1; k <= sched.levels(); ++k) {
    for (const std::uint64_t end = sched.stop(k); n < end; ++n) {
      pos += step_vector(steps.next());
      if (pos.is_origin()) return k - 1;
    }
    if (!sched.in_annulus(k, pos)) return k - 1;
  }
  return sched.levels();
}

CoupledLevels coupled_levels(const Schedule& sched, double t, std::uint64_t seed, std::uint64_t sample) {
  CoupledStepStream steps(derive_seed(seed, streams::kWalk, sample),
                          derive_seed(seed, streams::kRefresh, sample), t);
  LatticePoint p0{}, pt{};
  bool alive0 = true, alivet = true;
  CoupledLevels out;
  std::uint64_t n = 0;
  for (int k = 1; k <= sched.levels(); ++k) {
    for (const std::uint64_t end = sched.stop(k); n < end; ++n) {
      const auto d = steps.next();
      p0 += step_vector(d.at_zero);
      pt += step_vector(d.at_t);
      alive0 = alive0 && !p0.is_origin();
      alivet = alivet && !pt.is_origin();
      if (!alive0 && !alivet) return out;
    }
    alive0 = alive0 && sched.in_annulus(k, p0);
    alivet = alivet && sched.in_annulus(k, pt);
    if (alive0) out.at_zero = k;
    if (alivet) out.at_t = k;
    if (!alive0 && !alivet) return out;
  }
  return out;
}

EstimatorReport estimate_E_M_prob(const Schedule& sched, std::uint64_t samples, std::uint64_t seed,
                                  const Execution& exec) {
  const int m = sched.levels();
  const auto outcomes = collect_samples<std::uint8_t>(samples, exec, [&](std::size_t i) {
    return static_cast<std::uint8_t>(single_levels(sched, seed, i) >= m);
  });
  return bernoulli(outcomes);
}

RatioReport estimate_f(const Schedule& sched, double t, std::uint64_t samples, std::uint64_t seed,
                       const Execution& exec) {
  if (!(t >= 0.0)) throw std::invalid_argument("t must be non-negative");
  const int m = sched.levels();
  const auto outcomes = collect_samples<std::uint8_t>(samples, exec, [&](std::size_t i) {
    const auto lv = coupled_levels(sched, t, seed, i);
    return static_cast<std::uint8_t>(std::min(lv.at_zero, lv.at_t) >= m);
  });
  RatioReport out;
  out.numerator = bernoulli(outcomes);
  out.denominator = estimate_E_M_prob(sched, samples, seed, exec);
  const double p1 = out.numerator.mean;
  const double p2 = out.denominator.mean;
  out.defined = p2 > 5.0 * out.denominator.stderr_ && p2 > 0.0;
  if (!out.defined) return out;
  out.ratio = p1 / (p2 * p2);
  const double n = static_cast<double>(samples);
  const double g1 = 1.0 / (p2 * p2);
  const double g2 = -2.0 * p1 / (p2 * p2 * p2);
  // numerator event is contained in the denominator event on every sample
  const double v1 = p1 * (1.0 - p1), v2 = p2 * (1.0 - p2), c12 = p1 * (1.0 - p2);
  const double var = (g1 * g1 * v1 + g2 * g2 * v2 + 2.0 * g1 * g2 * c12) / n;
  out.stderr_ = std::sqrt(std::max(var, 0.0));
  return out;
}

SummaryTable check_summary(const Schedule& sched, double t, std::uint64_t samples, std::uint64_t seed,
                           const Execution& exec, std::uint64_t min_conditioning) {
  if (!(t >= 0.0)) throw std::invalid_argument("t must be non-negative");
  const int m = sched.levels();
  const auto levels = collect_samples<CoupledLevels>(samples, exec, [&](std::size_t i) {
    return coupled_levels(sched, t, seed, i);
  });
  std::vector<std::uint64_t> single(static_cast<std::size_t>(m) + 1, 0), joint(single);
  for (const auto& lv : levels) {
    for (int k = 0; k <= lv.at_zero; ++k) ++single[static_cast<std::size_t>(k)];
    for (int k = 0; k <= std::min(lv.at_zero, lv.at_t); ++k) ++joint[static_cast<std::size_t>(k)];
  }

  SummaryTable table;
  table.t = t;
  table.level_K = t > 0.0 ? level_for_time(t) : INT_MAX;
  auto conditional = [](std::uint64_t hits, std::uint64_t trials) {
    Accumulator acc;
    acc.count = trials;
    acc.sum = acc.sum_sq = static_cast<double>(hits);
    return EstimatorReport::from(acc);
  };
  for (int k = 1; k <= m; ++k) {
    const auto kk = static_cast<std::size_t>(k);
    SummaryRow row;
    row.k = k;
    row.cond_single_n = single[kk - 1];
    row.cond_joint_n = joint[kk - 1];
    row.single = conditional(single[kk], single[kk - 1]);
    row.joint = conditional(joint[kk], joint[kk - 1]);
    row.insufficient = row.cond_single_n < min_conditioning || row.cond_joint_n < min_conditioning;
    row.joint_in_range = k > table.level_K;
    if (k >= 2) {
      const double kd = k;
      const double scale = kd * kd / std::log2(kd);
      const double p = row.single.mean;
      row.single_bound_c = std::max(0.0, (1.0 - 4.0 / kd - p * p) * scale);
      row.joint_bound_c = std::max(0.0, (row.joint.mean - 1.0 + 4.0 / kd) * scale);
      if (!row.insufficient) {
        table.fitted_c_single = std::max(table.fitted_c_single, row.single_bound_c);
        if (row.joint_in_range) table.fitted_c_joint = std::max(table.fitted_c_joint, row.joint_bound_c);
      }
    }
    table.rows.push_back(row);
  }
  return table;
}

double second_moment_lower_bound(std::span<const double> l_samples) {
  if (l_samples.empty()) throw std::invalid_argument("second moment bound needs at least one sample");
  double sum = 0.0, sum_sq = 0.0;
  for (double v : l_samples) {
    if (v < 0.0) throw std::invalid_argument("L samples must be non-negative");
    sum += v;
    sum_sq += v * v;
  }
  if (sum_sq == 0.0) return 0.0;
  const double n = static_cast<double>(l_samples.size());
  return (sum / n) * (sum / n) / (sum_sq / n);
}

LeaveReport check_leave(std::uint64_t n, double m, std::uint64_t samples, std::uint64_t seed,
                        const LatticePoint& x, double c, const Execution& exec) {
  if (!(m > 0.0) || !(m < std::sqrt(static_cast<double>(n))))
    throw std::invalid_argument("check_leave requires 0 < m < sqrt(n)");
  const double nd = static_cast<double>(n);
  const double far2 = m * m * nd;
  const double close2 = nd / (m * m);
  struct Pair {
    std::uint8_t far, close;
  };
  const auto outcomes = collect_samples<Pair>(samples, exec, [&](std::size_t i) {
    StepStream steps(derive_seed(seed, streams::kWalk, i));
    LatticePoint pos{};
    bool far = false;
    for (std::uint64_t j = 1; j <= n; ++j) {
      pos += step_vector(steps.next());
      if (j < n && static_cast<double>(pos.norm2()) > far2) far = true;
    }
    const bool close = static_cast<double>((pos - x).norm2()) < close2;
    return Pair{static_cast<std::uint8_t>(far), static_cast<std::uint8_t>(close)};
  });
  Accumulator a, b;
  for (const auto& p : outcomes) {
    a.add(p.far);
    b.add(p.close);
  }
  LeaveReport r{EstimatorReport::from(a), EstimatorReport::from(b), c / (m * m), false, false};
  r.far_within = r.far.mean <= r.bound;
  r.close_within = r.close.mean <= r.bound;
  return r;
}

}  // namespace dynwalk
