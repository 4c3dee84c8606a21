#include "dynwalk/schedule.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace dynwalk {

Schedule::Schedule(std::vector<std::uint64_t> stops, std::vector<double> inner,
                   std::vector<double> outer)
    : stops_(std::move(stops)), inner_(std::move(inner)), outer_(std::move(outer)) {
  if (stops_.empty() || stops_.front() != 1) throw std::invalid_argument("schedule must start at s_0 = 1");
  for (std::size_t k = 1; k < stops_.size(); ++k)
    if (stops_[k] <= stops_[k - 1]) throw std::invalid_argument("stopping times must be strictly increasing");
  const std::size_t m = stops_.size() - 1;
  if (inner_.size() != m || outer_.size() != m)
    throw std::invalid_argument("need one inner and one outer radius per level");
  for (std::size_t k = 0; k < m; ++k)
    if (!(inner_[k] > 0.0) || !(inner_[k] <= outer_[k]))
      throw std::invalid_argument("annulus radii must satisfy 0 < r_k <= R_k");
}

bool Schedule::in_annulus(int k, const LatticePoint& x) const {
  const double r = inner(k);
  const double big_r = outer(k);
  const auto n2 = static_cast<double>(x.norm2());
  return r * r <= n2 && n2 <= big_r * big_r;
}

Schedule Schedule::truncated(int m) const {
  if (m < 0 || m > levels()) throw std::out_of_range("cannot truncate schedule to more levels");
  const auto mm = static_cast<std::size_t>(m);
  return Schedule({stops_.begin(), stops_.begin() + static_cast<std::ptrdiff_t>(mm) + 1},
                  {inner_.begin(), inner_.begin() + static_cast<std::ptrdiff_t>(mm)},
                  {outer_.begin(), outer_.begin() + static_cast<std::ptrdiff_t>(mm)});
}

namespace {

std::uint64_t checked_mul(std::uint64_t a, std::uint64_t b) {
  std::uint64_t r;
  if (__builtin_mul_overflow(a, b, &r))
    throw std::overflow_error("paper schedule exceeds the 64-bit step index range");
  return r;
}

std::uint64_t checked_pow2(std::uint64_t e) {
  if (e >= 64) throw std::overflow_error("paper schedule exceeds the 64-bit step index range");
  return std::uint64_t{1} << e;
}

std::uint64_t pow10_of(std::uint64_t k) {
  std::uint64_t r = 1;
  for (int i = 0; i < 10; ++i) r = checked_mul(r, k);
  return r;
}

}  // namespace

Schedule paper_schedule(int m) {
  if (m < 0) throw std::invalid_argument("level count must be non-negative");
  std::vector<std::uint64_t> s{1};
  std::vector<double> inner, outer;
  for (std::uint64_t k = 1; k <= static_cast<std::uint64_t>(m); ++k) {
    const std::uint64_t k10 = pow10_of(k);
    s.push_back(checked_mul(k10, checked_pow2(2 * k * k)));
    const std::uint64_t r = checked_pow2(k * k);
    inner.push_back(static_cast<double>(r));
    outer.push_back(static_cast<double>(checked_mul(k10, r)));
  }
  return Schedule(std::move(s), std::move(inner), std::move(outer));
}

Schedule desk_schedule(int m, double rho, double lambda) {
  if (m < 0) throw std::invalid_argument("level count must be non-negative");
  if (!(rho >= 2.0)) throw std::invalid_argument("desk schedule growth must be >= 2");
  if (!(lambda >= 1.0)) throw std::invalid_argument("desk schedule width must be >= 1");
  std::vector<std::uint64_t> s{1};
  std::vector<double> inner, outer;
  for (int k = 1; k <= m; ++k) {
    const double v = std::ceil(std::pow(rho, k));
    if (!(v < 0x1.0p63)) throw std::overflow_error("desk schedule exceeds the step index range");
    s.push_back(static_cast<std::uint64_t>(v));
    const double root = std::sqrt(static_cast<double>(s.back()));
    inner.push_back(std::ceil(root / lambda));
    outer.push_back(std::ceil(root * lambda));
  }
  return Schedule(std::move(s), std::move(inner), std::move(outer));
}

int level_for_time(double t) {
  if (!(t > 0.0)) throw std::invalid_argument("K(t) requires t > 0");
  if (t >= 1.0) return 0;
  return static_cast<int>(std::ceil(-std::log2(t)));
}

}  // namespace dynwalk
