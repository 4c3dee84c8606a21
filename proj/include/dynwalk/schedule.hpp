#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "dynwalk/lattice.hpp"

namespace dynwalk {

// Stopping times s_0 = 1 < s_1 < ... < s_M and, per level k = 1..M, the
// closed annulus inner(k) <= |x| <= outer(k) that S_{s_k} must land in.
class Schedule {
 public:
  Schedule() : stops_{1} {}
  Schedule(std::vector<std::uint64_t> stops, std::vector<double> inner, std::vector<double> outer);

  int levels() const { return static_cast<int>(stops_.size()) - 1; }
  std::uint64_t stop(int k) const { return stops_.at(static_cast<std::size_t>(k)); }
  double inner(int k) const { return inner_.at(static_cast<std::size_t>(k - 1)); }
  double outer(int k) const { return outer_.at(static_cast<std::size_t>(k - 1)); }
  const std::vector<std::uint64_t>& stops() const { return stops_; }
  const std::vector<double>& inner_radii() const { return inner_; }
  const std::vector<double>& outer_radii() const { return outer_; }

  // Highest step index any level-<=M event looks at.
  std::uint64_t horizon() const { return stops_.back(); }

  bool in_annulus(int k, const LatticePoint& x) const;

  // First M levels only.
  Schedule truncated(int m) const;

  friend bool operator==(const Schedule&, const Schedule&) = default;

 private:
  std::vector<std::uint64_t> stops_;
  std::vector<double> inner_;
  std::vector<double> outer_;
};

// s_k = k^10 2^{2k^2}, annulus 2^{k^2} <= |x| <= k^10 2^{k^2}.
// Throws std::overflow_error once s_M no longer fits in 64 bits (M >= 5).
Schedule paper_schedule(int m);

// s_k = ceil(rho^k), annulus ceil(sqrt(s_k)/lambda) .. ceil(sqrt(s_k) lambda).
Schedule desk_schedule(int m, double rho, double lambda);

// Level index K(t): ceil(|log2 t|) for t < 1 and 0 for t >= 1.
int level_for_time(double t);

}  // namespace dynwalk
