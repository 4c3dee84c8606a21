#pragma once

#include <cstdint>

namespace dynwalk {

// n^{0.5 - 1/(log2 n)^{0.25 + eps}} for n >= 2, and 0 for n in {0, 1}.
double barrier(std::uint64_t n, double eps);

// Escape barrier family: the log-corrected form above or a pure power n^alpha.
struct Barrier {
  enum class Kind { LogCorrected, Power };
  Kind kind = Kind::LogCorrected;
  double parameter = 0.25;  // eps for LogCorrected, alpha for Power

  static Barrier log_corrected(double eps);
  static Barrier power(double alpha);

  double operator()(std::uint64_t n) const;
};

}  // namespace dynwalk
