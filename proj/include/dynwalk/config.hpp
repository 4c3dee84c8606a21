#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "dynwalk/barrier.hpp"
#include "dynwalk/lattice.hpp"
#include "dynwalk/schedule.hpp"

namespace dynwalk {

inline const std::vector<std::string>& known_subcommands() {
  static const std::vector<std::string> names{
      "scan-exc",      "estimate-return", "estimate-joint", "estimate-em",  "estimate-ratio",
      "check-summary", "hitting-prob",    "second-moment",  "escape-rate", "dimension"};
  return names;
}

// One experiment. Keys of the JSON form match the long CLI flags.
struct ExperimentConfig {
  std::string command = "estimate-em";
  // "paper M", "desk M rho lambda" or "explicit s=1,4,16 r=1,2 R=3,5"
  std::string schedule = "desk 3 4 2";
  int M = 0;                   // overrides the level count of paper/desk specs when > 0
  std::uint64_t N = 0;         // realization length; disc radius for hitting-prob; 0 = schedule horizon
  double t_max = 1.0;
  std::optional<std::uint64_t> seed;
  std::uint64_t samples = 10000;  // MC samples, or realizations for scan-based commands
  std::vector<double> t{1.0};
  double eps = 0.25;
  std::string barrier = "log";  // "log" or "power"
  double alpha = 0.25;          // exponent of the power barrier
  int k = 1;
  LatticePoint x{1, 0};
  LatticePoint y{1, 0};
  std::vector<int> depths{1, 2, 3, 4, 5, 6, 7, 8, 9, 10};
  double grid = 0x1.0p-10;
  int workers = 1;
  std::string out = "out";
  bool dump_realization = false;

  friend bool operator==(const ExperimentConfig&, const ExperimentConfig&) = default;
};

// Parses a schedule spec; `m_override` > 0 replaces the level count of paper
// and desk specs. Throws std::invalid_argument on malformed input.
Schedule parse_schedule(const std::string& spec, int m_override = 0);

Barrier make_barrier(const ExperimentConfig& cfg);

// Human-readable violations; empty iff the config can be run.
std::vector<std::string> validate(const ExperimentConfig& cfg);

std::string to_json_string(const ExperimentConfig& cfg);
// Missing keys keep their defaults; unknown keys and type mismatches throw.
ExperimentConfig config_from_json_string(const std::string& text);
ExperimentConfig load_config(const std::string& path);

}  // namespace dynwalk
