#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "dynwalk/config.hpp"

namespace dynwalk {

inline constexpr int kExitOk = 0;
inline constexpr int kExitRuntime = 1;
inline constexpr int kExitConfig = 2;

// 64-bit FNV-1a, used for the per-output checksums in run manifests.
std::uint64_t fnv1a64(std::string_view bytes);

// Shortest round-trip text for a double ("%.17g").
std::string format_double(double v);

// Minimal RFC 4180 table: fields containing ',', '"' or newlines are quoted.
class CsvTable {
 public:
  explicit CsvTable(std::vector<std::string> header);
  const std::vector<std::string>& header() const { return header_; }
  void add(std::vector<std::string> row);
  std::size_t rows() const { return rows_.size(); }
  std::string str() const;

 private:
  std::vector<std::string> header_;
  std::vector<std::vector<std::string>> rows_;
};

// Header row of each CSV a subcommand writes, keyed by file name.
std::vector<std::pair<std::string, std::vector<std::string>>> output_schema(const std::string& command);

// Runs one validated experiment, writing CSV files and manifest.json into
// cfg.out. Returns kExitOk, kExitRuntime or kExitConfig; on a config error
// nothing is written.
int run(const ExperimentConfig& cfg, std::ostream& log, std::ostream& err);

// Command-line front end: `<command> [--flag value ...]`.
int cli_main(int argc, char** argv);

}  // namespace dynwalk
