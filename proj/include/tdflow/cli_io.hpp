#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "tdflow/optimizer.hpp"
#include "tdflow/problems.hpp"

namespace tdflow {

struct EmitFlags {
  bool energy = true;
  bool velocity = true;
  /// Write chi_XXXX.pgm every k iterations (and for the initial and final
  /// state); 0 writes the final state only.
  int fields_every = 10;
  bool final_only = false;  // overrides fields_every
};

struct RunConfig {
  Benchmark benchmark;
  DomainSpec grid;
  OptimizerConfig optimizer;  // grid defaults resolved
  InitialSpec initial;
  std::filesystem::path output_dir = "out";
  EmitFlags emit;
};

/// Parses the `key = value` format described in the README. Blank lines and
/// `#` comments are ignored. Unknown or repeated keys and bad values raise
/// ConfigError naming the line and key.
RunConfig parse_config(const std::string& text);
RunConfig load_config(const std::filesystem::path& path);

/// Formats a double with 17 significant digits.
std::string format_double(double value);

void write_pgm(const std::filesystem::path& path, const IndicatorField& chi);
void write_velocity_csv(const std::filesystem::path& path, const FlowSolution& flow);
std::string energy_csv(const std::vector<EnergyRecord>& rows);

/// Writes everything under config.output_dir. Construction performs the
/// preflight (directory creation and a probe write) and throws IoError when
/// the directory is unusable. All files are written to a temporary name and
/// renamed into place.
class OutputWriter {
 public:
  explicit OutputWriter(RunConfig config);

  /// Iteration 0 is the initial state.
  void iteration(int iteration, const EnergyRecord& record, const IndicatorField& chi);
  void finish(const OptimizationResult& result);

  const std::filesystem::path& directory() const { return config_.output_dir; }

 private:
  void write_atomic(const std::string& name, const std::string& content) const;
  void write_chi(int iteration, const IndicatorField& chi) const;

  RunConfig config_;
  std::vector<EnergyRecord> rows_;
};

/// Builds the problem and initial indicator from a config and runs the
/// optimizer. A non-null writer receives every iteration.
OptimizationResult execute(const RunConfig& config, OutputWriter* writer = nullptr);

}  // namespace tdflow
