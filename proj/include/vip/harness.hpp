#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "vip/solver.hpp"

namespace vip {

enum class Mode { Hpa, ImplicitSweep, RegularizationSweep, Oracle, Validate };

std::string_view to_string(Mode m);

/// ||e(t)|| = coefficient * t^power along the configured direction rule.
struct ImplicitErrorLaw {
  double coefficient = 0.0;
  double power = 2.0;
};

/// One experiment, as described by a single JSON file.
struct ExperimentConfig {
  std::string name;
  ProblemInstance problem;
  Schedules schedules;
  Vector x0;
  std::size_t max_iter = 100000;
  double stop_tol = 1e-8;
  std::optional<double> delta0;
  bool literal_h2 = false;
  /// Absent: use the oracle solution when the problem admits one.
  std::optional<Vector> reference;
  Mode mode = Mode::Hpa;
  std::vector<double> sweep_t;
  ImplicitErrorLaw implicit_error;
  DirectionRule implicit_direction = RandomDirection{0};
  double implicit_tol = 1e-10;
  std::vector<double> sweep_eps;
  bool parallel = true;
  std::string output = "out";
  std::uint64_t seed = 0;

  SolverConfig solver_config() const;
};

/// Overrides applied on top of the file contents.
struct ConfigOverrides {
  std::optional<std::uint64_t> seed;
  std::optional<std::string> output;
};

// Serialization. parse_config validates exactly like load_config.
nlohmann::json to_json(const ExperimentConfig& cfg);
ExperimentConfig parse_config(const nlohmann::json& j, const ConfigOverrides& ov = {});
nlohmann::json to_json(const ConvexSet& s);
ConvexSet parse_set(const nlohmann::json& j);
nlohmann::json to_json(const ConditionReport& r);

/// Reads, parses and validates a config file. Throws ConfigError carrying
/// the line for syntax errors and the violated invariant otherwise.
ExperimentConfig load_config(const std::filesystem::path& path, const ConfigOverrides& ov = {});
void save_config(const ExperimentConfig& cfg, const std::filesystem::path& path);

bool operator==(const ExperimentConfig& a, const ExperimentConfig& b);

/// FNV-1a hash of the canonical problem description and reference point.
std::uint64_t problem_hash(const ExperimentConfig& cfg);

// --- running ---------------------------------------------------------------------

namespace exit_code {
inline constexpr int kConverged = 0;
inline constexpr int kBudget = 2;
inline constexpr int kDiverged = 3;
inline constexpr int kConfigInvalid = 4;
inline constexpr int kNotApplicable = 5;
}  // namespace exit_code

struct SummaryReport {
  std::string mode;
  std::string status;
  std::size_t iterations = 0;
  std::optional<double> final_vip_residual;
  std::optional<double> final_fix_residual;
  std::optional<double> distance_to_oracle;
  ConditionReport conditions;
  double wall_time_s = 0.0;
  std::uint64_t problem_hash = 0;
  Vector final_iterate;
  int exit_code = exit_code::kConverged;
  /// Files written, relative to the output directory.
  std::vector<std::string> files;
};

nlohmann::json to_json(const SummaryReport& s);

struct RunOptions {
  /// Refuse to run when the convergence conditions are not known to hold.
  bool strict = false;
  /// Write nothing to disk when unset.
  bool write_files = true;
};

/// Executes cfg.mode and writes the trace/sweep CSV and summary.json into
/// cfg.output.
SummaryReport run_experiment(const ExperimentConfig& cfg, const RunOptions& opts = {});

/// Trace CSV: a `# problem_hash=<hex>` line, the header
/// n,alpha,beta,err_norm,step_norm,fix_residual,dist_ref and one row per record
/// with 17 significant digits.
void write_trace_csv(const IterationTrace& trace, std::uint64_t hash, std::ostream& out);

// --- comparison ------------------------------------------------------------------

struct TraceSeries {
  std::string label;
  std::uint64_t problem_hash = 0;
  std::vector<std::size_t> n;
  std::vector<double> dist_ref;
};

TraceSeries read_trace_csv(const std::filesystem::path& path);

struct ComparisonTable {
  std::vector<std::string> labels;
  /// Iteration checkpoints (1-2-5 sequence); the last row holds each trace's
  /// terminal record.
  std::vector<std::size_t> checkpoints;
  /// values[row][trace]; NaN where the trace ended before the checkpoint.
  std::vector<std::vector<double>> values;
  std::vector<std::size_t> final_n;
  std::vector<double> final_values;
};

/// Aligns distance-to-reference across traces. Throws Error when the traces
/// were produced for different problems.
ComparisonTable compare_runs(const std::vector<TraceSeries>& traces);
ComparisonTable compare_runs(const std::vector<std::filesystem::path>& paths);

void print_table(const ComparisonTable& t, std::ostream& out);

}  // namespace vip
