#pragma once

// Parameter sweeps over the simulation modules, with CSV and JSON reports.
//
// Config files hold `key = value` lines; lists are comma separated and `#`
// starts a comment. Recognised keys:
//   experiment   dme | wml | lb_ham | lb_lind | qpca | diamond
//   dims, t_grid, n_grid, eps_grid, seeds, bits (qpca register sizes)
//   restarts, output_path

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace sbq {

enum class Experiment { dme, wml, lb_ham, lb_lind, qpca, diamond };

std::string to_string(Experiment e);
/// Accepts both `lb_ham` and `lb-ham` spellings; UsageError otherwise.
Experiment parse_experiment(const std::string& name);

struct SweepConfig {
  Experiment experiment = Experiment::dme;
  std::vector<int> dims;
  std::vector<double> t_grid;
  std::vector<long long> n_grid;
  std::vector<double> eps_grid;
  std::vector<std::uint64_t> seeds;
  std::vector<int> bits;
  int restarts = 32;
  std::string output_path;
  std::uint64_t seed = 0;  // ascent and metadata seed, set from the command line

  /// Required grids non-empty and dimensions within the experiment's cap.
  void validate() const;
};

using ConfigOverrides = std::map<std::string, std::string>;

/// Parses config text; `overrides` are applied on top with the same syntax.
SweepConfig parse_config_text(const std::string& text, const ConfigOverrides& overrides = {});
/// Reads `path` (IoError if unreadable) and parses it.
SweepConfig parse_config_file(const std::string& path, const ConfigOverrides& overrides = {});

struct ReportRow {
  std::string experiment;
  int d = 0;
  double t = 0.0;
  long long n = 0;
  double eps = 0.0;
  double measured = 0.0;
  double bound = 0.0;
  double margin = 0.0;  // bound - measured
  bool pass = false;
  std::uint64_t seed = 0;
  std::string reason;  // why a row failed, empty otherwise
};

struct ReportMetadata {
  std::string version;
  std::uint64_t seed = 0;
  double wall_time_ms = 0.0;
};

struct ExperimentReport {
  std::vector<ReportRow> rows;
  ReportMetadata metadata;

  int failures() const;
};

/// Tolerance on margin below which a row fails.
inline constexpr double kMarginTol = 1e-9;

/// Row with margin and pass filled in from measured and bound.
ReportRow make_row(std::string experiment, int d, double t, long long n, double eps, double measured,
                   double bound, std::uint64_t seed);
/// Row recording a violated hypothesis; numeric fields are NaN.
ReportRow failed_row(std::string experiment, int d, double t, long long n, double eps, std::uint64_t seed,
                     std::string reason);

/// Evaluates every grid cell; rows come back sorted by (experiment, d, t, n, eps, seed).
ExperimentReport run_sweep(const SweepConfig& cfg);

std::string to_csv(const ExperimentReport& report);
std::string to_json(const ExperimentReport& report);
ExperimentReport report_from_json(const std::string& text);

/// Write the report to `path`; IoError naming the path on failure.
void emit_csv(const ExperimentReport& report, const std::string& path);
void emit_json(const ExperimentReport& report, const std::string& path);

const char* library_version();

}  // namespace sbq
