#pragma once

#include <map>
#include <string>
#include <vector>

#include <json.hpp>

namespace ale::cli {

struct GridSpec {
  double t_min = 1e-4;
  double t_max = 1e8;
  int n_points = 2000;
};

struct Tolerances {
  double newton = 1e-11;
  double quadrature = 1e-13;
  double fit = 0.005;
};

struct OutputSpec {
  std::string directory;  // empty: --out flag or ALECALC_OUT or "./out"
  std::vector<std::string> formats = {"json", "csv"};
};

struct JobConfig {
  std::string command;  // calabi poisson ma-solve pipeline quotient
                        // identities norms
  nlohmann::json parameters;
  GridSpec grid;
  Tolerances tolerances;
  OutputSpec output;

  static JobConfig from_json(const nlohmann::json& j);
  nlohmann::json to_json() const;
};

// Every check carries the name of the identity or oracle it came from.
struct CheckRow {
  std::string name;
  double computed = 0.0;
  double target = 0.0;
  double tolerance = 0.0;
  bool pass = false;
};

struct ProfileTable {
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;
};

struct RunReport {
  JobConfig config_echo;
  nlohmann::json results;
  std::vector<CheckRow> checks;
  double wall_time_seconds = 0.0;
  std::map<std::string, ProfileTable> profiles;

  bool all_pass() const;
  // wall time is excluded by default so identical configs serialize to
  // identical bytes
  nlohmann::json to_json(bool include_wall_time = false) const;
};

// Dispatch, write report + profiles into the output directory. Throws on
// malformed configs; check failures are reported, not thrown.
RunReport run(const JobConfig& config);

// CSV emission of the profile tables; returns the file paths written.
std::vector<std::string> emit_plot_series(const RunReport& report,
                                          const std::string& directory);

// Batch file {"jobs": [...]} executed on up to `workers` threads.
std::vector<RunReport> run_batch(const nlohmann::json& batch, int workers,
                                 const std::string& out_override);

}  // namespace ale::cli
