#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

namespace mmh::cli {

/// Parsed command line. Defaults here are the documented defaults of --help.
struct RunConfig {
  std::string subcommand;
  std::string dist;
  std::string dist_x;
  std::string dist_y;
  double p = 1.0;
  double q = 2.0;
  std::string word;
  std::optional<double> r;
  std::uint64_t seed = 0;
  /// 0 picks the subcommand default.
  std::uint64_t samples = 0;
  unsigned threads = 1;
  std::string out;
  std::string format = "json";
  std::string law = "gaussian";
  std::string sets;
  double alpha = 2.0;
  std::string cov;
  bool no_timestamp = false;

  // Subcommand-specific knobs.
  double C = 2.0;
  double B = 1.0;
  double D = 1.0;
  double lambda = 0.5;
  std::optional<double> beta;
  double b = 0.5;
  std::optional<double> target;
  std::optional<double> C_tail;
  double scale = 1.0;
  std::string direction = "all";
  std::vector<std::uint64_t> N = {1, 10, 100, 10000};
  std::vector<double> radii;
  std::uint64_t n_max = 256;
  double rho = 0.5;
  std::size_t t_grid_size = 400;
};

/// Outcome of a subcommand: the report body and the exit code it implies.
struct Outcome {
  nlohmann::json report;
  int exit_code = 0;
};

enum ExitCode { kHolds = 0, kFails = 1, kInconclusive = 2, kUsage = 3 };

/// Runs the command line; writes the report to `out` (or --out) and usage
/// errors to `err`. Returns the process exit code.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

/// Runs an already parsed configuration. Throws mmh::Error subclasses.
Outcome run_subcommand(const RunConfig& config);

/// The report envelope: schema, subcommand, configuration, seed, timestamp.
nlohmann::json envelope(const RunConfig& config, const Outcome& outcome);

/// Human-readable rendering of a report.
std::string render_text(const nlohmann::json& report);

/// Doubles that JSON cannot carry become the strings "inf", "-inf", "nan".
nlohmann::json number(double v);

}  // namespace mmh::cli
