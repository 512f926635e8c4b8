#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "lmqf/estimator.hpp"
#include "lmqf/stable.hpp"

namespace lmqf::cli {

/// Every setting a subcommand can take. Text fields keep the flag spelling
/// ("pareto:0.5", "fixed:1", "1000,2000") so a resolved config reparses exactly.
struct RunConfig {
  std::string command;
  double alpha = 1.5;
  double beta = 1.3;
  double c0 = 1.0;
  std::size_t truncation_m = std::size_t{1} << 20;
  std::string innovation = "stable";
  std::string n = "1000";
  std::size_t reps = 1000;
  std::uint64_t seed = 42;
  unsigned workers = 1;
  std::string kernel = "gaussian";
  std::string bandwidth = "paper";
  std::string lambdas = "0.25,1,4";
  std::size_t samples = 1000000;
  std::string input;
  std::string output;

  friend bool operator==(const RunConfig&, const RunConfig&) = default;
};

/// Parses argv (without the program name). A `--config FILE` of key=value lines
/// supplies defaults; flags given on the command line win. Throws CLI::ParseError
/// for malformed command lines and ValidationError for bad config files.
RunConfig parse_run_config(const std::vector<std::string>& args);

/// key=value lines for the options of cfg.command; feeding them back through
/// --config reproduces cfg.
std::string to_config_text(const RunConfig& cfg);

InnovationSpec parse_innovation(const std::string& text, double alpha);
KernelSpec parse_kernel(const std::string& text);
BandwidthRule parse_bandwidth(const std::string& text);
std::vector<std::size_t> parse_size_list(const std::string& text);
std::vector<double> parse_double_list(const std::string& text);

/// Reads a one-column path file; a non-numeric first line is taken as a header.
std::vector<double> read_path_csv(const std::string& path);

/// Runs one subcommand; `--print-config` prints to_config_text of the resolved
/// configuration instead. Exit codes: 0 success, 2 validation or usage error,
/// 1 runtime error. Errors go to `err` as a one-line JSON object {"error": ...}.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace lmqf::cli
