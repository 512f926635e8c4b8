#include "lmqf/cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <memory>
#include <sstream>
#include <stdexcept>

#include "lmqf/error.hpp"
#include "lmqf/linproc.hpp"
#include "lmqf/montecarlo.hpp"
#include "lmqf/parallel.hpp"
#include "lmqf/truth.hpp"

namespace lmqf::cli {

namespace {

using nlohmann::json;

// Options each subcommand accepts, in emission order.
const std::map<std::string, std::vector<std::string>>& command_keys() {
  static const std::map<std::string, std::vector<std::string>> keys = {
      {"simulate", {"alpha", "beta", "c0", "truncation-m", "innovation", "n", "seed", "output"}},
      {"estimate", {"input", "kernel", "bandwidth", "workers"}},
      {"truth", {"alpha", "beta", "c0", "truncation-m"}},
      {"table",
       {"alpha", "beta", "c0", "truncation-m", "innovation", "n", "reps", "seed", "workers", "kernel", "bandwidth",
        "output"}},
      {"limit-check",
       {"alpha", "beta", "c0", "truncation-m", "n", "reps", "seed", "workers", "kernel", "bandwidth"}},
      {"lemma-check", {"alpha", "innovation", "lambdas", "samples", "seed", "output"}},
  };
  return keys;
}

std::string format_exact(double value) {
  char buffer[64];
  std::snprintf(buffer, sizeof buffer, "%.17g", value);
  return buffer;
}

double parse_double(const std::string& text, const std::string& what) {
  double value = 0.0;
  const char* begin = text.data();
  const char* end = begin + text.size();
  while (begin < end && std::isspace(static_cast<unsigned char>(*begin))) ++begin;
  while (end > begin && std::isspace(static_cast<unsigned char>(end[-1]))) --end;
  const auto [ptr, ec] = std::from_chars(begin, end, value);
  require(ec == std::errc() && ptr == end && begin != end, "cannot parse " + what + " from '" + text + "'");
  return value;
}

std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> parts;
  std::string part;
  std::istringstream in(text);
  while (std::getline(in, part, sep)) parts.push_back(part);
  if (!text.empty() && text.back() == sep) parts.emplace_back();
  return parts;
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

CLI::Option* tag(CLI::Option* opt) { return opt->multi_option_policy(CLI::MultiOptionPolicy::TakeLast); }

void add_option(CLI::App* sub, const std::string& key, RunConfig& cfg) {
  if (key == "alpha") tag(sub->add_option("--alpha", cfg.alpha, "stability index of the innovations"));
  if (key == "beta") tag(sub->add_option("--beta", cfg.beta, "coefficient decay exponent, a_i = c0 i^-beta"));
  if (key == "c0") tag(sub->add_option("--c0", cfg.c0, "coefficient scale"));
  if (key == "truncation-m")
    tag(sub->add_option("--truncation-m,--truncated-M", cfg.truncation_m, "moving-average truncation depth M"));
  if (key == "innovation")
    tag(sub->add_option("--innovation", cfg.innovation, "stable | pareto:P_PLUS[:X_M]"));
  if (key == "n") tag(sub->add_option("--n", cfg.n, "path length(s), comma separated"));
  if (key == "reps") tag(sub->add_option("--reps", cfg.reps, "Monte Carlo replications N"));
  if (key == "seed") tag(sub->add_option("--seed", cfg.seed, "base seed"));
  if (key == "workers") tag(sub->add_option("--workers", cfg.workers, "worker threads (default LMQF_WORKERS)"));
  if (key == "kernel") tag(sub->add_option("--kernel", cfg.kernel, "gaussian | boxcar:W | table:FILE"));
  if (key == "bandwidth") tag(sub->add_option("--bandwidth", cfg.bandwidth, "paper | power:C | fixed:H"));
  if (key == "lambdas") tag(sub->add_option("--lambdas", cfg.lambdas, "lambda grid, comma separated"));
  if (key == "samples") tag(sub->add_option("--samples", cfg.samples, "innovation draws"));
  if (key == "input") tag(sub->add_option("--input", cfg.input, "one-column path CSV")->required());
  if (key == "output") tag(sub->add_option("--output", cfg.output, "output file (default stdout)"));
}

std::unique_ptr<CLI::App> make_app(RunConfig& cfg) {
  auto app = std::make_unique<CLI::App>("Long-memory heavy-tailed linear processes: simulation and quadratic "
                                        "functional / Renyi entropy estimation",
                                        "lmqf");
  app->require_subcommand(1);
  const std::map<std::string, std::string> descriptions = {
      {"simulate", "emit a simulated path as CSV"},
      {"estimate", "estimate int f^2 and the Renyi entropy from a path CSV"},
      {"truth", "true int f^2 and limit-theorem case"},
      {"table", "Monte Carlo summary table (CSV)"},
      {"limit-check", "scaled deviations and tail index (JSON)"},
      {"lemma-check", "second-moment characteristic function check (CSV)"},
  };
  for (const auto& [name, keys] : command_keys()) {
    CLI::App* sub = app->add_subcommand(name, descriptions.at(name));
    for (const auto& key : keys) add_option(sub, key, cfg);
    sub->add_option("--config", "key=value file supplying defaults");
    // Stripped by run_cli before parsing; registered for the help text.
    sub->add_flag("--print-config", "print the resolved key=value configuration and exit");
    sub->callback([&cfg, name = name] { cfg.command = name; });
  }
  return app;
}

// Splices key=value lines from --config in front of the command-line flags.
std::vector<std::string> expand_config(const std::vector<std::string>& args) {
  std::string config_path;
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (args[i] == "--config" && i + 1 < args.size()) config_path = args[i + 1];
    if (args[i].rfind("--config=", 0) == 0) config_path = args[i].substr(9);
  }
  if (config_path.empty() || args.empty()) return args;
  std::ifstream in(config_path);
  require(static_cast<bool>(in), "cannot open config file " + config_path);
  std::vector<std::string> expanded = {args.front()};
  std::string line;
  while (std::getline(in, line)) {
    line = trim(line);
    if (line.empty() || line.front() == '#') continue;
    const auto eq = line.find('=');
    require(eq != std::string::npos, "config line without '=': " + line);
    const std::string key = trim(line.substr(0, eq));
    require(!key.empty() && key != "config", "invalid config key in line: " + line);
    expanded.push_back("--" + key);
    expanded.push_back(trim(line.substr(eq + 1)));
  }
  expanded.insert(expanded.end(), args.begin() + 1, args.end());
  return expanded;
}

std::string config_value(const RunConfig& cfg, const std::string& key) {
  if (key == "alpha") return format_exact(cfg.alpha);
  if (key == "beta") return format_exact(cfg.beta);
  if (key == "c0") return format_exact(cfg.c0);
  if (key == "truncation-m") return std::to_string(cfg.truncation_m);
  if (key == "innovation") return cfg.innovation;
  if (key == "n") return cfg.n;
  if (key == "reps") return std::to_string(cfg.reps);
  if (key == "seed") return std::to_string(cfg.seed);
  if (key == "workers") return std::to_string(cfg.workers);
  if (key == "kernel") return cfg.kernel;
  if (key == "bandwidth") return cfg.bandwidth;
  if (key == "lambdas") return cfg.lambdas;
  if (key == "samples") return std::to_string(cfg.samples);
  if (key == "input") return cfg.input;
  if (key == "output") return cfg.output;
  return "";
}

json number_or_null(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

// Output goes to --output when given, else to `out`.
class Sink {
 public:
  Sink(const std::string& path, std::ostream& fallback) : stream_(&fallback) {
    if (!path.empty()) {
      file_.open(path);
      if (!file_) throw std::runtime_error("cannot open output file " + path);
      stream_ = &file_;
    }
  }
  std::ostream& get() { return *stream_; }

 private:
  std::ofstream file_;
  std::ostream* stream_;
};

EstimatorConfig estimator_config(const RunConfig& cfg) {
  EstimatorConfig config{parse_kernel(cfg.kernel), parse_bandwidth(cfg.bandwidth)};
  config.validate();
  return config;
}

ExperimentSpec experiment_spec(const RunConfig& cfg, bool long_memory) {
  ExperimentSpec spec;
  spec.innovation = parse_innovation(cfg.innovation, cfg.alpha);
  spec.beta = cfg.beta;
  spec.c0 = cfg.c0;
  spec.n_list = parse_size_list(cfg.n);
  spec.replications = cfg.reps;
  spec.base_seed = cfg.seed;
  spec.estimator = estimator_config(cfg);
  spec.truncation_m = cfg.truncation_m;
  spec.require_long_memory = long_memory;
  spec.validate();
  return spec;
}

int cmd_simulate(const RunConfig& cfg, std::ostream& out) {
  ProcessConfig process;
  process.innovation = parse_innovation(cfg.innovation, cfg.alpha);
  process.coeffs = CoefficientSpec{cfg.c0, cfg.beta, cfg.truncation_m};
  process.coeffs.validate();
  const auto lengths = parse_size_list(cfg.n);
  require(lengths.size() == 1, "simulate takes a single --n");
  process.n = lengths.front();
  process.base_seed = cfg.seed;
  process.validate();
  RandomStream rng(cfg.seed, derive_stream_id(cfg.seed, process.n, 0));
  const auto path = simulate_path(process, rng);
  Sink sink(cfg.output, out);
  sink.get() << "x\n";
  for (double x : path) sink.get() << format_exact(x) << '\n';
  return 0;
}

int cmd_estimate(const RunConfig& cfg, std::ostream& out) {
  const EstimatorConfig config = estimator_config(cfg);
  const auto path = read_path_csv(cfg.input);
  require(path.size() >= 2, "path file needs at least 2 observations");
  const double t_n = estimate_qf(path, config, std::max(1u, cfg.workers));
  json result = {{"t_n", t_n}, {"n", path.size()}, {"h_n", bandwidth(config, path.size())}};
  result["renyi"] = t_n > 0.0 ? json(renyi_entropy(t_n)) : json(nullptr);
  out << result.dump() << '\n';
  return 0;
}

int cmd_truth(const RunConfig& cfg, std::ostream& out) {
  const CoefficientSpec coeffs{cfg.c0, cfg.beta, cfg.truncation_m};
  coeffs.validate();
  require(cfg.alpha > 0.0 && cfg.alpha < 2.0, "alpha must lie in (0, 2)");
  const double s = alpha_norm_sum(coeffs, cfg.alpha);
  const double s_m = truncated_alpha_norm_sum(coeffs, cfg.alpha);
  json result;
  result["alpha"] = cfg.alpha;
  result["beta"] = cfg.beta;
  result["c0"] = cfg.c0;
  result["truncation_m"] = cfg.truncation_m;
  result["regime"] = std::string(to_string(regime(cfg.alpha, cfg.beta)));
  result["alpha_norm_sum"] = s;
  result["qf_infinite"] = true_qf_closed(cfg.alpha, s);
  result["qf_truncated"] = true_qf_closed(cfg.alpha, s_m);
  result["renyi_infinite"] = renyi_entropy(true_qf_closed(cfg.alpha, s));
  try {
    const LimitCase limit = classify_limit(cfg.alpha, cfg.beta);
    result["case"] = std::string(to_string(limit.case_id));
    result["rate_exponent"] = limit.rate_exponent;
    result["limit_index"] = limit.limit_index;
  } catch (const NotCoveredError&) {
    result["case"] = nullptr;
    result["rate_exponent"] = nullptr;
    result["limit_index"] = nullptr;
  }
  out << result.dump() << '\n';
  return 0;
}

int cmd_table(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  const ExperimentSpec spec = experiment_spec(cfg, false);
  const ExperimentResult result = run_experiment(spec, std::max(1u, cfg.workers));
  for (const auto& warning : result.warnings) err << json{{"warning", warning}}.dump() << '\n';
  Sink sink(cfg.output, out);
  write_table_csv(sink.get(), spec, result.rows);
  return 0;
}

int cmd_limit_check(const RunConfig& cfg, std::ostream& out) {
  RunConfig stable_cfg = cfg;
  stable_cfg.innovation = "stable";
  const ExperimentSpec spec = experiment_spec(stable_cfg, true);
  const LimitCase limit = classify_limit(spec.alpha(), spec.beta);
  const ExperimentResult result = run_experiment(spec, std::max(1u, cfg.workers));
  json rows = json::array();
  for (const auto& row : result.rows) {
    const auto scaled = scaled_deviations(row, limit);
    json entry = {{"n", row.n}, {"replications", row.replications}, {"h_n", row.h_n}, {"mean", row.mean}};
    entry["tail_index"] = scaled.size() >= kMinTailIndexSamples ? number_or_null(tail_index(scaled)) : json(nullptr);
    rows.push_back(entry);
  }
  json report;
  report["alpha"] = spec.alpha();
  report["beta"] = spec.beta;
  report["case"] = std::string(to_string(limit.case_id));
  report["rate_exponent"] = limit.rate_exponent;
  report["limit_index"] = limit.limit_index;
  report["rows"] = rows;
  if (const auto exponent = power_exponent(spec.estimator.bandwidth_rule)) {
    const auto check = validate_bandwidth(spec.alpha(), spec.beta, spec.estimator.bandwidth_rule,
                                          BandwidthPurpose::LimitTheorem);
    report["bandwidth_limit_theorem"] = check.ok ? "ok" : "violated: " + check.condition;
  }
  if (limit.case_id != LimitCaseId::Case1) {
    const CoefficientSpec coeffs{spec.c0, spec.beta, spec.truncation_m};
    report["sigma_tilde"] = sigma_tilde(spec.alpha(), spec.beta, spec.c0);
    report["c_f"] = c_f_constants(spec.alpha(), spec.beta, alpha_norm_sum(coeffs, spec.alpha()), spec.c0).plus;
  }
  out << report.dump() << '\n';
  return 0;
}

int cmd_lemma_check(const RunConfig& cfg, std::ostream& out) {
  const InnovationSpec innovation = parse_innovation(cfg.innovation, cfg.alpha);
  const auto grid = parse_double_list(cfg.lambdas);
  const auto rows = lemma1_check(innovation, grid, cfg.samples, cfg.seed);
  Sink sink(cfg.output, out);
  sink.get() << "lambda,empirical,analytic,mc_se,bound_ratio\n";
  for (const auto& row : rows) {
    sink.get() << format_number(row.lambda) << ',' << format_number(row.empirical) << ','
               << (row.analytic ? format_number(*row.analytic) : std::string()) << ',' << format_number(row.mc_se)
               << ',' << format_number(row.bound_ratio) << '\n';
  }
  return 0;
}

}  // namespace

InnovationSpec parse_innovation(const std::string& text, double alpha) {
  const auto parts = split(trim(text), ':');
  require(!parts.empty(), "empty innovation spec");
  InnovationSpec spec;
  if (parts[0] == "stable" && parts.size() == 1) {
    spec = StandardSymmetricStable{alpha};
  } else if (parts[0] == "pareto" && parts.size() >= 1 && parts.size() <= 3) {
    TwoSidedPareto pareto{alpha, 0.5, 1.0};
    if (parts.size() >= 2) pareto.p_plus = parse_double(parts[1], "p_plus");
    if (parts.size() == 3) pareto.x_m = parse_double(parts[2], "x_m");
    spec = pareto;
  } else {
    throw ValidationError("unknown innovation '" + text + "' (expected stable | pareto:P_PLUS[:X_M])");
  }
  validate(spec);
  return spec;
}

KernelSpec parse_kernel(const std::string& text) {
  const std::string t = trim(text);
  if (t == "gaussian") return GaussianKernel{};
  if (t.rfind("boxcar:", 0) == 0) {
    const double w = parse_double(t.substr(7), "boxcar half width");
    require(w > 0.0, "boxcar half width must be positive");
    return BoxcarKernel{w};
  }
  if (t.rfind("table:", 0) == 0) {
    const std::string path = t.substr(6);
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open kernel table " + path);
    std::vector<std::pair<double, double>> points;
    std::string line;
    while (std::getline(in, line)) {
      line = trim(line);
      if (line.empty() || line.front() == '#') continue;
      const auto fields = split(line, ',');
      require(fields.size() == 2, "kernel table lines need 'u,K(u)': " + line);
      points.emplace_back(parse_double(fields[0], "u"), parse_double(fields[1], "K(u)"));
    }
    return make_table_kernel(std::move(points));
  }
  throw ValidationError("unknown kernel '" + text + "' (expected gaussian | boxcar:W | table:FILE)");
}

BandwidthRule parse_bandwidth(const std::string& text) {
  const std::string t = trim(text);
  if (t == "paper") return PaperDefaultBandwidth{};
  if (t.rfind("power:", 0) == 0) {
    const double c = parse_double(t.substr(6), "bandwidth exponent");
    require(c > 0.0, "bandwidth exponent must be positive");
    return PowerBandwidth{c};
  }
  if (t.rfind("fixed:", 0) == 0) {
    const double h = parse_double(t.substr(6), "fixed bandwidth");
    require(h > 0.0, "fixed bandwidth must be positive");
    return FixedBandwidth{h};
  }
  throw ValidationError("unknown bandwidth '" + text + "' (expected paper | power:C | fixed:H)");
}

std::vector<std::size_t> parse_size_list(const std::string& text) {
  std::vector<std::size_t> values;
  for (const auto& part : split(text, ',')) {
    const std::string p = trim(part);
    std::size_t value = 0;
    const auto [ptr, ec] = std::from_chars(p.data(), p.data() + p.size(), value);
    require(ec == std::errc() && ptr == p.data() + p.size() && !p.empty(), "cannot parse integer list '" + text + "'");
    values.push_back(value);
  }
  require(!values.empty(), "empty integer list");
  return values;
}

std::vector<double> parse_double_list(const std::string& text) {
  std::vector<double> values;
  for (const auto& part : split(text, ',')) values.push_back(parse_double(part, "number list"));
  require(!values.empty(), "empty number list");
  return values;
}

std::vector<double> read_path_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open path file " + path);
  std::vector<double> values;
  std::string line;
  bool first = true;
  while (std::getline(in, line)) {
    line = trim(line);
    if (line.empty()) continue;
    double value = 0.0;
    const auto [ptr, ec] = std::from_chars(line.data(), line.data() + line.size(), value);
    const bool numeric = ec == std::errc() && ptr == line.data() + line.size();
    if (!numeric && first) {
      first = false;
      continue;
    }
    require(numeric, "non-numeric value in path file: '" + line + "'");
    require(std::isfinite(value), "non-finite value in path file");
    values.push_back(value);
    first = false;
  }
  return values;
}

RunConfig parse_run_config(const std::vector<std::string>& args) {
  RunConfig cfg;
  cfg.workers = default_workers();
  auto app = make_app(cfg);
  std::vector<std::string> expanded = expand_config(args);
  std::reverse(expanded.begin(), expanded.end());
  app->parse(expanded);
  return cfg;
}

std::string to_config_text(const RunConfig& cfg) {
  const auto it = command_keys().find(cfg.command);
  require(it != command_keys().end(), "unknown command '" + cfg.command + "'");
  std::string text;
  for (const auto& key : it->second) {
    const std::string value = config_value(cfg, key);
    if (value.empty()) continue;
    text += key + "=" + value + "\n";
  }
  return text;
}

int run_cli(const std::vector<std::string>& raw_args, std::ostream& out, std::ostream& err) {
  std::vector<std::string> args;
  bool print_config = false;
  for (const auto& arg : raw_args) {
    if (arg == "--print-config") {
      print_config = true;
    } else {
      args.push_back(arg);
    }
  }
  RunConfig cfg;
  try {
    cfg = parse_run_config(args);
  } catch (const CLI::CallForHelp&) {
    RunConfig scratch;
    auto app = make_app(scratch);
    out << app->help();
    return 0;
  } catch (const CLI::ParseError& e) {
    err << json{{"error", std::string(e.what())}}.dump() << '\n';
    return 2;
  } catch (const ValidationError& e) {
    err << json{{"error", std::string(e.what())}}.dump() << '\n';
    return 2;
  }
  if (print_config) {
    out << to_config_text(cfg);
    return 0;
  }
  try {
    if (cfg.command == "simulate") return cmd_simulate(cfg, out);
    if (cfg.command == "estimate") return cmd_estimate(cfg, out);
    if (cfg.command == "truth") return cmd_truth(cfg, out);
    if (cfg.command == "table") return cmd_table(cfg, out, err);
    if (cfg.command == "limit-check") return cmd_limit_check(cfg, out);
    if (cfg.command == "lemma-check") return cmd_lemma_check(cfg, out);
    throw ValidationError("unknown command '" + cfg.command + "'");
  } catch (const ValidationError& e) {
    err << json{{"error", std::string(e.what())}}.dump() << '\n';
    return 2;
  } catch (const std::exception& e) {
    err << json{{"error", std::string(e.what())}}.dump() << '\n';
    return 1;
  }
}

}  // namespace lmqf::cli
