#pragma once

#include <complex>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "lmqf/estimator.hpp"
#include "lmqf/linproc.hpp"
#include "lmqf/truth.hpp"

namespace lmqf {

/// Monte Carlo plan: N replications of T_n for each path length in n_list.
struct ExperimentSpec {
  InnovationSpec innovation = StandardSymmetricStable{1.5};
  double beta = 1.3;
  double c0 = 1.0;
  std::vector<std::size_t> n_list = {1000, 2000, 5000};
  std::size_t replications = 1000;
  std::uint64_t base_seed = 42;
  EstimatorConfig estimator;
  std::size_t truncation_m = kDefaultTruncation;
  /// Table-reproduction runs insist on 1 < alpha beta < 2.
  bool require_long_memory = false;

  double alpha() const { return innovation_alpha(innovation); }
  ProcessConfig process(std::size_t n) const;
  void validate() const;
};

struct ReplicationSummary {
  std::size_t n = 0;
  double h_n = 0.0;
  std::size_t replications = 0;
  double mean = 0.0;
  double var = 0.0;  // divisor N - 1
  double mse = 0.0;  // (1/N) sum (T - truth_infinite)^2
  double truth_infinite = 0.0;
  double truth_truncated = 0.0;
  double tail_index_scaled = std::numeric_limits<double>::quiet_NaN();
  std::vector<double> values;
};

/// Mean, variance and MSE of replicate values against `truth_infinite`.
ReplicationSummary summarize(std::vector<double> values, std::size_t n, double h_n, double truth_infinite,
                             double truth_truncated);

struct ExperimentResult {
  std::vector<ReplicationSummary> rows;
  std::vector<std::string> warnings;
};

/// Replicate r of path length n draws from RandomStream(base_seed, derive_stream_id(base_seed, n, r)),
/// so the output does not depend on the worker count or the scheduling order.
ExperimentResult run_experiment(const ExperimentSpec& spec, unsigned workers = 1);

/// Infinite-sum and truncated-model truths for SaS innovations (NaN for Pareto).
struct TruthPair {
  double infinite = std::numeric_limits<double>::quiet_NaN();
  double truncated = std::numeric_limits<double>::quiet_NaN();
};
TruthPair experiment_truth(const ExperimentSpec& spec);

/// n^{rate_exponent} (T_r - mean) for every replicate.
std::vector<double> scaled_deviations(const ReplicationSummary& summary, const LimitCase& limit);

inline constexpr std::size_t kMinTailIndexSamples = 500;

/// McCulloch's quantile-ratio estimate of the stable index from
/// nu = (q95 - q05) / (q75 - q25), inverted through the symmetric row of the
/// lookup table by linear interpolation and clamped to [0.5, 2].
double tail_index(std::span<const double> samples);

/// Symmetric row of the (alpha, nu) lookup, alpha from 2 down to 0.5 in steps of 0.05.
struct QuantileRatioEntry {
  double alpha;
  double nu;
};
std::span<const QuantileRatioEntry> quantile_ratio_table();

struct Lemma1Row {
  double lambda = 0.0;
  double empirical = 0.0;                 // (1/N) sum |e^{i lambda eps} - phi_hat|^2
  std::optional<double> analytic;         // 1 - exp(-2 |lambda|^alpha) for standard SaS
  double mc_se = 0.0;
  double bound_ratio = 0.0;               // empirical / min(|lambda|^{alpha - eta}, 1)
};

/// Draws `samples` innovations from RandomStream(base_seed, stream_id) and reports,
/// per lambda, the empirical second moment of e^{i lambda eps} - phi_hat.
std::vector<Lemma1Row> lemma1_check(const InnovationSpec& innovation, std::span<const double> lambda_grid,
                                    std::size_t samples, std::uint64_t base_seed, double eta = 0.05);

struct BiasRateReport {
  double fitted_slope = std::numeric_limits<double>::quiet_NaN();
  double theoretical_exponent = 0.0;  // max(1 - alpha beta, -2c) for h_n = n^{-c}
  std::vector<std::size_t> used_n;
  std::vector<std::size_t> dropped_n;  // |bias| <= 3 se
  bool conclusive = false;
};

/// Least-squares slope of log|mean - truth_truncated| against log n, over the
/// points whose bias exceeds three standard errors.
BiasRateReport bias_rate_report(std::span<const ReplicationSummary> rows, double alpha, double beta,
                                double bandwidth_exponent = 0.2);

/// Columns alpha,beta,c0,n,h_n,N,truth_infinite,truth_truncated,mean,var,mse,tail_index_scaled;
/// floats with 10 significant digits.
void write_table_csv(std::ostream& out, const ExperimentSpec& spec, std::span<const ReplicationSummary> rows);

std::string format_number(double value);

}  // namespace lmqf
