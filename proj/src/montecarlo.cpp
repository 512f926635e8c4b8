#include "lmqf/montecarlo.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>

#include "lmqf/error.hpp"
#include "lmqf/parallel.hpp"
#include "lmqf/summation.hpp"

namespace lmqf {

namespace {

// nu_alpha = (x_.95 - x_.05) / (x_.75 - x_.25) for standard SaS laws, from
// quantiles of the Fourier-inverted distribution function (10 digits).
constexpr std::array<QuantileRatioEntry, 31> kQuantileRatios = {{
    {2.00, 2.4386636364},  {1.95, 2.4733422529},  {1.90, 2.5128182855},  {1.85, 2.5579845613},
    {1.80, 2.6099137227},  {1.75, 2.6698816207},  {1.70, 2.7393822320},  {1.65, 2.8201275218},
    {1.60, 2.9140291632},  {1.55, 3.0231704636},  {1.50, 3.1497950848},  {1.45, 3.2963518471},
    {1.40, 3.4656247169},  {1.35, 3.6609460641},  {1.30, 3.8864699466},  {1.25, 4.1474938981},
    {1.20, 4.4508505934},  {1.15, 4.8054232426},  {1.10, 5.2228688951},  {1.05, 5.7186757130},
    {1.00, 6.3137515147},  {0.95, 7.0368658864},  {0.90, 7.9284924506},  {0.85, 9.0470161258},
    {0.80, 10.4790833727}, {0.75, 12.3575223380}, {0.70, 14.8937669574}, {0.65, 18.4396165805},
    {0.60, 23.6121892336}, {0.55, 31.5655692871}, {0.50, 44.6351182476},
}};

double quantile_sorted(const std::vector<double>& sorted, double p) {
  const double pos = p * static_cast<double>(sorted.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
  const double frac = pos - static_cast<double>(lo);
  return sorted[lo] + frac * (sorted[hi] - sorted[lo]);
}

}  // namespace

ProcessConfig ExperimentSpec::process(std::size_t n) const {
  ProcessConfig config;
  config.innovation = innovation;
  config.coeffs = CoefficientSpec{c0, beta, truncation_m};
  config.n = n;
  config.base_seed = base_seed;
  return config;
}

void ExperimentSpec::validate() const {
  lmqf::validate(innovation);
  CoefficientSpec{c0, beta, truncation_m}.validate();
  const MemoryRegime r = regime(alpha(), beta);
  require(r != MemoryRegime::Divergent, "alpha*beta <= 1: series diverges");
  if (require_long_memory) require(r == MemoryRegime::LongMemory, "alpha*beta >= 2: not in the long-memory regime");
  require(replications >= 2, "replications N must be at least 2");
  require(!n_list.empty(), "n list is empty");
  for (std::size_t n : n_list) require(n >= 2, "every path length n must be at least 2");
  estimator.validate();
}

ReplicationSummary summarize(std::vector<double> values, std::size_t n, double h_n, double truth_infinite,
                             double truth_truncated) {
  require(values.size() >= 2, "summary needs at least 2 replicate values");
  ReplicationSummary s;
  s.n = n;
  s.h_n = h_n;
  s.replications = values.size();
  s.truth_infinite = truth_infinite;
  s.truth_truncated = truth_truncated;
  const double count = static_cast<double>(values.size());
  s.mean = compensated_sum(values) / count;
  CompensatedSum centered;
  CompensatedSum errors;
  for (double v : values) {
    centered += (v - s.mean) * (v - s.mean);
    errors += (v - truth_infinite) * (v - truth_infinite);
  }
  s.var = centered.value() / (count - 1.0);
  s.mse = errors.value() / count;
  s.values = std::move(values);
  return s;
}

TruthPair experiment_truth(const ExperimentSpec& spec) {
  TruthPair truth;
  if (!is_symmetric_stable(spec.innovation)) return truth;
  const CoefficientSpec coeffs{spec.c0, spec.beta, spec.truncation_m};
  truth.infinite = true_qf_closed(spec.alpha(), alpha_norm_sum(coeffs, spec.alpha()));
  truth.truncated = true_qf_closed(spec.alpha(), truncated_alpha_norm_sum(coeffs, spec.alpha()));
  return truth;
}

ExperimentResult run_experiment(const ExperimentSpec& spec, unsigned workers) {
  spec.validate();
  ExperimentResult result;
  const TruthPair truth = experiment_truth(spec);
  if (std::isfinite(truth.infinite) && std::abs(truth.truncated - truth.infinite) > 0.01 * truth.infinite) {
    result.warnings.push_back("truncation at M = " + std::to_string(spec.truncation_m) +
                              " moves the true value by more than 1% (" + format_number(truth.infinite) + " vs " +
                              format_number(truth.truncated) + ")");
  }
  std::optional<LimitCase> limit;
  try {
    limit = classify_limit(spec.alpha(), spec.beta);
  } catch (const NotCoveredError&) {
  }

  for (std::size_t n : spec.n_list) {
    const ProcessConfig process = spec.process(n);
    const MovingAverageFilter filter(coefficients(process.coeffs), n);
    std::vector<double> values(spec.replications);
    parallel_for(spec.replications, workers, [&](std::size_t rep) {
      RandomStream rng(spec.base_seed, derive_stream_id(spec.base_seed, n, rep));
      const std::vector<double> path = simulate_path(process, filter, rng);
      values[rep] = estimate_qf(path, spec.estimator);
    });
    ReplicationSummary row = summarize(std::move(values), n, bandwidth(spec.estimator, n), truth.infinite, truth.truncated);
    if (limit && row.replications >= kMinTailIndexSamples) {
      try {
        row.tail_index_scaled = tail_index(scaled_deviations(row, *limit));
      } catch (const ValidationError&) {
      }
    }
    result.rows.push_back(std::move(row));
  }
  return result;
}

std::vector<double> scaled_deviations(const ReplicationSummary& summary, const LimitCase& limit) {
  const double scale = std::pow(static_cast<double>(summary.n), limit.rate_exponent);
  std::vector<double> out;
  out.reserve(summary.values.size());
  for (double v : summary.values) out.push_back(scale * (v - summary.mean));
  return out;
}

std::span<const QuantileRatioEntry> quantile_ratio_table() { return kQuantileRatios; }

double tail_index(std::span<const double> samples) {
  require(samples.size() >= kMinTailIndexSamples, "tail_index needs at least 500 samples");
  std::vector<double> sorted(samples.begin(), samples.end());
  std::sort(sorted.begin(), sorted.end());
  const double spread = quantile_sorted(sorted, 0.75) - quantile_sorted(sorted, 0.25);
  require(spread > 0.0, "tail_index: interquartile range is zero");
  const double nu = (quantile_sorted(sorted, 0.95) - quantile_sorted(sorted, 0.05)) / spread;
  if (nu <= kQuantileRatios.front().nu) return kQuantileRatios.front().alpha;
  if (nu >= kQuantileRatios.back().nu) return kQuantileRatios.back().alpha;
  for (std::size_t i = 0; i + 1 < kQuantileRatios.size(); ++i) {
    const auto& a = kQuantileRatios[i];
    const auto& b = kQuantileRatios[i + 1];
    if (nu <= b.nu) {
      const double w = (nu - a.nu) / (b.nu - a.nu);
      return a.alpha + w * (b.alpha - a.alpha);
    }
  }
  return kQuantileRatios.back().alpha;
}

std::vector<Lemma1Row> lemma1_check(const InnovationSpec& innovation, std::span<const double> lambda_grid,
                                    std::size_t samples, std::uint64_t base_seed, double eta) {
  validate(innovation);
  require(!lambda_grid.empty(), "lambda grid is empty");
  require(samples >= 2, "lemma check needs at least 2 samples");
  const double alpha = innovation_alpha(innovation);
  require(eta > 0.0 && eta < alpha, "eta must lie in (0, alpha)");
  RandomStream rng(base_seed, derive_stream_id(base_seed, samples, 0));
  std::vector<double> eps(samples);
  sample_innovations(innovation, rng, eps);

  const double count = static_cast<double>(samples);
  std::vector<Lemma1Row> rows;
  std::vector<double> re(samples), im(samples);
  for (double lambda : lambda_grid) {
    CompensatedSum sum_re, sum_im;
    for (std::size_t k = 0; k < samples; ++k) {
      re[k] = std::cos(lambda * eps[k]);
      im[k] = std::sin(lambda * eps[k]);
      sum_re += re[k];
      sum_im += im[k];
    }
    const double phi_re = sum_re.value() / count;
    const double phi_im = sum_im.value() / count;
    CompensatedSum d_sum, d_sq;
    for (std::size_t k = 0; k < samples; ++k) {
      const double dr = re[k] - phi_re;
      const double di = im[k] - phi_im;
      const double d = dr * dr + di * di;
      d_sum += d;
      d_sq += d * d;
    }
    Lemma1Row row;
    row.lambda = lambda;
    row.empirical = d_sum.value() / count;
    const double second = d_sq.value() / count;
    row.mc_se = std::sqrt(std::max(0.0, second - row.empirical * row.empirical) / (count - 1.0));
    if (is_symmetric_stable(innovation)) {
      row.analytic = 1.0 - std::norm(stable_cf(StableParams{alpha, 1.0, 0.0, 0.0}, lambda));
    }
    const double bound = std::min(std::pow(std::abs(lambda), alpha - eta), 1.0);
    row.bound_ratio = bound > 0.0 ? row.empirical / bound : 0.0;
    rows.push_back(row);
  }
  return rows;
}

BiasRateReport bias_rate_report(std::span<const ReplicationSummary> rows, double alpha, double beta,
                                double bandwidth_exponent) {
  BiasRateReport report;
  report.theoretical_exponent = std::max(1.0 - alpha * beta, -2.0 * bandwidth_exponent);
  std::vector<double> xs, ys;
  for (const auto& row : rows) {
    const double bias = row.mean - row.truth_truncated;
    const double se = std::sqrt(row.var / static_cast<double>(row.replications));
    if (std::isfinite(bias) && std::abs(bias) > 3.0 * se) {
      report.used_n.push_back(row.n);
      xs.push_back(std::log(static_cast<double>(row.n)));
      ys.push_back(std::log(std::abs(bias)));
    } else {
      report.dropped_n.push_back(row.n);
    }
  }
  if (xs.size() < 2) return report;
  const double count = static_cast<double>(xs.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    mx += xs[i];
    my += ys[i];
  }
  mx /= count;
  my /= count;
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxy += (xs[i] - mx) * (ys[i] - my);
    sxx += (xs[i] - mx) * (xs[i] - mx);
  }
  report.fitted_slope = sxy / sxx;
  report.conclusive = true;
  return report;
}

std::string format_number(double value) {
  if (std::isnan(value)) return "nan";
  char buffer[64];
  std::snprintf(buffer, sizeof buffer, "%.10g", value);
  return buffer;
}

void write_table_csv(std::ostream& out, const ExperimentSpec& spec, std::span<const ReplicationSummary> rows) {
  out << "alpha,beta,c0,n,h_n,N,truth_infinite,truth_truncated,mean,var,mse,tail_index_scaled\n";
  for (const auto& row : rows) {
    out << format_number(spec.alpha()) << ',' << format_number(spec.beta) << ',' << format_number(spec.c0) << ','
        << row.n << ',' << format_number(row.h_n) << ',' << row.replications << ',' << format_number(row.truth_infinite)
        << ',' << format_number(row.truth_truncated) << ',' << format_number(row.mean) << ','
        << format_number(row.var) << ',' << format_number(row.mse) << ',' << format_number(row.tail_index_scaled)
        << '\n';
  }
}

}  // namespace lmqf
