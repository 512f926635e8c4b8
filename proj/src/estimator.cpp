#include "lmqf/estimator.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "lmqf/error.hpp"
#include "lmqf/parallel.hpp"
#include "lmqf/summation.hpp"

namespace lmqf {

namespace {

constexpr double kInvSqrt2Pi = 0.3989422804014327;

struct GaussianEval {
  double operator()(double u) const { return kInvSqrt2Pi * std::exp(-0.5 * u * u); }
};

struct BoxcarEval {
  double half_width;
  double height;
  double operator()(double u) const { return std::abs(u) <= half_width ? height : 0.0; }
};

struct TableEval {
  const TableKernel* table;
  double operator()(double u) const {
    const auto& us = table->u;
    const auto& ks = table->k;
    if (u < us.front() || u > us.back()) return 0.0;
    const auto it = std::upper_bound(us.begin(), us.end(), u);
    if (it == us.end()) return ks.back();
    const std::size_t hi = static_cast<std::size_t>(it - us.begin());
    const std::size_t lo = hi - 1;
    const double w = (u - us[lo]) / (us[hi] - us[lo]);
    return ks[lo] + w * (ks[hi] - ks[lo]);
  }
};

template <class F>
decltype(auto) with_kernel(const KernelSpec& kernel, F&& f) {
  return std::visit(
      [&](const auto& k) -> decltype(auto) {
        using T = std::decay_t<decltype(k)>;
        if constexpr (std::is_same_v<T, GaussianKernel>) {
          return f(GaussianEval{});
        } else if constexpr (std::is_same_v<T, BoxcarKernel>) {
          return f(BoxcarEval{k.half_width, 0.5 / k.half_width});
        } else {
          return f(TableEval{&k});
        }
      },
      kernel);
}

// Pairs (i, j) with j < i inside the tile rows [i0, i1) x columns [j0, j1).
template <class K>
CompensatedSum tile_sum(const double* x, std::size_t i0, std::size_t i1, std::size_t j0, std::size_t j1, double h,
                        const K& kernel) {
  CompensatedSum sum;
  for (std::size_t i = i0; i < i1; ++i) {
    const double xi = x[i];
    const std::size_t j_end = std::min(i, j1);
    for (std::size_t j = j0; j < j_end; ++j) sum += kernel((xi - x[j]) / h);
  }
  return sum;
}

}  // namespace

TableKernel make_table_kernel(std::vector<std::pair<double, double>> points) {
  require(points.size() >= 3, "kernel table needs at least 3 points");
  std::sort(points.begin(), points.end());
  TableKernel table;
  for (const auto& [u, k] : points) {
    require(std::isfinite(u) && std::isfinite(k), "kernel table values must be finite");
    if (!table.u.empty()) require(u > table.u.back(), "kernel table grid must be strictly increasing");
    table.u.push_back(u);
    table.k.push_back(k);
  }
  const std::size_t count = table.u.size();
  for (std::size_t i = 0; i < count; ++i) {
    const std::size_t mirror = count - 1 - i;
    require(std::abs(table.u[i] + table.u[mirror]) <= 1e-9, "kernel table grid must be symmetric about 0");
    require(std::abs(table.k[i] - table.k[mirror]) <= 1e-9, "kernel table values must satisfy K(u) = K(-u)");
  }
  // Exact integrals of the piecewise-linear interpolant.
  CompensatedSum mass;
  CompensatedSum second_moment;
  for (std::size_t i = 0; i + 1 < count; ++i) {
    const double width = table.u[i + 1] - table.u[i];
    mass += 0.5 * width * (table.k[i] + table.k[i + 1]);
    const double mid = 0.5 * (table.u[i] + table.u[i + 1]);
    second_moment += width * mid * mid * 0.5 * (std::abs(table.k[i]) + std::abs(table.k[i + 1]));
  }
  require(mass.value() > 0.0, "kernel table must have positive integral");
  require(std::isfinite(second_moment.value()), "kernel table second moment must be finite");
  for (double& k : table.k) k /= mass.value();
  CompensatedSum check;
  for (std::size_t i = 0; i + 1 < count; ++i) check += 0.5 * (table.u[i + 1] - table.u[i]) * (table.k[i] + table.k[i + 1]);
  require(std::abs(check.value() - 1.0) <= 1e-6, "kernel table failed to normalize");
  return table;
}

double kernel_eval(const KernelSpec& kernel, double u) {
  return with_kernel(kernel, [u](const auto& eval) { return eval(u); });
}

std::optional<double> power_exponent(const BandwidthRule& rule) {
  if (std::holds_alternative<PaperDefaultBandwidth>(rule)) return 0.2;
  if (const auto* power = std::get_if<PowerBandwidth>(&rule)) return power->exponent;
  return std::nullopt;
}

void EstimatorConfig::validate() const {
  if (const auto* box = std::get_if<BoxcarKernel>(&kernel)) require(box->half_width > 0.0, "boxcar half width must be positive");
  if (const auto* table = std::get_if<TableKernel>(&kernel)) require(table->u.size() >= 3, "kernel table needs at least 3 points");
  if (const auto* power = std::get_if<PowerBandwidth>(&bandwidth_rule)) require(power->exponent > 0.0, "bandwidth exponent must be positive");
  if (const auto* fixed = std::get_if<FixedBandwidth>(&bandwidth_rule)) require(fixed->h > 0.0, "fixed bandwidth must be positive");
}

double bandwidth(const EstimatorConfig& config, std::size_t n) {
  config.validate();
  require(n >= 2, "bandwidth needs n >= 2");
  if (const auto* fixed = std::get_if<FixedBandwidth>(&config.bandwidth_rule)) return fixed->h;
  return std::pow(static_cast<double>(n), -*power_exponent(config.bandwidth_rule));
}

double estimate_qf(std::span<const double> path, const EstimatorConfig& config, unsigned workers) {
  const std::size_t n = path.size();
  require(n >= 2, "estimate_qf needs at least 2 observations");
  const double h = bandwidth(config, n);
  const std::size_t tiles_per_side = (n + kPairTile - 1) / kPairTile;
  std::vector<std::pair<std::size_t, std::size_t>> tiles;
  tiles.reserve(tiles_per_side * (tiles_per_side + 1) / 2);
  for (std::size_t ti = 0; ti < tiles_per_side; ++ti) {
    for (std::size_t tj = 0; tj <= ti; ++tj) tiles.emplace_back(ti, tj);
  }
  std::vector<CompensatedSum> partials(tiles.size());
  with_kernel(config.kernel, [&](const auto& eval) {
    parallel_for(tiles.size(), workers, [&](std::size_t idx) {
      const auto [ti, tj] = tiles[idx];
      const std::size_t i0 = ti * kPairTile;
      const std::size_t j0 = tj * kPairTile;
      partials[idx] = tile_sum(path.data(), i0, std::min(i0 + kPairTile, n), j0, std::min(j0 + kPairTile, n), h, eval);
    });
    return 0;
  });
  const double total = tree_reduce(partials).value();
  const double prefactor = 2.0 / (static_cast<double>(n) * static_cast<double>(n - 1) * h);
  return prefactor * total;
}

double renyi_entropy(double t) {
  require(t > 0.0, "non-positive quadratic functional estimate: Renyi entropy undefined");
  return -std::log(t);
}

RepresentationResidual centered_representation(std::span<const double> path, double t_n, double replicate_mean,
                                               const std::function<double(double)>& density, double truth) {
  require(!path.empty(), "path is empty");
  CompensatedSum y;
  for (double x : path) y += 2.0 * (density(x) - truth);
  RepresentationResidual out;
  out.t_n = t_n;
  out.replicate_mean = replicate_mean;
  out.mean_y = y.value() / static_cast<double>(path.size());
  out.residual = (t_n - replicate_mean) - out.mean_y;
  return out;
}

RepresentationResidual centered_representation(std::span<const double> path, const EstimatorConfig& config,
                                               const StableParams& model, double truth, double replicate_mean) {
  model.validate();
  require(model.symmetric(), "centered representation needs a symmetric stable marginal (SaS innovations)");
  const double t_n = estimate_qf(path, config);
  return centered_representation(path, t_n, replicate_mean, [&](double x) { return stable_pdf(model, x); }, truth);
}

}  // namespace lmqf
