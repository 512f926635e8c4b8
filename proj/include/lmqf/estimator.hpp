#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "lmqf/stable.hpp"

namespace lmqf {

struct GaussianKernel {
  friend bool operator==(const GaussianKernel&, const GaussianKernel&) = default;
};

/// 1 / (2 w) on |u| <= w.
struct BoxcarKernel {
  double half_width = 0.5;
  friend bool operator==(const BoxcarKernel&, const BoxcarKernel&) = default;
};

/// Piecewise-linear kernel through (u, K(u)) on a symmetric grid, zero outside.
/// Build with make_table_kernel so the grid is checked and normalized.
struct TableKernel {
  std::vector<double> u;
  std::vector<double> k;
  friend bool operator==(const TableKernel&, const TableKernel&) = default;
};

using KernelSpec = std::variant<GaussianKernel, BoxcarKernel, TableKernel>;

/// Validates symmetry (1e-9) and renormalizes to unit integral.
TableKernel make_table_kernel(std::vector<std::pair<double, double>> points);

double kernel_eval(const KernelSpec& kernel, double u);

/// h_n = n^{-1/5}.
struct PaperDefaultBandwidth {
  friend bool operator==(const PaperDefaultBandwidth&, const PaperDefaultBandwidth&) = default;
};
/// h_n = n^{-exponent}.
struct PowerBandwidth {
  double exponent = 0.2;
  friend bool operator==(const PowerBandwidth&, const PowerBandwidth&) = default;
};
struct FixedBandwidth {
  double h = 1.0;
  friend bool operator==(const FixedBandwidth&, const FixedBandwidth&) = default;
};

using BandwidthRule = std::variant<PaperDefaultBandwidth, PowerBandwidth, FixedBandwidth>;

/// Exponent c of h_n = n^{-c}, or nothing for a fixed bandwidth.
std::optional<double> power_exponent(const BandwidthRule& rule);

struct EstimatorConfig {
  KernelSpec kernel = GaussianKernel{};
  BandwidthRule bandwidth_rule = PaperDefaultBandwidth{};

  void validate() const;
};

double bandwidth(const EstimatorConfig& config, std::size_t n);

/// Side length of the square pair tiles.
inline constexpr std::size_t kPairTile = 256;

/// T_n = 2 / (n (n - 1) h_n) sum_{j<i} K((X_i - X_j) / h_n).
///
/// Pairs are grouped into kPairTile x kPairTile tiles visited row-major; each tile
/// is accumulated with CompensatedSum in (i, j) order and the tile partials are
/// merged by tree_reduce. The result is bit-identical for every worker count.
double estimate_qf(std::span<const double> path, const EstimatorConfig& config, unsigned workers = 1);

/// Quadratic Renyi entropy -ln t. Rejects t <= 0.
double renyi_entropy(double t);

struct RepresentationResidual {
  double t_n = 0.0;
  double replicate_mean = 0.0;
  double mean_y = 0.0;    // (1/n) sum Y_i with Y_i = 2 (f(X_i) - truth)
  double residual = 0.0;  // (t_n - replicate_mean) - mean_y
};

/// Residual of T_n against its linear projection, with E T_n replaced by a
/// replicate mean supplied by the caller.
RepresentationResidual centered_representation(std::span<const double> path, double t_n, double replicate_mean,
                                               const std::function<double(double)>& density, double truth);

/// Same, with f the symmetric stable marginal `model` evaluated by stable_pdf.
/// Rejects non-symmetric models.
RepresentationResidual centered_representation(std::span<const double> path, const EstimatorConfig& config,
                                               const StableParams& model, double truth, double replicate_mean);

}  // namespace lmqf
