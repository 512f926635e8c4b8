#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <vector>

#include "lmqf/error.hpp"
#include "lmqf/estimator.hpp"
#include "lmqf/random.hpp"
#include "lmqf/stable.hpp"
#include "lmqf/summation.hpp"

using namespace lmqf;

namespace {

const double kInvSqrt2Pi = 1.0 / std::sqrt(2.0 * M_PI);

EstimatorConfig gaussian_fixed(double h) { return {GaussianKernel{}, FixedBandwidth{h}}; }

// Plain double loop over j < i with the same compensated accumulation order.
double naive_qf(const std::vector<double>& x, const EstimatorConfig& config) {
  const std::size_t n = x.size();
  const double h = bandwidth(config, n);
  CompensatedSum sum;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < i; ++j) sum += kernel_eval(config.kernel, (x[i] - x[j]) / h);
  return 2.0 / (static_cast<double>(n) * static_cast<double>(n - 1) * h) * sum.value();
}

// Extended-precision reference without any blocking.
long double long_double_qf(const std::vector<double>& x, double h) {
  long double sum = 0.0L;
  for (std::size_t i = 0; i < x.size(); ++i)
    for (std::size_t j = 0; j < i; ++j) {
      const long double u = (static_cast<long double>(x[i]) - x[j]) / h;
      sum += std::exp(-0.5L * u * u) / std::sqrt(2.0L * 3.14159265358979323846L);
    }
  const long double n = static_cast<long double>(x.size());
  return 2.0L / (n * (n - 1.0L) * h) * sum;
}

std::vector<double> random_path(std::size_t n, std::uint64_t seed, double alpha = 1.5) {
  RandomStream rng(seed, n);
  std::vector<double> x(n);
  sample_innovations(StandardSymmetricStable{alpha}, rng, x);
  return x;
}

}  // namespace

TEST_CASE("bandwidth rules") {
  CHECK(bandwidth({GaussianKernel{}, PaperDefaultBandwidth{}}, 1000) == doctest::Approx(0.2512).epsilon(2e-4));
  CHECK(bandwidth({GaussianKernel{}, PaperDefaultBandwidth{}}, 1000) == std::pow(1000.0, -0.2));
  CHECK(bandwidth({GaussianKernel{}, PaperDefaultBandwidth{}}, 5000) == doctest::Approx(0.1821).epsilon(2e-4));
  CHECK(bandwidth({GaussianKernel{}, PowerBandwidth{0.5}}, 100) == doctest::Approx(0.1).epsilon(1e-15));
  CHECK(bandwidth(gaussian_fixed(0.3), 2) == 0.3);
  CHECK(bandwidth(gaussian_fixed(0.3), 123456) == 0.3);
  CHECK_THROWS_AS(bandwidth(gaussian_fixed(0.0), 10), ValidationError);
  CHECK_THROWS_AS(bandwidth({GaussianKernel{}, PowerBandwidth{-1.0}}, 10), ValidationError);
  CHECK_THROWS_AS(bandwidth(gaussian_fixed(1.0), 1), ValidationError);
  CHECK(power_exponent(PaperDefaultBandwidth{}) == 0.2);
  CHECK(power_exponent(PowerBandwidth{0.3}) == 0.3);
  CHECK_FALSE(power_exponent(FixedBandwidth{0.3}).has_value());
}

TEST_CASE("kernel evaluation") {
  CHECK(kernel_eval(GaussianKernel{}, 0.0) == doctest::Approx(0.398942).epsilon(1e-6));
  CHECK(kernel_eval(GaussianKernel{}, 1.0) == doctest::Approx(0.241971).epsilon(1e-6));
  CHECK(kernel_eval(GaussianKernel{}, -1.0) == kernel_eval(GaussianKernel{}, 1.0));
  CHECK(kernel_eval(BoxcarKernel{0.5}, 0.7) == 0.0);
  CHECK(kernel_eval(BoxcarKernel{0.5}, -0.3) == 1.0);
  CHECK(kernel_eval(BoxcarKernel{2.0}, 2.0) == 0.25);
}

TEST_CASE("table kernels") {
  // Triangle on [-1, 1] given with height 2: renormalized to unit mass.
  const auto tri = make_table_kernel({{1.0, 0.0}, {-1.0, 0.0}, {0.0, 2.0}});
  CHECK(kernel_eval(tri, 0.0) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(kernel_eval(tri, 0.5) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(kernel_eval(tri, -0.25) == doctest::Approx(0.75).epsilon(1e-15));
  CHECK(kernel_eval(tri, 1.5) == 0.0);
  CHECK(kernel_eval(tri, -1.0) == 0.0);
  CHECK_THROWS_AS(make_table_kernel({{-1.0, 0.0}, {0.0, 1.0}, {2.0, 0.0}}), ValidationError);
  CHECK_THROWS_AS(make_table_kernel({{-1.0, 0.1}, {0.0, 1.0}, {1.0, 0.0}}), ValidationError);
  CHECK_THROWS_AS(make_table_kernel({{-1.0, 0.0}, {1.0, 0.0}}), ValidationError);
  CHECK_THROWS_AS(make_table_kernel({{-1.0, 0.0}, {0.0, 0.0}, {1.0, 0.0}}), ValidationError);

  // A fine tabulated Gaussian reproduces the analytic estimator closely.
  std::vector<std::pair<double, double>> points;
  for (int i = -800; i <= 800; ++i) {
    const double u = i * 0.01;
    points.emplace_back(u, kInvSqrt2Pi * std::exp(-0.5 * u * u));
  }
  const EstimatorConfig tabulated{make_table_kernel(points), FixedBandwidth{0.5}};
  const auto x = random_path(300, 4);
  CHECK(estimate_qf(x, tabulated) == doctest::Approx(estimate_qf(x, gaussian_fixed(0.5))).epsilon(1e-4));
}

TEST_CASE("small paths by hand") {
  CHECK(estimate_qf(std::vector<double>{0.0, 0.0}, gaussian_fixed(1.0)) == doctest::Approx(kInvSqrt2Pi).epsilon(1e-15));
  const double k1 = kInvSqrt2Pi * std::exp(-0.5), k2 = kInvSqrt2Pi * std::exp(-2.0);
  const double three = estimate_qf(std::vector<double>{0.0, 1.0, 2.0}, gaussian_fixed(1.0));
  CHECK(three == doctest::Approx((2.0 * k1 + k2) / 3.0).epsilon(1e-15));
  CHECK(three == doctest::Approx(0.179311).epsilon(1e-5));
  CHECK_THROWS_AS(estimate_qf(std::vector<double>{1.0}, gaussian_fixed(1.0)), ValidationError);
  CHECK_THROWS_AS(estimate_qf(std::vector<double>{}, gaussian_fixed(1.0)), ValidationError);
}

TEST_CASE("blocked sum equals the naive double loop bit for bit") {
  std::mt19937_64 gen(2024);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t n = 2 + gen() % 63;
    const auto x = random_path(n, 1000 + trial, trial % 2 ? 1.5 : 0.5);
    const EstimatorConfig config = trial % 3 == 0   ? EstimatorConfig{BoxcarKernel{0.7}, FixedBandwidth{0.9}}
                                   : trial % 3 == 1 ? EstimatorConfig{GaussianKernel{}, PaperDefaultBandwidth{}}
                                                    : gaussian_fixed(0.37);
    const double oracle = naive_qf(x, config);
    CAPTURE(n);
    CHECK(estimate_qf(x, config, 1) == oracle);
    CHECK(estimate_qf(x, config, 4) == oracle);
  }
}

TEST_CASE("multi-tile sums are worker independent and accurate") {
  const auto x = random_path(1500, 5);
  const EstimatorConfig config{GaussianKernel{}, PaperDefaultBandwidth{}};
  const double one = estimate_qf(x, config, 1);
  for (unsigned workers : {2u, 3u, 8u}) CHECK(estimate_qf(x, config, workers) == one);
  const long double reference = long_double_qf(x, bandwidth(config, x.size()));
  CHECK(std::abs(one - static_cast<double>(reference)) <= 1e-14 * one);
}

TEST_CASE("permutation invariance after canonical ordering") {
  auto x = random_path(700, 6);
  auto shuffled = x;
  std::mt19937_64 gen(7);
  std::shuffle(shuffled.begin(), shuffled.end(), gen);
  std::sort(x.begin(), x.end());
  std::sort(shuffled.begin(), shuffled.end());
  const EstimatorConfig config{GaussianKernel{}, PaperDefaultBandwidth{}};
  CHECK(estimate_qf(shuffled, config) == estimate_qf(x, config));
  // Without re-sorting the value still agrees to rounding.
  auto raw = random_path(700, 6);
  auto raw_shuffled = raw;
  std::shuffle(raw_shuffled.begin(), raw_shuffled.end(), gen);
  CHECK(estimate_qf(raw_shuffled, config) == doctest::Approx(estimate_qf(raw, config)).epsilon(1e-14));
}

TEST_CASE("translation invariance and bandwidth scaling") {
  const auto x = random_path(400, 8);
  const EstimatorConfig config = gaussian_fixed(0.3);
  const double base = estimate_qf(x, config);
  for (double c : {-7.25, 0.001, 3.0, 1e3}) {
    std::vector<double> shifted(x);
    for (double& v : shifted) v += c;
    CHECK(estimate_qf(shifted, config) == doctest::Approx(base).epsilon(1e-12));
  }
  // Dyadic shifts of dyadic data are exact.
  std::vector<double> grid(200), grid_shifted(200);
  for (std::size_t i = 0; i < grid.size(); ++i) {
    grid[i] = static_cast<double>((i * 37) % 101) * 0.125;
    grid_shifted[i] = grid[i] + 64.0;
  }
  CHECK(estimate_qf(grid_shifted, config) == estimate_qf(grid, config));
  for (double s : {0.1, 2.0, 17.5}) {
    std::vector<double> scaled(x);
    for (double& v : scaled) v *= s;
    CHECK(estimate_qf(scaled, gaussian_fixed(0.3 * s)) == doctest::Approx(base / s).epsilon(1e-12));
  }
}

TEST_CASE("nonnegativity") {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto x = random_path(50 + seed, seed, 0.5);
    CHECK(estimate_qf(x, gaussian_fixed(0.01)) >= 0.0);
    CHECK(estimate_qf(x, {BoxcarKernel{0.01}, FixedBandwidth{0.01}}) >= 0.0);
  }
  CHECK(estimate_qf(std::vector<double>{0.0, 10.0}, {BoxcarKernel{0.5}, FixedBandwidth{1.0}}) == 0.0);
}

TEST_CASE("renyi entropy") {
  CHECK(renyi_entropy(std::exp(-1.0)) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(renyi_entropy(1.0) == 0.0);
  CHECK(renyi_entropy(0.0935) == -std::log(0.0935));
  CHECK(std::abs(renyi_entropy(0.0935) - 2.3700) < 5e-4);
  CHECK_THROWS_AS(renyi_entropy(0.0), ValidationError);
  CHECK_THROWS_AS(renyi_entropy(-1.0), ValidationError);
}

TEST_CASE("centered representation wiring") {
  const std::vector<double> zeros(10, 0.0);
  const auto formal = [](double x) { return x == 0.0 ? 0.5 : 0.0; };
  const auto r = centered_representation(zeros, 0.4, 0.3, formal, 0.2);
  CHECK(r.mean_y == doctest::Approx(2.0 * (0.5 - 0.2)).epsilon(1e-15));
  CHECK(r.residual == doctest::Approx((0.4 - 0.3) - 2.0 * (0.5 - 0.2)).epsilon(1e-15));

  const auto x = random_path(300, 9);
  const StableParams model{1.5, 1.2, 0.0, 0.0};
  const EstimatorConfig config{GaussianKernel{}, PaperDefaultBandwidth{}};
  const auto rep = centered_representation(x, config, model, 0.1, 0.11);
  CHECK(rep.t_n == estimate_qf(x, config));
  CHECK(rep.residual == rep.t_n - rep.replicate_mean - rep.mean_y);
  CHECK_THROWS_AS(centered_representation(x, config, StableParams{1.5, 1.0, 0.3, 0.0}, 0.1, 0.1), ValidationError);
}
