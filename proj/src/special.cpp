#include "lmqf/special.hpp"

#include <array>
#include <cmath>
#include <numbers>

#include "lmqf/error.hpp"
#include "lmqf/summation.hpp"

namespace lmqf {

namespace {

constexpr double kLanczosG = 7.0;
constexpr std::array<double, 9> kLanczosCoefficients = {
    0.99999999999980993,     676.5203681218851,     -1259.1392167224028,
    771.32342877765313,      -176.61502916214059,   12.507343278686905,
    -0.13857109526572012,    9.9843695780195716e-6, 1.5056327351493116e-7};

}  // namespace

double lanczos_gamma(double x) {
  if (x < 0.5) {
    return std::numbers::pi / (std::sin(std::numbers::pi * x) * lanczos_gamma(1.0 - x));
  }
  x -= 1.0;
  double series = kLanczosCoefficients[0];
  for (std::size_t k = 1; k < kLanczosCoefficients.size(); ++k) {
    series += kLanczosCoefficients[k] / (x + static_cast<double>(k));
  }
  const double t = x + kLanczosG + 0.5;
  return std::sqrt(2.0 * std::numbers::pi) * std::pow(t, x + 0.5) * std::exp(-t) * series;
}

double power_sum(double s, std::uint64_t first, std::uint64_t last) {
  require(first >= 1, "power sum must start at index >= 1");
  CompensatedSum sum;
  if (first > last) return 0.0;
  for (std::uint64_t i = last;; --i) {
    sum += std::pow(static_cast<double>(i), -s);
    if (i == first) break;
  }
  return sum.value();
}

double euler_maclaurin_tail(double s, std::uint64_t k) {
  require(s > 1.0, "power sum exponent must exceed 1");
  require(k >= 1, "power sum must start at index >= 1");
  const double K = static_cast<double>(k);
  const double f = std::pow(K, -s);
  const double integral = K * f / (s - 1.0);
  // -B2/2! f'(K), -B4/4! f'''(K), -B6/6! f^(5)(K) with f(x) = x^{-s}.
  const double d1 = s * f / K;
  const double d3 = s * (s + 1.0) * (s + 2.0) * f / (K * K * K);
  const double d5 = d3 * (s + 3.0) * (s + 4.0) / (K * K);
  return integral + 0.5 * f + d1 / 12.0 - d3 / 720.0 + d5 / 30240.0;
}

double euler_maclaurin_error_bound(double s, std::uint64_t k) {
  const double K = static_cast<double>(k);
  double d7 = std::pow(K, -s - 7.0);
  for (int j = 0; j < 7; ++j) d7 *= (s + j);
  return d7 / 1209600.0;
}

double power_sum_from(double s, std::uint64_t first) {
  require(s > 1.0, "power sum exponent must exceed 1");
  require(first >= 1, "power sum must start at index >= 1");
  std::uint64_t cutoff = first < 16 ? 16 : first;
  // Push the cutoff out until the omitted correction is far below the tail itself.
  while (euler_maclaurin_error_bound(s, cutoff) > 1e-14 * euler_maclaurin_tail(s, cutoff) &&
         cutoff < (std::uint64_t{1} << 40)) {
    cutoff *= 2;
  }
  const double tail = euler_maclaurin_tail(s, cutoff);
  if (cutoff == first) return tail;
  return power_sum(s, first, cutoff - 1) + tail;
}

}  // namespace lmqf
