#include "lmqf/linproc.hpp"

#include <fftw3.h>

#include <algorithm>
#include <bit>
#include <cmath>
#include <complex>
#include <mutex>

#include "lmqf/error.hpp"
#include "lmqf/special.hpp"

namespace lmqf {

namespace {

// Below this many multiply-adds the direct sum is cheaper than the transform.
constexpr std::size_t kDirectWorkLimit = std::size_t{1} << 22;

// Direct partial sums are used for S_M up to this truncation.
constexpr std::size_t kDirectPartialSumLimit = 100000;

std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

struct FftwFree {
  void operator()(void* p) const { fftw_free(p); }
};
using RealBuffer = std::unique_ptr<double, FftwFree>;
using ComplexBuffer = std::unique_ptr<fftw_complex, FftwFree>;

RealBuffer alloc_real(std::size_t count) { return RealBuffer(fftw_alloc_real(count)); }
ComplexBuffer alloc_complex(std::size_t count) { return ComplexBuffer(fftw_alloc_complex(count)); }

void require_convergent(double alpha, double beta) {
  require(alpha * beta > 1.0, "alpha*beta <= 1: series diverges");
}

}  // namespace

void CoefficientSpec::validate() const {
  require(c0 > 0.0, "c0 must be positive");
  require(beta > 0.0, "beta must be positive");
  require(truncation_m >= 1, "truncation M must be at least 1");
}

std::string_view to_string(MemoryRegime r) {
  switch (r) {
    case MemoryRegime::Divergent:
      return "divergent";
    case MemoryRegime::LongMemory:
      return "long_memory";
    case MemoryRegime::ShortMemory:
      return "short_memory";
  }
  return "unknown";
}

MemoryRegime regime(double alpha, double beta) {
  const double product = alpha * beta;
  if (product <= 1.0) return MemoryRegime::Divergent;
  if (product < 2.0) return MemoryRegime::LongMemory;
  return MemoryRegime::ShortMemory;
}

void ProcessConfig::validate() const {
  lmqf::validate(innovation);
  require(coeffs.c0 > 0.0, "c0 must be positive");
  require(coeffs.beta > 0.0, "beta must be positive");
  require_convergent(innovation_alpha(innovation), coeffs.beta);
  require(n >= 2, "path length n must be at least 2");
}

double coefficient(const CoefficientSpec& spec, std::size_t i) {
  if (i == 0) return 1.0;
  return spec.c0 * std::pow(static_cast<double>(i), -spec.beta);
}

std::vector<double> coefficients(const CoefficientSpec& spec) {
  std::vector<double> a(spec.truncation_m + 1);
  for (std::size_t i = 0; i < a.size(); ++i) a[i] = coefficient(spec, i);
  return a;
}

double alpha_norm_sum(const CoefficientSpec& spec, double alpha) {
  require_convergent(alpha, spec.beta);
  return 1.0 + std::pow(spec.c0, alpha) * power_sum_from(alpha * spec.beta, 1);
}

double truncation_tail(const CoefficientSpec& spec, double alpha) {
  require_convergent(alpha, spec.beta);
  return std::pow(spec.c0, alpha) * power_sum_from(alpha * spec.beta, spec.truncation_m + 1);
}

double truncated_alpha_norm_sum(const CoefficientSpec& spec, double alpha) {
  if (spec.truncation_m <= kDirectPartialSumLimit) {
    return 1.0 + std::pow(spec.c0, alpha) * power_sum(alpha * spec.beta, 1, spec.truncation_m);
  }
  return alpha_norm_sum(spec, alpha) - truncation_tail(spec, alpha);
}

std::vector<double> convolve_direct(std::span<const double> innovations, std::span<const double> coeffs) {
  require(!coeffs.empty(), "coefficient sequence is empty");
  const std::size_t m = coeffs.size() - 1;
  require(innovations.size() > m, "need more innovations than the truncation depth");
  const std::size_t n = innovations.size() - m;
  std::vector<double> x(n);
  for (std::size_t t = 0; t < n; ++t) {
    const double* newest = innovations.data() + t + m;
    double acc = 0.0;
    for (std::size_t i = 0; i <= m; ++i) acc += coeffs[i] * *(newest - i);
    x[t] = acc;
  }
  return x;
}

struct MovingAverageFilter::FftState {
  std::size_t size = 0;
  fftw_plan forward = nullptr;
  fftw_plan backward = nullptr;
  std::vector<std::complex<double>> spectrum;

  ~FftState() {
    std::lock_guard lock(planner_mutex());
    if (forward) fftw_destroy_plan(forward);
    if (backward) fftw_destroy_plan(backward);
  }
};

MovingAverageFilter::MovingAverageFilter(std::vector<double> coeffs, std::size_t n)
    : coeffs_(std::move(coeffs)), n_(n) {
  require(!coeffs_.empty(), "coefficient sequence is empty");
  require(n_ >= 1, "path length must be positive");
}

MovingAverageFilter::~MovingAverageFilter() = default;

std::vector<double> MovingAverageFilter::apply(std::span<const double> innovations, ConvolutionMethod method) const {
  require(innovations.size() == n_ + truncation(), "innovation count must equal n + M");
  if (method == ConvolutionMethod::Automatic) {
    method = (coeffs_.size() * n_ <= kDirectWorkLimit) ? ConvolutionMethod::Direct : ConvolutionMethod::Fft;
  }
  if (method == ConvolutionMethod::Direct) return convolve_direct(innovations, coeffs_);
  return apply_fft(innovations);
}

std::vector<double> MovingAverageFilter::apply_fft(std::span<const double> innovations) const {
  const std::size_t m = truncation();
  const std::size_t length = n_ + m;
  const std::size_t size = std::bit_ceil(length);
  const std::size_t bins = size / 2 + 1;

  // Plans and the coefficient spectrum are built once per filter, on first use.
  std::call_once(fft_once_, [&] {
    auto state = std::make_unique<FftState>();
    state->size = size;
    RealBuffer real = alloc_real(size);
    ComplexBuffer spec = alloc_complex(bins);
    {
      std::lock_guard lock(planner_mutex());
      state->forward = fftw_plan_dft_r2c_1d(static_cast<int>(size), real.get(), spec.get(), FFTW_ESTIMATE);
      state->backward = fftw_plan_dft_c2r_1d(static_cast<int>(size), spec.get(), real.get(), FFTW_ESTIMATE);
    }
    std::fill(real.get(), real.get() + size, 0.0);
    std::copy(coeffs_.begin(), coeffs_.end(), real.get());
    fftw_execute_dft_r2c(state->forward, real.get(), spec.get());
    state->spectrum.resize(bins);
    for (std::size_t k = 0; k < bins; ++k) state->spectrum[k] = {spec.get()[k][0], spec.get()[k][1]};
    fft_ = std::move(state);
  });

  RealBuffer real = alloc_real(size);
  ComplexBuffer spec = alloc_complex(bins);
  double* buffer = real.get();
  std::fill(buffer, buffer + size, 0.0);
  std::vector<std::size_t> large;
  for (std::size_t k = 0; k < length; ++k) {
    if (std::abs(innovations[k]) > kSplitThreshold) {
      large.push_back(k);
    } else {
      buffer[k] = innovations[k];
    }
  }

  fftw_execute_dft_r2c(fft_->forward, buffer, spec.get());
  for (std::size_t k = 0; k < bins; ++k) {
    const std::complex<double> product = std::complex<double>(spec.get()[k][0], spec.get()[k][1]) * fft_->spectrum[k];
    spec.get()[k][0] = product.real();
    spec.get()[k][1] = product.imag();
  }
  fftw_execute_dft_c2r(fft_->backward, spec.get(), buffer);

  // Circular convolution equals the linear one at indices >= M, which are the outputs.
  const double scale = 1.0 / static_cast<double>(size);
  std::vector<double> x(n_);
  for (std::size_t t = 0; t < n_; ++t) x[t] = buffer[t + m] * scale;
  for (std::size_t k : large) {
    const double value = innovations[k];
    // eps index k reaches outputs t with 0 <= t + m - k <= m.
    const std::size_t t_begin = k > m ? k - m : 0;
    const std::size_t t_end = std::min(k, n_ - 1);
    for (std::size_t t = t_begin; t <= t_end && t < n_; ++t) x[t] += coeffs_[t + m - k] * value;
  }
  return x;
}

std::vector<double> simulate_path(const ProcessConfig& config, RandomStream& rng, ConvolutionMethod method) {
  config.validate();
  const MovingAverageFilter filter(coefficients(config.coeffs), config.n);
  return simulate_path(config, filter, rng, method);
}

std::vector<double> simulate_path(const ProcessConfig& config, const MovingAverageFilter& filter, RandomStream& rng,
                                  ConvolutionMethod method) {
  config.validate();
  require(filter.n() == config.n && filter.truncation() == config.coeffs.truncation_m,
          "filter does not match the process configuration");
  std::vector<double> innovations(config.n + config.coeffs.truncation_m);
  sample_innovations(config.innovation, rng, innovations);
  return filter.apply(innovations, method);
}

}  // namespace lmqf
