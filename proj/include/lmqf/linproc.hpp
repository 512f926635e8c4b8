#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <mutex>
#include <span>
#include <string_view>
#include <vector>

#include "lmqf/random.hpp"
#include "lmqf/stable.hpp"

namespace lmqf {

inline constexpr std::size_t kDefaultTruncation = std::size_t{1} << 20;

/// a_0 = 1 and a_i = c0 i^{-beta} for 1 <= i <= truncation_m.
struct CoefficientSpec {
  double c0 = 1.0;
  double beta = 1.3;
  std::size_t truncation_m = kDefaultTruncation;

  void validate() const;
  friend bool operator==(const CoefficientSpec&, const CoefficientSpec&) = default;
};

enum class MemoryRegime { Divergent, LongMemory, ShortMemory };

std::string_view to_string(MemoryRegime regime);

/// alpha*beta <= 1: divergent; 1 < alpha*beta < 2: long memory; otherwise short memory.
MemoryRegime regime(double alpha, double beta);

struct ProcessConfig {
  InnovationSpec innovation = StandardSymmetricStable{};
  CoefficientSpec coeffs;
  std::size_t n = 1000;
  std::uint64_t base_seed = 42;

  /// Rejects divergent series and n < 2. truncation_m = 0 is accepted here as
  /// the identity filter (X_t = eps_t).
  void validate() const;
};

double coefficient(const CoefficientSpec& spec, std::size_t i);

/// a_0 .. a_M.
std::vector<double> coefficients(const CoefficientSpec& spec);

/// S = sum_{i>=0} |a_i|^alpha over the untruncated sequence.
double alpha_norm_sum(const CoefficientSpec& spec, double alpha);

/// sum_{i>M} |a_i|^alpha; decreases monotonically in M.
double truncation_tail(const CoefficientSpec& spec, double alpha);

/// S_M = sum_{i=0}^{M} |a_i|^alpha, the alpha-norm sum of the simulated (truncated) model.
double truncated_alpha_norm_sum(const CoefficientSpec& spec, double alpha);

/// Reference convolution X_t = sum_{i=0}^{M} a_i eps_{t-i}, summed in increasing i.
/// `innovations` holds eps_{1-M} .. eps_n (length n + M).
std::vector<double> convolve_direct(std::span<const double> innovations, std::span<const double> coeffs);

enum class ConvolutionMethod { Automatic, Direct, Fft };

/// Moving-average filter with a cached coefficient spectrum, reusable across
/// replications and safe to call from several threads at once.
///
/// The FFT route zero-pads to a power of two. Innovations larger than
/// kSplitThreshold in magnitude are removed before the transform and added back
/// exactly, which keeps the rounding error of the transform independent of the
/// heavy tail. The two routes agree to 1e-9 max(1, sum_i |a_i eps_{t-i}|).
class MovingAverageFilter {
 public:
  static constexpr double kSplitThreshold = 1024.0;

  MovingAverageFilter(std::vector<double> coeffs, std::size_t n);
  ~MovingAverageFilter();
  MovingAverageFilter(const MovingAverageFilter&) = delete;
  MovingAverageFilter& operator=(const MovingAverageFilter&) = delete;

  std::size_t n() const { return n_; }
  std::size_t truncation() const { return coeffs_.size() - 1; }
  std::span<const double> coeffs() const { return coeffs_; }

  std::vector<double> apply(std::span<const double> innovations, ConvolutionMethod method) const;

 private:
  std::vector<double> apply_fft(std::span<const double> innovations) const;

  struct FftState;
  std::vector<double> coeffs_;
  std::size_t n_;
  mutable std::once_flag fft_once_;
  mutable std::unique_ptr<FftState> fft_;
};

/// Draws eps_{1-M} .. eps_n from `rng` in index order and filters them.
std::vector<double> simulate_path(const ProcessConfig& config, RandomStream& rng,
                                  ConvolutionMethod method = ConvolutionMethod::Automatic);

/// Same, reusing a prepared filter; `filter` must match config.coeffs and config.n.
std::vector<double> simulate_path(const ProcessConfig& config, const MovingAverageFilter& filter, RandomStream& rng,
                                  ConvolutionMethod method = ConvolutionMethod::Automatic);

}  // namespace lmqf
