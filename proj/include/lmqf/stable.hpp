#pragma once

#include <complex>
#include <span>
#include <variant>

#include "lmqf/random.hpp"

namespace lmqf {

/// Parameters of S_alpha(sigma, eta, mu). The characteristic function is
///   exp(i lambda mu - sigma^alpha |lambda|^alpha (1 - i eta sign(lambda) omega(lambda, alpha)))
/// with omega = tan(pi alpha / 2) for alpha != 1 and (2/pi) log|lambda| for alpha = 1.
struct StableParams {
  double alpha = 2.0;
  double sigma = 1.0;
  double eta = 0.0;
  double mu = 0.0;

  /// Throws ValidationError unless 0 < alpha <= 2, sigma > 0 and |eta| <= 1.
  void validate() const;
  bool symmetric() const { return eta == 0.0 && mu == 0.0; }
  bool standard() const { return sigma == 1.0; }

  friend bool operator==(const StableParams&, const StableParams&) = default;
};

struct StandardSymmetricStable {
  double alpha = 1.5;
  friend bool operator==(const StandardSymmetricStable&, const StandardSymmetricStable&) = default;
};

/// +x_m U^{-1/alpha} with probability p_plus, otherwise -x_m U^{-1/alpha}. The tail
/// constants c_+ = p_plus x_m^alpha and c_- = (1 - p_plus) x_m^alpha hold exactly.
struct TwoSidedPareto {
  double alpha = 1.5;
  double p_plus = 0.5;
  double x_m = 1.0;

  double c_plus() const;
  double c_minus() const;
  friend bool operator==(const TwoSidedPareto&, const TwoSidedPareto&) = default;
};

using InnovationSpec = std::variant<StandardSymmetricStable, TwoSidedPareto>;

/// Innovations need 0 < alpha < 2. Pareto also needs p_plus in [0, 1] and x_m > 0.
void validate(const InnovationSpec& spec);
double innovation_alpha(const InnovationSpec& spec);
bool is_symmetric_stable(const InnovationSpec& spec);

std::complex<double> stable_cf(const StableParams& params, double lambda);

/// Chambers-Mallows-Stuck generator with the constants hoisted out of the draw.
class StableSampler {
 public:
  explicit StableSampler(const StableParams& params);
  double operator()(RandomStream& rng) const;

 private:
  enum class Branch { Gaussian, Cauchy, SymmetricGeneral, SkewedGeneral, SkewedUnit };
  StableParams params_;
  Branch branch_;
  double inv_alpha_ = 0.0;
  double exponent_ = 0.0;  // (1 - alpha) / alpha
  double shift_b_ = 0.0;   // B = atan(eta tan(pi alpha / 2)) / alpha
  double scale_s_ = 1.0;   // (1 + eta^2 tan^2(pi alpha / 2))^{1 / (2 alpha)}
  double skew_ = 0.0;      // eta in the Samorodnitsky-Taqqu sign convention (alpha = 1)
};

double sample_stable(const StableParams& params, RandomStream& rng);
double sample_innovation(const InnovationSpec& spec, RandomStream& rng);

/// Fills `out` with consecutive innovations drawn from `rng` in index order.
void sample_innovations(const InnovationSpec& spec, RandomStream& rng, std::span<double> out);

/// Density of a symmetric (eta = 0) stable law by Fourier inversion,
/// (1/pi) int_0^inf cos(lambda (x - mu)) exp(-(sigma lambda)^alpha) dlambda, with
/// absolute error below 1e-10. Far in the tails the convergent (alpha < 1) or
/// asymptotic (1 < alpha < 2) power series replaces the oscillatory integral.
double stable_pdf(const StableParams& params, double x);

/// f(u) - f(0) for the SaS density with index alpha and scale sigma, computed
/// without cancellation for small u.
double sas_pdf_increment(double alpha, double sigma, double u);

/// lim x^alpha P(eps > x) for standard SaS eps:
/// (1/2) (1 - alpha) / (Gamma(2 - alpha) cos(pi alpha / 2)). Rejects alpha = 1.
double sas_tail_constant(double alpha);

}  // namespace lmqf
