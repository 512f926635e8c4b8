#include "lmqf/stable.hpp"

#include <boost/math/quadrature/tanh_sinh.hpp>
#include <boost/math/special_functions/gamma.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "lmqf/error.hpp"
#include "lmqf/quadrature.hpp"
#include "lmqf/special.hpp"

namespace lmqf {

namespace {

constexpr double kPi = std::numbers::pi;

// exp(-Lambda^alpha) at the cutoff; the neglected tail is below 1e-14.
constexpr double kCutoffLog = 36.8;

double cutoff(double alpha) { return std::pow(kCutoffLog, 1.0 / alpha); }

struct SeriesResult {
  double value = 0.0;
  bool converged = false;
};

// (1/pi) sum_k (-1)^{k+1} Gamma(k alpha + 1) / k! sin(k pi alpha / 2) z^{-k alpha - 1}.
// Stops when the terms are negligible (converged) or start to grow (the series
// is only asymptotic for alpha > 1).
SeriesResult tail_series(double alpha, double z) {
  SeriesResult out;
  const double log_z = std::log(z);
  CompensatedSum sum;
  double previous = std::numeric_limits<double>::infinity();
  double largest = 0.0;
  for (int k = 1; k <= 400; ++k) {
    const double log_magnitude =
        boost::math::lgamma(k * alpha + 1.0) - boost::math::lgamma(k + 1.0) - (k * alpha + 1.0) * log_z;
    const double magnitude = std::exp(log_magnitude);
    if (magnitude > previous) break;
    previous = magnitude;
    largest = std::max(largest, magnitude);
    const double sign = (k % 2 == 1) ? 1.0 : -1.0;
    sum += sign * magnitude * std::sin(k * kPi * alpha / 2.0);
    if (magnitude < 1e-17 * std::abs(sum.value()) || magnitude < 1e-300) {
      out.converged = true;
      break;
    }
  }
  out.value = sum.value() / kPi;
  // An asymptotic series is usable when its smallest term is negligible.
  if (!out.converged && previous < 1e-14 * std::abs(out.value)) out.converged = true;
  // Heavy cancellation between terms leaves too few correct digits.
  if (largest > 1e4 * std::abs(sum.value())) out.converged = false;
  return out;
}

// Below this standardized distance the Fourier integral is used directly. For
// alpha < 1 the series converges everywhere; the threshold keeps the Fourier
// integral to at most a few thousand oscillations.
double series_threshold(double alpha) {
  if (alpha > 1.0) return 10.0;
  return std::min(1.0, 4000.0 * 2.0 * kPi / cutoff(alpha));
}

// int_0^Lambda g(lambda) exp(-lambda^alpha) dlambda with |g| <= 2, over panels
// of about one period of g. The first panel carries the lambda^alpha endpoint
// singularity and goes to tanh-sinh.
template <class G>
double fourier_integral(double alpha, double z, G g) {
  const double upper = cutoff(alpha);
  const double panel = z > 0.0 ? std::min(2.0 * kPi / z, upper / 4.0) : upper / 4.0;
  auto integrand = [alpha, &g](double lambda) { return g(lambda) * std::exp(-std::pow(lambda, alpha)); };
  CompensatedSum sum;
  boost::math::quadrature::tanh_sinh<double> endpoint;
  sum += endpoint.integrate(integrand, 0.0, panel, 1e-14);
  const auto panels = static_cast<std::size_t>(std::ceil(upper / panel));
  for (std::size_t k = 1; k < panels; ++k) {
    const double lo = static_cast<double>(k) * panel;
    const double t = std::pow(lo, alpha);
    // int_lo^inf exp(-lambda^alpha) <= (2/alpha) lo^{1-alpha} e^{-t} once t >= 1/alpha.
    if (t * alpha >= 1.0 && 4.0 / alpha * lo / t * std::exp(-t) < 1e-17 * std::abs(sum.value())) break;
    sum += integrate(integrand, lo, std::min(upper, lo + panel), 1e-13, 10).value;
  }
  return sum.value();
}

double fourier_pdf(double alpha, double z) {
  return fourier_integral(alpha, z, [z](double lambda) { return std::cos(lambda * z); }) / kPi;
}

double fourier_increment(double alpha, double z) {
  return fourier_integral(alpha, z, [z](double lambda) {
           const double s = std::sin(0.5 * lambda * z);
           return -2.0 * s * s;
         }) /
         kPi;
}

// Standard SaS density at z >= 0.
double standard_sas_pdf(double alpha, double z) {
  if (alpha == 1.0) return 1.0 / (kPi * (1.0 + z * z));
  if (alpha < 2.0 && z >= series_threshold(alpha)) {
    const auto series = tail_series(alpha, z);
    if (series.converged) return series.value;
  }
  return fourier_pdf(alpha, z);
}

}  // namespace

void StableParams::validate() const {
  require(alpha > 0.0 && alpha <= 2.0, "alpha must lie in (0, 2]");
  require(sigma > 0.0, "sigma must be positive");
  require(eta >= -1.0 && eta <= 1.0, "eta must lie in [-1, 1]");
  require(std::isfinite(mu), "mu must be finite");
}

double TwoSidedPareto::c_plus() const { return p_plus * std::pow(x_m, alpha); }
double TwoSidedPareto::c_minus() const { return (1.0 - p_plus) * std::pow(x_m, alpha); }

void validate(const InnovationSpec& spec) {
  const double alpha = innovation_alpha(spec);
  require(alpha > 0.0 && alpha < 2.0, "innovation alpha must lie in (0, 2)");
  if (const auto* pareto = std::get_if<TwoSidedPareto>(&spec)) {
    require(pareto->p_plus >= 0.0 && pareto->p_plus <= 1.0, "p_plus must lie in [0, 1]");
    require(pareto->x_m > 0.0, "x_m must be positive");
  }
}

double innovation_alpha(const InnovationSpec& spec) {
  return std::visit([](const auto& s) { return s.alpha; }, spec);
}

bool is_symmetric_stable(const InnovationSpec& spec) {
  return std::holds_alternative<StandardSymmetricStable>(spec);
}

std::complex<double> stable_cf(const StableParams& p, double lambda) {
  if (lambda == 0.0) return {1.0, 0.0};
  const double abs_lambda = std::abs(lambda);
  const double omega = (p.alpha == 1.0) ? (2.0 / kPi) * std::log(abs_lambda) : std::tan(kPi * p.alpha / 2.0);
  const double sign = lambda > 0.0 ? 1.0 : -1.0;
  const double magnitude = std::pow(p.sigma * abs_lambda, p.alpha);
  const std::complex<double> exponent(-magnitude, lambda * p.mu + magnitude * p.eta * sign * omega);
  return std::exp(exponent);
}

StableSampler::StableSampler(const StableParams& params) : params_(params) {
  params_.validate();
  const double alpha = params_.alpha;
  inv_alpha_ = 1.0 / alpha;
  exponent_ = (1.0 - alpha) / alpha;
  if (alpha == 2.0) {
    branch_ = Branch::Gaussian;
  } else if (alpha == 1.0) {
    branch_ = params_.eta == 0.0 ? Branch::Cauchy : Branch::SkewedUnit;
    // The alpha = 1 characteristic function above carries the opposite skew sign
    // to Samorodnitsky-Taqqu, whose construction the sampler follows.
    skew_ = -params_.eta;
  } else if (params_.eta == 0.0) {
    branch_ = Branch::SymmetricGeneral;
  } else {
    branch_ = Branch::SkewedGeneral;
    const double t = params_.eta * std::tan(kPi * alpha / 2.0);
    shift_b_ = std::atan(t) / alpha;
    scale_s_ = std::pow(1.0 + t * t, 1.0 / (2.0 * alpha));
  }
}

double StableSampler::operator()(RandomStream& rng) const {
  const double v = kPi * (rng.uniform() - 0.5);
  const double w = -std::log(rng.uniform());
  const double alpha = params_.alpha;
  double x = 0.0;
  switch (branch_) {
    case Branch::Gaussian:
      x = 2.0 * std::sin(v) * std::sqrt(w);
      break;
    case Branch::Cauchy:
      x = std::tan(v);
      break;
    case Branch::SymmetricGeneral:
      x = std::sin(alpha * v) *
          std::exp(exponent_ * std::log(std::cos((1.0 - alpha) * v) / w) - inv_alpha_ * std::log(std::cos(v)));
      break;
    case Branch::SkewedGeneral: {
      const double shifted = alpha * (v + shift_b_);
      x = scale_s_ * std::sin(shifted) / std::pow(std::cos(v), inv_alpha_) *
          std::pow(std::cos(v - shifted) / w, exponent_);
      break;
    }
    case Branch::SkewedUnit: {
      const double half_pi = kPi / 2.0;
      const double lead = half_pi + skew_ * v;
      x = (2.0 / kPi) * (lead * std::tan(v) - skew_ * std::log(half_pi * w * std::cos(v) / lead));
      return params_.sigma * x + (2.0 / kPi) * skew_ * params_.sigma * std::log(params_.sigma) + params_.mu;
    }
  }
  return params_.sigma * x + params_.mu;
}

double sample_stable(const StableParams& params, RandomStream& rng) { return StableSampler(params)(rng); }

double sample_innovation(const InnovationSpec& spec, RandomStream& rng) {
  double value = 0.0;
  sample_innovations(spec, rng, std::span<double>(&value, 1));
  return value;
}

void sample_innovations(const InnovationSpec& spec, RandomStream& rng, std::span<double> out) {
  validate(spec);
  if (const auto* stable = std::get_if<StandardSymmetricStable>(&spec)) {
    const StableSampler sampler(StableParams{stable->alpha, 1.0, 0.0, 0.0});
    for (double& x : out) x = sampler(rng);
    return;
  }
  const auto& pareto = std::get<TwoSidedPareto>(spec);
  const double inv_alpha = 1.0 / pareto.alpha;
  for (double& x : out) {
    const bool positive = rng.uniform() < pareto.p_plus;
    const double magnitude = pareto.x_m * std::pow(rng.uniform(), -inv_alpha);
    x = positive ? magnitude : -magnitude;
  }
}

double stable_pdf(const StableParams& params, double x) {
  params.validate();
  require(params.eta == 0.0, "stable_pdf supports symmetric laws only (eta = 0)");
  const double z = std::abs(x - params.mu) / params.sigma;
  return standard_sas_pdf(params.alpha, z) / params.sigma;
}

double sas_pdf_increment(double alpha, double sigma, double u) {
  StableParams{alpha, sigma, 0.0, 0.0}.validate();
  const double z = std::abs(u) / sigma;
  if (z == 0.0) return 0.0;
  if (alpha < 2.0 && alpha != 1.0 && z >= series_threshold(alpha)) {
    const auto series = tail_series(alpha, z);
    if (series.converged) return (series.value - lanczos_gamma(1.0 / alpha + 1.0) / kPi) / sigma;
  }
  if (alpha == 1.0) return (-z * z / (kPi * (1.0 + z * z))) / sigma;
  return fourier_increment(alpha, z) / sigma;
}

double sas_tail_constant(double alpha) {
  require(alpha > 0.0 && alpha < 2.0, "tail constant needs alpha in (0, 2)");
  require(alpha != 1.0, "tail constant formula is singular at alpha = 1");
  return 0.5 * (1.0 - alpha) / (lanczos_gamma(2.0 - alpha) * std::cos(kPi * alpha / 2.0));
}

}  // namespace lmqf
