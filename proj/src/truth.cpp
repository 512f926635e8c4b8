#include "lmqf/truth.hpp"

#include <cmath>
#include <numbers>

#include "lmqf/error.hpp"
#include "lmqf/quadrature.hpp"
#include "lmqf/special.hpp"
#include "lmqf/stable.hpp"

namespace lmqf {

namespace {

constexpr double kPi = std::numbers::pi;

void require_truth_args(double alpha, double s) {
  require(alpha > 0.0 && alpha <= 2.0, "alpha must lie in (0, 2]");
  require(s >= 1.0, "alpha-norm sum must be at least 1");
}

}  // namespace

double true_qf_closed(double alpha, double s) {
  require_truth_args(alpha, s);
  return lanczos_gamma(1.0 / alpha) / (kPi * alpha * std::pow(2.0 * s, 1.0 / alpha));
}

double true_qf_quadrature(double alpha, double s) {
  require_truth_args(alpha, s);
  // exp(-2 S lambda^alpha) < e^{-40} beyond the cutoff.
  const double upper = std::pow(40.0 / (2.0 * s), 1.0 / alpha);
  auto integrand = [=](double lambda) { return std::exp(-2.0 * s * std::pow(lambda, alpha)); };
  // Dyadic panels toward 0 resolve the cusp at the origin when alpha < 1.
  CompensatedSum sum;
  double hi = upper;
  while (hi > 1e-17 * sum.value()) {
    const double lo = hi / 2.0;
    sum += integrate(integrand, lo, hi, 1e-13, 8).value;
    hi = lo;
  }
  sum += hi;  // integrand is at most 1 on [0, hi]
  return sum.value() / kPi;
}

std::string_view to_string(LimitCaseId id) {
  switch (id) {
    case LimitCaseId::Case1:
      return "Case1";
    case LimitCaseId::Case2:
      return "Case2";
    case LimitCaseId::Case3:
      return "Case3";
  }
  return "unknown";
}

LimitCase classify_limit(double alpha, double beta) {
  const double ab = alpha * beta;
  if (alpha > 1.0 && alpha < 2.0 && beta > 1.0 / alpha && beta < 1.0) {
    return {LimitCaseId::Case1, beta - 1.0 / alpha, alpha};
  }
  if (alpha > 1.0 && alpha < 2.0 && beta > 1.0 && beta < 2.0 / alpha) {
    return {LimitCaseId::Case2, 1.0 - 1.0 / ab, ab};
  }
  if (alpha > 0.0 && alpha < 1.0 && ab > 1.0 && ab < 2.0) {
    return {LimitCaseId::Case3, 1.0 - 1.0 / ab, ab};
  }
  throw NotCoveredError("(alpha, beta) = (" + std::to_string(alpha) + ", " + std::to_string(beta) +
                        ") is not covered by any limit case");
}

double sigma_tilde(double alpha, double beta, double c0) {
  const double ab = alpha * beta;
  require(ab > 1.0 && ab < 2.0, "sigma_tilde needs 1 < alpha*beta < 2");
  require(c0 > 0.0, "c0 must be positive");
  const double inner = std::pow(c0, alpha) * (ab - 1.0) /
                       (lanczos_gamma(2.0 - ab) * std::abs(std::cos(kPi * ab / 2.0)) * std::pow(beta, ab));
  return std::pow(inner, 1.0 / ab);
}

CfConstants c_f_constants(double alpha, double beta, double s, double c0) {
  const LimitCase limit = classify_limit(alpha, beta);
  require(limit.case_id != LimitCaseId::Case1, "c_f constants are defined for Case2 and Case3 only");
  require(s >= 1.0, "alpha-norm sum must be at least 1");
  const double scale = std::pow(2.0 * s, 1.0 / alpha);
  const double inv_beta = 1.0 / beta;

  // (0, 1]: f_inf(u) - f_inf(0) = O(u^2), so the integrand is O(u^{1 - 1/beta}).
  auto near = [&](double u) { return sas_pdf_increment(alpha, scale, u) * std::pow(u, -1.0 - inv_beta); };
  CompensatedSum sum;
  double hi = 1.0;
  for (int k = 0; k < 40; ++k) {
    const double lo = hi / 2.0;
    sum += integrate(near, lo, hi, 1e-11, 6).value;
    hi = lo;
  }
  // (1, inf) with u = e^v: du u^{-(1 + 1/beta)} = e^{-v/beta} dv.
  auto far = [&](double v) { return sas_pdf_increment(alpha, scale, std::exp(v)) * std::exp(-v * inv_beta); };
  const double v_max = 45.0 * beta;
  sum += integrate_panels(far, 0.0, v_max, 1.0, 1e-11, 6).value;
  // The remainder beyond v_max is below f_inf(0) beta e^{-45}.

  const double integral = sum.value();
  const double value = 2.0 * sigma_tilde(alpha, beta, c0) * integral;
  return {value, value};
}

BandwidthCheck validate_bandwidth(double alpha, double beta, const BandwidthRule& rule, BandwidthPurpose purpose) {
  const auto exponent = power_exponent(rule);
  require(exponent.has_value(), "bandwidth validation needs a power rule h_n = n^{-c}");
  const LimitCase limit = classify_limit(alpha, beta);
  const double ab = alpha * beta;
  BandwidthCheck out;
  out.exponent = *exponent;
  if (out.exponent >= 1.0) {
    out.ok = false;
    out.condition = "n*h_n -> infinity requires c < 1";
    out.required_exponent = 0.0;
    return out;
  }
  const bool case1 = limit.case_id == LimitCaseId::Case1;
  if (purpose == BandwidthPurpose::LimitTheorem) {
    if (case1) {
      out.required_exponent = (ab - 1.0) * (2.0 - alpha) / (4.0 * alpha);
      out.condition = "c > (alpha*beta-1)*(2-alpha)/(4*alpha) + eta*beta/4 (eta -> 0)";
      out.eta_boundary = true;
    } else {
      out.required_exponent = (ab - 1.0) * (2.0 - ab) / (4.0 * ab);
      out.condition = "c > (alpha*beta-1)*(2-alpha*beta)/(4*alpha*beta)";
    }
  } else {
    if (case1) {
      out.required_exponent = (ab - 1.0) / (2.0 * alpha);
      out.condition = "c > (alpha*beta-1)/(2*alpha)";
    } else {
      out.required_exponent = (ab - 1.0) / (2.0 * ab);
      out.condition = "c > (alpha*beta-1)/(2*alpha*beta)";
    }
  }
  out.ok = out.exponent > out.required_exponent;
  if (out.ok) out.condition.clear();
  return out;
}

}  // namespace lmqf
