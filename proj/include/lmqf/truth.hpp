#pragma once

#include <string>
#include <string_view>

#include "lmqf/estimator.hpp"

namespace lmqf {

/// int f^2 for the SaS marginal with characteristic function exp(-S |u|^alpha):
/// Gamma(1/alpha) / (pi alpha (2 S)^{1/alpha}).
double true_qf_closed(double alpha, double alpha_norm_sum);

/// The same quantity as (1/2pi) int exp(-2 S |lambda|^alpha) dlambda by adaptive quadrature.
double true_qf_quadrature(double alpha, double alpha_norm_sum);

enum class LimitCaseId { Case1, Case2, Case3 };

std::string_view to_string(LimitCaseId id);

/// Region of the heavy-tailed limit theorem for T_n - E T_n:
///   Case1: 1 < alpha < 2, 1/alpha < beta < 1   -> n^{beta - 1/alpha}, SaS index alpha
///   Case2: 1 < alpha < 2, 1 < beta < 2/alpha   -> n^{1 - 1/(alpha beta)}, index alpha beta
///   Case3: 0 < alpha < 1, 1 < alpha beta < 2   -> n^{1 - 1/(alpha beta)}, index alpha beta
struct LimitCase {
  LimitCaseId case_id = LimitCaseId::Case1;
  double rate_exponent = 0.0;
  double limit_index = 0.0;
};

/// Throws NotCoveredError on boundaries and outside all three regions.
LimitCase classify_limit(double alpha, double beta);

/// {c0^alpha (alpha beta - 1) / (Gamma(2 - alpha beta) |cos(pi alpha beta / 2)| beta^{alpha beta})}^{1/(alpha beta)}
/// for 1 < alpha beta < 2.
double sigma_tilde(double alpha, double beta, double c0);

struct CfConstants {
  double plus = 0.0;
  double minus = 0.0;
};

/// c_f^{+-} = 2 sigma_tilde int_0^inf (f_inf(+-u) - f_inf(0)) u^{-(1 + 1/beta)} du, where f_inf is
/// the SaS density with scale (2 S)^{1/alpha}. Only Case2 and Case3 parameters are accepted.
CfConstants c_f_constants(double alpha, double beta, double alpha_norm_sum, double c0 = 1.0);

enum class BandwidthPurpose { LimitTheorem, CenteringReplacement };

struct BandwidthCheck {
  bool ok = true;
  /// Binding condition, e.g. "c > (alpha*beta-1)/(2*alpha*beta)"; empty when ok.
  std::string condition;
  double exponent = 0.0;            // c in h_n = n^{-c}
  double required_exponent = 0.0;   // lower bound on c from the case condition
  /// Case1 limit-theorem bound is reported at eta -> 0; any admissible eta > 0 tightens it.
  bool eta_boundary = false;
};

/// Checks the asymptotic bandwidth conditions for h_n = n^{-c}: n h_n -> infinity
/// (c < 1) plus the case condition for the limit theorem, or the condition under
/// which E T_n may be replaced by int f^2. Fixed bandwidths are rejected.
BandwidthCheck validate_bandwidth(double alpha, double beta, const BandwidthRule& rule, BandwidthPurpose purpose);

}  // namespace lmqf
