#pragma once

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <cmath>
#include <limits>

#include "lmqf/summation.hpp"

namespace lmqf {

struct QuadratureResult {
  double value = 0.0;
  double error = 0.0;  // estimated absolute error
};

/// Adaptive 15-point Gauss-Kronrod on [a, b]. Subdivision stops once the
/// estimated error is below `rel_tol` times the integral of |f|.
template <class F>
QuadratureResult integrate(F&& f, double a, double b, double rel_tol = 1e-13, unsigned max_depth = 15) {
  QuadratureResult out;
  double l1 = 0.0;
  out.value = boost::math::quadrature::gauss_kronrod<double, 15>::integrate(f, a, b, max_depth, rel_tol,
                                                                            &out.error, &l1);
  return out;
}

/// Integrates over [a, b] split into consecutive panels of width `panel`; each
/// panel is integrated adaptively (at most `max_depth` bisections) and the
/// panel results are summed in order.
/// Suited to oscillatory integrands when `panel` is about one period.
template <class F>
QuadratureResult integrate_panels(F&& f, double a, double b, double panel, double rel_tol = 1e-13,
                                  unsigned max_depth = 8) {
  QuadratureResult out;
  if (!(b > a)) return out;
  CompensatedSum value;
  double error = 0.0;
  const double count = std::ceil((b - a) / panel);
  const auto panels = static_cast<long long>(count);
  for (long long k = 0; k < panels; ++k) {
    const double lo = a + static_cast<double>(k) * panel;
    const double hi = (k + 1 == panels) ? b : a + static_cast<double>(k + 1) * panel;
    const auto piece = integrate(f, lo, hi, rel_tol, max_depth);
    value += piece.value;
    error += piece.error;
  }
  out.value = value.value();
  out.error = error;
  return out;
}

}  // namespace lmqf
