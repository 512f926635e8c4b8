#pragma once

#include <cstdint>

namespace lmqf {

/// Gamma function by the Lanczos approximation (g = 7, 9 coefficients), with the
/// reflection formula below 1/2. Relative error stays under 1e-13 on the
/// arguments this project uses (0 < x < 20).
double lanczos_gamma(double x);

/// sum_{i=first}^{last} i^{-s}, accumulated from the small end with compensation.
double power_sum(double s, std::uint64_t first, std::uint64_t last);

/// Euler-Maclaurin estimate of sum_{i>=k} i^{-s} for s > 1, k >= 1, using the
/// integral, the half end-point term and Bernoulli corrections through B6.
double euler_maclaurin_tail(double s, std::uint64_t k);

/// Magnitude of the first omitted (B8) Euler-Maclaurin correction at k.
double euler_maclaurin_error_bound(double s, std::uint64_t k);

/// sum_{i>=first} i^{-s} for s > 1, to about 1e-12 relative: a direct partial sum
/// up to a cutoff where the Euler-Maclaurin remainder is negligible, plus the tail.
double power_sum_from(double s, std::uint64_t first);

}  // namespace lmqf
