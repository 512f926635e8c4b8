#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <complex>
#include <vector>

#include "lmqf/error.hpp"
#include "lmqf/quadrature.hpp"
#include "lmqf/random.hpp"
#include "lmqf/stable.hpp"
#include "lmqf/summation.hpp"

using namespace lmqf;

namespace {

std::vector<double> draw(const StableParams& p, std::size_t count, std::uint64_t seed) {
  RandomStream rng(seed, 11);
  StableSampler sampler(p);
  std::vector<double> out(count);
  for (double& x : out) x = sampler(rng);
  return out;
}

struct EmpiricalCf {
  std::complex<double> value;
  double se;
};

EmpiricalCf empirical_cf(const std::vector<double>& xs, double lambda) {
  CompensatedSum re, im, re2, im2;
  for (double x : xs) {
    const double c = std::cos(lambda * x), s = std::sin(lambda * x);
    re += c;
    im += s;
    re2 += c * c;
    im2 += s * s;
  }
  const double n = static_cast<double>(xs.size());
  const double mr = re.value() / n, mi = im.value() / n;
  const double var = (re2.value() / n - mr * mr) + (im2.value() / n - mi * mi);
  return {{mr, mi}, std::sqrt(var / n)};
}

// P(X > x) for standard SaS from the termwise-integrated density series.
double sas_tail_probability(double alpha, double x) {
  double sum = 0.0;
  double previous = INFINITY;
  for (int k = 1; k < 60; ++k) {
    const double magnitude = std::tgamma(alpha * k) / std::tgamma(k + 1.0) * std::pow(x, -alpha * k);
    if (magnitude > previous || magnitude < 1e-18) break;
    previous = magnitude;
    sum += (k % 2 == 1 ? 1.0 : -1.0) * magnitude * std::sin(k * M_PI * alpha / 2.0);
  }
  return sum / M_PI;
}

}  // namespace

TEST_CASE("stable_cf closed forms") {
  CHECK(stable_cf({2.0, 1.0, 0.0, 0.0}, 1.0).real() == doctest::Approx(std::exp(-1.0)).epsilon(1e-15));
  CHECK(stable_cf({1.5, 1.0, 0.0, 0.0}, 2.0).real() == doctest::Approx(std::exp(-std::pow(2.0, 1.5))).epsilon(1e-15));
  CHECK(std::exp(-std::pow(2.0, 1.5)) == doctest::Approx(0.059105).epsilon(1e-5));
  for (const StableParams& p : {StableParams{1.0, 2.0, 0.7, 3.0}, StableParams{0.4, 1.0, -1.0, 0.0},
                                StableParams{1.9, 0.5, 0.3, -1.0}}) {
    CHECK(stable_cf(p, 0.0) == std::complex<double>(1.0, 0.0));
  }
}

TEST_CASE("stable_cf symmetries") {
  for (const StableParams& p : {StableParams{1.0, 2.0, 0.7, 3.0}, StableParams{0.4, 1.0, -1.0, 0.5},
                                StableParams{1.9, 0.5, 0.3, -1.0}, StableParams{1.5, 1.0, 0.0, 0.0}}) {
    for (double lambda : {0.01, 0.3, 1.0, 2.5, 17.0}) {
      const auto plus = stable_cf(p, lambda);
      const auto minus = stable_cf(p, -lambda);
      CHECK(minus.real() == doctest::Approx(plus.real()).epsilon(1e-14));
      CHECK(minus.imag() == doctest::Approx(-plus.imag()).epsilon(1e-14));
      CHECK(std::abs(plus) <= 1.0);
    }
  }
  for (double alpha : {0.3, 1.0, 1.5, 2.0}) {
    const StableParams p{alpha, 1.7, 0.0, 0.0};
    for (double lambda : {-3.0, -0.2, 0.5, 4.0}) {
      const auto v = stable_cf(p, lambda);
      CHECK(v.imag() == 0.0);
      CHECK(v.real() == std::exp(-std::pow(1.7 * std::abs(lambda), alpha)));
    }
  }
}

TEST_CASE("gaussian branch has variance 2 sigma^2") {
  const auto xs = draw({2.0, 1.0, 0.0, 0.0}, 1000000, 1);
  CompensatedSum sq;
  for (double x : xs) sq += x * x;
  CHECK(std::abs(sq.value() / xs.size() - 2.0) < 0.01);
}

TEST_CASE("cauchy median sits at the location") {
  auto xs = draw({1.0, 1.0, 0.0, 5.0}, 1000000, 2);
  std::nth_element(xs.begin(), xs.begin() + xs.size() / 2, xs.end());
  CHECK(std::abs(xs[xs.size() / 2] - 5.0) < 0.01);
}

TEST_CASE("empirical characteristic function matches stable_cf") {
  const auto xs = draw({1.5, 1.0, 0.0, 0.0}, 1000000, 3);
  const auto at_one = empirical_cf(xs, 1.0);
  CHECK(std::abs(at_one.value - std::exp(-1.0)) <= 3.0 * at_one.se);
  const auto at_two = empirical_cf(xs, 2.0);
  CHECK(std::abs(at_two.value - stable_cf({1.5, 1.0, 0.0, 0.0}, 2.0)) <= 3.0 * at_two.se);
  const double n = static_cast<double>(xs.size());
  for (double lambda : {0.1, 0.5, 1.0, 2.0}) {
    CHECK(std::abs(empirical_cf(xs, lambda).value - stable_cf({1.5, 1.0, 0.0, 0.0}, lambda)) <= 4.0 / std::sqrt(n));
  }
}

TEST_CASE("skewed and alpha = 1 branches match their characteristic functions") {
  for (const StableParams& p : {StableParams{1.0, 1.0, 0.8, 0.0}, StableParams{1.0, 2.0, -0.5, 1.0},
                                StableParams{0.7, 1.0, 0.5, 0.0}, StableParams{1.6, 0.5, -1.0, 2.0},
                                StableParams{0.5, 3.0, 0.0, 7.0}}) {
    const auto xs = draw(p, 400000, 4);
    for (double lambda : {0.2, 0.7, 1.5}) {
      const auto e = empirical_cf(xs, lambda);
      CAPTURE(p.alpha);
      CAPTURE(p.eta);
      CAPTURE(lambda);
      CHECK(std::abs(e.value - stable_cf(p, lambda)) <= 4.5 * e.se);
    }
  }
}

TEST_CASE("sum stability") {
  const double alpha = 1.2;
  const auto a = draw({alpha, 1.0, 0.0, 0.0}, 500000, 5);
  const auto b = draw({alpha, 1.0, 0.0, 0.0}, 500000, 6);
  std::vector<double> sum(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) sum[i] = a[i] + b[i];
  const StableParams doubled{alpha, std::pow(2.0, 1.0 / alpha), 0.0, 0.0};
  for (double lambda : {0.25, 0.5, 1.0}) {
    const auto e = empirical_cf(sum, lambda);
    CHECK(std::abs(e.value - stable_cf(doubled, lambda)) <= 4.0 * e.se);
  }
}

TEST_CASE("innovations") {
  RandomStream rng(7, 1);
  const TwoSidedPareto pareto{1.5, 0.5, 1.0};
  const int n = 1000000;
  int above = 0;
  for (int i = 0; i < n; ++i) above += sample_innovation(pareto, rng) > 2.0;
  CHECK(std::abs(static_cast<double>(above) / n - 0.5 * std::pow(2.0, -1.5)) < 0.002);
  CHECK(0.5 * std::pow(2.0, -1.5) == doctest::Approx(0.17678).epsilon(1e-4));

  const TwoSidedPareto one_sided{0.8, 1.0, 2.5};
  std::vector<double> xs(100000);
  sample_innovations(one_sided, rng, xs);
  CHECK(*std::min_element(xs.begin(), xs.end()) >= 2.5);

  const StandardSymmetricStable sas{1.5};
  CompensatedSum signs;
  for (int i = 0; i < n; ++i) signs += sample_innovation(sas, rng) > 0.0 ? 1.0 : -1.0;
  CHECK(std::abs(signs.value() / n) < 0.003);

  CHECK(pareto.c_plus() == 0.5);
  CHECK(TwoSidedPareto{2.0 / 3.0, 0.25, 8.0}.c_minus() == doctest::Approx(3.0).epsilon(1e-14));
}

TEST_CASE("innovation validation") {
  CHECK_THROWS_AS(validate(StandardSymmetricStable{2.0}), ValidationError);
  CHECK_THROWS_AS(validate(StandardSymmetricStable{0.0}), ValidationError);
  CHECK_THROWS_AS(validate(TwoSidedPareto{1.5, 1.2, 1.0}), ValidationError);
  CHECK_THROWS_AS(validate(TwoSidedPareto{1.5, 0.5, 0.0}), ValidationError);
  CHECK_NOTHROW(validate(TwoSidedPareto{1.5, 1.0, 1.0}));
  CHECK_THROWS_AS(StableParams({2.1, 1.0, 0.0, 0.0}).validate(), ValidationError);
  CHECK_THROWS_AS(StableParams({1.0, -1.0, 0.0, 0.0}).validate(), ValidationError);
  CHECK_THROWS_AS(StableParams({1.0, 1.0, 1.5, 0.0}).validate(), ValidationError);
  CHECK(StableParams{1.5, 1.0, 0.0, 0.0}.symmetric());
  CHECK_FALSE(StableParams{1.5, 1.0, 0.0, 1.0}.symmetric());
  CHECK(StableParams{1.5, 1.0, 0.3, 1.0}.standard());
}

TEST_CASE("stable_pdf closed forms") {
  CHECK(stable_pdf({1.0, 1.0, 0.0, 0.0}, 0.0) == doctest::Approx(1.0 / M_PI).epsilon(1e-12));
  CHECK(stable_pdf({2.0, 1.0, 0.0, 0.0}, 0.0) == doctest::Approx(0.5 / std::sqrt(M_PI)).epsilon(1e-11));
  CHECK(stable_pdf({2.0, 1.0, 0.0, 0.0}, 1.3) ==
        doctest::Approx(std::exp(-1.3 * 1.3 / 4.0) / (2.0 * std::sqrt(M_PI))).epsilon(1e-10));
  CHECK(stable_pdf({1.0, 2.0, 0.0, 1.0}, 3.0) == doctest::Approx(2.0 / (M_PI * (4.0 + 4.0))).epsilon(1e-12));
  // Value at the origin: Gamma(1 + 1/alpha) / (pi sigma).
  for (double alpha : {0.3, 0.5, 0.9, 1.2, 1.5, 1.9}) {
    CHECK(stable_pdf({alpha, 1.3, 0.0, 0.0}, 0.0) ==
          doctest::Approx(std::tgamma(1.0 + 1.0 / alpha) / (M_PI * 1.3)).epsilon(1e-11));
  }
  CHECK_THROWS_AS(stable_pdf({1.5, 1.0, 0.2, 0.0}, 0.0), ValidationError);
}

TEST_CASE("stable_pdf is nonnegative, symmetric and normalized") {
  for (double alpha : {0.5, 1.0, 1.5, 1.95}) {
    const StableParams p{alpha, 1.0, 0.0, 0.0};
    for (int i = 0; i < 1000; ++i) {
      const double x = -50.0 + 0.1 * i + 0.0137;
      const double f = stable_pdf(p, x);
      CHECK(f >= 0.0);
      CHECK(std::abs(f - stable_pdf(p, -x)) <= 1e-14 * std::max(f, 1e-300));
    }
  }
  // Mass on [-200, 200] plus the two exact tails outside.
  const StableParams p{1.5, 1.0, 0.0, 0.0};
  const auto inside = integrate_panels([&](double x) { return stable_pdf(p, x); }, -200.0, 200.0, 1.0, 1e-12);
  const double outside = 2.0 * sas_tail_probability(1.5, 200.0);
  CHECK(outside > 1e-4);
  CHECK(std::abs(inside.value + outside - 1.0) < 1e-6);
}

TEST_CASE("stable_pdf agrees with the series on both sides of the switch") {
  for (double alpha : {0.2, 0.5, 0.7, 0.9, 0.99, 1.2, 1.5, 1.9}) {
    for (double x : {0.99999999, 1.00000001, 9.99999999, 10.00000001}) {
      const StableParams p{alpha, 1.0, 0.0, 0.0};
      const double lo = stable_pdf(p, x * 0.9999999);
      const double hi = stable_pdf(p, x);
      CAPTURE(alpha);
      CAPTURE(x);
      CHECK(std::abs(hi - lo) <= 1e-6 * lo);
    }
  }
}

TEST_CASE("sas_pdf_increment") {
  for (double alpha : {0.5, 1.0, 1.5}) {
    for (double u : {1e-6, 0.01, 0.7, 3.0, 40.0}) {
      const StableParams p{alpha, 2.0, 0.0, 0.0};
      const double direct = stable_pdf(p, u) - stable_pdf(p, 0.0);
      // The direct difference cancels to about 1e-16 absolute.
      CHECK(std::abs(sas_pdf_increment(alpha, 2.0, u) - direct) <= 1e-8 * std::abs(direct) + 1e-15);
      CHECK(sas_pdf_increment(alpha, 2.0, u) <= 0.0);
    }
  }
  CHECK(sas_pdf_increment(1.5, 1.0, 0.0) == 0.0);
  CHECK(std::abs(sas_pdf_increment(1.5, 1.0, 1e-4)) < 1e-8);
}

TEST_CASE("sas tail constant") {
  CHECK(sas_tail_constant(0.5) == doctest::Approx(0.398942).epsilon(2e-6));
  CHECK(sas_tail_constant(1.5) == doctest::Approx(0.199471).epsilon(2e-6));
  for (double alpha = 0.05; alpha < 2.0; alpha += 0.05) {
    if (std::abs(alpha - 1.0) < 1e-9) continue;
    CHECK(sas_tail_constant(alpha) > 0.0);
  }
  CHECK_THROWS_AS(sas_tail_constant(1.0), ValidationError);
  CHECK_THROWS_AS(sas_tail_constant(2.0), ValidationError);
  // x^alpha P(X > x) -> c_+ along the exact tail.
  for (double alpha : {0.5, 1.5}) {
    CHECK(std::pow(1e8, alpha) * sas_tail_probability(alpha, 1e8) ==
          doctest::Approx(sas_tail_constant(alpha)).epsilon(1e-3));
  }
}

TEST_CASE("monte carlo tail frequencies match the exact tail") {
  for (double alpha : {0.5, 1.5}) {
    const auto xs = draw({alpha, 1.0, 0.0, 0.0}, 10000000, 8);
    for (double x : {10.0, 30.0, 1000.0}) {
      const double p = sas_tail_probability(alpha, x);
      const double expected = p * xs.size();
      if (expected < 1000.0) continue;
      const auto count = std::count_if(xs.begin(), xs.end(), [x](double v) { return v > x; });
      CAPTURE(alpha);
      CAPTURE(x);
      CHECK(std::abs(static_cast<double>(count) - expected) <= 4.0 * std::sqrt(expected));
    }
  }
}
