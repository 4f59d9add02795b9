#include <algorithm>
#include <cmath>
#include <numeric>

#include <doctest.h>

#include "dissolve/sampling.hpp"

using namespace dissolve::sampling;

namespace {

const WeibullParams kParams{5.4, 1.9, 0.0};

}  // namespace

TEST_CASE("Weibull closed forms") {
  CHECK(std::abs(quantile(0.5, kParams) - 4.4526410585043283) < 1e-13);
  CHECK(std::abs(mean(kParams) - 4.7917619058158562) < 1e-13);
  CHECK(cdf(0.0, kParams) == 0.0);
  CHECK(pdf(-1.0, kParams) == 0.0);
  const WeibullParams shifted{5.4, 1.9, 2.0};
  CHECK(quantile(0.0, shifted) == 2.0);
  CHECK(mean(shifted) == doctest::Approx(mean(kParams) + 2.0));
}

TEST_CASE("F(Q(y)) = y") {
  auto rng = make_engine(99);
  for (int k = 0; k < 1000; ++k) {
    const double y = uniform01(rng);
    CHECK(std::abs(cdf(quantile(y, kParams), kParams) - y) < 1e-12);
  }
}

TEST_CASE("pdf integrates to the cdf") {
  double integral = 0.0;
  const double h = 1e-4;
  for (double x = 0.5 * h; x < 8.0; x += h) integral += pdf(x, kParams) * h;
  CHECK(integral == doctest::Approx(cdf(8.0, kParams)).epsilon(1e-6));
}

TEST_CASE("validation") {
  CHECK_THROWS_AS((WeibullParams{0.0, 1.0, 0.0}.validate()), std::invalid_argument);
  CHECK_THROWS_AS((WeibullParams{1.0, -1.0, 0.0}.validate()), std::invalid_argument);
  CHECK_THROWS_AS((WeibullParams{1.0, 1.0, -0.1}.validate()), std::invalid_argument);
}

TEST_CASE("seeded streams are reproducible and distinct") {
  const auto a = sample_radii(1000, kParams, 42);
  CHECK(a == sample_radii(1000, kParams, 42));
  CHECK(a != sample_radii(1000, kParams, 43));
  CHECK(a != sample_radii(1000, kParams, 42, 1));
  auto rng = make_engine(5);
  for (int k = 0; k < 10000; ++k) {
    const double u = uniform01(rng);
    CHECK((u >= 0.0 && u < 1.0));
  }
}

TEST_CASE("one million samples: mean and Kolmogorov-Smirnov") {
  const std::size_t n = 1000000;
  std::vector<double> x = sample_radii(n, kParams, 2024);
  const double m = std::accumulate(x.begin(), x.end(), 0.0) / static_cast<double>(n);
  CHECK(std::abs(m - mean(kParams)) / mean(kParams) < 0.01);
  std::sort(x.begin(), x.end());
  double d = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double f = cdf(x[i], kParams);
    d = std::max({d, f - static_cast<double>(i) / n, static_cast<double>(i + 1) / n - f});
  }
  // asymptotic 1% critical value
  CHECK(d < 1.6276 / std::sqrt(static_cast<double>(n)));
}
