#pragma once

#include <cstdint>
#include <random>
#include <vector>

namespace dissolve::sampling {

/// Shifted Weibull distribution. Lengths in whatever unit the caller uses.
struct WeibullParams {
  double lambda = 1.0;  ///< scale
  double k = 1.0;       ///< shape
  double x0 = 0.0;      ///< shift

  /// Throws std::invalid_argument unless lambda > 0, k > 0, x0 >= 0.
  void validate() const;
  bool operator==(const WeibullParams&) const = default;
};

double pdf(double x, const WeibullParams& p);
double cdf(double x, const WeibullParams& p);
/// Q(y) = lambda (-ln(1 - y))^(1/k) + x0 for 0 <= y < 1.
double quantile(double y, const WeibullParams& p);
/// lambda Gamma(1 + 1/k) + x0.
double mean(const WeibullParams& p);

/// Generator for one seeded stream: mt19937_64 keyed by splitmix64(seed, stream).
std::mt19937_64 make_engine(std::uint64_t seed, std::uint64_t stream = 0);
/// Uniform double in [0, 1) from the top 53 bits of one draw.
double uniform01(std::mt19937_64& engine);

/// n radii R_i = Q(y_i), reproducible from (seed, stream).
std::vector<double> sample_radii(std::size_t n, const WeibullParams& p, std::uint64_t seed,
                                 std::uint64_t stream = 0);

}  // namespace dissolve::sampling
