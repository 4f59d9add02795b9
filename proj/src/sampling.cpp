#include "dissolve/sampling.hpp"

#include <cmath>
#include <stdexcept>

namespace dissolve::sampling {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

}  // namespace

void WeibullParams::validate() const {
  if (!(lambda > 0.0) || !std::isfinite(lambda)) throw std::invalid_argument("weibull lambda must be positive");
  if (!(k > 0.0) || !std::isfinite(k)) throw std::invalid_argument("weibull k must be positive");
  if (!(x0 >= 0.0) || !std::isfinite(x0)) throw std::invalid_argument("weibull x0 must be non-negative");
}

double pdf(double x, const WeibullParams& p) {
  if (x < p.x0) return 0.0;
  const double z = (x - p.x0) / p.lambda;
  return p.k / p.lambda * std::pow(z, p.k - 1.0) * std::exp(-std::pow(z, p.k));
}

double cdf(double x, const WeibullParams& p) {
  if (x <= p.x0) return 0.0;
  return -std::expm1(-std::pow((x - p.x0) / p.lambda, p.k));
}

double quantile(double y, const WeibullParams& p) {
  if (!(y >= 0.0 && y < 1.0)) throw std::domain_error("weibull quantile needs 0 <= y < 1");
  return p.lambda * std::pow(-std::log1p(-y), 1.0 / p.k) + p.x0;
}

double mean(const WeibullParams& p) { return p.lambda * std::tgamma(1.0 + 1.0 / p.k) + p.x0; }

std::mt19937_64 make_engine(std::uint64_t seed, std::uint64_t stream) {
  return std::mt19937_64(splitmix64(seed ^ splitmix64(stream)));
}

double uniform01(std::mt19937_64& engine) {
  return static_cast<double>(engine() >> 11) * 0x1.0p-53;
}

std::vector<double> sample_radii(std::size_t n, const WeibullParams& p, std::uint64_t seed,
                                 std::uint64_t stream) {
  p.validate();
  if (n == 0) throw std::invalid_argument("sample count must be at least 1");
  auto engine = make_engine(seed, stream);
  std::vector<double> r;
  r.reserve(n);
  while (r.size() < n) {
    const double y = uniform01(engine);
    // y = 0 maps onto x0 itself; radii must exceed the shift
    if (y == 0.0) continue;
    r.push_back(quantile(y, p));
  }
  return r;
}

}  // namespace dissolve::sampling
