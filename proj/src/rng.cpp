#include "crsbench/rng.hpp"

#include <cmath>

#include "crsbench/error.hpp"

namespace crsbench {
namespace {

constexpr std::uint64_t kGolden = 0x9e3779b97f4a7c15ULL;

// SplitMix64 finalizer; full-avalanche 64-bit mix.
std::uint64_t mix64(std::uint64_t z) {
  z += kGolden;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

}  // namespace

RngStream::RngStream(std::uint64_t seed, std::uint64_t stream)
    : seed_(seed), stream_(stream), state_(mix64(mix64(seed) ^ mix64(~stream))) {}

RngStream RngStream::derive(std::uint64_t child) const {
  return RngStream(seed_, mix64(stream_ + kGolden * (child + 1)));
}

std::uint64_t RngStream::next_u64() {
  return mix64(state_ + kGolden * ++counter_);
}

double RngStream::next_double() {
  return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

bool RngStream::sample_bernoulli(double p) {
  if (p < 0.0 || p > 1.0) fail_usage("sample_bernoulli: p outside [0,1]");
  return next_double() < p;
}

double RngStream::sample_exponential(double rate) {
  if (!(rate > 0.0)) fail_usage("sample_exponential: rate must be positive");
  return -std::log1p(-next_double()) / rate;
}

int RngStream::sample_poisson(double lambda) {
  if (lambda < 0.0) fail_usage("sample_poisson: lambda must be nonnegative");
  if (lambda == 0.0) return 0;
  if (lambda > 60.0) fail_unsupported("sample_poisson: lambda > 60 out of scale");
  // CDF inversion: one uniform per draw, bounded worst case, fully deterministic.
  double u = next_double();
  double pmf = std::exp(-lambda);
  double cdf = pmf;
  int j = 0;
  while (u >= cdf && j < 2000) {
    ++j;
    pmf *= lambda / j;
    cdf += pmf;
  }
  return j;
}

int RngStream::sample_truncated_poisson_geq1(double lambda) {
  if (!(lambda > 0.0)) fail_usage("sample_truncated_poisson_geq1: lambda must be positive");
  if (lambda > 60.0) fail_unsupported("sample_truncated_poisson_geq1: lambda > 60 out of scale");
  // Inversion on the shifted CDF of Pois(lambda) | >= 1:
  //   Pr[X <= j | X >= 1] = (P(j;lambda) - e^{-lambda}) / (1 - e^{-lambda}).
  double u = next_double();
  double p0 = std::exp(-lambda);
  double scale = -std::expm1(-lambda);  // 1 - e^{-lambda}
  double pmf = p0 * lambda;             // pmf at 1
  double cdf = pmf / scale;
  int j = 1;
  while (u >= cdf && j < 2000) {
    ++j;
    pmf *= lambda / j;
    cdf += pmf / scale;
  }
  return j;
}

}  // namespace crsbench
