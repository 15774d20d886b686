#include "crsbench/special.hpp"

#include <cmath>

#include "crsbench/error.hpp"

namespace crsbench {
namespace {

// Kahan-compensated accumulator.
struct Kahan {
  double sum = 0.0, c = 0.0;
  void add(double x) {
    double y = x - c;
    double t = sum + y;
    c = (t - sum) - y;
    sum = t;
  }
};

// Lower regularized incomplete gamma P(a,x) by series, x < a+1.
double gamma_p_series(double a, double x) {
  double ap = a;
  double sum = 1.0 / a;
  double del = sum;
  for (int i = 0; i < 10000; ++i) {
    ap += 1.0;
    del *= x / ap;
    sum += del;
    if (std::fabs(del) < std::fabs(sum) * 1e-16) break;
  }
  return sum * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

// Upper regularized incomplete gamma Q(a,x) by Lentz continued fraction, x >= a+1.
double gamma_q_cf(double a, double x) {
  const double tiny = 1e-300;
  double b = x + 1.0 - a;
  double c = 1.0 / tiny;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i <= 10000; ++i) {
    double an = -i * (i - a);
    b += 2.0;
    d = an * d + b;
    if (std::fabs(d) < tiny) d = tiny;
    c = b + an / c;
    if (std::fabs(c) < tiny) c = tiny;
    d = 1.0 / d;
    double del = d * c;
    h *= del;
    if (std::fabs(del - 1.0) < 1e-16) break;
  }
  return h * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

}  // namespace

double binom_cdf(long long s, long long n, double p) {
  if (n < 0 || s < 0 || s > n) fail_usage("binom_cdf: need 0 <= s <= n");
  if (p < 0.0 || p > 1.0) fail_usage("binom_cdf: p outside [0,1]");
  if (s == n) return 1.0;
  if (p == 0.0) return 1.0;
  if (p == 1.0) return 0.0;  // s < n here
  // Log-space pmf recurrence, compensated partial sum.
  double lp = static_cast<double>(n) * std::log1p(-p);
  double lstep = std::log(p) - std::log1p(-p);
  Kahan acc;
  acc.add(std::exp(lp));
  for (long long j = 0; j < s; ++j) {
    lp += std::log(static_cast<double>(n - j)) - std::log(static_cast<double>(j + 1)) + lstep;
    acc.add(std::exp(lp));
  }
  double v = acc.sum;
  if (v < 0.0) v = 0.0;
  if (v > 1.0) v = 1.0;
  return v;
}

double pois_cdf(long long s, double lambda) {
  if (s < 0) fail_usage("pois_cdf: s must be nonnegative");
  if (!(lambda > 0.0)) fail_usage("pois_cdf: lambda must be positive");
  double lp = -lambda;
  Kahan acc;
  acc.add(std::exp(lp));
  for (long long j = 0; j < s; ++j) {
    lp += std::log(lambda) - std::log(static_cast<double>(j + 1));
    acc.add(std::exp(lp));
  }
  double v = acc.sum;
  if (v > 1.0) v = 1.0;
  return v;
}

double upper_gamma_regularized(double k, double lambda) {
  if (!(k >= 1.0)) fail_usage("upper_gamma_regularized: k must be >= 1");
  if (lambda < 0.0) fail_usage("upper_gamma_regularized: lambda must be >= 0");
  if (lambda == 0.0) return 1.0;
  if (lambda < k + 1.0) return 1.0 - gamma_p_series(k, lambda);
  return gamma_q_cf(k, lambda);
}

double f_func(double k, double lambda) {
  if (!(k >= 1.0)) fail_usage("f_func: k must be >= 1");
  if (lambda < 0.0 || lambda > k + 1.0) fail_usage("f_func: lambda outside [0, k+1]");
  if (lambda == 0.0) return 1.0;  // continuity limit
  double q = upper_gamma_regularized(k, lambda);
  double tail = std::exp(k * std::log(lambda) - lambda - std::lgamma(k));
  return (k + (lambda - k) * q - tail) / lambda;
}

double g_func(long long k, long long n, double lambda) {
  if (k < 1) fail_usage("g_func: k must be >= 1");
  if (n < k + 1) fail_usage("g_func: need n >= k+1");
  if (!(lambda > 0.0) || lambda > static_cast<double>(k + 1))
    fail_usage("g_func: lambda outside (0, k+1]");
  double p = lambda / static_cast<double>(n);
  if (p >= 1.0) return static_cast<double>(k) / lambda;  // all mass at n >= k
  // sum_{j<k} B(j;n,p) = sum_{j<k} (k-j) pmf(j); one log-space pmf pass.
  double lp = static_cast<double>(n) * std::log1p(-p);
  double lstep = std::log(p) - std::log1p(-p);
  Kahan acc;
  acc.add(static_cast<double>(k) * std::exp(lp));
  for (long long j = 0; j + 1 < k; ++j) {
    lp += std::log(static_cast<double>(n - j)) - std::log(static_cast<double>(j + 1)) + lstep;
    acc.add(static_cast<double>(k - j - 1) * std::exp(lp));
  }
  return (static_cast<double>(k) - acc.sum) / lambda;
}

double expected_inv_one_plus_poisson(double lambda) {
  if (lambda < 0.0) fail_usage("expected_inv_one_plus_poisson: lambda must be >= 0");
  if (lambda == 0.0) return 1.0;
  return -std::expm1(-lambda) / lambda;
}

double chernoff_mult_bound(double mu, double delta) {
  if (!(mu > 0.0) || !(delta > 0.0)) fail_usage("chernoff_mult_bound: need mu, delta > 0");
  return std::exp(-delta * delta * mu / (2.0 + delta));
}

double chernoff_power_bound(double c1, double c2) {
  if (!(c1 > 0.0) || !(c2 >= c1)) fail_usage("chernoff_power_bound: need 0 < c1 <= c2");
  return std::pow(c1 * std::exp(1.0) / c2, c2);
}

}  // namespace crsbench
