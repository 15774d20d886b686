#ifndef CRSBENCH_SPECIAL_HPP
#define CRSBENCH_SPECIAL_HPP

namespace crsbench {

struct SpecialFnResult {
  double value;
  double abs_error_bound;
};

// B(s;n,p) = sum_{j<=s} C(n,j) p^j (1-p)^{n-j}. Abs error <= 1e-12 for n <= 1e4.
double binom_cdf(long long s, long long n, double p);

// P(s;lambda) = sum_{j<=s} lambda^j e^{-lambda} / j!
double pois_cdf(long long s, double lambda);

// Q(k,lambda) = Gamma(k,lambda)/Gamma(k), real k >= 1. For integer k this equals
// sum_{s<k} lambda^s e^{-lambda}/s!.
double upper_gamma_regularized(double k, double lambda);

// F(k,lambda) = (1/lambda) * (k + (lambda-k) Q(k,lambda) - lambda^k e^{-lambda}/Gamma(k)),
// real k >= 1, lambda in [0, k+1]; value 1 at lambda = 0 (continuity).
double f_func(double k, double lambda);

// G(k,n,lambda) = (1/lambda) * (k - sum_{j<k} B(j;n,lambda/n)),
// integers n >= k+1 >= 2, lambda in (0, k+1].
double g_func(long long k, long long n, double lambda);

// E[1/(1+Pois(lambda))] = (1 - e^{-lambda})/lambda; 1 at lambda = 0.
double expected_inv_one_plus_poisson(double lambda);

// exp(-delta^2 mu / (2+delta)), mu > 0, delta > 0.
double chernoff_mult_bound(double mu, double delta);

// (c1 e / c2)^{c2}, 0 < c1 <= c2.
double chernoff_power_bound(double c1, double c2);

}  // namespace crsbench

#endif
