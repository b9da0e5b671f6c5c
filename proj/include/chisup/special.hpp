#pragma once

#include <utility>

namespace chisup {

// Upper regularized incomplete gamma Q(a, x) = Gamma(a,x)/Gamma(a).
double gamma_q(double a, double x);

// Survival function of a chi-square(k) variable: P(chi2_k > u).
double chi2_sf(int k, double u);

// Standard normal cdf / survival.
double norm_cdf(double x);
double norm_sf(double x);

// Wilson 95% score interval for a binomial proportion.
std::pair<double, double> wilson_interval(long long successes, long long trials);

// Two-sample Kolmogorov-Smirnov distance and the asymptotic critical value
// at significance `alpha` (e.g. 0.01 -> c = 1.628).
double ks_two_sample_statistic(const double* a, int na, const double* b, int nb);
double ks_two_sample_critical(double alpha, int na, int nb);

}  // namespace chisup
