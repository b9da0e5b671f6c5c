#pragma once

#include <utility>
#include <vector>

#include "chisup/covariance.hpp"
#include "chisup/weights.hpp"

namespace chisup {

// f(t) = int_{1/2}^t C(s)^{1/alpha} ds and its inverse. Closed forms for the
// built-in kernels, adaptive quadrature / bisection otherwise.
double f_transform(const CovarianceModel& model, double t);
double f_inverse(const CovarianceModel& model, double y);
// True when |f(S)| = infinity for S in {0,1}.
bool f_is_infinite(const CovarianceModel& model, int S);

// Partition intervals Delta_{j,d}^{(S)} = [invf((j-1)d), invf(jd)] (S=1, mirrored
// for S=0), j = 1..j_max. Requires |f(S)| = infinity.
std::vector<std::pair<double, double>> partition(const CovarianceModel& model, double d,
                                                 int S, int j_max);

enum class IntegralClass { Finite, Divergent, Inconclusive };

struct Verdict {
  IntegralClass classification = IntegralClass::Inconclusive;
  double integral_value = 0.0;   // deepest-cutoff partial; +inf tag below
  bool value_is_infinite = false;
  // (distance cutoff 2^{-j}, partial integral up to that cutoff), j = 4..48
  std::vector<std::pair<double, double>> truncation_trace;
  // exponent fit ln g(lam) ~ c0 - a ln(lam) - b lnln(lam) of the transformed
  // integrand against the log-distance lam; drives the classification when
  // neither the blow-up nor the Cauchy rule fires
  double fitted_a = 0.0;
  double fitted_b = 0.0;
  double fit_rms = 0.0;
};

// I_w(S) = | int_{1/2}^S C^{1/alpha} w^{k-2}/q(w^2) e^{-w^2/2} dt |
Verdict eval_I(const CovarianceModel& model, const WeightSpec& w, int S, int k);
// J_{c,w}(S) = | int_{1/2}^S C^{1/alpha} e^{-c w^2} dt |
Verdict eval_J(const CovarianceModel& model, const WeightSpec& w, int S, double c);

enum class Finiteness { ASFinite, ASInfinite, Inconclusive };

struct FinitenessReport {
  Finiteness verdict = Finiteness::Inconclusive;
  double c_finite = 0.0;  // witness c when ASFinite
  std::vector<std::pair<double, IntegralClass>> ladder;  // (c, class)
};

// Searches c over the geometric ladder 2^{-10}..2^{10}; ASFinite iff some c
// yields a finite J_{c,w}(S).
FinitenessReport finiteness_verdict(const CovarianceModel& model, const WeightSpec& w, int S);

struct BCRow {
  int j = 0;
  double ratio_inf = 0.0;  // inf over sampled pairs of (1-r)/K^2(|f(t)-f(s)|)
  double ratio_sup = 0.0;
};

struct BCReport {
  std::vector<BCRow> rows;
  double cross_decay_slope = 0.0;  // slope of ln sup|r| against ln l
  std::vector<std::pair<int, double>> cross_sup;  // (l, sup |r|)
  bool flag_b_violation = false;   // same-interval ratios unbounded above
  bool flag_c_violation = false;   // ratios not bounded away from 0, or no decay
};

// Finite-sample diagnostic for conditions B(S)/C(S); cannot prove them.
BCReport check_conditions_BC(const CovarianceModel& model, double d0, int S, int j_lo,
                             int j_hi);

}  // namespace chisup
