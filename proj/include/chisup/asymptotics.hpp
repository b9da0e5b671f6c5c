#pragma once

#include <functional>
#include <map>
#include <optional>
#include <string>

#include "chisup/chi_process.hpp"
#include "chisup/covariance.hpp"
#include "chisup/weights.hpp"

namespace chisup {

// Leading closed form of the chi-square(k) tail:
// Ups_k(u) = 2^{(2-k)/2}/Gamma(k/2) u^{k/2-1} exp(-u/2). Exact at k=2.
double upsilon(int k, double u);
double log_upsilon(int k, double u);

enum class Scenario { C1, C2, C3, F2 };
std::string scenario_name(Scenario s);

// C1: beta > alpha, or beta == alpha and L -> 0
// C2: beta == alpha and L -> finite positive
// C3: beta < alpha, or beta == alpha and L -> infinity
Scenario scenario_select(double alpha, double beta, SlowVariationLimit l);

// Source of Pickands/Piterbarg constants for the evaluators. Exact values
// are registered for alpha in {1,2}; anything else must be supplied.
class ConstantsProvider {
 public:
  std::optional<double> pickands(double alpha) const;
  std::optional<double> piterbarg(double alpha, double d) const;
  void set_pickands(double alpha, double value);
  void set_piterbarg(double alpha, double d, double value);

 private:
  std::map<double, double> h_;
  std::map<std::pair<double, double>, double> p_;
};

// H_alpha for alpha in {1,2}: 1 and 1/sqrt(pi).
std::optional<double> known_pickands(double alpha);
// P_alpha^d for alpha = 2: sqrt(1 + 1/d) (degenerate-field closed form).
std::optional<double> known_piterbarg(double alpha, double d);

struct AsymptoticEvaluation {
  Scenario scenario = Scenario::C1;
  int k = 1;
  double prefactor_b = 1.0;            // prod_{i>k} (1-b_i^2)^{-1/2}
  double argument_scale = 1.0;         // w^2(t_1) or w^2(c_1)
  std::function<double(double)> log_M; // u -> ln M(u)
  std::map<std::string, double> constants_audit;

  double log_value(double u) const;
  double value(double u) const;        // may underflow for very large u
};

// Theorem-form evaluators driven by a weight classification.
AsymptoticEvaluation evaluate_f1(const CovarianceModel& model,
                                 const WeightClassification& cls, const BVector& b,
                                 const ConstantsProvider& constants = {});
AsymptoticEvaluation evaluate_f2(const CovarianceModel& model,
                                 const WeightClassification& cls, const BVector& b,
                                 const ConstantsProvider& constants = {});

double tail_f1(const CovarianceModel& model, const WeightClassification& cls,
               const BVector& b, double u, const ConstantsProvider& constants = {});
double tail_f2(const CovarianceModel& model, const WeightClassification& cls,
               const BVector& b, double u, const ConstantsProvider& constants = {});

// Printed closed forms, evaluated in log space.
double log_corollary34_tail(double rho1, double rho2, const BVector& b, double u);
double corollary34_tail(double rho1, double rho2, const BVector& b, double u);
double log_corollary35_tail(double rho, double eps, double hurst, const BVector& b,
                            double u, const ConstantsProvider& constants = {});
double corollary35_tail(double rho, double eps, double hurst, const BVector& b, double u,
                        const ConstantsProvider& constants = {});

}  // namespace chisup
