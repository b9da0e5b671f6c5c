#pragma once

#include <functional>
#include <string>
#include <vector>

#include "chisup/covariance.hpp"

namespace chisup {

enum class WeightForm { RhoLogLog, FbmPlateau, Custom };

// Positive weight function on (0,1) or (0,1].
//
// RhoLogLog:  w^2(t) = 2 rho1 lnln(e^2/(t(1-t))) + 2 rho2 lnlnln(e^2/(t(1-t)))
// FbmPlateau: w^2(t) = rho lnln(e^2/t) on (0,eps), constant rho lnln(e^2/eps) on [eps,1]
class WeightSpec {
 public:
  static WeightSpec rho_loglog(double rho1, double rho2);
  static WeightSpec fbm_plateau(double rho, double eps);
  static WeightSpec custom(std::function<double(double)> w, Interval domain,
                           std::string name = "custom");

  WeightForm form() const { return form_; }
  const std::string& name() const { return name_; }
  const Interval& domain() const { return domain_; }
  double rho1() const { return rho1_; }
  double rho2() const { return rho2_; }
  double rho() const { return rho_; }
  double eps() const { return eps_; }

  // w(t) itself (not squared).
  double eval(double t) const;
  double w2(double t) const;
  // w^2 at distance eta from boundary S; stable for eta below double
  // resolution of 1-t (falls back to t = S -+ eta for custom weights).
  double w2_near(int S, double eta) const;

 private:
  WeightSpec() = default;
  WeightForm form_ = WeightForm::Custom;
  std::string name_;
  Interval domain_;
  double rho1_ = 0.0, rho2_ = 0.0;  // RhoLogLog
  double rho_ = 0.0, eps_ = 0.0;    // FbmPlateau
  std::function<double(double)> fn_;
};

struct Minimizer {
  double t = 0.0;       // location t_i
  double w_min = 0.0;   // common minimal value w(t_1)
  double a = 0.0;       // local expansion w(t_i + h) = w(t_i) + a |h|^beta (1+o(1))
  double beta = 0.0;
};

struct PlateauInterval {
  double c = 0.0, d = 0.0;
};

struct WeightClassification {
  enum class Kind { F1, F2 } kind = Kind::F1;
  std::vector<Minimizer> minimizers;      // F1
  std::vector<PlateauInterval> intervals; // F2
  double w_min = 0.0;
  double beta_max() const;
};

// Closed-form constants of the Brownian-bridge loglog weight.
struct Corollary34Data {
  char case_tag = 'a';              // 'a', 'b' or 'c'
  std::vector<double> t_points;
  double A = 0.0;                   // A_1 (cases a,b) or A_2 (case c)
  double taylor_coeff = 0.0;        // a_i of the local expansion
  double beta = 2.0;                // 2 or 4
  double Q_const = 0.0;             // Q1, Q2, or Q (case c)
  double Q3 = 0.0;                  // (x'(t_1))^2, case c only
  double w_t1 = 0.0;
};

// Classify a weight under the F1/F2 assumptions. Built-in forms use closed
// forms; custom weights are classified numerically (golden-section minima +
// log-log regression for (a,beta)).
WeightClassification classify(const WeightSpec& w);

Corollary34Data corollary34_constants(double rho1, double rho2);

// ln(4e^2), lnln(4e^2), lnlnln(4e^2)
double log_4e2();
double loglog_4e2();
double logloglog_4e2();

}  // namespace chisup
