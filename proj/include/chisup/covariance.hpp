#pragma once

#include <functional>
#include <optional>
#include <string>

namespace chisup {

struct Interval {
  double lo = 0.0;
  double hi = 1.0;
  bool closed_lo = false;
  bool closed_hi = false;
};

enum class ModelKind { BrownianBridgeNormalized, FbmNormalized, Custom };

// Limit of the slowly varying part L of q(u) = u^{-1/alpha} L(u^{-1/2})
// as u -> infinity. Pure-power structure functions have L == 1.
enum class SlowVariationLimit { Zero, Finite, Infinite };

// Descriptor of a unit-variance locally stationary Gaussian process:
// correlation r(s,t), intensity C(t), structure function K(h) with
// regular-variation index alpha/2, and q(u) = invK(u^{-1/2}).
class CovarianceModel {
 public:
  struct CustomSpec {
    std::string name;
    double alpha = 1.0;
    Interval domain;
    std::function<double(double, double)> corr;
    std::function<double(double)> C;
    std::function<double(double)> K;
    std::function<double(double)> q;
    // Optional distance-stable forms; when absent the generic t = S -+ eta
    // fallback is used (loses precision once eta < ~1e-13).
    std::function<double(int, double)> C_near;
    SlowVariationLimit l_limit = SlowVariationLimit::Finite;
    double l_value = 1.0;
    bool bc_conditions_asserted = false;
  };

  static CovarianceModel brownian_bridge_normalized();
  static CovarianceModel fbm_normalized(double hurst);
  static CovarianceModel custom(CustomSpec spec);

  ModelKind kind() const { return kind_; }
  const std::string& name() const { return name_; }
  double alpha() const { return alpha_; }
  double hurst() const { return hurst_; }
  const Interval& domain() const { return domain_; }

  double corr(double s, double t) const;
  double C(double t) const;
  double K(double h) const;
  double q(double u) const;

  // C evaluated at distance eta from the boundary S (S in {0,1}); stable for
  // eta far below double resolution of 1 - eta.
  double C_near(int S, double eta) const;

  // Correlation as a function of f-coordinates. Exact closed forms for the
  // built-in kernels (both are stationary under the f time change); custom
  // models fall back to corr(finv(y1), finv(y2)).
  double corr_f(double y1, double y2) const;
  bool has_exact_corr_f() const { return kind_ != ModelKind::Custom; }

  SlowVariationLimit l_limit() const { return l_limit_; }
  double l_value() const { return l_value_; }
  bool bc_conditions_asserted() const { return bc_asserted_; }

 private:
  CovarianceModel() = default;
  ModelKind kind_ = ModelKind::Custom;
  std::string name_;
  double alpha_ = 1.0;
  double hurst_ = 0.5;  // FbmNormalized only
  Interval domain_;
  CustomSpec spec_;  // Custom only
  SlowVariationLimit l_limit_ = SlowVariationLimit::Finite;
  double l_value_ = 1.0;
  bool bc_asserted_ = false;
};

}  // namespace chisup
