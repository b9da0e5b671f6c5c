#include "chisup/covariance.hpp"

#include <cmath>
#include <stdexcept>

namespace chisup {

namespace {

double bridge_corr(double s, double t) {
  if (s == t) return 1.0;
  if (s > t) std::swap(s, t);
  // Cov(B(s),B(t)) = s(1-t) for s <= t
  return std::sqrt((s * (1.0 - t)) / ((1.0 - s) * t));
}

double fbm_corr_ratio(double tau, double H) {
  // corr(s,t) of B_H(t)/t^H depends on tau = s/t <= 1 only (self-similarity)
  return (std::pow(tau, 2.0 * H) + 1.0 - std::pow(1.0 - tau, 2.0 * H)) /
         (2.0 * std::pow(tau, H));
}

}  // namespace

CovarianceModel CovarianceModel::brownian_bridge_normalized() {
  CovarianceModel m;
  m.kind_ = ModelKind::BrownianBridgeNormalized;
  m.name_ = "bridge-normalized";
  m.alpha_ = 1.0;
  m.domain_ = Interval{0.0, 1.0, false, false};
  m.l_limit_ = SlowVariationLimit::Finite;
  m.l_value_ = 1.0;
  m.bc_asserted_ = true;
  return m;
}

CovarianceModel CovarianceModel::fbm_normalized(double hurst) {
  if (!(hurst > 0.0) || !(hurst < 1.0))
    throw std::invalid_argument("fbm_normalized: H must be in (0,1)");
  CovarianceModel m;
  m.kind_ = ModelKind::FbmNormalized;
  m.name_ = "fbm-normalized";
  m.alpha_ = 2.0 * hurst;
  m.hurst_ = hurst;
  m.domain_ = Interval{0.0, 1.0, false, true};
  m.l_limit_ = SlowVariationLimit::Finite;
  m.l_value_ = 1.0;
  m.bc_asserted_ = true;
  return m;
}

CovarianceModel CovarianceModel::custom(CustomSpec spec) {
  if (!spec.corr || !spec.C || !spec.K || !spec.q)
    throw std::invalid_argument("custom model: corr, C, K, q are all required");
  if (!(spec.alpha > 0.0) || !(spec.alpha <= 2.0))
    throw std::invalid_argument("custom model: alpha must be in (0,2]");
  CovarianceModel m;
  m.kind_ = ModelKind::Custom;
  m.name_ = spec.name.empty() ? "custom" : spec.name;
  m.alpha_ = spec.alpha;
  m.domain_ = spec.domain;
  m.l_limit_ = spec.l_limit;
  m.l_value_ = spec.l_value;
  m.bc_asserted_ = spec.bc_conditions_asserted;
  m.spec_ = std::move(spec);
  return m;
}

double CovarianceModel::corr(double s, double t) const {
  switch (kind_) {
    case ModelKind::BrownianBridgeNormalized: return bridge_corr(s, t);
    case ModelKind::FbmNormalized: {
      if (s == t) return 1.0;
      if (s > t) std::swap(s, t);
      return fbm_corr_ratio(s / t, hurst_);
    }
    case ModelKind::Custom: return spec_.corr(s, t);
  }
  return 0.0;
}

double CovarianceModel::C(double t) const {
  switch (kind_) {
    case ModelKind::BrownianBridgeNormalized: return 1.0 / (2.0 * t * (1.0 - t));
    case ModelKind::FbmNormalized: return 1.0 / (2.0 * std::pow(t, 2.0 * hurst_));
    case ModelKind::Custom: return spec_.C(t);
  }
  return 0.0;
}

double CovarianceModel::K(double h) const {
  switch (kind_) {
    case ModelKind::BrownianBridgeNormalized: return std::sqrt(std::fabs(h));
    case ModelKind::FbmNormalized: return std::pow(std::fabs(h), hurst_);
    case ModelKind::Custom: return spec_.K(h);
  }
  return 0.0;
}

double CovarianceModel::q(double u) const {
  switch (kind_) {
    case ModelKind::BrownianBridgeNormalized: return 1.0 / u;
    case ModelKind::FbmNormalized: return std::pow(u, -1.0 / (2.0 * hurst_));
    case ModelKind::Custom: return spec_.q(u);
  }
  return 0.0;
}

double CovarianceModel::C_near(int S, double eta) const {
  if (S != 0 && S != 1) throw std::invalid_argument("C_near: S must be 0 or 1");
  if (!(eta > 0.0) || eta > 0.5) throw std::invalid_argument("C_near: eta must be in (0,1/2]");
  switch (kind_) {
    case ModelKind::BrownianBridgeNormalized:
      return 1.0 / (2.0 * eta * (1.0 - eta));
    case ModelKind::FbmNormalized:
      if (S == 0) return 1.0 / (2.0 * std::pow(eta, 2.0 * hurst_));
      return C(1.0 - eta);
    case ModelKind::Custom:
      if (spec_.C_near) return spec_.C_near(S, eta);
      return C(S == 0 ? eta : 1.0 - eta);
  }
  return 0.0;
}

double CovarianceModel::corr_f(double y1, double y2) const {
  const double dy = std::fabs(y1 - y2);
  switch (kind_) {
    case ModelKind::BrownianBridgeNormalized:
      // Ornstein-Uhlenbeck in f time: r = exp(-|y1-y2|)
      return std::exp(-dy);
    case ModelKind::FbmNormalized: {
      if (dy == 0.0) return 1.0;
      // f(t) = 2^{-1/(2H)} ln(2t)  =>  s/t = exp(-2^{1/(2H)} |dy|)
      const double tau = std::exp(-std::pow(2.0, 1.0 / (2.0 * hurst_)) * dy);
      return fbm_corr_ratio(tau, hurst_);
    }
    case ModelKind::Custom:
      throw std::runtime_error("corr_f: custom models have no closed f-coordinate form");
  }
  return 0.0;
}

}  // namespace chisup
