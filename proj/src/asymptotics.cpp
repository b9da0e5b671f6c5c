#include "chisup/asymptotics.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace chisup {

double log_upsilon(int k, double u) {
  if (k < 1) throw std::invalid_argument("upsilon: k must be >= 1");
  if (!(u > 0.0)) throw std::domain_error("upsilon: u must be positive");
  return 0.5 * (2.0 - k) * std::log(2.0) - std::lgamma(0.5 * k) +
         (0.5 * k - 1.0) * std::log(u) - 0.5 * u;
}

double upsilon(int k, double u) { return std::exp(log_upsilon(k, u)); }

std::string scenario_name(Scenario s) {
  switch (s) {
    case Scenario::C1: return "C1";
    case Scenario::C2: return "C2";
    case Scenario::C3: return "C3";
    case Scenario::F2: return "F2";
  }
  return "?";
}

Scenario scenario_select(double alpha, double beta, SlowVariationLimit l) {
  if (beta > alpha) return Scenario::C1;
  if (beta < alpha) return Scenario::C3;
  switch (l) {
    case SlowVariationLimit::Zero: return Scenario::C1;
    case SlowVariationLimit::Finite: return Scenario::C2;
    case SlowVariationLimit::Infinite: return Scenario::C3;
  }
  return Scenario::C2;
}

std::optional<double> known_pickands(double alpha) {
  if (alpha == 1.0) return 1.0;
  if (alpha == 2.0) return 1.0 / std::sqrt(std::acos(-1.0));
  return std::nullopt;
}

std::optional<double> known_piterbarg(double alpha, double d) {
  // alpha = 2: field sqrt(2) t N - (1+d) t^2; sup = N^2/(2(1+d));
  // E exp(N^2/(2(1+d))) = sqrt((1+d)/d)
  if (alpha == 2.0 && d > 0.0) return std::sqrt((1.0 + d) / d);
  return std::nullopt;
}

std::optional<double> ConstantsProvider::pickands(double alpha) const {
  auto it = h_.find(alpha);
  if (it != h_.end()) return it->second;
  return known_pickands(alpha);
}

std::optional<double> ConstantsProvider::piterbarg(double alpha, double d) const {
  auto it = p_.find({alpha, d});
  if (it != p_.end()) return it->second;
  return known_piterbarg(alpha, d);
}

void ConstantsProvider::set_pickands(double alpha, double value) { h_[alpha] = value; }
void ConstantsProvider::set_piterbarg(double alpha, double d, double value) {
  p_[{alpha, d}] = value;
}

double AsymptoticEvaluation::log_value(double u) const {
  return std::log(prefactor_b) + log_M(u) + log_upsilon(k, argument_scale * u);
}

double AsymptoticEvaluation::value(double u) const { return std::exp(log_value(u)); }

namespace {

double require_pickands(const ConstantsProvider& constants, double alpha) {
  const auto h = constants.pickands(alpha);
  if (!h) {
    std::ostringstream msg;
    msg << "asymptotics: Pickands constant H_alpha unavailable for alpha=" << alpha
        << " (no closed form; supply an estimate)";
    throw std::runtime_error(msg.str());
  }
  return *h;
}

// ln of q(u)^{-1}; closed forms for the built-ins keep this exact in log space
double log_qinv(const CovarianceModel& model, double u) {
  switch (model.kind()) {
    case ModelKind::BrownianBridgeNormalized: return std::log(u);
    case ModelKind::FbmNormalized: return std::log(u) / model.alpha();
    case ModelKind::Custom: {
      const double q = model.q(u);
      if (!(q > 0.0) || !std::isfinite(q))
        throw std::runtime_error("asymptotics: custom q(u) not positive finite");
      return -std::log(q);
    }
  }
  return 0.0;
}

// Adaptive Simpson for the F2 interval mass.
double simpson(const std::function<double(double)>& f, double a, double m, double b,
               double fa, double fm, double fb, double whole, double tol, int depth) {
  const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
  const double flm = f(lm), frm = f(rm);
  const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  if (depth <= 0 || std::fabs(left + right - whole) < 15.0 * tol)
    return left + right + (left + right - whole) / 15.0;
  return simpson(f, a, lm, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
         simpson(f, m, rm, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

double integrate(const std::function<double(double)>& f, double a, double b, double tol) {
  const double m = 0.5 * (a + b);
  const double fa = f(a), fm = f(m), fb = f(b);
  const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
  return simpson(f, a, m, b, fa, fm, fb, whole, tol, 48);
}

}  // namespace

AsymptoticEvaluation evaluate_f1(const CovarianceModel& model,
                                 const WeightClassification& cls, const BVector& b,
                                 const ConstantsProvider& constants) {
  if (cls.kind != WeightClassification::Kind::F1 || cls.minimizers.empty())
    throw std::invalid_argument("evaluate_f1: F1 classification with minimizers required");
  const double alpha = model.alpha();
  const double beta = cls.beta_max();
  const double w1 = cls.w_min;
  const Scenario sc = scenario_select(alpha, beta, model.l_limit());

  AsymptoticEvaluation ev;
  ev.scenario = sc;
  ev.k = b.k();
  ev.prefactor_b = b.prefactor();
  ev.argument_scale = w1 * w1;
  ev.constants_audit["alpha"] = alpha;
  ev.constants_audit["beta"] = beta;
  ev.constants_audit["w_t1"] = w1;
  ev.constants_audit["k"] = ev.k;
  ev.constants_audit["prefactor_b"] = ev.prefactor_b;
  ev.constants_audit["m_minimizers"] = static_cast<double>(cls.minimizers.size());

  if (sc == Scenario::C1) {
    double s = 0.0;
    int idx = 0;
    for (const auto& m : cls.minimizers) {
      if (m.beta != beta) { ++idx; continue; }
      const double c = model.C(m.t);
      s += std::pow(m.a, -1.0 / beta) * std::pow(c, 1.0 / alpha);
      ev.constants_audit["C_t" + std::to_string(idx + 1)] = c;
      ev.constants_audit["a_" + std::to_string(idx + 1)] = m.a;
      ++idx;
    }
    const double h_alpha = require_pickands(constants, alpha);
    ev.constants_audit["H_alpha"] = h_alpha;
    const double gamma_term = std::lgamma(1.0 / beta + 1.0);
    ev.constants_audit["Gamma(1/beta+1)"] = std::exp(gamma_term);
    const double log_front = std::log(2.0) + std::log(s) +
                             (2.0 / alpha - 1.0 / beta) * std::log(w1) + gamma_term +
                             std::log(h_alpha);
    const CovarianceModel mdl = model;
    ev.log_M = [log_front, mdl, beta](double u) {
      return log_front + log_qinv(mdl, u) - std::log(u) / beta;
    };
    return ev;
  }

  if (sc == Scenario::C2) {
    const double l_val = model.l_value();
    double msum = 0.0;
    int idx = 0;
    for (const auto& m : cls.minimizers) {
      if (m.beta != beta) { ++idx; continue; }
      const double d = m.a * std::pow(l_val, alpha) / (w1 * model.C(m.t));
      const auto p = constants.piterbarg(alpha, d);
      if (!p) {
        std::ostringstream msg;
        msg << "asymptotics: Piterbarg constant P_alpha^d unavailable for alpha=" << alpha
            << ", d=" << d << " (no closed form; supply an estimate)";
        throw std::runtime_error(msg.str());
      }
      msum += *p;
      ev.constants_audit["P_d" + std::to_string(idx + 1)] = *p;
      ++idx;
    }
    int kc = 0;
    for (const auto& m : cls.minimizers)
      if (m.beta != beta) ++kc;
    msum += kc;
    ev.constants_audit["sharp_Kc"] = kc;
    ev.constants_audit["L_limit"] = l_val;
    const double log_m = std::log(msum);
    ev.log_M = [log_m](double) { return log_m; };
    return ev;
  }

  const double log_m = std::log(static_cast<double>(cls.minimizers.size()));
  ev.log_M = [log_m](double) { return log_m; };
  return ev;
}

AsymptoticEvaluation evaluate_f2(const CovarianceModel& model,
                                 const WeightClassification& cls, const BVector& b,
                                 const ConstantsProvider& constants) {
  if (cls.kind != WeightClassification::Kind::F2 || cls.intervals.empty())
    throw std::invalid_argument("evaluate_f2: F2 classification with intervals required");
  const double alpha = model.alpha();
  const double w1 = cls.w_min;
  const double h_alpha = require_pickands(constants, alpha);

  double mass = 0.0;
  for (const auto& iv : cls.intervals) {
    if (!(iv.d > iv.c)) throw std::invalid_argument("evaluate_f2: degenerate interval");
    if (model.kind() == ModelKind::FbmNormalized) {
      // int_c^d (2 t^{2H})^{-1/(2H)} dt = 2^{-1/(2H)} ln(d/c)
      mass += std::pow(2.0, -1.0 / alpha) * std::log(iv.d / iv.c);
    } else {
      mass += integrate([&](double t) { return std::pow(model.C(t), 1.0 / alpha); },
                        iv.c, iv.d, 1e-12);
    }
  }

  AsymptoticEvaluation ev;
  ev.scenario = Scenario::F2;
  ev.k = b.k();
  ev.prefactor_b = b.prefactor();
  ev.argument_scale = w1 * w1;
  ev.constants_audit["alpha"] = alpha;
  ev.constants_audit["w_c1"] = w1;
  ev.constants_audit["k"] = ev.k;
  ev.constants_audit["prefactor_b"] = ev.prefactor_b;
  ev.constants_audit["H_alpha"] = h_alpha;
  ev.constants_audit["C_mass"] = mass;
  const double scale = ev.argument_scale;
  const double log_front = std::log(mass) + std::log(h_alpha);
  const CovarianceModel mdl = model;
  ev.log_M = [log_front, mdl, scale](double u) {
    return log_front + log_qinv(mdl, scale * u);
  };
  return ev;
}

double tail_f1(const CovarianceModel& model, const WeightClassification& cls,
               const BVector& b, double u, const ConstantsProvider& constants) {
  return evaluate_f1(model, cls, b, constants).value(u);
}

double tail_f2(const CovarianceModel& model, const WeightClassification& cls,
               const BVector& b, double u, const ConstantsProvider& constants) {
  return evaluate_f2(model, cls, b, constants).value(u);
}

double log_corollary34_tail(double rho1, double rho2, const BVector& b, double u) {
  const Corollary34Data d = corollary34_constants(rho1, rho2);
  const double lp = std::log(b.prefactor());
  const double ll = loglog_4e2(), l1 = log_4e2();
  if (d.case_tag == 'a') {
    const double log_m = std::log(2.0 * d.A) +
                         0.5 * std::log(std::acos(-1.0) * l1 * ll / (rho1 * ll + rho2)) +
                         0.5 * std::log(u);
    return lp + log_m + log_upsilon(b.k(), 2.0 * d.A * u);
  }
  if (d.case_tag == 'b') {
    const double log_m = std::log(2.0 * d.A) + std::lgamma(0.25) +
                         0.25 * std::log(ll * l1 * l1 / (8.0 * rho1)) + 0.75 * std::log(u);
    return lp + log_m + log_upsilon(b.k(), 2.0 * d.A * u);
  }
  // case c: 2 A_2 rho1^{-1} Q sqrt(-2 pi rho2) u^{1/2} Ups_k(2 A_2 u)
  const double log_m = std::log(2.0 * d.A) - std::log(rho1) + std::log(d.Q_const) +
                       0.5 * std::log(-2.0 * std::acos(-1.0) * rho2) + 0.5 * std::log(u);
  return lp + log_m + log_upsilon(b.k(), 2.0 * d.A * u);
}

double corollary34_tail(double rho1, double rho2, const BVector& b, double u) {
  return std::exp(log_corollary34_tail(rho1, rho2, b, u));
}

double log_corollary35_tail(double rho, double eps, double hurst, const BVector& b,
                            double u, const ConstantsProvider& constants) {
  if (!(eps > 0.0 && eps < 1.0)) throw std::invalid_argument("corollary35_tail: eps in (0,1)");
  if (!(hurst > 0.0 && hurst < 1.0)) throw std::invalid_argument("corollary35_tail: H in (0,1)");
  const double alpha = 2.0 * hurst;
  const double h_alpha = require_pickands(constants, alpha);
  const double w2c = rho * std::log(2.0 - std::log(eps));  // rho lnln(e^2/eps)
  const double log_m = std::log(-std::log(eps)) + std::log(0.5 * w2c) / (2.0 * hurst) +
                       std::log(h_alpha) + std::log(u) / (2.0 * hurst);
  return std::log(b.prefactor()) + log_m + log_upsilon(b.k(), w2c * u);
}

double corollary35_tail(double rho, double eps, double hurst, const BVector& b, double u,
                        const ConstantsProvider& constants) {
  return std::exp(log_corollary35_tail(rho, eps, hurst, b, u, constants));
}

}  // namespace chisup
