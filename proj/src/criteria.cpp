#include "chisup/criteria.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <limits>
#include <stdexcept>

namespace chisup {

namespace {

constexpr int kLadderLo = 4;    // cutoffs 2^{-j}, j = 4..48
constexpr int kLadderHi = 48;
constexpr double kBlowup = 1e6;
constexpr double kCauchyTol = 1e-10;

// 20-point Gauss-Legendre nodes/weights on [-1,1] (positive half; symmetric).
constexpr std::array<double, 10> kGlNode = {
    0.0765265211334973, 0.2277858511416451, 0.3737060887154195, 0.5108670019508271,
    0.6360536807265150, 0.7463319064601508, 0.8391169718222188, 0.9122344282513259,
    0.9639719272779138, 0.9931285991850949};
constexpr std::array<double, 10> kGlWeight = {
    0.1527533871307258, 0.1491729864726037, 0.1420961093183820, 0.1316886384491766,
    0.1181945319615184, 0.1019301198172404, 0.0832767415767048, 0.0626720483341091,
    0.0406014298003869, 0.0176140071391521};

double adaptive_f_quadrature(const CovarianceModel& model, double a, double b);

}  // namespace

double f_transform(const CovarianceModel& model, double t) {
  const Interval& dom = model.domain();
  const bool at_hi = dom.closed_hi ? t > dom.hi : t >= dom.hi;
  if (t <= dom.lo || at_hi) throw std::domain_error("f_transform: t outside the domain");
  switch (model.kind()) {
    case ModelKind::BrownianBridgeNormalized:
      return 0.5 * std::log(t / (1.0 - t));
    case ModelKind::FbmNormalized:
      // int (2 s^{2H})^{-1/(2H)} ds = 2^{-1/(2H)} ln(2t)
      return std::pow(2.0, -1.0 / model.alpha()) * std::log(2.0 * t);
    case ModelKind::Custom:
      return adaptive_f_quadrature(model, 0.5, t);
  }
  return 0.0;
}

double f_inverse(const CovarianceModel& model, double y) {
  switch (model.kind()) {
    case ModelKind::BrownianBridgeNormalized:
      return 1.0 / (1.0 + std::exp(-2.0 * y));
    case ModelKind::FbmNormalized: {
      const double t = 0.5 * std::exp(std::pow(2.0, 1.0 / model.alpha()) * y);
      if (t > model.domain().hi) throw std::domain_error("f_inverse: y beyond f(domain)");
      return t;
    }
    case ModelKind::Custom: {
      double lo = model.domain().lo + 1e-15, hi = model.domain().hi - 1e-15;
      for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (f_transform(model, mid) < y) lo = mid; else hi = mid;
      }
      return 0.5 * (lo + hi);
    }
  }
  return 0.0;
}

bool f_is_infinite(const CovarianceModel& model, int S) {
  if (S != 0 && S != 1) throw std::invalid_argument("f_is_infinite: S must be 0 or 1");
  switch (model.kind()) {
    case ModelKind::BrownianBridgeNormalized: return true;
    case ModelKind::FbmNormalized: return S == 0;
    case ModelKind::Custom: {
      // probe |f| at two depths; a singular end keeps growing, a finite one
      // saturates
      const double f1 = std::fabs(f_transform(model, S == 0 ? 1e-6 : 1.0 - 1e-6));
      const double f2 = std::fabs(f_transform(model, S == 0 ? 1e-12 : 1.0 - 1e-12));
      return f2 > 1.4 * f1 && f2 > 5.0;
    }
  }
  return false;
}

std::vector<std::pair<double, double>> partition(const CovarianceModel& model, double d,
                                                 int S, int j_max) {
  if (!(d > 0.0)) throw std::invalid_argument("partition: d must be positive");
  if (j_max < 1) throw std::invalid_argument("partition: j_max must be >= 1");
  if (!f_is_infinite(model, S))
    throw std::invalid_argument("partition: |f(S)| must be infinite for the chosen S");
  std::vector<std::pair<double, double>> out;
  out.reserve(static_cast<std::size_t>(j_max));
  double prev = f_inverse(model, 0.0);
  for (int j = 1; j <= j_max; ++j) {
    const double next = f_inverse(model, S == 1 ? j * d : -j * d);
    if (S == 1) out.emplace_back(prev, next);
    else out.emplace_back(next, prev);
    prev = next;
  }
  return out;
}

namespace {

double gl20_segment(const CovarianceModel& model, double x0, double x1) {
  const double mid = 0.5 * (x0 + x1), half = 0.5 * (x1 - x0);
  double acc = 0.0;
  for (std::size_t i = 0; i < kGlNode.size(); ++i) {
    const double dx = half * kGlNode[i];
    acc += kGlWeight[i] * (std::pow(model.C(mid + dx), 1.0 / model.alpha()) +
                           std::pow(model.C(mid - dx), 1.0 / model.alpha()));
  }
  return acc * half;
}

// int_a^b C(s)^{1/alpha} ds for custom models. C may be singular at the
// domain ends, so the mesh grades geometrically (octave slices in the
// distance to the end) once within 1/4 of either boundary.
double adaptive_f_quadrature(const CovarianceModel& model, double a, double b) {
  const double sign = b >= a ? 1.0 : -1.0;
  if (b < a) std::swap(a, b);
  const double lo = model.domain().lo, hi = model.domain().hi;
  const double mid_lo = std::max(a, lo + 0.25), mid_hi = std::min(b, hi - 0.25);

  double total = 0.0;
  if (mid_hi > mid_lo) {
    const int slices = 32;
    for (int s = 0; s < slices; ++s)
      total += gl20_segment(model, mid_lo + (mid_hi - mid_lo) * s / slices,
                            mid_lo + (mid_hi - mid_lo) * (s + 1) / slices);
  }
  // graded part near the upper end
  if (b > hi - 0.25) {
    double eta1 = std::min(0.25, hi - a);
    const double eta_b = hi - b;
    while (eta1 > eta_b * (1.0 + 1e-14)) {
      const double eta2 = std::max(eta_b, 0.5 * eta1);
      total += gl20_segment(model, hi - eta1, hi - eta2);
      eta1 = eta2;
    }
  }
  // graded part near the lower end
  if (a < lo + 0.25) {
    double eta1 = std::min(0.25, b - lo);
    const double eta_a = a - lo;
    while (eta1 > eta_a * (1.0 + 1e-14)) {
      const double eta2 = std::max(eta_a, 0.5 * eta1);
      total += gl20_segment(model, lo + eta2, lo + eta1);
      eta1 = eta2;
    }
  }
  return sign * total;
}

struct LadderIntegrand {
  // ln of the eta-space integrand G(eta)
  std::function<double(double)> log_g;
  // deepest eta with a stable evaluation (built-ins: 1e-280; custom: 1e-12)
  double eta_floor = 1e-280;
};

LadderIntegrand make_integrand_I(const CovarianceModel& model, const WeightSpec& w, int S,
                                 int k) {
  const double alpha = model.alpha();
  LadderIntegrand li;
  const bool stable = model.kind() != ModelKind::Custom && w.form() != WeightForm::Custom;
  li.eta_floor = stable ? 1e-280 : 1e-12;
  li.log_g = [&model, &w, S, k, alpha](double eta) {
    const double w2 = w.w2_near(S, eta);
    if (!(w2 > 0.0)) throw std::domain_error("eval_I: weight vanishes near the boundary");
    const double c = model.C_near(S, eta);
    const double q = model.q(w2);
    if (!(q > 0.0)) throw std::runtime_error("eval_I: q(w^2) not positive");
    return std::log(c) / alpha + 0.5 * (k - 2) * std::log(w2) - std::log(q) - 0.5 * w2;
  };
  return li;
}

LadderIntegrand make_integrand_J(const CovarianceModel& model, const WeightSpec& w, int S,
                                 double c) {
  const double alpha = model.alpha();
  LadderIntegrand li;
  const bool stable = model.kind() != ModelKind::Custom && w.form() != WeightForm::Custom;
  li.eta_floor = stable ? 1e-280 : 1e-12;
  li.log_g = [&model, &w, S, c, alpha](double eta) {
    const double w2 = w.w2_near(S, eta);
    if (!(w2 > 0.0)) throw std::domain_error("eval_J: weight vanishes near the boundary");
    return std::log(model.C_near(S, eta)) / alpha - c * w2;
  };
  return li;
}

// integral of exp(log_g) over [eta_lo, eta_hi] in v = ln(eta)
double slice_integral(const LadderIntegrand& li, double eta_lo, double eta_hi) {
  const double v0 = std::log(eta_lo), v1 = std::log(eta_hi);
  const double mid = 0.5 * (v0 + v1), half = 0.5 * (v1 - v0);
  double acc = 0.0;
  for (std::size_t i = 0; i < kGlNode.size(); ++i) {
    const double dp = half * kGlNode[i];
    for (const double v : {mid + dp, mid - dp}) {
      const double lg = li.log_g(std::exp(v)) + v;  // Jacobian d eta = eta dv
      acc += kGlWeight[i] * (lg < -745.0 ? 0.0 : std::exp(lg));
    }
  }
  return acc * half;
}

Verdict classify_ladder(const LadderIntegrand& li) {
  Verdict v;
  // partial integrals over [2^{-j}, 1/2]
  double partial = 0.0;
  std::vector<double> partials;
  for (int j = 1; j < kLadderHi; ++j) {
    partial += slice_integral(li, std::pow(2.0, -(j + 1)), std::pow(2.0, -j));
    if (j + 1 >= kLadderLo) {
      v.truncation_trace.emplace_back(std::pow(2.0, -(j + 1)), partial);
      partials.push_back(partial);
    }
    if (partial > kBlowup) {
      v.classification = IntegralClass::Divergent;
      v.value_is_infinite = true;
      v.integral_value = std::numeric_limits<double>::infinity();
      return v;
    }
  }
  v.integral_value = partial;

  // Cauchy rule: the last three successive relative increments all < 1e-10.
  // Only consulted when the exponent fit below cannot be trusted -- a locally
  // underflowing integrand can look converged while the true integral
  // diverges, and the fit works in log space where no underflow occurs.
  bool cauchy = partials.size() >= 4;
  if (cauchy) {
    for (std::size_t i = partials.size() - 3; i < partials.size(); ++i) {
      const double rel = (partials[i] - partials[i - 1]) /
                         std::max(partials[i], std::numeric_limits<double>::min());
      if (!(rel < kCauchyTol)) { cauchy = false; break; }
    }
  }

  // Exponent fit on the log-distance axis: lam = ln(e^2/eta); the lambda-space
  // integrand is g(lam) = G(eta) |d eta/d lam| = G(eta) eta. Least squares of
  // ln g against [1, -ln lam, -lnln lam] over log-spaced lam up to the
  // representable floor.
  const double lam_lo = 2.0 + 10.0 * std::log(2.0);
  const double lam_hi = 2.0 - std::log(li.eta_floor);
  const int npts = 160;
  double s11 = 0, s12 = 0, s13 = 0, s22 = 0, s23 = 0, s33 = 0;
  double b1 = 0, b2 = 0, b3 = 0;
  std::vector<std::array<double, 3>> xs;
  std::vector<double> ys;
  xs.reserve(npts);
  ys.reserve(npts);
  for (int i = 0; i < npts; ++i) {
    const double lam = lam_lo * std::pow(lam_hi / lam_lo, static_cast<double>(i) / (npts - 1));
    const double eta = std::exp(2.0 - lam);
    const double y = li.log_g(eta) + (2.0 - lam);  // + ln eta
    if (!std::isfinite(y)) continue;
    const double x2 = -std::log(lam), x3 = -std::log(std::log(lam));
    xs.push_back({1.0, x2, x3});
    ys.push_back(y);
    s11 += 1.0; s12 += x2; s13 += x3;
    s22 += x2 * x2; s23 += x2 * x3; s33 += x3 * x3;
    b1 += y; b2 += x2 * y; b3 += x3 * y;
  }
  if (xs.size() < 16) {
    v.classification = cauchy ? IntegralClass::Finite : IntegralClass::Inconclusive;
    return v;
  }
  // solve the 3x3 normal equations
  double m[3][4] = {{s11, s12, s13, b1}, {s12, s22, s23, b2}, {s13, s23, s33, b3}};
  for (int col = 0; col < 3; ++col) {
    int piv = col;
    for (int r = col + 1; r < 3; ++r)
      if (std::fabs(m[r][col]) > std::fabs(m[piv][col])) piv = r;
    std::swap(m[col], m[piv]);
    if (std::fabs(m[col][col]) < 1e-14) {
      v.classification = cauchy ? IntegralClass::Finite : IntegralClass::Inconclusive;
      return v;
    }
    for (int r = 0; r < 3; ++r) {
      if (r == col) continue;
      const double f = m[r][col] / m[col][col];
      for (int cc = col; cc < 4; ++cc) m[r][cc] -= f * m[col][cc];
    }
  }
  const double a_hat = m[1][3] / m[1][1];
  const double b_hat = m[2][3] / m[2][2];
  const double c_hat = m[0][3] / m[0][0];
  double rss = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double pred = c_hat + a_hat * xs[i][1] + b_hat * xs[i][2];
    rss += (ys[i] - pred) * (ys[i] - pred);
  }
  v.fitted_a = a_hat;
  v.fitted_b = b_hat;
  v.fit_rms = std::sqrt(rss / xs.size());

  // Decision against the comparison scale int^inf lam^{-a} (ln lam)^{-b} dlam:
  // finite iff a > 1, or a = 1 and b > 1. Bands calibrated to the fit accuracy
  // of the built-in families; outside them the fit is not trusted.
  const double band_a = 0.12, band_b = 0.05, rms_gate = 0.05;
  if (v.fit_rms > rms_gate) {
    v.classification = cauchy ? IntegralClass::Finite : IntegralClass::Inconclusive;
    return v;
  }
  if (a_hat > 1.0 + band_a) v.classification = IntegralClass::Finite;
  else if (a_hat < 1.0 - band_a) v.classification = IntegralClass::Divergent;
  else v.classification = b_hat > 1.0 + band_b ? IntegralClass::Finite
                                               : IntegralClass::Divergent;
  if (v.classification == IntegralClass::Divergent) {
    v.value_is_infinite = true;
    v.integral_value = std::numeric_limits<double>::infinity();
  }
  return v;
}

void require_boundary(const CovarianceModel& model, int S) {
  if (S != 0 && S != 1) throw std::invalid_argument("criteria: S must be 0 or 1");
  if (S == 1 && model.domain().closed_hi)
    throw std::invalid_argument("criteria: S=1 is not an open end of this model's domain");
}

}  // namespace

Verdict eval_I(const CovarianceModel& model, const WeightSpec& w, int S, int k) {
  if (k < 1) throw std::invalid_argument("eval_I: k must be >= 1");
  require_boundary(model, S);
  return classify_ladder(make_integrand_I(model, w, S, k));
}

Verdict eval_J(const CovarianceModel& model, const WeightSpec& w, int S, double c) {
  if (!(c > 0.0)) throw std::invalid_argument("eval_J: c must be positive");
  require_boundary(model, S);
  return classify_ladder(make_integrand_J(model, w, S, c));
}

FinitenessReport finiteness_verdict(const CovarianceModel& model, const WeightSpec& w,
                                    int S) {
  require_boundary(model, S);
  if (model.kind() == ModelKind::Custom && !model.bc_conditions_asserted())
    throw std::invalid_argument(
        "finiteness_verdict: custom model must assert conditions B(S)/C(S)");
  // condition A(S): w^2 escapes toward S. Compare growth over two depth
  // doublings; a bounded weight shows collapsing increments.
  const double g1 = w.w2_near(S, std::pow(2.0, -20));
  const double g2 = w.w2_near(S, std::pow(2.0, -40));
  const double g3 = w.w2_near(S, std::pow(2.0, -60));
  if (!(g3 > g2) || !(g2 > g1) || (g3 - g2) < 0.1 * (g2 - g1))
    throw std::invalid_argument("finiteness_verdict: weight violates A(S) (w^2 must escape)");

  FinitenessReport rep;
  bool any_inconclusive = false;
  for (int e = -10; e <= 10; ++e) {
    const double c = std::pow(2.0, e);
    const Verdict v = eval_J(model, w, S, c);
    rep.ladder.emplace_back(c, v.classification);
    if (v.classification == IntegralClass::Finite) {
      rep.verdict = Finiteness::ASFinite;
      rep.c_finite = c;
      return rep;
    }
    if (v.classification == IntegralClass::Inconclusive) any_inconclusive = true;
  }
  rep.verdict = any_inconclusive ? Finiteness::Inconclusive : Finiteness::ASInfinite;
  return rep;
}

BCReport check_conditions_BC(const CovarianceModel& model, double d0, int S, int j_lo,
                             int j_hi) {
  if (!(d0 > 0.0)) throw std::invalid_argument("check_conditions_BC: d0 must be positive");
  if (j_lo < 1 || j_hi < j_lo) throw std::invalid_argument("check_conditions_BC: bad j range");
  if (!f_is_infinite(model, S))
    throw std::invalid_argument("check_conditions_BC: |f(S)| must be infinite");

  const int pts = 12;
  const double sgn = S == 1 ? 1.0 : -1.0;
  const bool exact = model.has_exact_corr_f();

  // y-grid (and, for custom models, the t-grid) cached per interval; interior
  // midpoint sampling so neighbouring intervals do not contribute the shared
  // endpoint as a degenerate s = t pair
  auto interval_ys = [&](int j) {
    std::vector<double> ys(static_cast<std::size_t>(pts));
    for (int i = 0; i < pts; ++i)
      ys[static_cast<std::size_t>(i)] = sgn * d0 * (j - 1 + (i + 0.5) / pts);
    return ys;
  };
  std::vector<std::vector<double>> ys_all, ts_all;
  for (int j = j_lo; j <= j_hi; ++j) {
    ys_all.push_back(interval_ys(j));
    if (!exact) {
      std::vector<double> ts;
      for (double y : ys_all.back()) ts.push_back(f_inverse(model, y));
      ts_all.push_back(std::move(ts));
    }
  }
  auto corr_at = [&](int j1, int i1, int j2, int i2) {
    if (exact)
      return model.corr_f(ys_all[static_cast<std::size_t>(j1)][static_cast<std::size_t>(i1)],
                          ys_all[static_cast<std::size_t>(j2)][static_cast<std::size_t>(i2)]);
    return model.corr(ts_all[static_cast<std::size_t>(j1)][static_cast<std::size_t>(i1)],
                      ts_all[static_cast<std::size_t>(j2)][static_cast<std::size_t>(i2)]);
  };

  BCReport rep;
  for (int j = j_lo; j <= j_hi; ++j) {
    const int jj = j - j_lo;
    double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
    for (int ai = 0; ai < pts; ++ai) {
      for (int bi = ai + 1; bi < pts; ++bi) {
        const double dy = std::fabs(ys_all[static_cast<std::size_t>(jj)][static_cast<std::size_t>(bi)] -
                                    ys_all[static_cast<std::size_t>(jj)][static_cast<std::size_t>(ai)]);
        if (dy == 0.0) continue;
        const double kk = model.K(dy);
        const double ratio = (1.0 - corr_at(jj, ai, jj, bi)) / (kk * kk);
        lo = std::min(lo, ratio);
        hi = std::max(hi, ratio);
      }
    }
    rep.rows.push_back({j, lo, hi});
  }

  // cross-interval decay sup_{s in Delta_{j+l}, t in Delta_j} |r| against l
  const int l_max = std::min(12, j_hi - j_lo);
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int cnt = 0;
  for (int l = 1; l <= l_max; ++l) {
    double sup_r = 0.0;
    for (int ai = 0; ai < pts; ++ai)
      for (int bi = 0; bi < pts; ++bi)
        sup_r = std::max(sup_r, std::fabs(corr_at(0, ai, l, bi)));
    rep.cross_sup.emplace_back(l, sup_r);
    if (sup_r > 0.0) {
      const double x = std::log(static_cast<double>(l)), y = std::log(sup_r);
      sx += x; sy += y; sxx += x * x; sxy += x * y;
      ++cnt;
    }
  }
  rep.cross_decay_slope = cnt >= 3 ? (cnt * sxy - sx * sy) / (cnt * sxx - sx * sx)
                                   : -std::numeric_limits<double>::infinity();

  // trend flags: fit ln(hi) and ln(lo) against j over the second half
  const std::size_t half = rep.rows.size() / 2;
  auto slope_of = [&](bool use_hi) {
    double tx = 0, ty = 0, txx = 0, txy = 0;
    int n = 0;
    for (std::size_t i = half; i < rep.rows.size(); ++i) {
      const double val = use_hi ? rep.rows[i].ratio_sup : rep.rows[i].ratio_inf;
      if (!(val > 0.0) || !std::isfinite(val)) return std::numeric_limits<double>::infinity();
      const double x = rep.rows[i].j, y = std::log(val);
      tx += x; ty += y; txx += x * x; txy += x * y;
      ++n;
    }
    return n >= 3 ? (n * txy - tx * ty) / (n * txx - tx * tx)
                  : std::numeric_limits<double>::infinity();
  };
  const double hi_slope = slope_of(true);
  const double lo_slope = slope_of(false);
  rep.flag_b_violation = !(hi_slope < 0.05);
  rep.flag_c_violation = !(lo_slope > -0.05) || !(rep.cross_decay_slope < -0.05);
  return rep;
}

}  // namespace chisup
