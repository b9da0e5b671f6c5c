#include "chisup/weights.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace chisup {

double log_4e2() { return 2.0 + std::log(4.0); }
double loglog_4e2() { return std::log(2.0 + std::log(4.0)); }
double logloglog_4e2() { return std::log(std::log(2.0 + std::log(4.0))); }

WeightSpec WeightSpec::rho_loglog(double rho1, double rho2) {
  if (!(rho1 > 0.0)) throw std::invalid_argument("rho_loglog: rho1 must be positive");
  // positivity of w^2 on (0,1): the minimum is 2A_1 (cases a,b) or 2A_2
  // (case c); the latter is positive iff rho2 > -e rho1
  if (!(rho2 > -std::exp(1.0) * rho1))
    throw std::invalid_argument("rho_loglog: w^2 not strictly positive (needs rho2 > -e*rho1)");
  WeightSpec w;
  w.form_ = WeightForm::RhoLogLog;
  w.name_ = "rho-loglog";
  w.domain_ = Interval{0.0, 1.0, false, false};
  w.rho1_ = rho1;
  w.rho2_ = rho2;
  return w;
}

WeightSpec WeightSpec::fbm_plateau(double rho, double eps) {
  if (!(rho > 0.0)) throw std::invalid_argument("fbm_plateau: rho must be positive");
  if (!(eps > 0.0 && eps < 1.0)) throw std::invalid_argument("fbm_plateau: eps must be in (0,1)");
  WeightSpec w;
  w.form_ = WeightForm::FbmPlateau;
  w.name_ = "fbm-plateau";
  w.domain_ = Interval{0.0, 1.0, false, true};
  w.rho_ = rho;
  w.eps_ = eps;
  return w;
}

WeightSpec WeightSpec::custom(std::function<double(double)> fn, Interval domain,
                              std::string name) {
  if (!fn) throw std::invalid_argument("custom weight: function required");
  WeightSpec w;
  w.form_ = WeightForm::Custom;
  w.name_ = std::move(name);
  w.domain_ = domain;
  w.fn_ = std::move(fn);
  return w;
}

double WeightSpec::w2(double t) const {
  switch (form_) {
    case WeightForm::RhoLogLog: {
      if (!(t > 0.0 && t < 1.0)) throw std::domain_error("rho-loglog weight: t outside (0,1)");
      const double lam = 2.0 - std::log(t) - std::log1p(-t);  // ln(e^2/(t(1-t)))
      const double x = std::log(lam);
      return 2.0 * rho1_ * x + 2.0 * rho2_ * std::log(x);
    }
    case WeightForm::FbmPlateau: {
      if (!(t > 0.0 && t <= 1.0)) throw std::domain_error("plateau weight: t outside (0,1]");
      const double te = std::min(t, eps_);
      return rho_ * std::log(2.0 - std::log(te));
    }
    case WeightForm::Custom: {
      const double v = fn_(t);
      if (!(v > 0.0)) throw std::domain_error("custom weight: nonpositive value");
      return v * v;
    }
  }
  return 0.0;
}

double WeightSpec::eval(double t) const { return std::sqrt(w2(t)); }

double WeightSpec::w2_near(int S, double eta) const {
  if (S != 0 && S != 1) throw std::invalid_argument("w2_near: S must be 0 or 1");
  if (!(eta > 0.0) || eta > 0.5) throw std::invalid_argument("w2_near: eta in (0,1/2] required");
  switch (form_) {
    case WeightForm::RhoLogLog: {
      const double lam = 2.0 - std::log(eta) - std::log1p(-eta);
      const double x = std::log(lam);
      return 2.0 * rho1_ * x + 2.0 * rho2_ * std::log(x);
    }
    case WeightForm::FbmPlateau: {
      if (S != 0) return w2(1.0 - eta);
      const double te = std::min(eta, eps_);
      return rho_ * std::log(2.0 - std::log(te));
    }
    case WeightForm::Custom:
      return w2(S == 0 ? eta : 1.0 - eta);
  }
  return 0.0;
}

double WeightClassification::beta_max() const {
  double b = 0.0;
  for (const auto& m : minimizers) b = std::max(b, m.beta);
  return b;
}

Corollary34Data corollary34_constants(double rho1, double rho2) {
  if (!(rho1 > 0.0)) throw std::invalid_argument("corollary34_constants: rho1 must be positive");
  const double ll = loglog_4e2();
  const double l1 = log_4e2();
  const double lll = logloglog_4e2();
  const double boundary = -rho1 * ll;

  Corollary34Data d;
  const double rel = std::fabs(rho2 - boundary) /
                     std::max(1.0, std::max(std::fabs(rho2), std::fabs(boundary)));
  if (rel < 1e-12) {
    d.case_tag = 'b';
    d.t_points = {0.5};
    d.A = rho1 * ll + rho2 * lll;
    d.Q_const = 384.0 * rho1 / (ll * l1 * l1);  // Q2
    d.beta = 4.0;
    d.w_t1 = std::sqrt(2.0 * d.A);
    d.taylor_coeff = d.Q_const / (48.0 * d.w_t1);
    return d;
  }
  if (rho2 > boundary) {
    d.case_tag = 'a';
    d.t_points = {0.5};
    d.A = rho1 * ll + rho2 * lll;
    d.Q_const = 16.0 / l1 * (rho1 + rho2 / ll);  // Q1
    d.beta = 2.0;
    d.w_t1 = std::sqrt(2.0 * d.A);
    d.taylor_coeff = d.Q_const / (4.0 * d.w_t1);
    return d;
  }
  // case c: two symmetric minimizers where x(t) = -rho2/rho1
  d.case_tag = 'c';
  d.A = rho2 * (std::log(-rho2) - std::log(rho1) - 1.0);  // A_2
  const double disc = 0.25 - std::exp(2.0 - std::exp(-rho2 / rho1));
  if (!(disc > 0.0))
    throw std::runtime_error("corollary34_constants: case-c square root argument not positive");
  const double t1 = 0.5 + std::sqrt(disc);
  d.t_points = {t1, 1.0 - t1};
  d.Q_const = 1.0 / (2.0 * t1 - 1.0) * (2.0 - std::log(t1 * (1.0 - t1)));  // Q
  d.Q3 = 1.0 / (t1 * (1.0 - t1) * d.Q_const);
  d.Q3 *= d.Q3;  // (x'(t_1))^2 = 1/(t1(1-t1)Q)^2
  d.beta = 2.0;
  d.w_t1 = std::sqrt(2.0 * d.A);
  d.taylor_coeff = rho1 * rho1 * d.Q3 / (-2.0 * rho2 * d.w_t1);
  return d;
}

namespace {

// Golden-section refinement of a bracketed minimum.
double golden_min(const std::function<double(double)>& f, double lo, double hi) {
  const double gr = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = lo, b = hi;
  double c = b - gr * (b - a), d = a + gr * (b - a);
  double fc = f(c), fd = f(d);
  for (int it = 0; it < 200 && b - a > 1e-14 * std::max(1.0, std::fabs(a)); ++it) {
    if (fc < fd) {
      b = d; d = c; fd = fc;
      c = b - gr * (b - a); fc = f(c);
    } else {
      a = c; c = d; fc = fd;
      d = a + gr * (b - a); fd = f(d);
    }
  }
  return 0.5 * (a + b);
}

WeightClassification classify_custom(const WeightSpec& w) {
  // scan a truncated copy of the domain for local minima, refine each, then
  // fit w(t_i+h) - w(t_i) ~ a h^beta over h in [1e-5, 1e-3]
  const double lo = std::max(w.domain().lo + 1e-4, 1e-4);
  const double hi = w.domain().closed_hi ? w.domain().hi : w.domain().hi - 1e-4;
  const int n_scan = 8193;
  std::vector<double> ts(n_scan), ws(n_scan);
  for (int i = 0; i < n_scan; ++i) {
    ts[static_cast<std::size_t>(i)] = lo + (hi - lo) * i / (n_scan - 1);
    ws[static_cast<std::size_t>(i)] = w.eval(ts[static_cast<std::size_t>(i)]);
  }
  const double wmin_scan = *std::min_element(ws.begin(), ws.end());

  // plateau detection: a run of >= 32 consecutive scan points within 1e-10 of
  // the minimum is treated as an F2 interval
  const double ptol = 1e-10 * std::max(1.0, wmin_scan);
  std::vector<PlateauInterval> plateaus;
  int run_start = -1;
  for (int i = 0; i <= n_scan; ++i) {
    const bool at_min = i < n_scan && ws[static_cast<std::size_t>(i)] - wmin_scan <= ptol;
    if (at_min && run_start < 0) run_start = i;
    if (!at_min && run_start >= 0) {
      if (i - run_start >= 32)
        plateaus.push_back({ts[static_cast<std::size_t>(run_start)],
                            ts[static_cast<std::size_t>(i - 1)]});
      run_start = -1;
    }
  }
  if (!plateaus.empty()) {
    WeightClassification cls;
    cls.kind = WeightClassification::Kind::F2;
    cls.intervals = plateaus;
    cls.w_min = wmin_scan;
    return cls;
  }

  // isolated minimizers: local minima of the scan near the global minimum
  std::vector<double> seeds;
  for (int i = 1; i + 1 < n_scan; ++i) {
    const double v = ws[static_cast<std::size_t>(i)];
    if (v <= ws[static_cast<std::size_t>(i - 1)] && v <= ws[static_cast<std::size_t>(i + 1)] &&
        v - wmin_scan < 1e-6 * std::max(1.0, wmin_scan))
      seeds.push_back(ts[static_cast<std::size_t>(i)]);
  }
  if (seeds.empty()) seeds.push_back(ts[static_cast<std::size_t>(
      std::min_element(ws.begin(), ws.end()) - ws.begin())]);

  auto f = [&w](double t) { return w.eval(t); };
  const double span = (hi - lo) / (n_scan - 1);
  WeightClassification cls;
  cls.kind = WeightClassification::Kind::F1;
  for (double s : seeds) {
    const double t0 = golden_min(f, std::max(lo, s - 2 * span), std::min(hi, s + 2 * span));
    if (std::find_if(cls.minimizers.begin(), cls.minimizers.end(), [&](const Minimizer& m) {
          return std::fabs(m.t - t0) < 16 * span;
        }) != cls.minimizers.end())
      continue;
    if (t0 - w.domain().lo < 1e-3 || w.domain().hi - t0 < 1e-3)
      throw std::runtime_error("classify: custom minimizer on the boundary (F1 needs inner points)");
    Minimizer m;
    m.t = t0;
    m.w_min = w.eval(t0);
    // log-log regression of w(t0+h)-w(t0) on h. The window is picked from the
    // data: points below the subtraction noise floor are unusable, points at
    // a scale comparable to the distance to the boundary leave the local
    // expansion; fit the lowest usable decade and a half.
    const double dist = std::min(t0 - w.domain().lo, w.domain().hi - t0);
    const double h_cap = std::min(0.05, 0.1 * dist);
    const double noise_floor = 1e4 * 2.3e-16 * std::max(1.0, m.w_min);
    std::vector<std::pair<double, double>> pts;  // (h, d)
    for (int i = 0; i < 48; ++i) {
      const double h = 1e-7 * std::pow(h_cap / 1e-7, i / 47.0);
      const double dplus = w.eval(t0 + h) - m.w_min;
      const double dminus = w.eval(t0 - h) - m.w_min;
      const double dv = 0.5 * (dplus + dminus);
      if (dv > noise_floor) pts.emplace_back(h, dv);
    }
    if (pts.size() < 8) throw std::runtime_error("classify: custom expansion fit failed");
    const double h_hi = pts.front().first * 30.0;
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    int cnt = 0;
    for (const auto& [h, dv] : pts) {
      if (h > h_hi) break;
      const double x = std::log(h), y = std::log(dv);
      sx += x; sy += y; sxx += x * x; sxy += x * y;
      ++cnt;
    }
    if (cnt < 8) throw std::runtime_error("classify: custom expansion fit failed");
    const double beta = (cnt * sxy - sx * sy) / (cnt * sxx - sx * sx);
    const double lna = (sy - beta * sx) / cnt;
    m.beta = beta;
    m.a = std::exp(lna);
    cls.minimizers.push_back(m);
  }
  std::sort(cls.minimizers.begin(), cls.minimizers.end(),
            [](const Minimizer& a, const Minimizer& b) { return a.t < b.t; });
  cls.w_min = cls.minimizers.front().w_min;
  return cls;
}

}  // namespace

WeightClassification classify(const WeightSpec& w) {
  switch (w.form()) {
    case WeightForm::RhoLogLog: {
      const Corollary34Data d = corollary34_constants(w.rho1(), w.rho2());
      WeightClassification cls;
      cls.kind = WeightClassification::Kind::F1;
      cls.w_min = d.w_t1;
      for (double t : d.t_points)
        cls.minimizers.push_back({t, d.w_t1, d.taylor_coeff, d.beta});
      std::sort(cls.minimizers.begin(), cls.minimizers.end(),
                [](const Minimizer& a, const Minimizer& b) { return a.t < b.t; });
      return cls;
    }
    case WeightForm::FbmPlateau: {
      WeightClassification cls;
      cls.kind = WeightClassification::Kind::F2;
      cls.intervals = {{w.eps(), 1.0}};
      cls.w_min = std::sqrt(w.w2(w.eps()));
      return cls;
    }
    case WeightForm::Custom:
      return classify_custom(w);
  }
  throw std::logic_error("classify: unreachable");
}

}  // namespace chisup
