#include <cmath>
#include <stdexcept>

#include "chisup/criteria.hpp"
#include "doctest.h"

using namespace chisup;

namespace {
const CovarianceModel bridge = CovarianceModel::brownian_bridge_normalized();
}

TEST_CASE("f-transform closed forms and inverse") {
  CHECK(f_transform(bridge, 0.5) == 0.0);
  // invert (1/2)ln(t/(1-t)) = 1/2  ->  t = e/(1+e)
  const double t = std::exp(1.0) / (1.0 + std::exp(1.0));
  CHECK(f_transform(bridge, t) == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(f_inverse(bridge, 0.5) == doctest::Approx(t).epsilon(1e-12));
  CHECK_THROWS_AS(f_transform(bridge, 0.0), std::domain_error);
  CHECK_THROWS_AS(f_transform(bridge, 1.0), std::domain_error);

  const CovarianceModel fbm = CovarianceModel::fbm_normalized(0.5);
  // f(t) = 2^{-1} ln(2t); f(0) = -inf, f(1) finite
  CHECK(f_transform(fbm, 0.5) == 0.0);
  CHECK(f_transform(fbm, 1.0) == doctest::Approx(0.5 * std::log(2.0)).epsilon(1e-12));
  CHECK(f_is_infinite(fbm, 0));
  CHECK(!f_is_infinite(fbm, 1));
  CHECK(f_is_infinite(bridge, 0));
  CHECK(f_is_infinite(bridge, 1));
}

TEST_CASE("custom model f-transform via quadrature matches the bridge closed form") {
  CovarianceModel::CustomSpec spec;
  spec.alpha = 1.0;
  spec.domain = Interval{0.0, 1.0, false, false};
  spec.corr = [](double s, double t) { return s == t ? 1.0 : std::exp(-std::fabs(s - t)); };
  spec.C = [](double t) { return 1.0 / (2.0 * t * (1.0 - t)); };
  spec.K = [](double h) { return std::sqrt(std::fabs(h)); };
  spec.q = [](double u) { return 1.0 / u; };
  const CovarianceModel m = CovarianceModel::custom(spec);
  for (double t : {0.2, 0.5, 0.9}) {
    CHECK(f_transform(m, t) == doctest::Approx(f_transform(bridge, t)).epsilon(1e-10));
    CHECK(f_inverse(m, f_transform(bridge, t)) == doctest::Approx(t).epsilon(1e-9));
  }
}

TEST_CASE("partition of [1/2, 1)") {
  const auto parts = partition(bridge, 1.0, 1, 5);
  REQUIRE(parts.size() == 5);
  CHECK(parts[0].first == 0.5);
  CHECK(parts[0].second == doctest::Approx(std::exp(2.0) / (1.0 + std::exp(2.0))).epsilon(1e-12));
  // consecutive intervals share endpoints exactly
  for (std::size_t i = 1; i < parts.size(); ++i) CHECK(parts[i].first == parts[i - 1].second);
  // images under f have equal length d
  for (const auto& [a, b] : parts)
    CHECK(f_transform(bridge, b) - f_transform(bridge, a) == doctest::Approx(1.0).epsilon(1e-10));
  // mirrored for S = 0
  const auto parts0 = partition(bridge, 1.0, 0, 3);
  CHECK(parts0[0].second == 0.5);
  CHECK(parts0[0].first == doctest::Approx(1.0 - parts[0].second).epsilon(1e-12));
  // finite f(S) is a precondition error
  const CovarianceModel fbm = CovarianceModel::fbm_normalized(0.5);
  CHECK_THROWS_AS(partition(fbm, 1.0, 1, 3), std::invalid_argument);
}

TEST_CASE("eval_I matches the analytic rule on the margin matrix") {
  // finite iff rho1 > 1, or rho1 = 1 and rho2 > 1 + k/2; all points here keep
  // margin >= 0.25 from the rho1 = 1 boundary
  struct P { double r1, r2; int k; bool finite; };
  const P matrix[] = {
      {1.25, 0.0, 1, true},  {1.5, -1.0, 2, true}, {2.0, 2.5, 4, true},
      {1.25, -2.0, 1, true}, {1.25, 3.0, 2, true}, {2.0, -1.0, 1, true},
      {0.75, 0.0, 1, false}, {0.5, 2.5, 2, false}, {0.25, 0.5, 4, false},
      {0.75, 3.0, 1, false}, {0.75, -1.0, 2, false}, {0.5, 0.0, 1, false},
  };
  for (const P& p : matrix) {
    for (int S : {0, 1}) {
      const Verdict v = eval_I(bridge, WeightSpec::rho_loglog(p.r1, p.r2), S, p.k);
      CHECK(v.classification ==
            (p.finite ? IntegralClass::Finite : IntegralClass::Divergent));
    }
  }
}

TEST_CASE("eval_I boundary cases at rho1 = 1") {
  // (1, 1+k/2) sits exactly on the strict boundary -> divergent
  const Verdict v = eval_I(bridge, WeightSpec::rho_loglog(1.0, 2.0), 1, 2);
  CHECK(v.classification == IntegralClass::Divergent);
  // margin 0.25 on the rho2 side
  CHECK(eval_I(bridge, WeightSpec::rho_loglog(1.0, 2.25), 1, 2).classification ==
        IntegralClass::Finite);
  CHECK(eval_I(bridge, WeightSpec::rho_loglog(1.0, 1.75), 1, 2).classification ==
        IntegralClass::Divergent);
}

TEST_CASE("eval_I trace is monotone and spans the ladder") {
  const Verdict v = eval_I(bridge, WeightSpec::rho_loglog(1.5, 0.0), 1, 1);
  REQUIRE(v.truncation_trace.size() == 45);  // j = 4..48
  CHECK(v.truncation_trace.front().first == std::pow(2.0, -4));
  CHECK(v.truncation_trace.back().first == std::pow(2.0, -48));
  for (std::size_t i = 1; i < v.truncation_trace.size(); ++i) {
    CHECK(v.truncation_trace[i].second >= v.truncation_trace[i - 1].second);
    CHECK(v.truncation_trace[i].first < v.truncation_trace[i - 1].first);
  }
}

TEST_CASE("eval_J: analytic rule a = 2 c rho1") {
  // finite iff 2 c rho1 > 1 (up to the lnln refinement)
  CHECK(eval_J(bridge, WeightSpec::rho_loglog(0.5, 0.0), 1, 2.0).classification ==
        IntegralClass::Finite);
  CHECK(eval_J(bridge, WeightSpec::rho_loglog(1.0, -1.0), 0, 0.25).classification ==
        IntegralClass::Divergent);
  // c = 1/(4 rho1): 2 c rho1 = 1/2 -> divergent
  for (double r1 : {0.7, 1.3}) {
    CHECK(eval_J(bridge, WeightSpec::rho_loglog(r1, 0.5), 1, 1.0 / (4.0 * r1)).classification ==
          IntegralClass::Divergent);
  }
  // fbm plateau, c > 1/rho -> finite; integrand is t^{-1} (ln(e^2/t))^{-c rho}
  const CovarianceModel fbm = CovarianceModel::fbm_normalized(0.5);
  CHECK(eval_J(fbm, WeightSpec::fbm_plateau(1.0, 0.1), 0, 1.5).classification ==
        IntegralClass::Finite);
  CHECK(eval_J(fbm, WeightSpec::fbm_plateau(1.0, 0.1), 0, 0.5).classification ==
        IntegralClass::Divergent);
  CHECK_THROWS_AS(eval_J(bridge, WeightSpec::rho_loglog(1.0, 0.0), 1, 0.0),
                  std::invalid_argument);
}

TEST_CASE("scaling law J_{c, lambda w} = J_{c lambda^2, w}") {
  const WeightSpec w = WeightSpec::rho_loglog(1.0, 0.5);
  const double lam = 1.7;
  const WeightSpec scaled = WeightSpec::custom(
      [w, lam](double t) { return lam * w.eval(t); }, Interval{0.0, 1.0, false, false});
  const Verdict a = eval_J(bridge, scaled, 1, 0.9);
  const Verdict b = eval_J(bridge, w, 1, 0.9 * lam * lam);
  REQUIRE(a.truncation_trace.size() == b.truncation_trace.size());
  // custom weights integrate over a shallower fit window but partials agree
  for (std::size_t i = 0; i < a.truncation_trace.size(); ++i) {
    CHECK(a.truncation_trace[i].second ==
          doctest::Approx(b.truncation_trace[i].second).epsilon(1e-8));
  }
}

TEST_CASE("finiteness verdict: bridge loglog weights are a.s. finite for any rho") {
  for (const auto& [r1, r2] : {std::pair{0.5, 0.0}, std::pair{1.0, -1.0},
                               std::pair{2.0, 3.0}, std::pair{0.25, 1.5}}) {
    for (int S : {0, 1}) {
      const FinitenessReport rep = finiteness_verdict(bridge, WeightSpec::rho_loglog(r1, r2), S);
      CHECK(rep.verdict == Finiteness::ASFinite);
      CHECK(rep.c_finite > 0.0);
    }
  }
  // fbm plateau at S=0
  const CovarianceModel fbm = CovarianceModel::fbm_normalized(0.5);
  const FinitenessReport rep = finiteness_verdict(fbm, WeightSpec::fbm_plateau(1.0, 0.1), 0);
  CHECK(rep.verdict == Finiteness::ASFinite);
}

TEST_CASE("finiteness verdict rejects non-escaping weights (condition A)") {
  const WeightSpec bounded = WeightSpec::custom([](double) { return 2.0; },
                                                Interval{0.0, 1.0, false, false});
  CHECK_THROWS_AS(finiteness_verdict(bridge, bounded, 1), std::invalid_argument);
}

TEST_CASE("finiteness verdict: triple-log weight escapes but stays a.s. infinite") {
  // w^2 = 2 lnlnln(e^2/(t(1-t))): e^{-c w^2} = (lnln)^{-2c}; J diverges for
  // every c (integrand ~ 1/(lam (ln lam)^{2c}) in the log-distance variable
  // ... actually lam^{-0} (ln lam)^{-2c}: a = 0 for all c)
  const WeightSpec slow = WeightSpec::custom(
      [](double t) {
        const double lam = 2.0 - std::log(t * (1.0 - t));
        return std::sqrt(2.0 * std::log(std::log(lam)));
      },
      Interval{0.0, 1.0, false, false});
  const FinitenessReport rep = finiteness_verdict(bridge, slow, 1);
  CHECK(rep.verdict == Finiteness::ASInfinite);
}

TEST_CASE("eq3-style envelope: Q1 e^{-w^2} <= transformed integrand <= Q2 e^{-w^2/3}") {
  const WeightSpec w = WeightSpec::rho_loglog(1.0, 0.5);
  const int k = 2;
  double q1 = 1e300, q2 = 0.0;
  for (int j = 8; j <= 48; ++j) {
    const double eta = std::pow(2.0, -j);
    const double w2 = w.w2_near(1, eta);
    // h = w^{k-2}/q(w^2) e^{-w^2/2} with q(u) = 1/u for the bridge
    const double h = std::pow(w2, 0.5 * (k - 2)) * w2 * std::exp(-0.5 * w2);
    q1 = std::min(q1, h * std::exp(w2));
    q2 = std::max(q2, h * std::exp(w2 / 3.0));
  }
  CHECK(q1 > 0.0);
  CHECK(std::isfinite(q2));
}

TEST_CASE("conditions B/C diagnostic on the bridge") {
  const BCReport rep = check_conditions_BC(bridge, 1.0, 1, 1, 30);
  REQUIRE(rep.rows.size() == 30);
  for (const BCRow& row : rep.rows) {
    CHECK(row.ratio_inf > 0.0);
    CHECK(row.ratio_sup < 1.01);  // (1-e^{-d})/d <= ratio <= 1 for the OU form
    CHECK(row.ratio_inf <= row.ratio_sup);
  }
  CHECK(!rep.flag_b_violation);
  CHECK(!rep.flag_c_violation);
  CHECK(rep.cross_decay_slope < -0.05);

  // fbm side at S = 0
  const CovarianceModel fbm = CovarianceModel::fbm_normalized(0.75);
  const BCReport rf = check_conditions_BC(fbm, 1.0, 0, 1, 20);
  CHECK(!rf.flag_b_violation);
  CHECK(!rf.flag_c_violation);
}

TEST_CASE("conditions B/C: constant-correlation model raises the decay flag") {
  CovarianceModel::CustomSpec spec;
  spec.alpha = 1.0;
  spec.domain = Interval{0.0, 1.0, false, false};
  spec.corr = [](double s, double t) { return s == t ? 1.0 : 0.9; };
  spec.C = [](double t) { return 1.0 / (2.0 * t * (1.0 - t)); };
  spec.K = [](double h) { return std::sqrt(std::fabs(h)); };
  spec.q = [](double u) { return 1.0 / u; };
  const CovarianceModel m = CovarianceModel::custom(spec);
  const BCReport rep = check_conditions_BC(m, 1.0, 1, 1, 10);
  CHECK(rep.flag_c_violation);  // |r| does not decay across intervals
  CHECK(rep.cross_decay_slope > -0.05);
}

TEST_CASE("conditions B/C: white-noise custom model satisfies the decay trivially") {
  CovarianceModel::CustomSpec spec;
  spec.alpha = 1.0;
  spec.domain = Interval{0.0, 1.0, false, false};
  spec.corr = [](double s, double t) { return s == t ? 1.0 : 0.0; };
  spec.C = [](double t) { return 1.0 / (2.0 * t * (1.0 - t)); };
  spec.K = [](double h) { return std::sqrt(std::fabs(h)); };
  spec.q = [](double u) { return 1.0 / u; };
  const CovarianceModel m = CovarianceModel::custom(spec);
  const BCReport rep = check_conditions_BC(m, 1.0, 1, 1, 10);
  // cross-interval sups are all zero: no decay fit, slope -inf, no flag
  for (const auto& [l, sup] : rep.cross_sup) CHECK(sup == 0.0);
  CHECK(rep.cross_decay_slope < -0.05);
}
