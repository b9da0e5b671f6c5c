#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "chisup/asymptotics.hpp"
#include "chisup/chi_process.hpp"
#include "chisup/covariance.hpp"
#include "chisup/weights.hpp"

namespace chisup {

struct ExperimentConfig {
  CovarianceModel model = CovarianceModel::brownian_bridge_normalized();
  WeightSpec weight = WeightSpec::rho_loglog(1.0, 0.0);
  std::vector<double> b = {1.0};
  double delta = 1.0 / 16384.0;   // boundary truncation
  int grid_points = 1 << 14;
  std::vector<double> u_levels;
  long long n_paths = 10000;
  std::uint64_t master_seed = 1;
  int workers = 1;
};

struct TailRow {
  double u = 0.0;
  long long exceed = 0;
  double p_hat = 0.0;
  double wilson_lo = 0.0;
  double wilson_hi = 0.0;
  double asymptotic = 0.0;
  double ratio = 0.0;       // p_hat / asymptotic; NaN when flagged
  bool upper_bound_only = false;  // zero exceedances: p_hat is only bounded above
};

struct TailReport {
  std::vector<TailRow> rows;
  long long n_paths = 0;
  int grid_points = 0;
  double delta = 0.0;
  std::uint64_t master_seed = 0;
  int workers = 0;
  std::string model_name, weight_name;
  // mean over paths of sup_t sqrt(chi^2_b)/w (Borell Q estimate, same pass)
  double mean_sup_root = 0.0;
};

// Exceedance estimation of the weighted grid supremum at each u level, with
// Wilson 95% intervals and the asymptotic column when an evaluator is given.
TailReport empirical_tail(const ExperimentConfig& cfg,
                          const AsymptoticEvaluation* asym = nullptr);

struct RatioSummary {
  std::vector<double> us, ratios;
  bool all_within(double lo, double hi) const;
  bool deviation_nonincreasing() const;  // |ratio-1| nonincreasing in u
};

RatioSummary ratio_report(const TailReport& report);

struct BoundRow {
  double u = 0.0;
  bool applicable = false;  // requires u > Q^2
  double bound = 0.0;
  double p_hat = 0.0;
  double wilson_hi = 0.0;
};

struct BorellReport {
  double Q = 0.0;           // E sup_t sqrt(chi^2_b)/w (MC)
  double sigma2_sup = 0.0;  // sup_t Var(X)/w^2
  std::vector<BoundRow> rows;
  bool dominates_everywhere = true;  // bound >= wilson_hi at every applicable u
};

// Gaussian concentration bound for the weighted supremum:
// P(sup chi^2/w^2 > u) <= exp(-(sqrt(u)-Q)^2/(2 sigma2_sup)) for u > Q^2.
// With w == 1 this is the plain chi-square version.
BorellReport borell_bound(const ExperimentConfig& cfg);

struct DoubleSupReport {
  double u = 0.0;
  double Q = 0.0;    // E[sup_{S1} sqrt(chi^2) + sup_{S2} sqrt(chi^2)]
  double eta = 0.0;  // sup cross-interval |corr|
  bool applicable = false;  // requires 2 sqrt(u) > Q
  double bound = 0.0;
  double joint_p = 0.0, joint_hi = 0.0;
  double marginal1_p = 0.0, marginal2_p = 0.0;
};

// Tail bound for the joint exceedance of the (unweighted) chi-square supremum
// over two disjoint subintervals:
// P(sup_{S1} > u, sup_{S2} > u) <= exp(-(2 sqrt(u)-Q)^2/(2(2+2 eta))).
DoubleSupReport double_sup_bound(const ExperimentConfig& cfg,
                                 std::pair<double, double> s1,
                                 std::pair<double, double> s2, double u);

}  // namespace chisup
