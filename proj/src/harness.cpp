#include "chisup/harness.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>
#include <stdexcept>
#include <thread>

#include "chisup/gauss_paths.hpp"
#include "chisup/rng.hpp"
#include "chisup/special.hpp"

namespace chisup {

namespace {

GridPtr experiment_grid(const ExperimentConfig& cfg) {
  const Interval& dom = cfg.model.domain();
  const double hi = dom.closed_hi ? dom.hi : dom.hi - cfg.delta;
  return make_uniform_grid(dom.lo + cfg.delta, hi, cfg.grid_points);
}

// Samples one normalized path into a caller buffer; reusable across paths.
class NormalizedSampler {
 public:
  NormalizedSampler(const CovarianceModel& model, const Grid& grid) : model_(model) {
    const int n = grid.n_points();
    switch (model.kind()) {
      case ModelKind::BrownianBridgeNormalized: {
        if (!(grid.t_max() < 1.0))
          throw std::domain_error("harness: bridge grid must stay inside (0,1)");
        sq_dt_.resize(static_cast<std::size_t>(n));
        sq_dt_[0] = std::sqrt(grid[0]);
        for (int i = 1; i < n; ++i)
          sq_dt_[static_cast<std::size_t>(i)] = std::sqrt(grid[i] - grid[i - 1]);
        sq_tail_ = std::sqrt(1.0 - grid.t_max());
        t_.assign(grid.points().begin(), grid.points().end());
        inv_norm_.resize(static_cast<std::size_t>(n));
        for (int i = 0; i < n; ++i)
          inv_norm_[static_cast<std::size_t>(i)] =
              1.0 / std::sqrt(grid[i] * (1.0 - grid[i]));
        break;
      }
      case ModelKind::FbmNormalized: {
        if (!grid.is_uniform())
          throw std::invalid_argument("harness: fbm model needs a uniform grid");
        const double step = n > 1 ? grid.step() : grid.t_min();
        const double nu_real = grid.t_min() / step;
        nu_ = static_cast<int>(std::llround(nu_real));
        if (nu_ < 1 || std::fabs(nu_real - nu_) > 1e-6)
          throw std::invalid_argument("harness: fbm grid t_min must sit on the step lattice");
        fgn_ = std::make_unique<FgnSampler>(nu_ + n - 1, model.hurst(), step);
        inc_.resize(static_cast<std::size_t>(nu_ + n - 1));
        inv_norm_.resize(static_cast<std::size_t>(n));
        for (int i = 0; i < n; ++i)
          inv_norm_[static_cast<std::size_t>(i)] = std::pow(grid[i], -model.hurst());
        break;
      }
      case ModelKind::Custom: {
        chol_ = std::make_unique<CholeskySampler>(correlation_matrix(model, grid), n);
        break;
      }
    }
    n_ = n;
  }

  void sample(PhiloxStream& rng, double* out) const {
    switch (model_.kind()) {
      case ModelKind::BrownianBridgeNormalized: {
        double w = 0.0;
        for (int i = 0; i < n_; ++i) {
          w += sq_dt_[static_cast<std::size_t>(i)] * rng.normal();
          out[i] = w;
        }
        const double w1 = w + sq_tail_ * rng.normal();
        for (int i = 0; i < n_; ++i)
          out[i] = (out[i] - t_[static_cast<std::size_t>(i)] * w1) *
                   inv_norm_[static_cast<std::size_t>(i)];
        return;
      }
      case ModelKind::FbmNormalized: {
        fgn_->sample(rng, inc_.data());
        double b = 0.0;
        for (int i = 0; i < nu_ - 1; ++i) b += inc_[static_cast<std::size_t>(i)];
        for (int i = 0; i < n_; ++i) {
          b += inc_[static_cast<std::size_t>(nu_ - 1 + i)];
          out[i] = b * inv_norm_[static_cast<std::size_t>(i)];
        }
        return;
      }
      case ModelKind::Custom:
        chol_->sample(rng, out);
        return;
    }
  }

 private:
  const CovarianceModel& model_;
  int n_ = 0;
  // bridge
  std::vector<double> sq_dt_, t_, inv_norm_;
  double sq_tail_ = 0.0;
  // fbm
  std::unique_ptr<FgnSampler> fgn_;
  mutable std::vector<double> inc_;
  int nu_ = 1;
  // custom
  std::unique_ptr<CholeskySampler> chol_;
};

struct PassOutputs {
  // per path: sup_t chi^2_b(t)/w^2(t) over the full grid
  std::vector<double> sup_w;
  // optional: unweighted sups over two index ranges
  std::vector<double> sup_s1, sup_s2;
};

// One Monte Carlo pass over all paths. Streams are keyed (seed, path*n + l),
// so results are independent of the worker partition.
void run_pass(const ExperimentConfig& cfg, const Grid& grid,
              const std::vector<double>& inv_w2, const std::pair<int, int>* range1,
              const std::pair<int, int>* range2, PassOutputs& out) {
  const BVector bvec(cfg.b);  // validates the ordering constraint
  const int n_comp = bvec.n();
  const long long n_paths = cfg.n_paths;
  const int workers = std::max(1, cfg.workers);
  const int npts = grid.n_points();

  out.sup_w.assign(static_cast<std::size_t>(n_paths), 0.0);
  if (range1) out.sup_s1.assign(static_cast<std::size_t>(n_paths), 0.0);
  if (range2) out.sup_s2.assign(static_cast<std::size_t>(n_paths), 0.0);

  auto work = [&](long long lo, long long hi) {
    // each worker owns its sampler (scratch buffers are not shareable)
    const NormalizedSampler proto(cfg.model, grid);
    std::vector<double> x(static_cast<std::size_t>(npts));
    std::vector<double> acc;
    if (n_comp > 1) acc.resize(static_cast<std::size_t>(npts));
    for (long long p = lo; p < hi; ++p) {
      const double* chi = nullptr;
      if (n_comp == 1) {
        PhiloxStream rng(cfg.master_seed, static_cast<std::uint64_t>(p));
        proto.sample(rng, x.data());
        for (int i = 0; i < npts; ++i) x[static_cast<std::size_t>(i)] *= x[static_cast<std::size_t>(i)];
        chi = x.data();
      } else {
        std::fill(acc.begin(), acc.end(), 0.0);
        for (int l = 0; l < n_comp; ++l) {
          PhiloxStream rng(cfg.master_seed,
                           static_cast<std::uint64_t>(p) * n_comp + static_cast<std::uint64_t>(l));
          proto.sample(rng, x.data());
          const double b2 = cfg.b[static_cast<std::size_t>(l)] * cfg.b[static_cast<std::size_t>(l)];
          for (int i = 0; i < npts; ++i)
            acc[static_cast<std::size_t>(i)] += b2 * x[static_cast<std::size_t>(i)] * x[static_cast<std::size_t>(i)];
        }
        chi = acc.data();
      }
      double s = 0.0;
      for (int i = 0; i < npts; ++i) {
        const double v = chi[i] * inv_w2[static_cast<std::size_t>(i)];
        if (v > s) s = v;
      }
      out.sup_w[static_cast<std::size_t>(p)] = s;
      if (range1) {
        double s1 = 0.0;
        for (int i = range1->first; i <= range1->second; ++i) s1 = std::max(s1, chi[i]);
        out.sup_s1[static_cast<std::size_t>(p)] = s1;
      }
      if (range2) {
        double s2 = 0.0;
        for (int i = range2->first; i <= range2->second; ++i) s2 = std::max(s2, chi[i]);
        out.sup_s2[static_cast<std::size_t>(p)] = s2;
      }
    }
  };

  if (workers == 1) {
    work(0, n_paths);
  } else {
    std::vector<std::thread> pool;
    const long long chunk = (n_paths + workers - 1) / workers;
    for (int w = 0; w < workers; ++w) {
      const long long lo = w * chunk;
      const long long hi = std::min(n_paths, lo + chunk);
      if (lo >= hi) break;
      pool.emplace_back(work, lo, hi);
    }
    for (auto& th : pool) th.join();
  }
}

std::vector<double> inverse_w2_on_grid(const WeightSpec& w, const Grid& grid) {
  std::vector<double> inv(static_cast<std::size_t>(grid.n_points()));
  for (int i = 0; i < grid.n_points(); ++i) {
    const double w2 = w.w2(grid[i]);
    if (!(w2 > 0.0)) throw std::domain_error("harness: weight not positive on the grid");
    inv[static_cast<std::size_t>(i)] = 1.0 / w2;
  }
  return inv;
}

}  // namespace

TailReport empirical_tail(const ExperimentConfig& cfg, const AsymptoticEvaluation* asym) {
  if (cfg.n_paths < 1000) throw std::invalid_argument("empirical_tail: need n_paths >= 1000");
  if (cfg.u_levels.empty()) throw std::invalid_argument("empirical_tail: no u levels");
  for (std::size_t i = 1; i < cfg.u_levels.size(); ++i)
    if (!(cfg.u_levels[i] > cfg.u_levels[i - 1]))
      throw std::invalid_argument("empirical_tail: u levels must be increasing");

  const GridPtr grid = experiment_grid(cfg);
  const std::vector<double> inv_w2 = inverse_w2_on_grid(cfg.weight, *grid);
  PassOutputs outs;
  run_pass(cfg, *grid, inv_w2, nullptr, nullptr, outs);

  TailReport rep;
  rep.n_paths = cfg.n_paths;
  rep.grid_points = cfg.grid_points;
  rep.delta = cfg.delta;
  rep.master_seed = cfg.master_seed;
  rep.workers = cfg.workers;
  rep.model_name = cfg.model.name();
  rep.weight_name = cfg.weight.name();

  double qsum = 0.0;
  for (long long p = 0; p < cfg.n_paths; ++p)
    qsum += std::sqrt(outs.sup_w[static_cast<std::size_t>(p)]);
  rep.mean_sup_root = qsum / static_cast<double>(cfg.n_paths);

  for (double u : cfg.u_levels) {
    TailRow row;
    row.u = u;
    long long cnt = 0;
    for (long long p = 0; p < cfg.n_paths; ++p)
      if (outs.sup_w[static_cast<std::size_t>(p)] > u) ++cnt;
    row.exceed = cnt;
    row.p_hat = static_cast<double>(cnt) / static_cast<double>(cfg.n_paths);
    const auto ci = wilson_interval(cnt, cfg.n_paths);
    row.wilson_lo = ci.first;
    row.wilson_hi = ci.second;
    if (asym) {
      row.asymptotic = asym->value(u);
      if (cnt == 0) {
        row.upper_bound_only = true;
        row.ratio = std::numeric_limits<double>::quiet_NaN();
      } else {
        row.ratio = row.p_hat / row.asymptotic;
      }
    } else {
      row.asymptotic = std::numeric_limits<double>::quiet_NaN();
      row.ratio = std::numeric_limits<double>::quiet_NaN();
    }
    rep.rows.push_back(row);
  }
  return rep;
}

bool RatioSummary::all_within(double lo, double hi) const {
  for (double r : ratios)
    if (!(r >= lo && r <= hi)) return false;
  return !ratios.empty();
}

bool RatioSummary::deviation_nonincreasing() const {
  for (std::size_t i = 1; i < ratios.size(); ++i)
    if (std::fabs(ratios[i] - 1.0) > std::fabs(ratios[i - 1] - 1.0)) return false;
  return ratios.size() >= 2;
}

RatioSummary ratio_report(const TailReport& report) {
  RatioSummary s;
  for (const auto& row : report.rows) {
    if (row.upper_bound_only || std::isnan(row.ratio)) continue;
    s.us.push_back(row.u);
    s.ratios.push_back(row.ratio);
  }
  if (s.ratios.size() < 3)
    throw std::invalid_argument("ratio_report: need >= 3 u levels with nonzero exceedances");
  return s;
}

BorellReport borell_bound(const ExperimentConfig& cfg) {
  if (cfg.u_levels.empty()) throw std::invalid_argument("borell_bound: no u levels");
  const GridPtr grid = experiment_grid(cfg);
  const std::vector<double> inv_w2 = inverse_w2_on_grid(cfg.weight, *grid);
  PassOutputs outs;
  run_pass(cfg, *grid, inv_w2, nullptr, nullptr, outs);

  BorellReport rep;
  double qsum = 0.0;
  for (long long p = 0; p < cfg.n_paths; ++p)
    qsum += std::sqrt(outs.sup_w[static_cast<std::size_t>(p)]);
  rep.Q = qsum / static_cast<double>(cfg.n_paths);
  // unit-variance models: sup_t sigma_X^2/w^2 = max 1/w^2
  rep.sigma2_sup = *std::max_element(inv_w2.begin(), inv_w2.end());

  for (double u : cfg.u_levels) {
    BoundRow row;
    row.u = u;
    long long cnt = 0;
    for (long long p = 0; p < cfg.n_paths; ++p)
      if (outs.sup_w[static_cast<std::size_t>(p)] > u) ++cnt;
    row.p_hat = static_cast<double>(cnt) / static_cast<double>(cfg.n_paths);
    row.wilson_hi = wilson_interval(cnt, cfg.n_paths).second;
    if (u > rep.Q * rep.Q) {
      row.applicable = true;
      const double z = std::sqrt(u) - rep.Q;
      row.bound = std::exp(-z * z / (2.0 * rep.sigma2_sup));
      if (row.bound < row.wilson_hi) rep.dominates_everywhere = false;
    }
    rep.rows.push_back(row);
  }
  return rep;
}

DoubleSupReport double_sup_bound(const ExperimentConfig& cfg, std::pair<double, double> s1,
                                 std::pair<double, double> s2, double u) {
  if (s1.first > s1.second || s2.first > s2.second)
    throw std::invalid_argument("double_sup_bound: malformed intervals");
  if (!(s1.second < s2.first || s2.second < s1.first))
    throw std::invalid_argument("double_sup_bound: intervals must be disjoint");

  const GridPtr grid = experiment_grid(cfg);
  const Grid& g = *grid;
  auto index_range = [&](std::pair<double, double> iv) {
    int lo = -1, hi = -1;
    for (int i = 0; i < g.n_points(); ++i) {
      if (g[i] >= iv.first && g[i] <= iv.second) {
        if (lo < 0) lo = i;
        hi = i;
      }
    }
    if (lo < 0) throw std::invalid_argument("double_sup_bound: interval contains no grid point");
    return std::pair<int, int>{lo, hi};
  };
  const auto r1 = index_range(s1), r2 = index_range(s2);

  const std::vector<double> inv_w2(static_cast<std::size_t>(g.n_points()), 1.0);
  PassOutputs outs;
  run_pass(cfg, g, inv_w2, &r1, &r2, outs);

  DoubleSupReport rep;
  rep.u = u;
  double qsum = 0.0;
  long long joint = 0, m1 = 0, m2 = 0;
  for (long long p = 0; p < cfg.n_paths; ++p) {
    const double a = outs.sup_s1[static_cast<std::size_t>(p)];
    const double b = outs.sup_s2[static_cast<std::size_t>(p)];
    qsum += std::sqrt(a) + std::sqrt(b);
    if (a > u) ++m1;
    if (b > u) ++m2;
    if (a > u && b > u) ++joint;
  }
  rep.Q = qsum / static_cast<double>(cfg.n_paths);

  // eta: sup of cross-interval correlation, subsampled grid pairs
  double eta = 0.0;
  const int cap = 200;
  const int st1 = std::max(1, (r1.second - r1.first + 1) / cap);
  const int st2 = std::max(1, (r2.second - r2.first + 1) / cap);
  for (int i = r1.first; i <= r1.second; i += st1)
    for (int j = r2.first; j <= r2.second; j += st2)
      eta = std::max(eta, std::fabs(cfg.model.corr(g[i], g[j])));
  rep.eta = eta;

  rep.joint_p = static_cast<double>(joint) / static_cast<double>(cfg.n_paths);
  rep.joint_hi = wilson_interval(joint, cfg.n_paths).second;
  rep.marginal1_p = static_cast<double>(m1) / static_cast<double>(cfg.n_paths);
  rep.marginal2_p = static_cast<double>(m2) / static_cast<double>(cfg.n_paths);
  if (2.0 * std::sqrt(u) > rep.Q) {
    rep.applicable = true;
    const double z = 2.0 * std::sqrt(u) - rep.Q;
    rep.bound = std::exp(-z * z / (2.0 * (2.0 + 2.0 * eta)));
  }
  return rep;
}

}  // namespace chisup
