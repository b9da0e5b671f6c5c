#include <algorithm>
#include <cmath>
#include <vector>

#include "chisup/gauss_paths.hpp"
#include "chisup/special.hpp"
#include "doctest.h"

using namespace chisup;

namespace {

// sample covariance of (f(path), g(path)) over n paths
template <typename F>
double mc_mean(int n, std::uint64_t seed, F f) {
  double acc = 0.0;
  for (int i = 0; i < n; ++i) {
    PhiloxStream rng(seed, static_cast<std::uint64_t>(i));
    acc += f(rng);
  }
  return acc / n;
}

}  // namespace

TEST_CASE("brownian bridge covariance and variance") {
  const auto grid = std::make_shared<const Grid>(Grid::from_points({0.3, 0.5, 0.7}));
  const int n = 100000;
  double c37 = 0, v5 = 0, m3 = 0, m7 = 0;
  for (int i = 0; i < n; ++i) {
    PhiloxStream rng(2024, static_cast<std::uint64_t>(i));
    const SamplePath p = sample_brownian_bridge(grid, rng);
    c37 += p.values[0] * p.values[2];
    v5 += p.values[1] * p.values[1];
    m3 += p.values[0];
    m7 += p.values[2];
  }
  c37 /= n; v5 /= n; m3 /= n; m7 /= n;
  // Cov(B(0.3),B(0.7)) = 0.3*(1-0.7) = 0.09; Var(B(0.5)) = 0.25.
  // SE(cov) ~ sqrt((v3*v7 + c^2)/n)
  const double se_c = std::sqrt((0.21 * 0.21 + 0.09 * 0.09) / n);
  CHECK(std::fabs(c37 - 0.09) < 3 * se_c);
  CHECK(std::fabs(v5 - 0.25) < 3 * 0.25 * std::sqrt(2.0 / n));
  CHECK(std::fabs(m3) < 3 * std::sqrt(0.21 / n));
  CHECK(std::fabs(m7) < 3 * std::sqrt(0.21 / n));
}

TEST_CASE("brownian bridge determinism and domain errors") {
  const auto grid = make_uniform_grid(0.1, 0.9, 17);
  PhiloxStream a(7, 3), b(7, 3);
  const SamplePath pa = sample_brownian_bridge(grid, a);
  const SamplePath pb = sample_brownian_bridge(grid, b);
  CHECK(pa.values == pb.values);  // bitwise
  const auto bad = make_uniform_grid(0.5, 1.0, 3);  // touches 1
  PhiloxStream c(7, 4);
  CHECK_THROWS_AS(sample_brownian_bridge(bad, c), std::domain_error);
}

TEST_CASE("fbm covariance H=0.75 and H=0.5 variance") {
  const auto grid = make_uniform_grid(0.4, 0.8, 2);  // step 0.4, t_min on lattice
  const int n = 100000;
  double cov = 0, v1 = 0, v2 = 0;
  for (int i = 0; i < n; ++i) {
    PhiloxStream rng(5, static_cast<std::uint64_t>(i));
    const SamplePath p = sample_fbm(grid, 0.75, rng);
    cov += p.values[0] * p.values[1];
    v1 += p.values[0] * p.values[0];
    v2 += p.values[1] * p.values[1];
  }
  cov /= n; v1 /= n; v2 /= n;
  const double target = 0.5 * std::pow(0.8, 1.5);  // ~0.35777
  const double se = std::sqrt((v1 * v2 + target * target) / n);
  CHECK(std::fabs(cov - target) < 3 * se);
  CHECK(std::fabs(v1 - std::pow(0.4, 1.5)) < 3 * std::pow(0.4, 1.5) * std::sqrt(2.0 / n));

  // H = 1/2: Var B_H(t) = t
  double v = 0;
  for (int i = 0; i < n; ++i) {
    PhiloxStream rng(6, static_cast<std::uint64_t>(i));
    const SamplePath p = sample_fbm(grid, 0.5, rng);
    v += p.values[1] * p.values[1];
  }
  v /= n;
  CHECK(std::fabs(v - 0.8) < 3 * 0.8 * std::sqrt(2.0 / n));
}

TEST_CASE("fbm increment autocovariance matches the fGn formula") {
  const int m = 16;
  const double H = 0.7, dt = 1.0 / m;
  const auto grid = make_uniform_grid(dt, 1.0, m);
  const int n = 60000;
  std::vector<double> acf(4, 0.0);
  for (int i = 0; i < n; ++i) {
    PhiloxStream rng(11, static_cast<std::uint64_t>(i));
    const SamplePath p = sample_fbm(grid, H, rng);
    std::vector<double> inc(static_cast<std::size_t>(m));
    inc[0] = p.values[0];
    for (int j = 1; j < m; ++j) inc[static_cast<std::size_t>(j)] = p.values[static_cast<std::size_t>(j)] - p.values[static_cast<std::size_t>(j - 1)];
    for (int lag = 0; lag < 4; ++lag)
      for (int j = 0; j + lag < m; ++j)
        acf[static_cast<std::size_t>(lag)] += inc[static_cast<std::size_t>(j)] * inc[static_cast<std::size_t>(j + lag)] / (n * (m - lag));
  }
  for (int lag = 0; lag < 4; ++lag) {
    const double g = 0.5 * std::pow(dt, 2 * H) *
                     (std::pow(std::abs(lag + 1), 2 * H) + std::pow(std::abs(lag - 1), 2 * H) -
                      2 * std::pow(lag, 2 * H));
    // generous 3-sigma-ish band scaled by gamma(0)
    const double band = 3.0 * 0.5 * std::pow(dt, 2 * H) * std::sqrt(2.0 / (n * m)) * 3.0;
    CHECK(std::fabs(acf[static_cast<std::size_t>(lag)] - g) < band);
  }
}

TEST_CASE("fbm rejects non-uniform grids unless cholesky is allowed") {
  const auto grid = std::make_shared<const Grid>(Grid::from_points({0.1, 0.2, 0.5}));
  PhiloxStream rng(3, 0);
  CHECK_THROWS_AS(sample_fbm(grid, 0.6, rng), std::invalid_argument);
  PhiloxStream rng2(3, 0);
  const SamplePath p = sample_fbm(grid, 0.6, rng2, /*allow_cholesky=*/true);
  CHECK(p.values.size() == 3);
}

TEST_CASE("normalize gives unit variance and respects the floor") {
  const auto grid = std::make_shared<const Grid>(Grid::from_points({0.25, 0.5}));
  const int n = 100000;
  double v = 0;
  for (int i = 0; i < n; ++i) {
    PhiloxStream rng(8, static_cast<std::uint64_t>(i));
    const SamplePath p = normalize(sample_brownian_bridge(grid, rng), NormalizeMode::Bridge);
    v += p.values[0] * p.values[0];
  }
  v /= n;
  CHECK(std::fabs(v - 1.0) < 3 * std::sqrt(2.0 / n));

  const auto tiny = std::make_shared<const Grid>(Grid::from_points({1e-30, 0.5}));
  PhiloxStream rng(8, 0);
  const SamplePath raw = sample_brownian_bridge(tiny, rng);
  CHECK_THROWS_AS(normalize(raw, NormalizeMode::Bridge, 0.5, 1e-12), std::domain_error);
}

TEST_CASE("normalized fbm variance is 1 even at small t") {
  const auto grid = std::make_shared<const Grid>(Grid::from_points({1.0 / 1024}));
  const int n = 100000;
  double v = 0;
  for (int i = 0; i < n; ++i) {
    PhiloxStream rng(9, static_cast<std::uint64_t>(i));
    const SamplePath p = normalize(sample_fbm(grid, 0.5, rng), NormalizeMode::Fbm, 0.5);
    v += p.values[0] * p.values[0];
  }
  v /= n;
  CHECK(std::fabs(v - 1.0) < 3 * std::sqrt(2.0 / n));
}

TEST_CASE("local stationarity: (1 - corr)/K^2 approaches C(t)") {
  // bridge at t = 0.5 with h = 1/512: (1-r)/h -> 1/(2 t(1-t)) = 2
  const double h = 1.0 / 512;
  const auto grid = std::make_shared<const Grid>(Grid::from_points({0.5, 0.5 + h}));
  const int n = 200000;
  double c = 0, v1 = 0, v2 = 0;
  for (int i = 0; i < n; ++i) {
    PhiloxStream rng(10, static_cast<std::uint64_t>(i));
    const SamplePath p = normalize(sample_brownian_bridge(grid, rng), NormalizeMode::Bridge);
    c += p.values[0] * p.values[1];
    v1 += p.values[0] * p.values[0];
    v2 += p.values[1] * p.values[1];
  }
  c /= n; v1 /= n; v2 /= n;
  const double r = c / std::sqrt(v1 * v2);
  CHECK(std::fabs((1.0 - r) / h - 2.0) < 0.05 * 2.0);

  // fbm H = 0.75 at t = 0.5: (1-r)/h^{2H} -> 1/(2 t^{2H})
  const double H = 0.75;
  // non-uniform grid forces the cheap dense fallback
  const auto g2 = std::make_shared<const Grid>(Grid::from_points({0.5, 0.5 + h, 0.75}));
  double c2 = 0, w1 = 0, w2 = 0;
  for (int i = 0; i < n; ++i) {
    PhiloxStream rng(12, static_cast<std::uint64_t>(i));
    const SamplePath p = normalize(sample_fbm(g2, H, rng, true), NormalizeMode::Fbm, H);
    c2 += p.values[0] * p.values[1];
    w1 += p.values[0] * p.values[0];
    w2 += p.values[1] * p.values[1];
  }
  c2 /= n; w1 /= n; w2 /= n;
  const double r2 = c2 / std::sqrt(w1 * w2);
  const double target = 1.0 / (2.0 * std::pow(0.5, 2 * H));
  CHECK(std::fabs((1.0 - r2) / std::pow(h, 2 * H) - target) < 0.05 * target);
}

TEST_CASE("custom sampler: identity kernel gives iid normals") {
  CovarianceModel::CustomSpec spec;
  spec.name = "white";
  spec.alpha = 1.0;
  spec.corr = [](double s, double t) { return s == t ? 1.0 : 0.0; };
  spec.C = [](double) { return 1.0; };
  spec.K = [](double h) { return std::sqrt(std::fabs(h)); };
  spec.q = [](double u) { return 1.0 / u; };
  const CovarianceModel model = CovarianceModel::custom(spec);
  const auto grid = make_uniform_grid(0.2, 0.8, 4);
  const int n = 50000;
  double cross = 0, v = 0;
  for (int i = 0; i < n; ++i) {
    PhiloxStream rng(13, static_cast<std::uint64_t>(i));
    const SamplePath p = sample_custom(model, grid, rng);
    cross += p.values[0] * p.values[3];
    v += p.values[1] * p.values[1];
  }
  cross /= n; v /= n;
  CHECK(std::fabs(cross) < 3.0 / std::sqrt(static_cast<double>(n)));
  CHECK(std::fabs(v - 1.0) < 3 * std::sqrt(2.0 / n));
}

TEST_CASE("custom 2-point grid with correlation rho") {
  CovarianceModel::CustomSpec spec;
  spec.corr = [](double s, double t) { return s == t ? 1.0 : 0.6; };
  spec.C = [](double) { return 1.0; };
  spec.K = [](double h) { return std::sqrt(std::fabs(h)); };
  spec.q = [](double u) { return 1.0 / u; };
  const CovarianceModel model = CovarianceModel::custom(spec);
  const auto grid = std::make_shared<const Grid>(Grid::from_points({0.3, 0.6}));
  const int n = 100000;
  double c = 0, v1 = 0, v2 = 0;
  for (int i = 0; i < n; ++i) {
    PhiloxStream rng(14, static_cast<std::uint64_t>(i));
    const SamplePath p = sample_custom(model, grid, rng);
    c += p.values[0] * p.values[1];
    v1 += p.values[0] * p.values[0];
    v2 += p.values[1] * p.values[1];
  }
  c /= n; v1 /= n; v2 /= n;
  CHECK(std::fabs(c / std::sqrt(v1 * v2) - 0.6) < 3 * (1 - 0.36) / std::sqrt(static_cast<double>(n)));
}

TEST_CASE("cholesky jitter failure reports the smallest eigenvalue") {
  // strongly indefinite matrix
  std::vector<double> cov = {1.0, 2.0, 2.0, 1.0};
  CHECK_THROWS_WITH_AS(CholeskySampler(cov, 2), doctest::Contains("smallest eigenvalue"),
                       std::runtime_error);
}

TEST_CASE("bridge via custom kernel matches the dedicated sampler (two-sample KS)") {
  const CovarianceModel model = CovarianceModel::brownian_bridge_normalized();
  const auto grid = make_uniform_grid(1.0 / 32, 31.0 / 32, 31);
  const int n = 10000;
  std::vector<double> sup_custom, sup_direct;
  sup_custom.reserve(n);
  sup_direct.reserve(n);
  CholeskySampler chol(correlation_matrix(model, *grid), grid->n_points());
  std::vector<double> buf(static_cast<std::size_t>(grid->n_points()));
  for (int i = 0; i < n; ++i) {
    PhiloxStream r1(21, static_cast<std::uint64_t>(i));
    chol.sample(r1, buf.data());
    sup_custom.push_back(*std::max_element(buf.begin(), buf.end()));
    PhiloxStream r2(22, static_cast<std::uint64_t>(i));
    const SamplePath p = normalize(sample_brownian_bridge(grid, r2), NormalizeMode::Bridge);
    sup_direct.push_back(*std::max_element(p.values.begin(), p.values.end()));
  }
  const double d = ks_two_sample_statistic(sup_custom.data(), n, sup_direct.data(), n);
  CHECK(d < ks_two_sample_critical(0.01, n, n));
}

TEST_CASE("fbm circulant sampler matches cholesky in distribution (sup statistic)") {
  const double H = 0.7;
  const int m = 64;
  const auto grid = make_uniform_grid(1.0 / m, 1.0, m);
  const int n = 10000;
  std::vector<double> a, b;
  a.reserve(n);
  b.reserve(n);
  // dense covariance of fbm on the grid
  std::vector<double> cov(static_cast<std::size_t>(m) * m);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j)
      cov[static_cast<std::size_t>(i) * m + j] =
          0.5 * (std::pow((*grid)[i], 2 * H) + std::pow((*grid)[j], 2 * H) -
                 std::pow(std::fabs((*grid)[i] - (*grid)[j]), 2 * H));
  CholeskySampler chol(cov, m);
  std::vector<double> buf(static_cast<std::size_t>(m));
  for (int i = 0; i < n; ++i) {
    PhiloxStream r1(31, static_cast<std::uint64_t>(i));
    const SamplePath p = sample_fbm(grid, H, r1);
    a.push_back(*std::max_element(p.values.begin(), p.values.end()));
    PhiloxStream r2(32, static_cast<std::uint64_t>(i));
    chol.sample(r2, buf.data());
    b.push_back(*std::max_element(buf.begin(), buf.end()));
  }
  const double d = ks_two_sample_statistic(a.data(), n, b.data(), n);
  CHECK(d < ks_two_sample_critical(0.01, n, n));
}
