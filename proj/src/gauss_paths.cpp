#include "chisup/gauss_paths.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <complex>
#include <sstream>
#include <stdexcept>
#include <unsupported/Eigen/FFT>

namespace chisup {

namespace {

// One plan cache per thread; Eigen::FFT keeps per-size plans internally.
Eigen::FFT<double>& thread_fft() {
  thread_local Eigen::FFT<double> fft;
  return fft;
}

// fGn autocovariance at lag j for step dt:
// gamma(j) = dt^{2H}/2 (|j+1|^{2H} + |j-1|^{2H} - 2|j|^{2H})
double fgn_gamma(int j, double H, double dt) {
  const double a = std::pow(std::abs(j + 1), 2.0 * H);
  const double b = std::pow(std::abs(j - 1), 2.0 * H);
  const double c = 2.0 * std::pow(std::abs(j), 2.0 * H);
  return 0.5 * std::pow(dt, 2.0 * H) * (a + b - c);
}

int lattice_offset(const Grid& grid) {
  // t_min must equal nu*step for a positive integer nu
  const double nu_real = grid.t_min() / grid.step();
  const double nu = std::round(nu_real);
  if (nu < 1.0 || std::fabs(nu_real - nu) > 1e-6)
    throw std::invalid_argument(
        "sample_fbm: grid t_min must be an integer multiple of the step");
  return static_cast<int>(nu);
}

}  // namespace

SamplePath sample_brownian_bridge(const GridPtr& grid, PhiloxStream& rng) {
  if (!grid) throw std::invalid_argument("sample_brownian_bridge: null grid");
  const Grid& g = *grid;
  if (!(g.t_min() > 0.0) || !(g.t_max() < 1.0))
    throw std::domain_error("sample_brownian_bridge: grid must lie strictly inside (0,1)");
  const int n = g.n_points();
  std::vector<double> w(static_cast<std::size_t>(n));
  double acc = rng.normal() * std::sqrt(g[0]);
  w[0] = acc;
  for (int i = 1; i < n; ++i) {
    acc += rng.normal() * std::sqrt(g[i] - g[i - 1]);
    w[static_cast<std::size_t>(i)] = acc;
  }
  const double w1 = acc + rng.normal() * std::sqrt(1.0 - g[n - 1]);
  SamplePath path;
  path.grid = grid;
  path.values.resize(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i)
    path.values[static_cast<std::size_t>(i)] = w[static_cast<std::size_t>(i)] - g[i] * w1;
  path.model_tag = "brownian-bridge";
  return path;
}

FgnSampler::FgnSampler(int n_increments, double hurst, double step)
    : n_(n_increments), hurst_(hurst), step_(step) {
  if (n_ < 1) throw std::invalid_argument("FgnSampler: need at least one increment");
  if (!(hurst_ > 0.0 && hurst_ <= 1.0))
    throw std::invalid_argument("FgnSampler: H must be in (0,1]");
  if (!(step_ > 0.0)) throw std::invalid_argument("FgnSampler: step must be positive");
  const bool degenerate = std::fabs(hurst_ - 0.5) < 1e-15 || std::fabs(hurst_ - 1.0) < 1e-15;
  if (degenerate || n_ == 1) return;

  // circulant embedding of size m = 2n with first row
  // [gamma(0), ..., gamma(n), gamma(n-1), ..., gamma(1)]
  m_ = 2 * n_;
  std::vector<std::complex<double>> row(static_cast<std::size_t>(m_));
  for (int j = 0; j <= n_; ++j) row[static_cast<std::size_t>(j)] = fgn_gamma(j, hurst_, step_);
  for (int j = n_ + 1; j < m_; ++j)
    row[static_cast<std::size_t>(j)] = fgn_gamma(m_ - j, hurst_, step_);

  std::vector<std::complex<double>> spec(static_cast<std::size_t>(m_));
  thread_fft().fwd(spec, row);

  sqrt_eig_.resize(static_cast<std::size_t>(m_));
  double max_eig = 0.0;
  for (const auto& z : spec) max_eig = std::max(max_eig, z.real());
  for (int j = 0; j < m_; ++j) {
    double lam = spec[static_cast<std::size_t>(j)].real();
    if (lam < 0.0) {
      if (lam < -1e-9 * max_eig)
        throw std::runtime_error("FgnSampler: circulant embedding not nonnegative definite");
      lam = 0.0;
    }
    sqrt_eig_[static_cast<std::size_t>(j)] = std::sqrt(lam / m_);
  }
}

void FgnSampler::sample(PhiloxStream& rng, double* out) const {
  if (std::fabs(hurst_ - 0.5) < 1e-15) {
    const double s = std::sqrt(step_);
    for (int i = 0; i < n_; ++i) out[i] = s * rng.normal();
    return;
  }
  if (std::fabs(hurst_ - 1.0) < 1e-15) {
    const double z = rng.normal();
    for (int i = 0; i < n_; ++i) out[i] = step_ * z;
    return;
  }
  if (n_ == 1) {
    out[0] = std::pow(step_, hurst_) * rng.normal();
    return;
  }
  const int m = m_;
  const int half = m / 2;
  std::vector<std::complex<double>> z(static_cast<std::size_t>(m));
  z[0] = sqrt_eig_[0] * rng.normal();
  z[static_cast<std::size_t>(half)] = sqrt_eig_[static_cast<std::size_t>(half)] * rng.normal();
  const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
  for (int j = 1; j < half; ++j) {
    const double re = rng.normal() * inv_sqrt2;
    const double im = rng.normal() * inv_sqrt2;
    z[static_cast<std::size_t>(j)] = sqrt_eig_[static_cast<std::size_t>(j)] *
                                     std::complex<double>(re, im);
    z[static_cast<std::size_t>(m - j)] = std::conj(z[static_cast<std::size_t>(j)]);
  }
  std::vector<std::complex<double>> y(static_cast<std::size_t>(m));
  thread_fft().fwd(y, z);
  for (int i = 0; i < n_; ++i) out[i] = y[static_cast<std::size_t>(i)].real();
}

SamplePath sample_fbm(const GridPtr& grid, double hurst, PhiloxStream& rng,
                      bool allow_cholesky) {
  if (!grid) throw std::invalid_argument("sample_fbm: null grid");
  const Grid& g = *grid;
  if (!(hurst > 0.0) || !(hurst < 1.0))
    throw std::invalid_argument("sample_fbm: H must be in (0,1)");
  if (!g.is_uniform() || g.n_points() < 1 || (g.n_points() > 1 && g.step() <= 0.0)) {
    if (!allow_cholesky)
      throw std::invalid_argument(
          "sample_fbm: FFT path requires a uniform grid (pass allow_cholesky for the dense fallback)");
    const int n = g.n_points();
    std::vector<double> cov(static_cast<std::size_t>(n) * n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        cov[static_cast<std::size_t>(i) * n + j] =
            0.5 * (std::pow(g[i], 2 * hurst) + std::pow(g[j], 2 * hurst) -
                   std::pow(std::fabs(g[i] - g[j]), 2 * hurst));
    CholeskySampler chol(cov, n);
    SamplePath path;
    path.grid = grid;
    path.values.resize(static_cast<std::size_t>(n));
    chol.sample(rng, path.values.data());
    path.model_tag = "fbm";
    return path;
  }

  const double step = g.n_points() > 1 ? g.step() : g.t_min();
  const int nu = g.n_points() > 1 ? lattice_offset(g) : 1;
  const int total = nu + g.n_points() - 1;
  FgnSampler fgn(total, hurst, step);
  std::vector<double> inc(static_cast<std::size_t>(total));
  fgn.sample(rng, inc.data());

  SamplePath path;
  path.grid = grid;
  path.values.resize(static_cast<std::size_t>(g.n_points()));
  double acc = 0.0;
  for (int i = 0; i < total; ++i) {
    acc += inc[static_cast<std::size_t>(i)];
    if (i >= nu - 1) path.values[static_cast<std::size_t>(i - nu + 1)] = acc;
  }
  path.model_tag = "fbm";
  return path;
}

SamplePath normalize(const SamplePath& path, NormalizeMode mode, double hurst, double floor) {
  if (!path.grid) throw std::invalid_argument("normalize: path without grid");
  SamplePath out = path;
  const Grid& g = *path.grid;
  for (int i = 0; i < g.n_points(); ++i) {
    const double t = g[i];
    const double s = mode == NormalizeMode::Bridge ? std::sqrt(t * (1.0 - t))
                                                   : std::pow(t, hurst);
    if (!(s > floor))
      throw std::domain_error("normalize: normalizer below floor (grid too close to boundary)");
    out.values[static_cast<std::size_t>(i)] /= s;
  }
  out.model_tag = path.model_tag + "-normalized";
  return out;
}

std::vector<double> correlation_matrix(const CovarianceModel& model, const Grid& grid) {
  const int n = grid.n_points();
  std::vector<double> r(static_cast<std::size_t>(n) * n);
  for (int i = 0; i < n; ++i) {
    r[static_cast<std::size_t>(i) * n + i] = 1.0;
    for (int j = 0; j < i; ++j) {
      const double v = model.corr(grid[j], grid[i]);
      r[static_cast<std::size_t>(i) * n + j] = v;
      r[static_cast<std::size_t>(j) * n + i] = v;
    }
  }
  return r;
}

CholeskySampler::CholeskySampler(const std::vector<double>& cov, int n) : n_(n) {
  if (n < 1 || cov.size() != static_cast<std::size_t>(n) * n)
    throw std::invalid_argument("CholeskySampler: bad matrix size");
  Eigen::MatrixXd m(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) m(i, j) = cov[static_cast<std::size_t>(i) * n + j];
  double diag_scale = 0.0;
  for (int i = 0; i < n; ++i) diag_scale = std::max(diag_scale, std::fabs(m(i, i)));
  if (diag_scale == 0.0) diag_scale = 1.0;

  const double ladder[] = {0.0, 1e-12, 1e-10, 1e-8};
  for (double j : ladder) {
    Eigen::MatrixXd trial = m;
    if (j > 0.0) trial.diagonal().array() += j * diag_scale;
    Eigen::LLT<Eigen::MatrixXd> llt(trial);
    if (llt.info() == Eigen::Success) {
      jitter_ = j * diag_scale;
      Eigen::MatrixXd l = llt.matrixL();
      chol_.assign(static_cast<std::size_t>(n) * n, 0.0);
      for (int i = 0; i < n; ++i)
        for (int k = 0; k <= i; ++k) chol_[static_cast<std::size_t>(i) * n + k] = l(i, k);
      return;
    }
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m, Eigen::EigenvaluesOnly);
  std::ostringstream msg;
  msg << "CholeskySampler: factorization failed after max jitter; smallest eigenvalue ~ "
      << es.eigenvalues().minCoeff();
  throw std::runtime_error(msg.str());
}

void CholeskySampler::sample(PhiloxStream& rng, double* out) const {
  std::vector<double> z(static_cast<std::size_t>(n_));
  for (int i = 0; i < n_; ++i) z[static_cast<std::size_t>(i)] = rng.normal();
  for (int i = 0; i < n_; ++i) {
    double acc = 0.0;
    const double* row = chol_.data() + static_cast<std::size_t>(i) * n_;
    for (int k = 0; k <= i; ++k) acc += row[k] * z[static_cast<std::size_t>(k)];
    out[i] = acc;
  }
}

SamplePath sample_custom(const CovarianceModel& model, const GridPtr& grid, PhiloxStream& rng) {
  if (!grid) throw std::invalid_argument("sample_custom: null grid");
  const Grid& g = *grid;
  CholeskySampler chol(correlation_matrix(model, g), g.n_points());
  SamplePath path;
  path.grid = grid;
  path.values.resize(static_cast<std::size_t>(g.n_points()));
  chol.sample(rng, path.values.data());
  path.model_tag = model.name();
  return path;
}

}  // namespace chisup
