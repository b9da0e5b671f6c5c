#include "chisup/constants.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

#include "chisup/asymptotics.hpp"
#include "chisup/gauss_paths.hpp"
#include "chisup/rng.hpp"

namespace chisup {

std::optional<double> known_constant(double alpha) { return known_pickands(alpha); }

namespace {

void check_mc_params(double alpha, double horizon, double step, long long n) {
  if (!(alpha > 0.0 && alpha <= 2.0))
    throw std::invalid_argument("constants: alpha must be in (0,2]");
  if (!(horizon > 0.0)) throw std::invalid_argument("constants: horizon must be positive");
  if (!(step > 0.0) || step > horizon / 64.0)
    throw std::invalid_argument("constants: step must satisfy step <= horizon/64");
  if (n < 100) throw std::invalid_argument("constants: need n >= 100");
}

// sup over the grid {0, step, ..., S} of sqrt(2) t x - t^2 for the degenerate
// field B_1(t) = t N; the maximizer is the grid neighbor of t* = x/sqrt(2).
double degenerate_grid_sup(double x, double step, long long m) {
  if (x <= 0.0) return 0.0;
  const double tstar = x / std::sqrt(2.0);
  long long j = static_cast<long long>(std::floor(tstar / step));
  double best = 0.0;
  for (long long jj = std::max(0ll, j - 1); jj <= std::min(m, j + 2); ++jj) {
    const double t = jj * step;
    best = std::max(best, std::sqrt(2.0) * t * x - t * t);
  }
  const double tm = m * step;
  best = std::max(best, std::sqrt(2.0) * tm * x - tm * tm);
  return best;
}

ConstantEstimate pickands_alpha2_quadrature(double S, double step, long long n,
                                            std::uint64_t seed) {
  // E[(1/S) exp(sup_grid ...)] = int g(x) phi(x) dx; for x in (0, sqrt(2)S)
  // the integrand is ~ 1/sqrt(2pi) (interior max), then Gaussian beyond.
  const long long m = static_cast<long long>(std::llround(S / step));
  const double lo = -10.0, hi = std::sqrt(2.0) * S + 10.0;
  const long long pieces = 1 << 21;
  const double h = (hi - lo) / pieces;
  double acc = 0.0;  // composite Simpson in log-stable form
  const double inv_sqrt2pi = 0.3989422804014326779;
  auto f = [&](double x) {
    const double lg = degenerate_grid_sup(x, step, m) - 0.5 * x * x;
    return inv_sqrt2pi * std::exp(lg);
  };
  for (long long i = 0; i < pieces; ++i) {
    const double a = lo + i * h;
    acc += (f(a) + 4.0 * f(a + 0.5 * h) + f(a + h)) * (h / 6.0);
  }
  ConstantEstimate est;
  est.value = acc / S;
  est.std_error = 0.0;
  est.alpha = 2.0;
  est.horizon = S;
  est.step = step;
  est.n_samples = n;
  est.seed = seed;
  est.method = "degenerate-quadrature";
  return est;
}

}  // namespace

ConstantEstimate pickands(double alpha, double S, double step, long long n,
                          std::uint64_t seed) {
  check_mc_params(alpha, S, step, n);
  if (alpha == 2.0) return pickands_alpha2_quadrature(S, step, n, seed);

  const double hurst = 0.5 * alpha;
  const long long m = static_cast<long long>(std::llround(S / step));
  FgnSampler fgn(static_cast<int>(m), hurst, step);
  std::vector<double> inc(static_cast<std::size_t>(m));

  double sum = 0.0, sumsq = 0.0;
  bool unstable = false;
  const double sqrt2 = std::sqrt(2.0);
  for (long long i = 0; i < n; ++i) {
    PhiloxStream rng(seed, static_cast<std::uint64_t>(i));
    fgn.sample(rng, inc.data());
    double b = 0.0, sup = 0.0;  // field at t=0 is 0
    for (long long j = 1; j <= m; ++j) {
      b += inc[static_cast<std::size_t>(j - 1)];
      const double t = j * step;
      const double v = sqrt2 * b - std::pow(t, alpha);
      if (v > sup) sup = v;
    }
    if (sup > 700.0) unstable = true;
    const double e = std::exp(std::min(sup, 700.0));
    sum += e;
    sumsq += e * e;
  }
  ConstantEstimate est;
  const double mean = sum / n;
  est.value = mean / S;
  est.std_error = std::sqrt(std::max(0.0, (sumsq / n - mean * mean) / (n - 1))) / S;
  est.alpha = alpha;
  est.horizon = S;
  est.step = step;
  est.n_samples = n;
  est.seed = seed;
  est.unstable = unstable;
  est.method = "mc";
  return est;
}

ConstantEstimate piterbarg(double alpha, double d, double lambda, double step, long long n,
                           std::uint64_t seed) {
  check_mc_params(alpha, lambda, step, n);
  if (!(d > 0.0)) throw std::invalid_argument("piterbarg: d must be positive");

  const double hurst = 0.5 * alpha;
  const long long m = static_cast<long long>(std::llround(lambda / step));  // per side
  const long long total = 2 * m;
  std::vector<double> inc(static_cast<std::size_t>(total));
  // Increments across the whole line are stationary; pin the path at t = 0.
  FgnSampler fgn(static_cast<int>(total), hurst, step);

  double sum = 0.0, sumsq = 0.0;
  bool unstable = false;
  const double sqrt2 = std::sqrt(2.0);
  const double pen = 1.0 + d;
  for (long long i = 0; i < n; ++i) {
    PhiloxStream rng(seed, static_cast<std::uint64_t>(i));
    if (alpha == 2.0) {
      const double z = rng.normal();
      for (long long j = 0; j < total; ++j) inc[static_cast<std::size_t>(j)] = step * z;
    } else {
      fgn.sample(rng, inc.data());
    }
    // lattice points -m..m; B(0) = 0
    double sup = 0.0;
    double b = 0.0;
    for (long long j = m; j < total; ++j) {  // forward: t = (j-m+1) step
      b += inc[static_cast<std::size_t>(j)];
      const double t = (j - m + 1) * step;
      const double v = sqrt2 * b - pen * std::pow(t, alpha);
      if (v > sup) sup = v;
    }
    b = 0.0;
    for (long long j = m - 1; j >= 0; --j) {  // backward: t = -(m-j) step
      b -= inc[static_cast<std::size_t>(j)];
      const double t = (m - j) * step;
      const double v = sqrt2 * b - pen * std::pow(t, alpha);
      if (v > sup) sup = v;
    }
    if (sup > 700.0) unstable = true;
    const double e = std::exp(std::min(sup, 700.0));
    sum += e;
    sumsq += e * e;
  }
  ConstantEstimate est;
  const double mean = sum / n;
  est.value = mean;
  est.std_error = std::sqrt(std::max(0.0, (sumsq / n - mean * mean) / (n - 1)));
  est.alpha = alpha;
  est.d = d;
  est.horizon = lambda;
  est.step = step;
  est.n_samples = n;
  est.seed = seed;
  est.unstable = unstable;
  est.method = "mc";
  return est;
}

}  // namespace chisup
