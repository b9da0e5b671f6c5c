#include "chisup/chi_process.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace chisup {

BVector::BVector(std::vector<double> b) : b_(std::move(b)) {
  if (b_.empty()) throw std::invalid_argument("BVector: empty");
  if (b_[0] != 1.0) throw std::invalid_argument("BVector: b_1 must equal 1");
  std::size_t k = 0;
  while (k < b_.size() && b_[k] == 1.0) ++k;
  k_ = static_cast<int>(k);
  for (std::size_t i = k; i < b_.size(); ++i) {
    if (!(b_[i] > 0.0 && b_[i] < 1.0))
      throw std::invalid_argument("BVector: trailing coefficients must lie in (0,1)");
    if (i > k && b_[i] > b_[i - 1])
      throw std::invalid_argument("BVector: coefficients must be nonincreasing");
  }
}

double BVector::prefactor() const {
  double p = 1.0;
  for (int i = k_; i < n(); ++i) p /= std::sqrt(1.0 - b_[static_cast<std::size_t>(i)] *
                                                          b_[static_cast<std::size_t>(i)]);
  return p;
}

namespace {

bool same_grid(const GridPtr& a, const GridPtr& b) {
  if (a == b) return true;
  if (!a || !b) return false;
  return a->points() == b->points();
}

}  // namespace

ChiPath chi_square(std::span<const SamplePath> paths, const BVector& b) {
  if (static_cast<int>(paths.size()) != b.n())
    throw std::invalid_argument("chi_square: path count must equal b.n");
  const GridPtr& grid = paths[0].grid;
  for (const auto& p : paths) {
    if (!same_grid(grid, p.grid)) throw std::invalid_argument("chi_square: grid mismatch");
    if (p.model_tag != paths[0].model_tag)
      throw std::invalid_argument("chi_square: component paths from different models");
  }
  ChiPath chi;
  chi.grid = grid;
  chi.b = b.values();
  chi.values.assign(grid->points().size(), 0.0);
  for (int i = 0; i < b.n(); ++i) {
    const double bi2 = chi.b[static_cast<std::size_t>(i)] * chi.b[static_cast<std::size_t>(i)];
    const auto& v = paths[static_cast<std::size_t>(i)].values;
    for (std::size_t j = 0; j < chi.values.size(); ++j) chi.values[j] += bi2 * v[j] * v[j];
    chi.seed_tags.push_back(paths[static_cast<std::size_t>(i)].seed_tag);
  }
  return chi;
}

double weighted_sup(const ChiPath& chi, const WeightSpec& w,
                    std::optional<std::pair<double, double>> sub) {
  const Grid& g = *chi.grid;
  double best = -1.0;
  bool seen = false;
  for (int i = 0; i < g.n_points(); ++i) {
    const double t = g[i];
    if (sub && (t < sub->first || t > sub->second)) continue;
    const double w2 = w.w2(t);
    if (!(w2 > 0.0)) throw std::domain_error("weighted_sup: weight not positive on grid");
    const double v = chi.values[static_cast<std::size_t>(i)] / w2;
    if (!seen || v > best) { best = v; seen = true; }
  }
  if (!seen) throw std::invalid_argument("weighted_sup: empty subinterval");
  return best;
}

double spherical_sup(std::span<const SamplePath> paths, const BVector& b, int t_index,
                     int angle_resolution) {
  const int n = b.n();
  if (static_cast<int>(paths.size()) != n)
    throw std::invalid_argument("spherical_sup: path count must equal b.n");
  if (angle_resolution < 2) throw std::invalid_argument("spherical_sup: resolution too small");
  std::vector<double> bx(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i)
    bx[static_cast<std::size_t>(i)] =
        b.values()[static_cast<std::size_t>(i)] *
        paths[static_cast<std::size_t>(i)].values[static_cast<std::size_t>(t_index)];
  if (n == 1) return std::fabs(bx[0]);

  // theta_2 in [-pi,pi], theta_3..theta_n in [-pi/2,pi/2];
  // v_n = sin(th_n), v_{i} = sin(th_i) prod_{j>i} cos(th_j), v_1 = prod cos
  const int R = angle_resolution;
  double total_pts = 1.0;
  for (int d = 0; d < n - 1; ++d) total_pts *= R;
  if (total_pts > 2e8) throw std::invalid_argument("spherical_sup: angle grid too large");

  std::vector<int> idx(static_cast<std::size_t>(n - 1), 0);
  std::vector<double> theta(static_cast<std::size_t>(n - 1));
  const double pi = std::acos(-1.0);
  double best = -std::numeric_limits<double>::infinity();
  for (;;) {
    theta[0] = -pi + 2.0 * pi * idx[0] / (R - 1);
    for (int d = 1; d < n - 1; ++d)
      theta[static_cast<std::size_t>(d)] = -0.5 * pi + pi * idx[static_cast<std::size_t>(d)] / (R - 1);
    // v computed backwards: running cosine product
    double y = 0.0, cosprod = 1.0;
    for (int i = n - 1; i >= 1; --i) {
      const double th = theta[static_cast<std::size_t>(i - 1)];
      y += bx[static_cast<std::size_t>(i)] * std::sin(th) * cosprod;
      cosprod *= std::cos(th);
    }
    y += bx[0] * cosprod;
    if (y > best) best = y;
    int d = 0;
    while (d < n - 1 && ++idx[static_cast<std::size_t>(d)] == R) {
      idx[static_cast<std::size_t>(d)] = 0;
      ++d;
    }
    if (d == n - 1) break;
  }
  return best;
}

}  // namespace chisup
