#include "chisup/grid.hpp"

#include <cmath>
#include <stdexcept>

namespace chisup {

Grid::Grid(std::vector<double> pts) : points_(std::move(pts)) {
  if (points_.empty()) throw std::invalid_argument("Grid: empty point set");
  for (std::size_t i = 1; i < points_.size(); ++i)
    if (!(points_[i] > points_[i - 1]))
      throw std::invalid_argument("Grid: points must be strictly increasing");
  if (!(points_.front() > 0.0))
    throw std::invalid_argument("Grid: t_min must be positive");
  if (points_.size() == 1) {
    uniform_ = true;
    step_ = 0.0;
    return;
  }
  step_ = points_[1] - points_[0];
  uniform_ = true;
  for (std::size_t i = 1; i + 1 < points_.size(); ++i) {
    const double d = points_[i + 1] - points_[i];
    if (std::fabs(d - step_) > 1e-9 * std::max(step_, d)) {
      uniform_ = false;
      step_ = 0.0;
      break;
    }
  }
}

Grid Grid::uniform(double t_min, double t_max, int n_points) {
  if (n_points < 1) throw std::invalid_argument("Grid::uniform: n_points must be >= 1");
  if (!(t_min > 0.0) || !(t_max > t_min))
    throw std::invalid_argument("Grid::uniform: need 0 < t_min < t_max");
  std::vector<double> pts(static_cast<std::size_t>(n_points));
  if (n_points == 1) {
    pts[0] = t_min;
  } else {
    const double h = (t_max - t_min) / (n_points - 1);
    for (int i = 0; i < n_points; ++i) pts[static_cast<std::size_t>(i)] = t_min + h * i;
  }
  return Grid(std::move(pts));
}

Grid Grid::from_points(std::vector<double> points) { return Grid(std::move(points)); }

}  // namespace chisup
