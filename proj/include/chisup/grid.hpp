#pragma once

#include <memory>
#include <vector>

namespace chisup {

// Strictly increasing evaluation grid on a subinterval of (0,1].
class Grid {
 public:
  static Grid uniform(double t_min, double t_max, int n_points);
  static Grid from_points(std::vector<double> points);

  double t_min() const { return points_.front(); }
  double t_max() const { return points_.back(); }
  int n_points() const { return static_cast<int>(points_.size()); }
  const std::vector<double>& points() const { return points_; }
  double operator[](int i) const { return points_[static_cast<std::size_t>(i)]; }

  bool is_uniform() const { return uniform_; }
  // Spacing; only meaningful when is_uniform().
  double step() const { return step_; }

 private:
  explicit Grid(std::vector<double> pts);
  std::vector<double> points_;
  bool uniform_ = false;
  double step_ = 0.0;
};

using GridPtr = std::shared_ptr<const Grid>;

inline GridPtr make_uniform_grid(double t_min, double t_max, int n_points) {
  return std::make_shared<const Grid>(Grid::uniform(t_min, t_max, n_points));
}

}  // namespace chisup
