#pragma once

#include <optional>
#include <span>
#include <vector>

#include "chisup/gauss_paths.hpp"
#include "chisup/weights.hpp"

namespace chisup {

// Coefficient vector with the ordering 1 = b_1 = ... = b_k > b_{k+1} >= ... >= b_n > 0.
class BVector {
 public:
  explicit BVector(std::vector<double> b);
  const std::vector<double>& values() const { return b_; }
  int n() const { return static_cast<int>(b_.size()); }
  int k() const { return k_; }
  // prod_{i=k+1}^n (1-b_i^2)^{-1/2}; 1 when k == n.
  double prefactor() const;

 private:
  std::vector<double> b_;
  int k_ = 0;
};

struct ChiPath {
  GridPtr grid;
  std::vector<double> values;  // chi^2_b at each grid point
  std::vector<double> b;
  std::vector<std::uint64_t> seed_tags;
};

// chi^2_b(t) = sum_i b_i^2 X_i(t)^2 from n component paths on a common grid.
ChiPath chi_square(std::span<const SamplePath> paths, const BVector& b);

// Grid supremum of chi^2_b(t)/w^2(t), optionally restricted to [sub_lo, sub_hi].
// A lower bound on the continuous supremum.
double weighted_sup(const ChiPath& chi, const WeightSpec& w,
                    std::optional<std::pair<double, double>> sub = std::nullopt);

// sup over a product grid of angles of Y_b(t,theta) = sum_i b_i X_i(t) v_i(theta);
// equals sqrt(chi^2_b(t)) up to angle resolution. Diagnostic only.
double spherical_sup(std::span<const SamplePath> paths, const BVector& b, int t_index,
                     int angle_resolution = 1000);

}  // namespace chisup
