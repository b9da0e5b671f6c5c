#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "chisup/covariance.hpp"
#include "chisup/grid.hpp"
#include "chisup/rng.hpp"

namespace chisup {

struct SamplePath {
  GridPtr grid;
  std::vector<double> values;
  std::string model_tag;
  std::uint64_t seed_tag = 0;
};

enum class NormalizeMode { Bridge, Fbm };

// Standard Brownian bridge (Var B(t) = t(1-t)) with the exact joint law on
// the grid, built from Brownian increments as W(t) - t W(1).
SamplePath sample_brownian_bridge(const GridPtr& grid, PhiloxStream& rng);

// Fractional Brownian motion with the exact joint law on a uniform grid via
// circulant embedding of the increment sequence; H = 1/2 and H = 1 reduce to
// iid increments and the degenerate line t*N. Requires t_min to sit on the
// step lattice. Set allow_cholesky to permit the dense fallback on grids the
// embedding cannot handle.
SamplePath sample_fbm(const GridPtr& grid, double hurst, PhiloxStream& rng,
                      bool allow_cholesky = false);

// Pointwise division by sqrt(t(1-t)) or t^H; the result has unit variance at
// every grid point. Normalizers below `floor` raise a domain error.
SamplePath normalize(const SamplePath& path, NormalizeMode mode, double hurst = 0.5,
                     double floor = 1e-12);

// Exact sampling of an arbitrary unit-variance model by dense Cholesky of the
// grid correlation matrix, with a diagonal jitter ladder {0,1e-12,1e-10,1e-8}.
SamplePath sample_custom(const CovarianceModel& model, const GridPtr& grid, PhiloxStream& rng);

// Reusable fGn sampler: spectrum of the circulant embedding is computed once
// per (n_increments, H, step).
class FgnSampler {
 public:
  FgnSampler(int n_increments, double hurst, double step);
  // Writes n_increments fGn values (increments of B_H on the step lattice).
  void sample(PhiloxStream& rng, double* out) const;
  int n_increments() const { return n_; }

 private:
  int n_;
  double hurst_, step_;
  int m_ = 0;                        // embedding size (0 for degenerate cases)
  std::vector<double> sqrt_eig_;     // sqrt(lambda_j / m)
};

// Reusable dense sampler for an arbitrary covariance matrix.
class CholeskySampler {
 public:
  // cov is row-major n x n, symmetric positive semidefinite.
  CholeskySampler(const std::vector<double>& cov, int n);
  void sample(PhiloxStream& rng, double* out) const;
  int dim() const { return n_; }
  // Jitter actually used by the factorization (0 when clean).
  double jitter() const { return jitter_; }

 private:
  int n_;
  double jitter_ = 0.0;
  std::vector<double> chol_;  // lower triangular, row-major
};

// Grid correlation matrix of a model (row-major).
std::vector<double> correlation_matrix(const CovarianceModel& model, const Grid& grid);

}  // namespace chisup
