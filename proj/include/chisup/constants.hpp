#pragma once

#include <cstdint>
#include <optional>
#include <string>

namespace chisup {

struct ConstantEstimate {
  double value = 0.0;
  double std_error = 0.0;
  double alpha = 0.0;
  double d = 0.0;          // Piterbarg only
  double horizon = 0.0;    // S (Pickands) or lambda (Piterbarg)
  double step = 0.0;
  long long n_samples = 0;
  std::uint64_t seed = 0;
  bool unstable = false;   // exp overflow encountered
  std::string method;
};

// (1/S) E exp( sup over the [0,S] grid of sqrt(2) B_{alpha/2}(t) - t^alpha ).
// alpha = 2 degenerates to the line t*N and is evaluated by quadrature over N
// instead of sampling; every other alpha is plain Monte Carlo with exact fBm
// on the grid.
ConstantEstimate pickands(double alpha, double S, double step, long long n,
                          std::uint64_t seed);

// E exp( sup over the [-lambda,lambda] grid of sqrt(2) B_{alpha/2}(t) - (1+d)|t|^alpha ).
ConstantEstimate piterbarg(double alpha, double d, double lambda, double step, long long n,
                           std::uint64_t seed);

// Exact values where known: H_1 = 1, H_2 = 1/sqrt(pi).
std::optional<double> known_constant(double alpha);

}  // namespace chisup
