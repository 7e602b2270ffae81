#pragma once

#include "qpow/column_oracle.hpp"
#include "qpow/vectors.hpp"

namespace qpow {

struct PowerIterationResult {
  double lambda = 0.0;
  SparseVector u;
  long iterations = 0;
  bool converged = false;
  double residual2 = 0.0;
  bool stagnation = false;
};

// Exact power iteration on the column oracle. Convergence requires both a
// small Rayleigh-quotient change (< tol) and a residual no larger than
// sqrt(tol); 50 consecutive iterations with a small change but a large
// residual are reported as stagnation.
PowerIterationResult exact_power_iteration(const ColumnOracle& a,
                                           const SparseVector& v0,
                                           long max_iter, double tol);

}  // namespace qpow
