#include "qpow/power_iteration.hpp"

#include <cmath>
#include <stdexcept>

#include "qpow/fri.hpp"

namespace qpow {

PowerIterationResult exact_power_iteration(const ColumnOracle& a,
                                           const SparseVector& v0,
                                           long max_iter, double tol) {
  if (max_iter < 1) throw std::invalid_argument("max_iter must be positive");
  if (!(tol > 0.0)) throw std::invalid_argument("tol must be positive");

  PowerIterationResult res;
  res.u = normalized(v0);
  const double resid_cap = std::sqrt(tol);
  double prev_lambda = 0.0;
  bool have_prev = false;
  int flat_count = 0;

  for (long it = 1; it <= max_iter; ++it) {
    SparseVector y = exact_matvec(a, res.u);
    res.lambda = dot(res.u, y);
    SparseVector r = axpy(-res.lambda, res.u, y);
    res.residual2 = norm2(r);
    res.iterations = it;

    if (have_prev && std::abs(res.lambda - prev_lambda) < tol) {
      if (res.residual2 <= resid_cap) {
        res.converged = true;
        return res;
      }
      if (++flat_count >= 50) {
        res.stagnation = true;
        return res;
      }
    } else {
      flat_count = 0;
    }
    prev_lambda = res.lambda;
    have_prev = true;
    res.u = normalized(y);
  }
  return res;
}

}  // namespace qpow
