#pragma once

#include <cstdint>

#include "qpow/column_oracle.hpp"

namespace qpow {

enum class Method {
  exact,
  fri_systematic,
  fri_bernoulli,
  hard_threshold,
  fciqmc,
  ifciqmc,
};

// Empirical check of the three noise conditions behind the convergence
// guarantee, over independent single steps from a fixed deterministic
// iterate v: (a) componentwise zero-mean noise within 5 standard errors,
// (b) second moment within 3 standard errors of the method's bound
// ce * |A|_1^2 * |v|_1^2 / m, (c) mean 1-norm growth within 3 standard
// errors of |A|_1 * |v|_1.
struct AssumptionReport {
  long replicas = 0;
  std::int64_t m = 0;
  bool mean_zero_pass = false;
  double max_mean_dev_se = 0.0;   // worst component |mean| / SE
  bool variance_pass = false;
  double empirical_ce = 0.0;      // E|xi|_2^2 * m / (|A|_1^2 |v|_1^2)
  double variance_bound_ce = 0.0; // analytic constant; +inf when none applies
  bool growth_pass = false;
  double growth_ratio = 0.0;      // E|v'|_1 / (|A|_1 |v|_1)
};

AssumptionReport assumption_suite(const ColumnOracle& a, Method method,
                                  long replicas, std::int64_t m,
                                  std::uint64_t seed = 7);

}  // namespace qpow
