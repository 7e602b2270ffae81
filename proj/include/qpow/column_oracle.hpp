#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "qpow/rng.hpp"
#include "qpow/vectors.hpp"

namespace qpow {

struct OffdiagEntry {
  index_t row = 0;
  double value = 0.0;
};

struct OffdiagSample {
  index_t row = 0;
  double value = 0.0;
  // Exact probability that this row was proposed for the column.
  double p_loc = 0.0;
};

// Column access to an implicit symmetric matrix.  offdiag_column lists the
// nonzero off-diagonal rows in increasing order; the basis is never
// materialized.
class ColumnOracle {
 public:
  virtual ~ColumnOracle() = default;

  virtual index_t dim() const = 0;
  virtual double diagonal(index_t k) const = 0;
  virtual std::vector<OffdiagEntry> offdiag_column(index_t k) const = 0;
  virtual std::int64_t offdiag_count(index_t k) const = 0;

  // Proposes one off-diagonal row of column k.  Returns nothing when the
  // column has no off-diagonal entries or a rejection sampler aborts.
  virtual std::optional<OffdiagSample> sample_offdiag(index_t k,
                                                      CounterRng& rng) const = 0;
};

// max_k (|A(k,k)| + sum_j |A(j,k)|).  Scans every column; small dims only.
double matrix_norm1(const ColumnOracle& a);

}  // namespace qpow
