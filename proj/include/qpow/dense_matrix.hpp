#pragma once

#include <vector>

#include "qpow/column_oracle.hpp"

namespace qpow {

// Explicitly stored symmetric matrix.  Symmetry is bit-exact: writes go
// through set_symmetric and construction from an oracle is verified.
class DenseMatrix final : public ColumnOracle {
 public:
  explicit DenseMatrix(index_t n);

  double at(index_t i, index_t j) const { return a_[i * n_ + j]; }
  void set_symmetric(index_t i, index_t j, double v);

  index_t dim() const override { return n_; }
  double diagonal(index_t k) const override { return a_[k * n_ + k]; }
  std::vector<OffdiagEntry> offdiag_column(index_t k) const override;
  std::int64_t offdiag_count(index_t k) const override;
  std::optional<OffdiagSample> sample_offdiag(index_t k,
                                              CounterRng& rng) const override;

 private:
  index_t n_;
  std::vector<double> a_;
};

// Materializes an oracle.  Dimensions above max_dim are an error; the result
// is checked for bit-exact symmetry.
DenseMatrix dense_from_oracle(const ColumnOracle& o, index_t max_dim = 5000);

}  // namespace qpow
