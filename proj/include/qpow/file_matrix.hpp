#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "qpow/column_oracle.hpp"

namespace qpow {

// Symmetric matrix loaded from a coordinate-list file.
//
// Format: '#' lines are comments; the first data line is the dimension N;
// every following line is "i j value" with 1-based indices and i <= j.
// Lines with i > j or repeated (i, j) are errors.  The lower triangle is
// filled by symmetry.
class FileMatrix final : public ColumnOracle {
 public:
  static FileMatrix load(const std::string& path);
  static FileMatrix parse(std::istream& in, const std::string& name);

  index_t dim() const override { return n_; }
  double diagonal(index_t k) const override { return diag_[k]; }
  std::vector<OffdiagEntry> offdiag_column(index_t k) const override;
  std::int64_t offdiag_count(index_t k) const override;
  std::optional<OffdiagSample> sample_offdiag(index_t k,
                                              CounterRng& rng) const override;

 private:
  FileMatrix() = default;
  index_t n_ = 0;
  std::vector<double> diag_;
  // Per-column off-diagonal adjacency, rows sorted ascending.
  std::vector<std::vector<OffdiagEntry>> cols_;
};

}  // namespace qpow
