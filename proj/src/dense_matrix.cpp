#include "qpow/dense_matrix.hpp"

#include <stdexcept>
#include <string>

namespace qpow {

DenseMatrix::DenseMatrix(index_t n) : n_(n) {
  if (n < 1) throw std::invalid_argument("DenseMatrix: dimension must be positive");
  a_.assign(static_cast<std::size_t>(n) * n, 0.0);
}

void DenseMatrix::set_symmetric(index_t i, index_t j, double v) {
  a_[i * n_ + j] = v;
  a_[j * n_ + i] = v;
}

std::vector<OffdiagEntry> DenseMatrix::offdiag_column(index_t k) const {
  std::vector<OffdiagEntry> col;
  for (index_t j = 0; j < n_; ++j) {
    if (j == k) continue;
    const double v = a_[j * n_ + k];
    if (v != 0.0) col.push_back({j, v});
  }
  return col;
}

std::int64_t DenseMatrix::offdiag_count(index_t k) const {
  std::int64_t c = 0;
  for (index_t j = 0; j < n_; ++j) {
    if (j != k && a_[j * n_ + k] != 0.0) ++c;
  }
  return c;
}

std::optional<OffdiagSample> DenseMatrix::sample_offdiag(index_t k,
                                                         CounterRng& rng) const {
  const std::int64_t nnz = offdiag_count(k);
  if (nnz == 0) return std::nullopt;
  std::int64_t pick = static_cast<std::int64_t>(
      rng.uniform_below(static_cast<std::uint64_t>(nnz)));
  for (index_t j = 0; j < n_; ++j) {
    if (j == k) continue;
    const double v = a_[j * n_ + k];
    if (v == 0.0) continue;
    if (pick == 0) return OffdiagSample{j, v, 1.0 / static_cast<double>(nnz)};
    --pick;
  }
  return std::nullopt;
}

DenseMatrix dense_from_oracle(const ColumnOracle& o, index_t max_dim) {
  const index_t n = o.dim();
  if (n > max_dim) {
    throw std::invalid_argument("dense_from_oracle: dimension " +
                                std::to_string(n) + " exceeds limit " +
                                std::to_string(max_dim));
  }
  DenseMatrix m(n);
  for (index_t k = 0; k < n; ++k) {
    m.set_symmetric(k, k, o.diagonal(k));
  }
  for (index_t k = 0; k < n; ++k) {
    for (const auto& e : o.offdiag_column(k)) {
      m.set_symmetric(e.row, k, e.value);
    }
  }
  // The mirror entry of every stored value must be listed by the oracle with
  // the same bits, otherwise the column lists were asymmetric.
  for (index_t k = 0; k < n; ++k) {
    const auto col = o.offdiag_column(k);
    std::size_t pos = 0;
    for (index_t j = 0; j < n; ++j) {
      if (j == k || m.at(j, k) == 0.0) continue;
      if (pos >= col.size() || col[pos].row != j || col[pos].value != m.at(j, k)) {
        throw std::runtime_error("dense_from_oracle: asymmetric oracle at (" +
                                 std::to_string(j) + ", " + std::to_string(k) + ")");
      }
      ++pos;
    }
    if (pos != col.size()) {
      throw std::runtime_error("dense_from_oracle: asymmetric oracle in column " +
                               std::to_string(k));
    }
  }
  return m;
}

}  // namespace qpow
