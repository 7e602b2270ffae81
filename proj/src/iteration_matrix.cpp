#include "qpow/iteration_matrix.hpp"

#include <stdexcept>

namespace qpow {

IterationMatrix::IterationMatrix(const ColumnOracle& h, double delta, double shift)
    : h_(&h), delta_(delta), shift_(shift) {
  if (!(delta > 0.0)) {
    throw std::invalid_argument("IterationMatrix: delta must be positive");
  }
}

std::vector<OffdiagEntry> IterationMatrix::offdiag_column(index_t k) const {
  auto col = h_->offdiag_column(k);
  for (auto& e : col) e.value = -delta_ * e.value;
  return col;
}

std::optional<OffdiagSample> IterationMatrix::sample_offdiag(index_t k,
                                                             CounterRng& rng) const {
  auto s = h_->sample_offdiag(k, rng);
  if (s) s->value = -delta_ * s->value;
  return s;
}

}  // namespace qpow
