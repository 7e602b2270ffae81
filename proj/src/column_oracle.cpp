#include "qpow/column_oracle.hpp"

#include <cmath>

namespace qpow {

double matrix_norm1(const ColumnOracle& a) {
  double best = 0.0;
  for (index_t k = 0; k < a.dim(); ++k) {
    double s = std::abs(a.diagonal(k));
    for (const auto& e : a.offdiag_column(k)) s += std::abs(e.value);
    if (s > best) best = s;
  }
  return best;
}

}  // namespace qpow
