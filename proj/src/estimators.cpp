#include "qpow/estimators.hpp"

#include <stdexcept>

namespace qpow {
namespace {

template <typename Lookup>
double projected_energy_impl(const ColumnOracle& h, const SparseVector& vstar,
                             index_t dim, Lookup&& value_of) {
  if (vstar.dim != h.dim() || dim != h.dim()) {
    throw std::invalid_argument("dimension mismatch");
  }
  double num = 0.0;
  double den = 0.0;
  for (const auto& [i, wi] : vstar.entries) {
    const double vi = value_of(i);
    den += wi * vi;
    double hv = h.diagonal(i) * vi;
    for (const OffdiagEntry& e : h.offdiag_column(i)) {
      hv += e.value * value_of(e.row);
    }
    num += wi * hv;
  }
  if (den == 0.0) throw std::domain_error("projected energy overlap is zero");
  return num / den;
}

}  // namespace

double projected_energy(const ColumnOracle& h, const SparseVector& vstar,
                        const SparseVector& v) {
  return projected_energy_impl(h, vstar, v.dim,
                               [&](index_t j) { return value_at(v, j); });
}

double projected_energy(const ColumnOracle& h, const SparseVector& vstar,
                        const WalkerEnsemble& w) {
  return projected_energy_impl(h, vstar, w.dim, [&](index_t j) {
    auto it = w.counts.find(j);
    return it == w.counts.end() ? 0.0 : static_cast<double>(it->second);
  });
}

}  // namespace qpow
