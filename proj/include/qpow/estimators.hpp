#pragma once

#include "qpow/column_oracle.hpp"
#include "qpow/vectors.hpp"

namespace qpow {

// Projected energy <vstar|H|v> / <vstar|v>. Only the support of vstar is
// visited; matrix elements are gathered through the symmetric column
// oracle. Throws std::domain_error when the overlap vanishes.
double projected_energy(const ColumnOracle& h, const SparseVector& vstar,
                        const SparseVector& v);
double projected_energy(const ColumnOracle& h, const SparseVector& vstar,
                        const WalkerEnsemble& w);

}  // namespace qpow
