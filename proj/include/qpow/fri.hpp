#pragma once

#include "qpow/column_oracle.hpp"
#include "qpow/compress.hpp"
#include "qpow/vectors.hpp"

namespace qpow {

// y = A v, accumulated column by column in index order.  Uses a dense
// scratch buffer up to kDenseScratchDim and hashed accumulation above it;
// entries below the prune threshold are dropped.
inline constexpr index_t kDenseScratchDim = 10'000'000;
SparseVector exact_matvec(const ColumnOracle& a, const SparseVector& v);

struct FriStepResult {
  SparseVector v_next;      // compressed iterate, 2-norm normalized
  double av_norm2 = 0.0;    // ||A v||_2 before compression
  double xi_norm2 = 0.0;    // ||compressed - A v||_2
  std::int64_t nnz_matvec = 0;
};

// One inexact power iteration step: exact matvec, rank-m compression,
// normalization.  With m >= ||Av||_0 the compression is the identity and the
// step reproduces exact power iteration bit for bit.
FriStepResult fri_step(const ColumnOracle& a, const SparseVector& v,
                       const CompressionSpec& spec, CounterRng& rng);

}  // namespace qpow
