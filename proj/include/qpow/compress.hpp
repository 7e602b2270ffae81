#pragma once

#include "qpow/rng.hpp"
#include "qpow/vectors.hpp"

namespace qpow {

enum class CompressionKind { systematic, bernoulli, hard_threshold };

struct CompressionSpec {
  CompressionKind kind = CompressionKind::systematic;
  std::int64_t m = 0;
};

// Greedy split of v into entries kept exactly and a remainder to sample.
// An entry is kept while its magnitude is at least (remaining 1-norm)/(m - tau);
// ties at the boundary are kept.  Extraction order is magnitude descending,
// index ascending.
struct SplitResult {
  // Exactly-kept entries in extraction order.
  std::vector<std::pair<index_t, double>> kept;
  // Remaining entries, index ascending.
  SparseVector small;
  std::int64_t tau = 0;
  // Remaining 1-norm: ||v||_1 minus the kept magnitudes, by running
  // subtraction.
  double small_norm1 = 0.0;
};

SplitResult split_large(const SparseVector& v, std::int64_t m);

// Unbiased rank-m compressions.  Systematic uses one uniform draw and
// stratified selection, preserves the 1-norm, and keeps exactly m entries;
// Bernoulli keeps each small entry independently with m entries on average.
SparseVector compress_systematic(const SparseVector& v, std::int64_t m,
                                 CounterRng& rng);
SparseVector compress_bernoulli(const SparseVector& v, std::int64_t m,
                                CounterRng& rng);

// Deterministic, biased: the m largest entries by (magnitude, index).
SparseVector compress_hard_threshold(const SparseVector& v, std::int64_t m);

SparseVector compress(const SparseVector& v, const CompressionSpec& spec,
                      CounterRng& rng);

}  // namespace qpow
