#pragma once

#include <cstdint>
#include <optional>
#include <unordered_map>
#include <utility>
#include <vector>

namespace qpow {

using index_t = std::int64_t;

// Magnitudes below this are treated as exact zeros after arithmetic.
inline constexpr double kPruneThreshold = 1e-30;

// Sparse real vector.  Entries are sorted by index and never store zeros.
struct SparseVector {
  index_t dim = 0;
  std::vector<std::pair<index_t, double>> entries;
};

// Sorts, validates indices against dim, rejects duplicates, prunes zeros.
SparseVector make_sparse(index_t dim,
                         std::vector<std::pair<index_t, double>> entries);

double norm1(const SparseVector& v);
double norm2(const SparseVector& v);
std::int64_t norm0(const SparseVector& v);
double dot(const SparseVector& a, const SparseVector& b);
double value_at(const SparseVector& v, index_t i);

// a*x + y with pruning of entries below kPruneThreshold.
SparseVector axpy(double a, const SparseVector& x, const SparseVector& y);
SparseVector scaled(const SparseVector& v, double c);

// v / ||v||_2; zero vector is a domain error.
SparseVector normalized(const SparseVector& v);

// tan of the angle between u and v.  Returns nullopt when the vectors are
// orthogonal (infinite tangent); a zero vector is a domain error.
std::optional<double> tan_angle(const SparseVector& u, const SparseVector& v);

// Signed integer walker counts per location.  No zero counts are stored.
struct WalkerEnsemble {
  index_t dim = 0;
  std::unordered_map<index_t, std::int64_t> counts;
};

// Adds `count` (signed) walkers at `loc`, erasing the entry when it cancels.
void add_walkers(WalkerEnsemble& w, index_t loc, std::int64_t count);

// Total particle number: sum of |count|.
std::int64_t total_walkers(const WalkerEnsemble& w);

SparseVector to_sparse(const WalkerEnsemble& w);

// Locations in increasing order; fixes the walker traversal order.
std::vector<index_t> sorted_locations(const WalkerEnsemble& w);

// floor(q) plus a Bernoulli(frac(q)) increment decided by u in (0,1).
// q must be nonnegative.
std::int64_t round_stochastic(double q, double u);

}  // namespace qpow
