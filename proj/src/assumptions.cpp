#include "qpow/assumptions.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "qpow/compress.hpp"
#include "qpow/fciqmc.hpp"
#include "qpow/fri.hpp"
#include "qpow/rng.hpp"
#include "qpow/vectors.hpp"

namespace qpow {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

bool is_walker_method(Method m) {
  return m == Method::fciqmc || m == Method::ifciqmc;
}

// Deterministic integer-valued start iterate: up to 24 spread-out
// locations with mixed signs and counts 1..4.
SparseVector start_iterate(index_t dim, std::uint64_t seed) {
  const index_t n = std::min<index_t>(dim, 24);
  CounterRng rng(seed, 0, 0, stream_entity(StreamPurpose::system, 1));
  std::vector<std::pair<index_t, double>> entries;
  entries.reserve(static_cast<std::size_t>(n));
  for (index_t k = 0; k < n; ++k) {
    const index_t idx = k * dim / n;
    const double count = 1.0 + static_cast<double>(rng.uniform_below(4));
    const double sign = rng.uniform_below(2) == 0 ? 1.0 : -1.0;
    entries.emplace_back(idx, sign * count);
  }
  return make_sparse(dim, std::move(entries));
}

// Second-moment constant of the walker step noise, from the column data:
// max over columns of (nnz - 2) * (offdiagonal 2-norm squared), plus 1/2,
// divided by |A|_1^2 to match the normalized bound.
double walker_ce(const ColumnOracle& a, double a1) {
  double worst = 0.0;
  for (index_t k = 0; k < a.dim(); ++k) {
    double off2 = 0.0;
    std::int64_t nnz = a.diagonal(k) != 0.0 ? 1 : 0;
    for (const OffdiagEntry& e : a.offdiag_column(k)) {
      off2 += e.value * e.value;
      ++nnz;
    }
    const double contrib = static_cast<double>(nnz - 2) * off2;
    worst = std::max(worst, contrib);
  }
  return (worst + 0.5) / (a1 * a1);
}

SparseVector walker_step(const ColumnOracle& a, const WalkerEnsemble& w,
                         bool initiator_mode, std::int64_t threshold,
                         const StreamKey& key) {
  std::vector<SpawnEvent> spawned = spawn_step(a, w, key);
  WalkerEnsemble survivors = diagonal_step(a, w, key);
  if (initiator_mode) {
    std::unordered_set<index_t> initiators;
    for (const auto& [loc, count] : w.counts) {
      if (std::llabs(count) > threshold) initiators.insert(loc);
    }
    spawned = initiator_filter(std::move(spawned), w, initiators);
  }
  return to_sparse(annihilate(spawned, survivors));
}

}  // namespace

AssumptionReport assumption_suite(const ColumnOracle& a, Method method,
                                  long replicas, std::int64_t m,
                                  std::uint64_t seed) {
  if (replicas < 2) throw std::invalid_argument("need at least 2 replicas");
  if (m < 1) throw std::invalid_argument("m must be positive");

  const SparseVector v = start_iterate(a.dim(), seed);
  const double a1 = matrix_norm1(a);
  const double v1 = norm1(v);
  const SparseVector av = exact_matvec(a, v);

  WalkerEnsemble w{a.dim(), {}};
  if (is_walker_method(method)) {
    for (const auto& [idx, val] : v.entries) {
      w.counts[idx] = static_cast<std::int64_t>(val);
    }
    m = static_cast<std::int64_t>(total_walkers(w));
  }

  AssumptionReport rep;
  rep.replicas = replicas;
  rep.m = m;
  switch (method) {
    case Method::exact:
      rep.variance_bound_ce = 0.0;
      break;
    case Method::fri_systematic:
    case Method::fri_bernoulli:
      rep.variance_bound_ce = 1.0;
      break;
    case Method::fciqmc:
      rep.variance_bound_ce = walker_ce(a, a1);
      break;
    case Method::hard_threshold:
    case Method::ifciqmc:
      rep.variance_bound_ce = kInf;
      break;
  }

  std::unordered_map<index_t, std::pair<double, double>> comp;  // sum, sum sq
  double sq_sum = 0.0, sq_sum2 = 0.0;
  double l1_sum = 0.0, l1_sum2 = 0.0;

  for (long r = 0; r < replicas; ++r) {
    const StreamKey key{seed, static_cast<std::uint64_t>(r + 1), 0};
    SparseVector next;
    switch (method) {
      case Method::exact:
        next = av;
        break;
      case Method::fri_systematic:
      case Method::fri_bernoulli:
      case Method::hard_threshold: {
        CompressionSpec spec;
        spec.kind = method == Method::fri_systematic
                        ? CompressionKind::systematic
                        : (method == Method::fri_bernoulli
                               ? CompressionKind::bernoulli
                               : CompressionKind::hard_threshold);
        spec.m = m;
        CounterRng rng = key.stream(StreamPurpose::compress, 0);
        next = compress(av, spec, rng);
        break;
      }
      case Method::fciqmc:
      case Method::ifciqmc:
        next = walker_step(a, w, method == Method::ifciqmc, 3, key);
        break;
    }

    const SparseVector xi = axpy(-1.0, av, next);
    for (const auto& [idx, val] : xi.entries) {
      auto& acc = comp[idx];
      acc.first += val;
      acc.second += val * val;
    }
    const double sq = norm2(xi) * norm2(xi);
    sq_sum += sq;
    sq_sum2 += sq * sq;
    const double l1 = norm1(next);
    l1_sum += l1;
    l1_sum2 += l1 * l1;
  }

  const double rn = static_cast<double>(replicas);
  rep.mean_zero_pass = true;
  for (const auto& [idx, acc] : comp) {
    const double mean = acc.first / rn;
    const double var = std::max(0.0, acc.second / rn - mean * mean);
    const double se = std::sqrt(var / rn);
    double ratio;
    if (se == 0.0) {
      ratio = std::abs(mean) <= 1e-12 ? 0.0 : kInf;
    } else {
      ratio = std::abs(mean) / se;
    }
    rep.max_mean_dev_se = std::max(rep.max_mean_dev_se, ratio);
    if (ratio > 5.0) rep.mean_zero_pass = false;
  }

  const double sq_mean = sq_sum / rn;
  const double sq_var = std::max(0.0, sq_sum2 / rn - sq_mean * sq_mean);
  const double sq_se = std::sqrt(sq_var / rn);
  const double bound =
      rep.variance_bound_ce * a1 * a1 * v1 * v1 / static_cast<double>(m);
  rep.variance_pass = sq_mean <= bound + 3.0 * sq_se;
  rep.empirical_ce = sq_mean * static_cast<double>(m) / (a1 * a1 * v1 * v1);

  const double l1_mean = l1_sum / rn;
  const double l1_var = std::max(0.0, l1_sum2 / rn - l1_mean * l1_mean);
  const double l1_se = std::sqrt(l1_var / rn);
  rep.growth_pass = l1_mean <= a1 * v1 + 3.0 * l1_se;
  rep.growth_ratio = l1_mean / (a1 * v1);
  return rep;
}

}  // namespace qpow
