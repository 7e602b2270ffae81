#include "qpow/fri.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <unordered_map>

namespace qpow {

namespace {

SparseVector matvec_dense_scratch(const ColumnOracle& a, const SparseVector& v) {
  thread_local std::vector<double> scratch;
  thread_local std::vector<char> touched;
  const std::size_t n = static_cast<std::size_t>(a.dim());
  if (scratch.size() < n) {
    scratch.resize(n, 0.0);
    touched.resize(n, 0);
  }
  std::vector<index_t> idx;
  auto bump = [&](index_t j, double add) {
    if (!touched[j]) {
      touched[j] = 1;
      idx.push_back(j);
    }
    scratch[j] += add;
  };
  for (const auto& [k, x] : v.entries) {
    bump(k, a.diagonal(k) * x);
    for (const auto& e : a.offdiag_column(k)) bump(e.row, e.value * x);
  }
  std::sort(idx.begin(), idx.end());
  SparseVector y;
  y.dim = a.dim();
  y.entries.reserve(idx.size());
  for (index_t j : idx) {
    if (std::abs(scratch[j]) >= kPruneThreshold) y.entries.emplace_back(j, scratch[j]);
    scratch[j] = 0.0;
    touched[j] = 0;
  }
  return y;
}

SparseVector matvec_hashed(const ColumnOracle& a, const SparseVector& v) {
  std::unordered_map<index_t, double> acc;
  acc.reserve(v.entries.size() * 8);
  for (const auto& [k, x] : v.entries) {
    acc[k] += a.diagonal(k) * x;
    for (const auto& e : a.offdiag_column(k)) acc[e.row] += e.value * x;
  }
  SparseVector y;
  y.dim = a.dim();
  y.entries.reserve(acc.size());
  for (const auto& [j, val] : acc) {
    if (std::abs(val) >= kPruneThreshold) y.entries.emplace_back(j, val);
  }
  std::sort(y.entries.begin(), y.entries.end(),
            [](const auto& p, const auto& q) { return p.first < q.first; });
  return y;
}

}  // namespace

SparseVector exact_matvec(const ColumnOracle& a, const SparseVector& v) {
  if (v.dim != a.dim()) throw std::invalid_argument("exact_matvec: dimension mismatch");
  if (a.dim() <= kDenseScratchDim) return matvec_dense_scratch(a, v);
  return matvec_hashed(a, v);
}

FriStepResult fri_step(const ColumnOracle& a, const SparseVector& v,
                       const CompressionSpec& spec, CounterRng& rng) {
  FriStepResult r;
  SparseVector av = exact_matvec(a, v);
  r.nnz_matvec = norm0(av);
  r.av_norm2 = norm2(av);
  SparseVector phi = compress(av, spec, rng);
  r.xi_norm2 = norm2(axpy(-1.0, av, phi));
  r.v_next = normalized(phi);
  return r;
}

}  // namespace qpow
