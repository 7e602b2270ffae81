#include "qpow/compress.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <stdexcept>
#include <unordered_set>

namespace qpow {

namespace {

// Max-heap order: larger magnitude first, lower index breaking ties.
bool heap_before(const std::pair<index_t, double>& a,
                 const std::pair<index_t, double>& b) {
  const double ma = std::abs(a.second), mb = std::abs(b.second);
  if (ma != mb) return ma < mb;
  return a.first > b.first;
}

// Descending magnitude, ascending index; the canonical traversal order for
// sampling the remainder.
bool magnitude_order(const std::pair<index_t, double>& a,
                     const std::pair<index_t, double>& b) {
  const double ma = std::abs(a.second), mb = std::abs(b.second);
  if (ma != mb) return ma > mb;
  return a.first < b.first;
}

double sign_of(double x) { return x < 0.0 ? -1.0 : 1.0; }

SparseVector assemble(index_t dim, std::vector<std::pair<index_t, double>> entries) {
  std::sort(entries.begin(), entries.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
  SparseVector out;
  out.dim = dim;
  out.entries = std::move(entries);
  return out;
}

}  // namespace

SplitResult split_large(const SparseVector& v, std::int64_t m) {
  if (m < 1) throw std::invalid_argument("split_large: m must be at least 1");
  SplitResult r;
  r.small.dim = v.dim;
  r.small_norm1 = norm1(v);

  std::vector<std::pair<index_t, double>> heap = v.entries;
  std::make_heap(heap.begin(), heap.end(), heap_before);
  std::unordered_set<index_t> kept_idx;

  while (r.tau < m && !heap.empty()) {
    const auto& top = heap.front();
    if (std::abs(top.second) <
        r.small_norm1 / static_cast<double>(m - r.tau)) {
      break;
    }
    r.kept.push_back(top);
    r.small_norm1 -= std::abs(top.second);
    kept_idx.insert(top.first);
    ++r.tau;
    std::pop_heap(heap.begin(), heap.end(), heap_before);
    heap.pop_back();
  }
  // The keep condition cannot hold at tau = m - 1 unless a single entry
  // remains, so a nonempty remainder implies tau < m.
  assert(heap.empty() || r.tau < m);

  r.small.entries.reserve(v.entries.size() - r.kept.size());
  for (const auto& e : v.entries) {
    if (!kept_idx.contains(e.first)) r.small.entries.push_back(e);
  }
  return r;
}

SparseVector compress_systematic(const SparseVector& v, std::int64_t m,
                                 CounterRng& rng) {
  if (m < 1) throw std::invalid_argument("compress_systematic: m must be at least 1");
  // With a budget covering every entry the keep loop retains them all; take
  // the exact path so no randomness is consumed and no values are rebuilt.
  if (norm0(v) <= m) return v;
  SplitResult r = split_large(v, m);
  auto out = std::move(r.kept);
  const std::int64_t nsel = m - r.tau;
  if (!r.small.entries.empty() && nsel > 0 && r.small_norm1 > 0.0) {
    auto small = std::move(r.small.entries);
    std::sort(small.begin(), small.end(), magnitude_order);
    double total = 0.0;
    for (const auto& e : small) total += std::abs(e.second);
    if (total > 0.0) {
      const double unit = r.small_norm1 / static_cast<double>(nsel);
      const double u = rng.uniform01();
      std::size_t i = 0;
      double cum = std::abs(small[0].second);
      std::int64_t picked_at = -1;
      double picked_value = 0.0;
      for (std::int64_t k = 1; k <= nsel; ++k) {
        const double threshold =
            (u + static_cast<double>(k - 1)) / static_cast<double>(nsel) * total;
        while (cum <= threshold && i + 1 < small.size()) {
          ++i;
          cum += std::abs(small[i].second);
        }
        if (static_cast<std::int64_t>(i) == picked_at) {
          picked_value += sign_of(small[i].second) * unit;
          out.back().second = picked_value;
        } else {
          picked_at = static_cast<std::int64_t>(i);
          picked_value = sign_of(small[i].second) * unit;
          out.emplace_back(small[i].first, picked_value);
        }
      }
    }
  }
  return assemble(v.dim, std::move(out));
}

SparseVector compress_bernoulli(const SparseVector& v, std::int64_t m,
                                CounterRng& rng) {
  SplitResult r = split_large(v, m);
  auto out = std::move(r.kept);
  const std::int64_t nsel = m - r.tau;
  if (!r.small.entries.empty() && nsel > 0 && r.small_norm1 > 0.0) {
    auto small = std::move(r.small.entries);
    std::sort(small.begin(), small.end(), magnitude_order);
    const double unit = r.small_norm1 / static_cast<double>(nsel);
    for (const auto& e : small) {
      const double p = std::min(1.0, std::abs(e.second) / unit);
      if (rng.uniform01() < p) {
        out.emplace_back(e.first, sign_of(e.second) * unit);
      }
    }
  }
  return assemble(v.dim, std::move(out));
}

SparseVector compress_hard_threshold(const SparseVector& v, std::int64_t m) {
  if (m < 1) throw std::invalid_argument("compress_hard_threshold: m must be at least 1");
  if (norm0(v) <= m) return v;
  auto entries = v.entries;
  std::nth_element(entries.begin(), entries.begin() + (m - 1), entries.end(),
                   magnitude_order);
  entries.resize(static_cast<std::size_t>(m));
  return assemble(v.dim, std::move(entries));
}

SparseVector compress(const SparseVector& v, const CompressionSpec& spec,
                      CounterRng& rng) {
  switch (spec.kind) {
    case CompressionKind::systematic:
      return compress_systematic(v, spec.m, rng);
    case CompressionKind::bernoulli:
      return compress_bernoulli(v, spec.m, rng);
    case CompressionKind::hard_threshold:
      return compress_hard_threshold(v, spec.m);
  }
  throw std::logic_error("compress: unknown kind");
}

}  // namespace qpow
