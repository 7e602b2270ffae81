#include "qpow/vectors.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace qpow {

SparseVector make_sparse(index_t dim,
                         std::vector<std::pair<index_t, double>> entries) {
  if (dim < 0) throw std::invalid_argument("make_sparse: negative dimension");
  std::sort(entries.begin(), entries.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
  SparseVector v;
  v.dim = dim;
  v.entries.reserve(entries.size());
  index_t prev = -1;
  for (const auto& [i, x] : entries) {
    if (i < 0 || i >= dim) throw std::invalid_argument("make_sparse: index out of range");
    if (i == prev) throw std::invalid_argument("make_sparse: duplicate index");
    prev = i;
    if (std::abs(x) < kPruneThreshold) continue;
    v.entries.emplace_back(i, x);
  }
  return v;
}

double norm1(const SparseVector& v) {
  double s = 0.0;
  for (const auto& [i, x] : v.entries) s += std::abs(x);
  return s;
}

double norm2(const SparseVector& v) {
  double s = 0.0;
  for (const auto& [i, x] : v.entries) s += x * x;
  return std::sqrt(s);
}

std::int64_t norm0(const SparseVector& v) {
  return static_cast<std::int64_t>(v.entries.size());
}

double dot(const SparseVector& a, const SparseVector& b) {
  if (a.dim != b.dim) throw std::invalid_argument("dot: dimension mismatch");
  double s = 0.0;
  std::size_t i = 0, j = 0;
  while (i < a.entries.size() && j < b.entries.size()) {
    const index_t ai = a.entries[i].first, bj = b.entries[j].first;
    if (ai < bj) {
      ++i;
    } else if (bj < ai) {
      ++j;
    } else {
      s += a.entries[i].second * b.entries[j].second;
      ++i;
      ++j;
    }
  }
  return s;
}

double value_at(const SparseVector& v, index_t i) {
  auto it = std::lower_bound(
      v.entries.begin(), v.entries.end(), i,
      [](const auto& e, index_t k) { return e.first < k; });
  if (it != v.entries.end() && it->first == i) return it->second;
  return 0.0;
}

SparseVector axpy(double a, const SparseVector& x, const SparseVector& y) {
  if (x.dim != y.dim) throw std::invalid_argument("axpy: dimension mismatch");
  SparseVector out;
  out.dim = x.dim;
  out.entries.reserve(x.entries.size() + y.entries.size());
  std::size_t i = 0, j = 0;
  auto push = [&out](index_t k, double v) {
    if (std::abs(v) >= kPruneThreshold) out.entries.emplace_back(k, v);
  };
  while (i < x.entries.size() || j < y.entries.size()) {
    if (j == y.entries.size() ||
        (i < x.entries.size() && x.entries[i].first < y.entries[j].first)) {
      push(x.entries[i].first, a * x.entries[i].second);
      ++i;
    } else if (i == x.entries.size() || y.entries[j].first < x.entries[i].first) {
      push(y.entries[j].first, y.entries[j].second);
      ++j;
    } else {
      push(x.entries[i].first, a * x.entries[i].second + y.entries[j].second);
      ++i;
      ++j;
    }
  }
  return out;
}

SparseVector scaled(const SparseVector& v, double c) {
  SparseVector out;
  out.dim = v.dim;
  out.entries.reserve(v.entries.size());
  for (const auto& [i, x] : v.entries) {
    const double y = c * x;
    if (std::abs(y) >= kPruneThreshold) out.entries.emplace_back(i, y);
  }
  return out;
}

SparseVector normalized(const SparseVector& v) {
  const double n = norm2(v);
  if (n == 0.0) throw std::domain_error("normalized: zero vector");
  SparseVector out;
  out.dim = v.dim;
  out.entries.reserve(v.entries.size());
  for (const auto& [i, x] : v.entries) {
    const double y = x / n;
    if (std::abs(y) >= kPruneThreshold) out.entries.emplace_back(i, y);
  }
  return out;
}

std::optional<double> tan_angle(const SparseVector& u, const SparseVector& v) {
  double uu = 0.0, vv = 0.0;
  for (const auto& [i, x] : u.entries) uu += x * x;
  for (const auto& [i, x] : v.entries) vv += x * x;
  if (uu == 0.0 || vv == 0.0) throw std::domain_error("tan_angle: zero vector");
  const double d = dot(u, v);
  if (d == 0.0) return std::nullopt;
  double disc = uu * vv - d * d;
  if (disc < 0.0) disc = 0.0;
  return std::sqrt(disc) / std::abs(d);
}

void add_walkers(WalkerEnsemble& w, index_t loc, std::int64_t count) {
  if (count == 0) return;
  auto [it, inserted] = w.counts.try_emplace(loc, count);
  if (!inserted) {
    it->second += count;
    if (it->second == 0) w.counts.erase(it);
  }
}

std::int64_t total_walkers(const WalkerEnsemble& w) {
  std::int64_t m = 0;
  for (const auto& [loc, c] : w.counts) m += std::abs(c);
  return m;
}

SparseVector to_sparse(const WalkerEnsemble& w) {
  SparseVector v;
  v.dim = w.dim;
  v.entries.reserve(w.counts.size());
  for (const auto& [loc, c] : w.counts) {
    v.entries.emplace_back(loc, static_cast<double>(c));
  }
  std::sort(v.entries.begin(), v.entries.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
  return v;
}

std::vector<index_t> sorted_locations(const WalkerEnsemble& w) {
  std::vector<index_t> locs;
  locs.reserve(w.counts.size());
  for (const auto& [loc, c] : w.counts) locs.push_back(loc);
  std::sort(locs.begin(), locs.end());
  return locs;
}

std::int64_t round_stochastic(double q, double u) {
  if (!(q >= 0.0)) throw std::domain_error("round_stochastic: negative argument");
  const double f = std::floor(q);
  const std::int64_t base = static_cast<std::int64_t>(f);
  return base + (u < q - f ? 1 : 0);
}

}  // namespace qpow
