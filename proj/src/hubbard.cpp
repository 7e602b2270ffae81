#include "qpow/hubbard.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace qpow {

namespace {

// cos(2 pi r / l) with the quarter-period values returned exactly.
double lattice_cos(int r, int l) {
  r %= l;
  if (r < 0) r += l;
  if (2 * r > l) r = l - r;
  if (r == 0) return 1.0;
  if (2 * r == l) return -1.0;
  if (4 * r == l) return 0.0;
  return std::cos(2.0 * std::numbers::pi * r / l);
}

int between_sign(std::uint64_t mask, int a, int b) {
  if (a > b) std::swap(a, b);
  if (b - a < 2) return 1;
  const std::uint64_t range = ((1ULL << b) - 1) & ~((1ULL << (a + 1)) - 1);
  return (std::popcount(mask & range) & 1) ? -1 : 1;
}

}  // namespace

HubbardMomentum::HubbardMomentum(int lattice, int n_up, int n_down, double u,
                                 Sampling sampling)
    : lattice_(lattice),
      norb_(lattice * lattice),
      n_up_(n_up),
      n_down_(n_down),
      u_(u),
      sampling_(sampling) {
  if (lattice < 1) throw std::invalid_argument("HubbardMomentum: lattice must be positive");
  if (norb_ > 64) throw std::invalid_argument("HubbardMomentum: more than 64 orbitals");
  if (n_up < 0 || n_down < 0 || n_up > norb_ || n_down > norb_) {
    throw std::invalid_argument("HubbardMomentum: electron count out of range");
  }
  if (n_up + n_down < 1) {
    throw std::invalid_argument("HubbardMomentum: no electrons");
  }

  binom_.assign(norb_ + 1, std::vector<std::uint64_t>(norb_ + 1, 0));
  for (int n = 0; n <= norb_; ++n) {
    binom_[n][0] = 1;
    for (int k = 1; k <= n; ++k) {
      binom_[n][k] = binom_[n - 1][k - 1] + (k <= n - 1 ? binom_[n - 1][k] : 0);
    }
  }

  const unsigned __int128 d = static_cast<unsigned __int128>(binom_[norb_][n_up_]) *
                              binom_[norb_][n_down_];
  if (d > static_cast<unsigned __int128>(INT64_MAX)) {
    throw std::invalid_argument("HubbardMomentum: basis dimension overflows");
  }
  dim_ = static_cast<index_t>(d);

  eps_.resize(norb_);
  for (int o = 0; o < norb_; ++o) {
    eps_[o] = -2.0 * (lattice_cos(o % lattice_, lattice_) +
                      lattice_cos(o / lattice_, lattice_));
  }

  std::vector<int> order(norb_);
  for (int o = 0; o < norb_; ++o) order[o] = o;
  std::sort(order.begin(), order.end(), [this](int a, int b) {
    if (eps_[a] != eps_[b]) return eps_[a] < eps_[b];
    return a < b;
  });
  for (int i = 0; i < n_up_; ++i) hf_up_ |= 1ULL << order[i];
  for (int i = 0; i < n_down_; ++i) hf_down_ |= 1ULL << order[i];
}

double HubbardMomentum::dispersion(int orbital) const { return eps_[orbital]; }

std::uint64_t HubbardMomentum::rank_mask(std::uint64_t mask) const {
  std::uint64_t r = 0;
  int i = 1;
  while (mask != 0) {
    const int c = std::countr_zero(mask);
    r += binom_[c][i];
    ++i;
    mask &= mask - 1;
  }
  return r;
}

std::uint64_t HubbardMomentum::unrank_mask(std::uint64_t r, int electrons) const {
  std::uint64_t mask = 0;
  int c = norb_ - 1;
  for (int i = electrons; i >= 1; --i) {
    while (c >= i && binom_[c][i] > r) --c;
    mask |= 1ULL << c;
    r -= binom_[c][i];
    --c;
  }
  return mask;
}

index_t HubbardMomentum::rank(std::uint64_t up, std::uint64_t down) const {
  return static_cast<index_t>(rank_mask(up) * binom_[norb_][n_down_] +
                              rank_mask(down));
}

std::pair<std::uint64_t, std::uint64_t> HubbardMomentum::unrank(index_t k) const {
  const std::uint64_t per_up = binom_[norb_][n_down_];
  const std::uint64_t ku = static_cast<std::uint64_t>(k) / per_up;
  const std::uint64_t kd = static_cast<std::uint64_t>(k) % per_up;
  return {unrank_mask(ku, n_up_), unrank_mask(kd, n_down_)};
}

double HubbardMomentum::diagonal(index_t k) const {
  const auto [up, down] = unrank(k);
  double e = 0.0;
  for (std::uint64_t m = up; m != 0; m &= m - 1) e += eps_[std::countr_zero(m)];
  for (std::uint64_t m = down; m != 0; m &= m - 1) e += eps_[std::countr_zero(m)];
  return e + u_ * n_up_ * n_down_ / norb_;
}

std::optional<HubbardMomentum::Excitation> HubbardMomentum::try_move(
    std::uint64_t up, std::uint64_t down, int p, int k, int q) const {
  const int l = lattice_;
  const int q1 = q % l, q2 = q / l;
  const int p1 = p % l, p2 = p / l;
  const int k1 = k % l, k2 = k / l;
  const int pp = ((p1 - q1 + l) % l) + l * ((p2 - q2 + l) % l);
  const int kk = ((k1 + q1) % l) + l * ((k2 + q2) % l);
  if ((up >> pp) & 1ULL) return std::nullopt;
  if ((down >> kk) & 1ULL) return std::nullopt;
  const std::uint64_t new_up = (up ^ (1ULL << p)) | (1ULL << pp);
  const std::uint64_t new_down = (down ^ (1ULL << k)) | (1ULL << kk);
  const int sign = between_sign(down, k, kk) * between_sign(up, p, pp);
  return Excitation{rank(new_up, new_down), sign * u_ / norb_};
}

std::vector<HubbardMomentum::Excitation> HubbardMomentum::excitations(
    std::uint64_t up, std::uint64_t down) const {
  std::vector<Excitation> out;
  if (u_ == 0.0) return out;
  out.reserve(static_cast<std::size_t>(n_up_) * n_down_ * (norb_ - 1));
  for (std::uint64_t mu = up; mu != 0; mu &= mu - 1) {
    const int p = std::countr_zero(mu);
    for (std::uint64_t md = down; md != 0; md &= md - 1) {
      const int k = std::countr_zero(md);
      for (int q = 1; q < norb_; ++q) {
        if (auto e = try_move(up, down, p, k, q)) out.push_back(*e);
      }
    }
  }
  return out;
}

std::vector<OffdiagEntry> HubbardMomentum::offdiag_column(index_t k) const {
  const auto [up, down] = unrank(k);
  auto list = excitations(up, down);
  std::vector<OffdiagEntry> col;
  col.reserve(list.size());
  for (const auto& e : list) col.push_back({e.target, e.value});
  std::sort(col.begin(), col.end(),
            [](const OffdiagEntry& a, const OffdiagEntry& b) { return a.row < b.row; });
  return col;
}

std::int64_t HubbardMomentum::offdiag_count(index_t k) const {
  const auto [up, down] = unrank(k);
  if (u_ == 0.0) return 0;
  std::int64_t c = 0;
  for (std::uint64_t mu = up; mu != 0; mu &= mu - 1) {
    const int p = std::countr_zero(mu);
    for (std::uint64_t md = down; md != 0; md &= md - 1) {
      const int kd = std::countr_zero(md);
      for (int q = 1; q < norb_; ++q) {
        if (try_move(up, down, p, kd, q)) ++c;
      }
    }
  }
  return c;
}

std::optional<OffdiagSample> HubbardMomentum::sample_offdiag(index_t k,
                                                             CounterRng& rng) const {
  const auto [up, down] = unrank(k);
  if (u_ == 0.0 || n_up_ == 0 || n_down_ == 0 || norb_ == 1) return std::nullopt;
  if (sampling_ == Sampling::uniform) {
    const auto list = excitations(up, down);
    if (list.empty()) return std::nullopt;
    const std::size_t pick = rng.uniform_below(list.size());
    return OffdiagSample{list[pick].target, list[pick].value,
                         1.0 / static_cast<double>(list.size())};
  }
  // Rejection scheme: propose (p, k, q) uniformly and abort when blocked.
  const int iu = static_cast<int>(rng.uniform_below(n_up_));
  const int id = static_cast<int>(rng.uniform_below(n_down_));
  const int q = 1 + static_cast<int>(rng.uniform_below(norb_ - 1));
  int p = -1, kd = -1;
  std::uint64_t m = up;
  for (int i = 0; i <= iu; ++i) {
    p = std::countr_zero(m);
    m &= m - 1;
  }
  m = down;
  for (int i = 0; i <= id; ++i) {
    kd = std::countr_zero(m);
    m &= m - 1;
  }
  const auto e = try_move(up, down, p, kd, q);
  if (!e) return std::nullopt;
  const double p_loc =
      1.0 / (static_cast<double>(n_up_) * n_down_ * (norb_ - 1));
  return OffdiagSample{e->target, e->value, p_loc};
}

std::pair<int, int> HubbardMomentum::total_momentum(std::uint64_t up,
                                                    std::uint64_t down) const {
  int m1 = 0, m2 = 0;
  for (std::uint64_t m = up; m != 0; m &= m - 1) {
    const int o = std::countr_zero(m);
    m1 += o % lattice_;
    m2 += o / lattice_;
  }
  for (std::uint64_t m = down; m != 0; m &= m - 1) {
    const int o = std::countr_zero(m);
    m1 += o % lattice_;
    m2 += o / lattice_;
  }
  return {m1 % lattice_, m2 % lattice_};
}

}  // namespace qpow
