#include "qpow/fciqmc.hpp"

#include <array>
#include <cmath>
#include <cstdlib>
#include <stdexcept>
#include <unordered_map>

#include "qpow/errors.hpp"
#include "qpow/fri.hpp"

namespace qpow {

std::vector<SpawnEvent> spawn_step(const ColumnOracle& a, const WalkerEnsemble& w,
                                   const StreamKey& key) {
  std::vector<SpawnEvent> events;
  std::uint64_t ordinal = 0;
  for (const index_t loc : sorted_locations(w)) {
    const std::int64_t c = w.counts.at(loc);
    const int parent_sign = c < 0 ? -1 : 1;
    const std::int64_t attempts = std::abs(c);
    for (std::int64_t i = 0; i < attempts; ++i) {
      CounterRng rng = key.stream(StreamPurpose::spawn, ordinal++);
      const auto sample = a.sample_offdiag(loc, rng);
      if (!sample) continue;
      const double q = std::abs(sample->value) / sample->p_loc;
      const std::int64_t n = round_stochastic(q, rng.uniform01());
      if (n < 1) continue;
      const int sign = (sample->value < 0.0 ? -1 : 1) * parent_sign;
      events.push_back({loc, sample->row, n, sign, false});
    }
  }
  return events;
}

WalkerEnsemble diagonal_step(const ColumnOracle& a, const WalkerEnsemble& w,
                             const StreamKey& key) {
  WalkerEnsemble out;
  out.dim = w.dim;
  std::uint64_t ordinal = 0;
  for (const index_t loc : sorted_locations(w)) {
    const std::int64_t c = w.counts.at(loc);
    const int parent_sign = c < 0 ? -1 : 1;
    const double d = a.diagonal(loc);
    const double q = std::abs(d);
    const int child_sign = (d < 0.0 ? -1 : 1) * parent_sign;
    const std::int64_t attempts = std::abs(c);
    std::int64_t born = 0;
    for (std::int64_t i = 0; i < attempts; ++i) {
      CounterRng rng = key.stream(StreamPurpose::diagonal, ordinal++);
      born += round_stochastic(q, rng.uniform01());
    }
    add_walkers(out, loc, born * child_sign);
  }
  return out;
}

std::vector<SpawnEvent> initiator_filter(
    std::vector<SpawnEvent> events, const WalkerEnsemble& w,
    const std::unordered_set<index_t>& initiators) {
  // Group pending spawns onto unoccupied targets by (target, sign); a group
  // survives only with two or more coinciding events.
  std::unordered_map<index_t, std::array<int, 2>> pending;
  for (const auto& e : events) {
    const bool from_initiator = e.parent_initiator || initiators.contains(e.parent);
    if (from_initiator || w.counts.contains(e.target)) continue;
    ++pending[e.target][e.sign < 0 ? 0 : 1];
  }
  std::vector<SpawnEvent> out;
  out.reserve(events.size());
  for (auto& e : events) {
    const bool from_initiator = e.parent_initiator || initiators.contains(e.parent);
    if (!from_initiator && !w.counts.contains(e.target)) {
      if (pending[e.target][e.sign < 0 ? 0 : 1] < 2) continue;
    }
    out.push_back(e);
  }
  return out;
}

WalkerEnsemble annihilate(const std::vector<SpawnEvent>& spawned,
                          const WalkerEnsemble& diag_survivors) {
  WalkerEnsemble out = diag_survivors;
  for (const auto& e : spawned) {
    add_walkers(out, e.target, e.sign * e.count);
  }
  return out;
}

FciqmcRun::FciqmcRun(const ColumnOracle& h, double delta, const FciqmcConfig& cfg,
                     WalkerEnsemble v0, std::unordered_set<index_t> initiators)
    : h_(&h),
      a_(h, delta),
      cfg_(cfg),
      v_(std::move(v0)),
      initiators_(std::move(initiators)) {
  if (cfg_.target_population < 1) {
    throw std::invalid_argument("FciqmcRun: target population must be at least 1");
  }
  if (cfg_.q < 1) throw std::invalid_argument("FciqmcRun: q must be at least 1");
  if (v_.counts.empty()) throw PopulationCollapse("FciqmcRun: empty starting ensemble");
  if (cfg_.s0) {
    shift_ = *cfg_.s0;
  } else {
    shift_ = h_->diagonal(sorted_locations(v_).front());
  }
  a_.set_shift(shift_);
  pop_ring_.assign(static_cast<std::size_t>(cfg_.q) + 1, 0);
  pop_ring_[0] = total_walkers(v_);
  if (cfg_.initiator) promote_initiators();
}

void FciqmcRun::promote_initiators() {
  for (const auto& [loc, c] : v_.counts) {
    if (std::abs(c) > cfg_.initiator_threshold) initiators_.insert(loc);
  }
}

FciqmcStepInfo FciqmcRun::step() {
  const bool was_controlled = phase_ == FciqmcPhase::controlled;
  const StreamKey key{cfg_.seed, cfg_.run, static_cast<std::uint64_t>(t_)};

  auto events = spawn_step(a_, v_, key);
  auto survivors = diagonal_step(a_, v_, key);
  if (cfg_.initiator) {
    events = initiator_filter(std::move(events), v_, initiators_);
  }
  WalkerEnsemble next = annihilate(events, survivors);

  FciqmcStepInfo info;
  if (cfg_.compute_step_error) {
    const SparseVector av = exact_matvec(a_, to_sparse(v_));
    info.xi_norm2 = norm2(axpy(-1.0, av, to_sparse(next)));
    info.av_norm2 = norm2(av);
  }

  v_ = std::move(next);
  ++t_;
  const std::int64_t m = total_walkers(v_);
  if (m == 0) {
    throw PopulationCollapse("population collapsed to zero at iteration " +
                             std::to_string(t_));
  }
  pop_ring_[static_cast<std::size_t>(t_ % (cfg_.q + 1))] = m;
  if (cfg_.initiator) promote_initiators();

  if (was_controlled && t_ % cfg_.q == 0) {
    const std::int64_t m_prev =
        pop_ring_[static_cast<std::size_t>((t_ - cfg_.q) % (cfg_.q + 1))];
    shift_ -= cfg_.eta / static_cast<double>(cfg_.q) *
              (std::log(static_cast<double>(m)) -
               std::log(static_cast<double>(m_prev)));
    a_.set_shift(shift_);
  }
  if (phase_ == FciqmcPhase::growth && m > cfg_.target_population) {
    phase_ = FciqmcPhase::controlled;
  }

  info.t = t_;
  info.population = m;
  info.shift = shift_;
  info.phase = phase_;
  return info;
}

}  // namespace qpow
