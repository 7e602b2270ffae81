#pragma once

#include <cstdint>
#include <optional>
#include <unordered_set>
#include <vector>

#include "qpow/column_oracle.hpp"
#include "qpow/iteration_matrix.hpp"
#include "qpow/rng.hpp"
#include "qpow/vectors.hpp"

namespace qpow {

// One off-diagonal spawn attempt that produced children.  count children
// land on target with the given sign (parent sign already folded in).
struct SpawnEvent {
  index_t parent = 0;
  index_t target = 0;
  std::int64_t count = 0;
  int sign = 0;
  bool parent_initiator = false;
};

// Walkers iterate in location order; each particle owns the stream
// (key.seed, key.run, key.iteration, spawn-ordinal), so trajectories do not
// depend on scheduling.  A particle with column entry value h proposed with
// probability p spawns round_stochastic(|h|/p) children carrying
// sign(h) * sign(parent).
std::vector<SpawnEvent> spawn_step(const ColumnOracle& a, const WalkerEnsemble& w,
                                   const StreamKey& key);

// Diagonal clone/death: each particle at l survives or clones with
// round_stochastic(|A(l,l)|) copies of sign sign(A(l,l)) * sign(parent).
WalkerEnsemble diagonal_step(const ColumnOracle& a, const WalkerEnsemble& w,
                             const StreamKey& key);

// Initiator rule: spawns from non-initiator parents onto locations
// unoccupied in w are dropped, unless at least two such events share the
// same target and sign.  Events from initiator parents, or onto occupied
// targets, always pass.  With every parent an initiator the output equals
// the input.
std::vector<SpawnEvent> initiator_filter(
    std::vector<SpawnEvent> events, const WalkerEnsemble& w,
    const std::unordered_set<index_t>& initiators);

// Signed merge of spawned children with the diagonal survivors; opposite
// signs on one location cancel.
WalkerEnsemble annihilate(const std::vector<SpawnEvent>& spawned,
                          const WalkerEnsemble& diag_survivors);

enum class FciqmcPhase { growth, controlled };

struct FciqmcConfig {
  std::int64_t target_population = 0;  // switches growth -> controlled
  double eta = 0.05;                   // shift damping
  std::int64_t q = 10;                 // shift update period
  std::optional<double> s0;            // default: H diagonal at the start location
  bool initiator = false;
  std::int64_t initiator_threshold = 3;  // |count| above this promotes a location
  bool compute_step_error = false;       // record ||v' - A v||_2 via exact matvec
  std::uint64_t seed = 0;
  std::uint64_t run = 0;
};

struct FciqmcStepInfo {
  std::int64_t t = 0;
  std::int64_t population = 0;
  double shift = 0.0;
  FciqmcPhase phase = FciqmcPhase::growth;
  std::optional<double> xi_norm2;
  std::optional<double> av_norm2;
};

// Two-phase walker driver: fixed shift s0 while the population is at or
// below the target, then the damped log-population shift update every q
// iterations.
class FciqmcRun {
 public:
  FciqmcRun(const ColumnOracle& h, double delta, const FciqmcConfig& cfg,
            WalkerEnsemble v0, std::unordered_set<index_t> initiators = {});

  FciqmcStepInfo step();

  const WalkerEnsemble& walkers() const { return v_; }
  const IterationMatrix& matrix() const { return a_; }
  double shift() const { return shift_; }
  std::int64_t iteration() const { return t_; }
  FciqmcPhase phase() const { return phase_; }
  const std::unordered_set<index_t>& initiators() const { return initiators_; }

 private:
  void promote_initiators();

  const ColumnOracle* h_;
  IterationMatrix a_;
  FciqmcConfig cfg_;
  WalkerEnsemble v_;
  std::unordered_set<index_t> initiators_;
  double shift_ = 0.0;
  std::int64_t t_ = 0;
  FciqmcPhase phase_ = FciqmcPhase::growth;
  std::vector<std::int64_t> pop_ring_;  // population at iterations t-q .. t
};

}  // namespace qpow
