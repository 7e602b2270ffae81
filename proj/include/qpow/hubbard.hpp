#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "qpow/column_oracle.hpp"

namespace qpow {

// Momentum-space Hubbard model on an L x L periodic lattice with fixed
// (n_up, n_down).  Basis states are pairs of occupation bitmasks over the
// L*L momentum orbitals, addressed by a combinatorial rank; the basis is
// never materialized.
//
// Orbital index o maps to momentum integers (o % L, o / L).  Determinant
// orbital order is all up orbitals then all down orbitals, momentum index
// ascending; matrix-element signs count occupied orbitals strictly between
// the annihilation and creation positions per spin channel, the down move
// applied before the up move.
class HubbardMomentum final : public ColumnOracle {
 public:
  enum class Sampling { uniform, rejection };

  HubbardMomentum(int lattice, int n_up, int n_down, double u,
                  Sampling sampling = Sampling::uniform);

  index_t dim() const override { return dim_; }
  double diagonal(index_t k) const override;
  std::vector<OffdiagEntry> offdiag_column(index_t k) const override;
  std::int64_t offdiag_count(index_t k) const override;
  std::optional<OffdiagSample> sample_offdiag(index_t k,
                                              CounterRng& rng) const override;

  int lattice() const { return lattice_; }
  int orbitals() const { return norb_; }
  int n_up() const { return n_up_; }
  int n_down() const { return n_down_; }
  double interaction() const { return u_; }

  // -2(cos(2 pi n1 / L) + cos(2 pi n2 / L)); exact at the special angles.
  double dispersion(int orbital) const;

  // Determinant filling the lowest-dispersion orbitals per spin
  // (ties broken by orbital index).
  std::uint64_t reference_up() const { return hf_up_; }
  std::uint64_t reference_down() const { return hf_down_; }
  index_t reference_index() const { return rank(hf_up_, hf_down_); }

  index_t rank(std::uint64_t up, std::uint64_t down) const;
  std::pair<std::uint64_t, std::uint64_t> unrank(index_t k) const;

  // Total momentum of a determinant, component-wise mod L.
  std::pair<int, int> total_momentum(std::uint64_t up, std::uint64_t down) const;

 private:
  struct Excitation {
    index_t target;
    double value;
  };
  std::vector<Excitation> excitations(std::uint64_t up, std::uint64_t down) const;
  std::uint64_t rank_mask(std::uint64_t mask) const;
  std::uint64_t unrank_mask(std::uint64_t r, int electrons) const;
  // Valid (target, value) for one proposed move, or nothing if blocked.
  std::optional<Excitation> try_move(std::uint64_t up, std::uint64_t down,
                                     int p, int k, int q) const;

  int lattice_;
  int norb_;
  int n_up_;
  int n_down_;
  double u_;
  Sampling sampling_;
  index_t dim_;
  std::uint64_t hf_up_ = 0;
  std::uint64_t hf_down_ = 0;
  std::vector<double> eps_;
  // binom_[n][k]; sized (norb_+1) x (norb_+1)
  std::vector<std::vector<std::uint64_t>> binom_;
};

}  // namespace qpow
