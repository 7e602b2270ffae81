#pragma once

#include "qpow/column_oracle.hpp"

namespace qpow {

// A = I - delta * (H - shift * I) over a Hamiltonian oracle.  The dominant
// eigenvector of A is the ground state of H; energies convert back through
// energy_from_eigenvalue.  Does not own the Hamiltonian.
class IterationMatrix final : public ColumnOracle {
 public:
  IterationMatrix(const ColumnOracle& h, double delta, double shift = 0.0);

  double delta() const { return delta_; }
  double shift() const { return shift_; }
  void set_shift(double s) { shift_ = s; }
  const ColumnOracle& hamiltonian() const { return *h_; }

  double energy_from_eigenvalue(double lambda) const {
    return (1.0 - lambda) / delta_ + shift_;
  }

  index_t dim() const override { return h_->dim(); }
  double diagonal(index_t k) const override {
    return 1.0 - delta_ * (h_->diagonal(k) - shift_);
  }
  std::vector<OffdiagEntry> offdiag_column(index_t k) const override;
  std::int64_t offdiag_count(index_t k) const override {
    return h_->offdiag_count(k);
  }
  std::optional<OffdiagSample> sample_offdiag(index_t k,
                                              CounterRng& rng) const override;

 private:
  const ColumnOracle* h_;
  double delta_;
  double shift_;
};

}  // namespace qpow
