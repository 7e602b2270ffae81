#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "qpow/column_oracle.hpp"
#include "qpow/config.hpp"
#include "qpow/dense_matrix.hpp"
#include "qpow/statistics.hpp"
#include "qpow/vectors.hpp"

namespace qpow {

// Dense symmetric test Hamiltonian with a prescribed spectral gap: the
// eigenvalues are -1-gap, then -1 stepping up towards 0, mixed by seeded
// Givens rotations (spectrum preserved exactly).
DenseMatrix dense_random_hamiltonian(long n, double gap, std::uint64_t seed);

std::unique_ptr<ColumnOracle> make_system(const ExperimentConfig& cfg);

// Trial/start location: the reference determinant for lattice systems,
// otherwise the smallest diagonal entry (lowest index on ties).
index_t start_location(const ExperimentConfig& cfg, const ColumnOracle& h);

struct Reference {
  double e0 = 0.0;
  bool has_vector = false;
  SparseVector u1;
};

// Ground-truth data per the [reference] section: computed from a dense
// copy, read from a file, or absent.
std::optional<Reference> make_reference(const ExperimentConfig& cfg,
                                        const ColumnOracle& h);

void write_reference(std::ostream& os, const Reference& ref);
Reference read_reference(const std::string& path, index_t dim);

struct ExperimentResult {
  RunRecord record;
  SummaryStats summary;
  std::optional<double> reference_energy;
  std::optional<double> final_energy;
  bool converged = true;  // cleared only by the exact method
};

// Runs the configured method for cfg.iterations steps and summarizes the
// stats window. run_index feeds the stream key so replicas decorrelate.
ExperimentResult run_experiment(const ExperimentConfig& cfg,
                                std::uint64_t run_index = 0);

// Same, then writes cfg.record_path and cfg.summary_path.
ExperimentResult run_experiment_to_files(const ExperimentConfig& cfg,
                                         std::uint64_t run_index = 0);

struct SweepRow {
  std::string value;
  SummaryStats summary;
};

// Runs the base config once per value of `param` (one of m, delta,
// iterations, eta, q) in a worker pool, writing per-value outputs under
// out_dir plus a combined sweep_summary.csv. Worker count comes from
// QPOW_WORKERS when set.
std::vector<SweepRow> sweep(const ExperimentConfig& base,
                            const std::string& param,
                            const std::vector<std::string>& values,
                            const std::string& out_dir);

}  // namespace qpow
