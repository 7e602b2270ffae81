#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "qpow/hubbard.hpp"

namespace qpow {

enum class SystemKind { hubbard, file, dense_random };

enum class RunMethod {
  exact,
  fciqmc,
  ifciqmc,
  fri_systematic,
  fri_bernoulli,
  hard_threshold,
};

enum class ReferenceKind { none, dense_oracle, file };

// Flat [section] key = value experiment description. parse/serialize are
// inverse up to canonical formatting; serialize(parse(s)) is idempotent.
struct ExperimentConfig {
  SystemKind system = SystemKind::hubbard;
  long lattice = 2;
  long n_up = 1;
  long n_down = 1;
  double u = 4.0;
  HubbardMomentum::Sampling sampling = HubbardMomentum::Sampling::uniform;
  std::string matrix_path;
  long n = 0;
  double gap = 0.0;
  std::uint64_t system_seed = 0;

  RunMethod method = RunMethod::exact;
  double delta = 0.01;
  std::int64_t m = 0;
  long iterations = 1;
  std::uint64_t seed = 0;
  std::int64_t initial_population = 10;
  bool zero_walltime = false;
  double tol = 1e-10;

  double eta = 0.05;
  std::int64_t q = 10;
  std::optional<double> s0;
  std::int64_t initiator_threshold = 3;

  std::optional<long> burn_in;
  std::optional<long> window;
  double seconds_budget = 1e4;

  ReferenceKind reference = ReferenceKind::none;
  std::string reference_path;

  std::string record_path = "record.csv";
  std::string summary_path = "summary.txt";

  bool operator==(const ExperimentConfig&) const = default;
};

ExperimentConfig parse_config(const std::string& text,
                              const std::string& name = "<config>");
ExperimentConfig load_config(const std::string& path);
std::string serialize_config(const ExperimentConfig& cfg);

// Window defaults when [stats] leaves them unset: walker methods use
// burn_in 2400 / window 1600, compression methods 600 / 400, and the exact
// method splits its iteration count in half.
long default_burn_in(const ExperimentConfig& cfg);
long default_window(const ExperimentConfig& cfg);

}  // namespace qpow
