#include "qpow/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "qpow/errors.hpp"
#include "qpow/estimators.hpp"
#include "qpow/fciqmc.hpp"
#include "qpow/file_matrix.hpp"
#include "qpow/fri.hpp"
#include "qpow/hubbard.hpp"
#include "qpow/iteration_matrix.hpp"
#include "qpow/dense_eig.hpp"
#include "qpow/rng.hpp"

namespace qpow {
namespace {

namespace fs = std::filesystem;

constexpr index_t kStepErrorMaxDim = 10000;

bool walker_method(RunMethod m) {
  return m == RunMethod::fciqmc || m == RunMethod::ifciqmc;
}

CompressionKind compression_kind(RunMethod m) {
  switch (m) {
    case RunMethod::fri_systematic: return CompressionKind::systematic;
    case RunMethod::fri_bernoulli: return CompressionKind::bernoulli;
    default: return CompressionKind::hard_threshold;
  }
}

Reference dense_reference(const ColumnOracle& h) {
  DenseMatrix dm = [&] {
    try {
      return dense_from_oracle(h);
    } catch (const std::invalid_argument& e) {
      throw ConfigError(std::string("dense reference unavailable: ") +
                        e.what());
    }
  }();
  const SmallestEig eig = dense_eig_smallest(dm);
  Reference ref;
  ref.e0 = eig.value;
  ref.has_vector = true;
  std::vector<std::pair<index_t, double>> entries;
  for (index_t i = 0; i < h.dim(); ++i) {
    const double x = eig.vector[static_cast<std::size_t>(i)];
    if (x != 0.0) entries.emplace_back(i, x);
  }
  ref.u1 = make_sparse(h.dim(), std::move(entries));
  return ref;
}

struct StatsWindow {
  long i0;
  long w;
};

StatsWindow stats_window(const ExperimentConfig& cfg) {
  const long i0 = default_burn_in(cfg);
  const long w = default_window(cfg);
  if (w < 2 || i0 < 0 || i0 + w > cfg.iterations) {
    throw ConfigError("stats window [" + std::to_string(i0) + ", " +
                      std::to_string(i0 + w) + ") does not fit " +
                      std::to_string(cfg.iterations) + " iterations");
  }
  return {i0, w};
}

}  // namespace

DenseMatrix dense_random_hamiltonian(long n, double gap, std::uint64_t seed) {
  if (n < 2) throw std::invalid_argument("dimension must be at least 2");
  if (!(gap > 0.0)) throw std::invalid_argument("gap must be positive");
  const std::size_t un = static_cast<std::size_t>(n);

  std::vector<double> d(un);
  d[0] = -1.0 - gap;
  for (std::size_t i = 1; i < un; ++i) {
    d[i] = -1.0 + static_cast<double>(i - 1) / static_cast<double>(un - 1);
  }

  // Gapped eigenvector: one heavy coordinate, a few mid-weight ones, a band
  // of small entries, then a faint tail. Truncation at modest budgets stays
  // visibly lossy while the l1 mass stays low enough to sample.
  CounterRng rng(seed, 0, 0, stream_entity(StreamPurpose::system, 2));
  std::vector<double> q(un, 0.0);
  q[0] = 1.0;
  const std::size_t body = std::min(un - 1, std::max<std::size_t>(2, un / 20));
  const std::size_t shelf =
      std::min(un - 1 - body, std::max<std::size_t>(4, un / 8));
  for (std::size_t i = 1; i < un; ++i) {
    double mag = 0.0;
    if (i <= body) {
      mag = 0.13 * (0.7 + 0.6 * rng.uniform01());
    } else if (i <= body + shelf) {
      mag = 0.04 * (0.7 + 0.6 * rng.uniform01());
    } else {
      mag = 0.0015 * (0.5 + rng.uniform01());
    }
    q[i] = rng.uniform01() < 0.5 ? -mag : mag;
  }
  double qn = 0.0;
  for (double x : q) qn += x * x;
  qn = std::sqrt(qn);
  for (double& x : q) x /= qn;

  // Householder reflection sending e0 to q, conjugating the spectrum.
  std::vector<double> p(un);
  p[0] = 1.0 - q[0];
  for (std::size_t i = 1; i < un; ++i) p[i] = -q[i];
  double pn = 0.0;
  for (double x : p) pn += x * x;
  pn = std::sqrt(pn);
  for (double& x : p) x /= pn;

  std::vector<double> w(un);
  double alpha = 0.0;
  for (std::size_t i = 0; i < un; ++i) {
    w[i] = d[i] * p[i];
    alpha += d[i] * p[i] * p[i];
  }

  DenseMatrix m(static_cast<index_t>(n));
  for (std::size_t i = 0; i < un; ++i) {
    for (std::size_t j = i; j < un; ++j) {
      double v = 4.0 * alpha * p[i] * p[j] - 2.0 * (p[i] * w[j] + w[i] * p[j]);
      if (i == j) v += d[i];
      m.set_symmetric(static_cast<index_t>(i), static_cast<index_t>(j), v);
    }
  }
  return m;
}

std::unique_ptr<ColumnOracle> make_system(const ExperimentConfig& cfg) {
  switch (cfg.system) {
    case SystemKind::hubbard:
      return std::make_unique<HubbardMomentum>(
          static_cast<int>(cfg.lattice), static_cast<int>(cfg.n_up),
          static_cast<int>(cfg.n_down), cfg.u, cfg.sampling);
    case SystemKind::file:
      return std::make_unique<FileMatrix>(FileMatrix::load(cfg.matrix_path));
    case SystemKind::dense_random:
      return std::make_unique<DenseMatrix>(
          dense_random_hamiltonian(cfg.n, cfg.gap, cfg.system_seed));
  }
  throw ConfigError("unknown system kind");
}

index_t start_location(const ExperimentConfig& cfg, const ColumnOracle& h) {
  if (cfg.system == SystemKind::hubbard) {
    return dynamic_cast<const HubbardMomentum&>(h).reference_index();
  }
  index_t best = 0;
  for (index_t k = 1; k < h.dim(); ++k) {
    if (h.diagonal(k) < h.diagonal(best)) best = k;
  }
  return best;
}

std::optional<Reference> make_reference(const ExperimentConfig& cfg,
                                        const ColumnOracle& h) {
  switch (cfg.reference) {
    case ReferenceKind::none:
      return std::nullopt;
    case ReferenceKind::dense_oracle:
      return dense_reference(h);
    case ReferenceKind::file:
      return read_reference(cfg.reference_path, h.dim());
  }
  return std::nullopt;
}

void write_reference(std::ostream& os, const Reference& ref) {
  os << "e0 = " << format_g17(ref.e0) << '\n';
  if (ref.has_vector) {
    for (const auto& [idx, val] : ref.u1.entries) {
      os << idx << ' ' << format_g17(val) << '\n';
    }
  }
}

Reference read_reference(const std::string& path, index_t dim) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open reference file " + path);
  Reference ref;
  std::vector<std::pair<index_t, double>> entries;
  bool have_e0 = false;
  std::string raw;
  long lineno = 0;
  while (std::getline(in, raw)) {
    ++lineno;
    const std::size_t hash = raw.find('#');
    if (hash != std::string::npos) raw.erase(hash);
    std::istringstream ls(raw);
    auto fail = [&](const std::string& msg) {
      throw ConfigError(path + ":" + std::to_string(lineno) + ": " + msg);
    };
    if (!have_e0) {
      std::string key, eq;
      double val;
      if (!(ls >> key)) continue;  // blank line before the header
      if (key != "e0" || !(ls >> eq) || eq != "=" || !(ls >> val)) {
        fail("expected 'e0 = <value>'");
      }
      std::string extra;
      if (ls >> extra) fail("trailing tokens");
      ref.e0 = val;
      have_e0 = true;
      continue;
    }
    index_t idx;
    double val;
    if (!(ls >> idx)) continue;
    if (!(ls >> val)) fail("expected '<index> <value>'");
    std::string extra;
    if (ls >> extra) fail("trailing tokens");
    if (idx < 0 || idx >= dim) fail("index out of range");
    entries.emplace_back(idx, val);
  }
  if (!have_e0) throw ConfigError(path + ": missing 'e0 = <value>' line");
  if (!entries.empty()) {
    try {
      ref.u1 = make_sparse(dim, std::move(entries));
    } catch (const std::invalid_argument& e) {
      throw ConfigError(path + ": " + e.what());
    }
    ref.has_vector = true;
  }
  return ref;
}

ExperimentResult run_experiment(const ExperimentConfig& cfg,
                                std::uint64_t run_index) {
  const std::unique_ptr<ColumnOracle> system = make_system(cfg);
  const ColumnOracle& h = *system;
  const index_t start = start_location(cfg, h);
  const std::optional<Reference> ref = make_reference(cfg, h);
  const StatsWindow win = stats_window(cfg);

  const SparseVector vstar = make_sparse(h.dim(), {{start, 1.0}});
  ExperimentResult res;
  res.record.rows.reserve(static_cast<std::size_t>(cfg.iterations));
  if (ref) res.reference_energy = ref->e0;

  const auto t0 = std::chrono::steady_clock::now();
  auto wall_ms = [&]() -> double {
    if (cfg.zero_walltime) return 0.0;
    return std::chrono::duration<double, std::milli>(
               std::chrono::steady_clock::now() - t0)
        .count();
  };
  auto fill_diagnostics = [&](RunRow& row, const SparseVector& v) {
    row.l1 = norm1(v);
    row.l2 = norm2(v);
    try {
      row.proj_energy = projected_energy(h, vstar, v);
    } catch (const std::domain_error&) {
    }
    if (ref && ref->has_vector) {
      const std::optional<double> t = tan_angle(ref->u1, v);
      row.tan_theta = t ? *t : std::numeric_limits<double>::infinity();
    }
  };

  if (cfg.method == RunMethod::exact) {
    const IterationMatrix a(h, cfg.delta, 0.0);
    SparseVector x = normalized(make_sparse(h.dim(), {{start, 1.0}}));
    double lambda = 0.0;
    double prev_lambda = 0.0;
    bool have_prev = false;
    bool settled = false;
    for (long t = 1; t <= cfg.iterations; ++t) {
      SparseVector y = exact_matvec(a, x);
      lambda = dot(x, y);
      const double resid = norm2(axpy(-lambda, x, y));
      settled = have_prev && std::abs(lambda - prev_lambda) < cfg.tol &&
                resid <= std::sqrt(cfg.tol);
      prev_lambda = lambda;
      have_prev = true;
      const std::int64_t nnz_av =
          static_cast<std::int64_t>(y.entries.size());
      x = normalized(y);

      RunRow row;
      row.t = t;
      row.wall_ms = wall_ms();
      row.population = static_cast<double>(x.entries.size());
      row.nnz_matvec = nnz_av;
      row.rel_compress_err = 0.0;
      fill_diagnostics(row, x);
      res.record.rows.push_back(std::move(row));
    }
    res.final_energy = a.energy_from_eigenvalue(lambda);
    res.converged = settled;
  } else if (walker_method(cfg.method)) {
    WalkerEnsemble w0{h.dim(), {}};
    w0.counts[start] = cfg.initial_population;
    FciqmcConfig fc;
    fc.target_population = cfg.m;
    fc.eta = cfg.eta;
    fc.q = cfg.q;
    fc.s0 = cfg.s0;
    fc.initiator = cfg.method == RunMethod::ifciqmc;
    fc.initiator_threshold = cfg.initiator_threshold;
    fc.compute_step_error = h.dim() <= kStepErrorMaxDim;
    fc.seed = cfg.seed;
    fc.run = run_index;
    FciqmcRun run(h, cfg.delta, fc, std::move(w0));
    for (long t = 1; t <= cfg.iterations; ++t) {
      const FciqmcStepInfo info = run.step();
      RunRow row;
      row.t = t;
      row.wall_ms = wall_ms();
      row.population = static_cast<double>(info.population);
      row.shift = info.shift;
      row.phase = info.phase == FciqmcPhase::growth ? Phase::growth
                                                    : Phase::controlled;
      if (info.xi_norm2 && info.av_norm2 && *info.av_norm2 > 0.0) {
        row.rel_compress_err = *info.xi_norm2 / *info.av_norm2;
      }
      fill_diagnostics(row, to_sparse(run.walkers()));
      res.record.rows.push_back(std::move(row));
    }
    res.final_energy = run.shift();
  } else {
    const IterationMatrix a(h, cfg.delta, 0.0);
    CompressionSpec spec;
    spec.kind = compression_kind(cfg.method);
    spec.m = cfg.m;
    SparseVector v = make_sparse(h.dim(), {{start, 1.0}});
    for (long t = 1; t <= cfg.iterations; ++t) {
      const StreamKey key{cfg.seed, run_index, static_cast<std::uint64_t>(t)};
      CounterRng rng = key.stream(StreamPurpose::compress, 0);
      FriStepResult step = fri_step(a, v, spec, rng);
      v = std::move(step.v_next);
      RunRow row;
      row.t = t;
      row.wall_ms = wall_ms();
      row.population = static_cast<double>(v.entries.size());
      row.nnz_matvec = step.nnz_matvec;
      row.rel_compress_err =
          step.av_norm2 > 0.0 ? step.xi_norm2 / step.av_norm2 : 0.0;
      fill_diagnostics(row, v);
      res.record.rows.push_back(std::move(row));
    }
  }

  res.summary = summarize(res.record,
                          ref ? std::optional<double>(ref->e0) : std::nullopt,
                          win.i0, win.w, cfg.seconds_budget);
  return res;
}

ExperimentResult run_experiment_to_files(const ExperimentConfig& cfg,
                                         std::uint64_t run_index) {
  ExperimentResult res = run_experiment(cfg, run_index);
  {
    std::ofstream out(cfg.record_path);
    if (!out) throw std::runtime_error("cannot write " + cfg.record_path);
    write_csv(out, res.record);
  }
  {
    std::ofstream out(cfg.summary_path);
    if (!out) throw std::runtime_error("cannot write " + cfg.summary_path);
    write_summary(out, res.summary);
  }
  return res;
}

std::vector<SweepRow> sweep(const ExperimentConfig& base,
                            const std::string& param,
                            const std::vector<std::string>& values,
                            const std::string& out_dir) {
  if (param != "m" && param != "delta" && param != "iterations" &&
      param != "eta" && param != "q") {
    throw ConfigError("unknown sweep parameter '" + param + "'");
  }
  if (values.empty()) return {};
  if (out_dir.empty()) throw ConfigError("sweep output directory missing");
  fs::create_directories(out_dir);

  std::vector<ExperimentConfig> configs;
  configs.reserve(values.size());
  for (const std::string& value : values) {
    ExperimentConfig cfg = base;
    try {
      std::size_t pos = 0;
      if (param == "delta") {
        cfg.delta = std::stod(value, &pos);
      } else if (param == "eta") {
        cfg.eta = std::stod(value, &pos);
      } else if (param == "m") {
        cfg.m = std::stoll(value, &pos);
      } else if (param == "iterations") {
        cfg.iterations = static_cast<long>(std::stoll(value, &pos));
      } else {
        cfg.q = std::stoll(value, &pos);
      }
      if (pos != value.size()) throw std::invalid_argument(value);
    } catch (const std::exception&) {
      throw ConfigError("bad sweep value '" + value + "' for " + param);
    }
    const fs::path dir = fs::path(out_dir) / (param + "=" + value);
    fs::create_directories(dir);
    cfg.record_path = (dir / "record.csv").string();
    cfg.summary_path = (dir / "summary.txt").string();
    configs.push_back(parse_config(serialize_config(cfg)));  // re-validate
  }

  std::size_t workers = std::thread::hardware_concurrency();
  if (const char* env = std::getenv("QPOW_WORKERS")) {
    const long n = std::strtol(env, nullptr, 10);
    if (n >= 1) workers = static_cast<std::size_t>(n);
  }
  workers = std::max<std::size_t>(1, std::min(workers, configs.size()));

  struct Slot {
    std::optional<SummaryStats> summary;
    int error_kind = 0;  // 0 ok, 1 other, 2 config, 3 collapse, 4 stalled
    std::string message;
  };
  std::vector<Slot> slots(configs.size());
  std::atomic<std::size_t> cursor{0};
  auto worker = [&]() {
    for (;;) {
      const std::size_t i = cursor.fetch_add(1);
      if (i >= configs.size()) return;
      Slot& slot = slots[i];
      try {
        const ExperimentResult r = run_experiment_to_files(
            configs[i], static_cast<std::uint64_t>(i + 1));
        if (!r.converged) {
          slot.error_kind = 4;
          slot.message = param + "=" + values[i] + ": did not converge";
        } else {
          slot.summary = r.summary;
        }
      } catch (const ConfigError& e) {
        slot.error_kind = 2;
        slot.message = param + "=" + values[i] + ": " + e.what();
      } catch (const PopulationCollapse& e) {
        slot.error_kind = 3;
        slot.message = param + "=" + values[i] + ": " + e.what();
      } catch (const std::exception& e) {
        slot.error_kind = 1;
        slot.message = param + "=" + values[i] + ": " + e.what();
      }
    }
  };
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (std::size_t k = 0; k < workers; ++k) pool.emplace_back(worker);
  for (std::thread& t : pool) t.join();

  for (const Slot& slot : slots) {
    switch (slot.error_kind) {
      case 0: break;
      case 2: throw ConfigError(slot.message);
      case 3: throw PopulationCollapse(slot.message);
      case 4: throw NonConvergence(slot.message);
      default: throw std::runtime_error(slot.message);
    }
  }

  std::vector<SweepRow> rows;
  rows.reserve(configs.size());
  const fs::path table_path = fs::path(out_dir) / "sweep_summary.csv";
  std::ofstream table(table_path);
  if (!table) throw std::runtime_error("cannot write " + table_path.string());
  table << "param,value,avg_error,std,mse,tau_auto,avg_compress_err,"
           "time_per_iter_s,effective_samples\n";
  auto cell = [&table](double v) {
    table << ',';
    if (!std::isnan(v)) table << format_g17(v);
  };
  for (std::size_t i = 0; i < configs.size(); ++i) {
    const SummaryStats& s = *slots[i].summary;
    table << param << ',' << values[i];
    cell(s.avg_error);
    cell(s.std_dev);
    cell(s.mse);
    cell(s.tau_auto);
    cell(s.avg_compress_err);
    cell(s.time_per_iter_s);
    cell(s.effective_samples);
    table << '\n';
    rows.push_back({values[i], s});
  }
  return rows;
}

}  // namespace qpow
