#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "qpow/config.hpp"
#include "qpow/dense_eig.hpp"
#include "qpow/dense_matrix.hpp"
#include "qpow/errors.hpp"
#include "qpow/experiment.hpp"
#include "qpow/statistics.hpp"

namespace {

namespace fs = std::filesystem;

constexpr int kExitOk = 0;
constexpr int kExitError = 1;
constexpr int kExitConfig = 2;
constexpr int kExitCollapse = 3;
constexpr int kExitNoConverge = 4;

struct RunOptions {
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::string out_dir;
  bool zero_walltime = false;
};

struct SweepOptions {
  std::string config_path;
  std::string param;
  std::string values;
  std::string out_dir = "sweep_out";
};

struct OracleOptions {
  std::string config_path;
  std::string system;
  long lattice = 2;
  long n_up = 1;
  long n_down = 1;
  double u = 4.0;
  std::string sampling = "uniform";
  std::string path;
  long n = 0;
  double gap = 0.0;
  std::uint64_t system_seed = 0;
  std::string out;
};

std::vector<std::string> split_values(const std::string& csv) {
  std::vector<std::string> out;
  std::size_t begin = 0;
  while (begin <= csv.size()) {
    const std::size_t comma = csv.find(',', begin);
    const std::string piece =
        csv.substr(begin, comma == std::string::npos ? comma : comma - begin);
    if (!piece.empty()) out.push_back(piece);
    if (comma == std::string::npos) break;
    begin = comma + 1;
  }
  return out;
}

int do_run(const RunOptions& opt) {
  qpow::ExperimentConfig cfg = qpow::load_config(opt.config_path);
  if (opt.seed) cfg.seed = *opt.seed;
  if (opt.zero_walltime) cfg.zero_walltime = true;
  if (!opt.out_dir.empty()) {
    fs::create_directories(opt.out_dir);
    cfg.record_path = (fs::path(opt.out_dir) / cfg.record_path).string();
    cfg.summary_path = (fs::path(opt.out_dir) / cfg.summary_path).string();
  }
  const qpow::ExperimentResult res = qpow::run_experiment_to_files(cfg);
  std::cout << "wrote " << cfg.record_path << " and " << cfg.summary_path
            << '\n';
  if (res.final_energy) {
    std::cout << "final_energy = " << qpow::format_g17(*res.final_energy)
              << '\n';
  }
  if (res.reference_energy) {
    std::cout << "reference_energy = "
              << qpow::format_g17(*res.reference_energy) << '\n';
  }
  if (!res.converged) {
    std::cerr << "error: did not converge within "
              << cfg.iterations << " iterations\n";
    return kExitNoConverge;
  }
  return kExitOk;
}

int do_sweep(const SweepOptions& opt) {
  const qpow::ExperimentConfig base = qpow::load_config(opt.config_path);
  const std::vector<std::string> values = split_values(opt.values);
  const std::vector<qpow::SweepRow> rows =
      qpow::sweep(base, opt.param, values, opt.out_dir);
  if (rows.empty()) {
    std::cout << "no sweep values; nothing to do\n";
  } else {
    std::cout << "wrote " << rows.size() << " runs under " << opt.out_dir
              << '\n';
  }
  return kExitOk;
}

int do_oracle(const OracleOptions& opt) {
  qpow::ExperimentConfig cfg;
  if (!opt.config_path.empty()) {
    cfg = qpow::load_config(opt.config_path);
  } else if (opt.system.empty()) {
    throw qpow::ConfigError("oracle needs --config or --system");
  }
  if (!opt.system.empty()) {
    if (opt.system == "hubbard") {
      cfg.system = qpow::SystemKind::hubbard;
      cfg.lattice = opt.lattice;
      cfg.n_up = opt.n_up;
      cfg.n_down = opt.n_down;
      cfg.u = opt.u;
      if (opt.sampling == "uniform") {
        cfg.sampling = qpow::HubbardMomentum::Sampling::uniform;
      } else if (opt.sampling == "rejection") {
        cfg.sampling = qpow::HubbardMomentum::Sampling::rejection;
      } else {
        throw qpow::ConfigError("unknown sampling '" + opt.sampling + "'");
      }
    } else if (opt.system == "file") {
      cfg.system = qpow::SystemKind::file;
      cfg.matrix_path = opt.path;
      if (cfg.matrix_path.empty()) {
        throw qpow::ConfigError("--system file needs --path");
      }
    } else if (opt.system == "dense-random") {
      cfg.system = qpow::SystemKind::dense_random;
      cfg.n = opt.n;
      cfg.gap = opt.gap;
      cfg.system_seed = opt.system_seed;
    } else {
      throw qpow::ConfigError("unknown system '" + opt.system + "'");
    }
  }

  const std::unique_ptr<qpow::ColumnOracle> system = qpow::make_system(cfg);
  qpow::ExperimentConfig ref_cfg = cfg;
  ref_cfg.reference = qpow::ReferenceKind::dense_oracle;
  const std::optional<qpow::Reference> ref =
      qpow::make_reference(ref_cfg, *system);
  std::ofstream out(opt.out);
  if (!out) throw std::runtime_error("cannot write " + opt.out);
  qpow::write_reference(out, *ref);
  std::cout << "wrote " << opt.out << " (e0 = " << qpow::format_g17(ref->e0)
            << ")\n";
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"stochastic eigensolver batch driver"};
  app.require_subcommand(1);

  RunOptions run_opt;
  CLI::App* run_cmd =
      app.add_subcommand("run", "run one experiment from a config file");
  run_cmd->add_option("--config", run_opt.config_path, "config file")
      ->required();
  run_cmd->add_option("--seed", run_opt.seed, "override [run] seed");
  run_cmd->add_option("--out", run_opt.out_dir,
                      "directory prefixed to the output paths");
  run_cmd->add_flag("--zero-walltime", run_opt.zero_walltime,
                    "record wall_ms as 0 for byte-stable output");

  SweepOptions sweep_opt;
  CLI::App* sweep_cmd =
      app.add_subcommand("sweep", "run one experiment per parameter value");
  sweep_cmd->add_option("--config", sweep_opt.config_path, "config file")
      ->required();
  sweep_cmd->add_option("--param", sweep_opt.param,
                        "one of m, delta, iterations, eta, q")
      ->required();
  sweep_cmd->add_option("--values", sweep_opt.values,
                        "comma-separated values")
      ->required();
  sweep_cmd->add_option("--out", sweep_opt.out_dir, "output directory");

  OracleOptions oracle_opt;
  CLI::App* oracle_cmd = app.add_subcommand(
      "oracle", "export dense ground truth for a small system");
  oracle_cmd->add_option("--config", oracle_opt.config_path,
                         "config file supplying [system]");
  oracle_cmd->add_option("--system", oracle_opt.system,
                         "hubbard, file, or dense-random");
  oracle_cmd->add_option("--lattice", oracle_opt.lattice, "lattice side");
  oracle_cmd->add_option("--n-up", oracle_opt.n_up, "spin-up electrons");
  oracle_cmd->add_option("--n-down", oracle_opt.n_down, "spin-down electrons");
  oracle_cmd->add_option("--u", oracle_opt.u, "interaction strength");
  oracle_cmd->add_option("--sampling", oracle_opt.sampling,
                         "uniform or rejection");
  oracle_cmd->add_option("--path", oracle_opt.path, "matrix file");
  oracle_cmd->add_option("--n", oracle_opt.n, "dense-random dimension");
  oracle_cmd->add_option("--gap", oracle_opt.gap, "dense-random spectral gap");
  oracle_cmd->add_option("--system-seed", oracle_opt.system_seed,
                         "dense-random seed");
  oracle_cmd->add_option("--out", oracle_opt.out, "reference file to write")
      ->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);
    std::cerr << "error: " << e.what() << '\n';
    return kExitConfig;
  }

  try {
    if (run_cmd->parsed()) return do_run(run_opt);
    if (sweep_cmd->parsed()) return do_sweep(sweep_opt);
    return do_oracle(oracle_opt);
  } catch (const qpow::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const qpow::PopulationCollapse& e) {
    std::cerr << "population collapse: " << e.what() << '\n';
    return kExitCollapse;
  } catch (const qpow::NonConvergence& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitNoConverge;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitError;
  }
}
