#include <doctest.h>

#include <unistd.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "qpow/dense_eig.hpp"
#include "qpow/errors.hpp"
#include "qpow/experiment.hpp"
#include "qpow/statistics.hpp"
#include "qpow/vectors.hpp"

using namespace qpow;
namespace fs = std::filesystem;

namespace {

fs::path fresh_dir(const std::string& tag) {
  const fs::path dir = fs::temp_directory_path() /
                       ("qpow_test_" + tag + "_" + std::to_string(::getpid()));
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::string csv_text(const RunRecord& record) {
  std::ostringstream os;
  write_csv(os, record);
  return os.str();
}

const char* kSmallLatticeExact =
    "[system]\n"
    "kind = hubbard\n"
    "lattice = 2\n"
    "n_up = 1\n"
    "n_down = 1\n"
    "[run]\n"
    "method = exact\n"
    "delta = 0.01\n"
    "iterations = 2000\n"
    "zero_walltime = true\n"
    "[reference]\n"
    "kind = dense-oracle\n";

}  // namespace

TEST_SUITE("experiment") {

TEST_CASE("exact runs converge to the dense reference") {
  ExperimentConfig cfg = parse_config(kSmallLatticeExact);
  ExperimentResult res = run_experiment(cfg);
  CHECK(res.converged);
  REQUIRE(res.reference_energy.has_value());
  CHECK(*res.reference_energy ==
        doctest::Approx(-7.254426010593324).epsilon(1e-12));
  REQUIRE(res.final_energy.has_value());
  CHECK(*res.final_energy ==
        doctest::Approx(*res.reference_energy).epsilon(1e-9));
  CHECK(res.summary.avg_error < 1e-8);
  CHECK(res.summary.std_dev < 1e-8);

  REQUIRE(res.record.rows.size() == 2000);
  const RunRow& last = res.record.rows.back();
  CHECK(last.t == 2000);
  CHECK(last.rel_compress_err == 0.0);
  REQUIRE(last.tan_theta.has_value());
  CHECK(*last.tan_theta < 1e-10);
  REQUIRE(last.proj_energy.has_value());
  CHECK(last.nnz_matvec.has_value());
  CHECK(last.l1.has_value());
  CHECK(last.l2.has_value());
}

TEST_CASE("zeroed clocks make replays byte identical") {
  const std::string text =
      "[system]\n"
      "kind = hubbard\n"
      "lattice = 2\n"
      "n_up = 1\n"
      "n_down = 1\n"
      "[run]\n"
      "method = fri-systematic\n"
      "m = 2\n"
      "delta = 0.01\n"
      "iterations = 60\n"
      "seed = 5\n"
      "zero_walltime = true\n"
      "[stats]\n"
      "burn_in = 20\n"
      "window = 40\n";
  ExperimentConfig cfg = parse_config(text);
  ExperimentResult a = run_experiment(cfg, 0);
  ExperimentResult b = run_experiment(cfg, 0);
  CHECK(csv_text(a.record) == csv_text(b.record));

  ExperimentResult other = run_experiment(cfg, 1);
  CHECK(csv_text(other.record) != csv_text(a.record));
}

TEST_CASE("walker runs record the shift and phase trail") {
  const std::string text =
      "[system]\n"
      "kind = hubbard\n"
      "lattice = 2\n"
      "n_up = 1\n"
      "n_down = 1\n"
      "[run]\n"
      "method = fciqmc\n"
      "m = 200\n"
      "delta = 0.05\n"
      "iterations = 300\n"
      "seed = 3\n"
      "initial_population = 20\n"
      "zero_walltime = true\n"
      "[stats]\n"
      "burn_in = 150\n"
      "window = 100\n";
  ExperimentConfig cfg = parse_config(text);
  ExperimentResult res = run_experiment(cfg);
  REQUIRE(res.record.rows.size() == 300);
  bool saw_controlled = false;
  for (const RunRow& row : res.record.rows) {
    REQUIRE(row.population.has_value());
    REQUIRE(row.shift.has_value());
    CHECK(row.phase != Phase::none);
    if (row.phase == Phase::controlled) saw_controlled = true;
    // small system: the one-step error diagnostics are enabled
    CHECK(row.rel_compress_err.has_value());
  }
  CHECK(saw_controlled);
  REQUIRE(res.final_energy.has_value());
  CHECK(*res.final_energy == res.record.rows.back().shift);
}

TEST_CASE("a starving walker run raises population collapse") {
  const std::string text =
      "[system]\n"
      "kind = hubbard\n"
      "lattice = 2\n"
      "n_up = 1\n"
      "n_down = 1\n"
      "[run]\n"
      "method = fciqmc\n"
      "m = 1\n"
      "delta = 0.1\n"
      "iterations = 200\n"
      "seed = 1\n"
      "initial_population = 1\n"
      "zero_walltime = true\n"
      "[fciqmc]\n"
      "s0 = -17\n"
      "[stats]\n"
      "burn_in = 0\n"
      "window = 2\n";
  ExperimentConfig cfg = parse_config(text);
  CHECK_THROWS_AS(run_experiment(cfg), PopulationCollapse);
}

TEST_CASE("stats windows that spill past the run are rejected") {
  ExperimentConfig cfg = parse_config(
      "[system]\nkind = hubbard\n[run]\nmethod = fri-systematic\nm = 8\n"
      "iterations = 100\n");
  // default compression window is [600, 1000)
  CHECK_THROWS_AS(run_experiment(cfg), ConfigError);
}

TEST_CASE("oversized dense references are refused") {
  ExperimentConfig cfg = parse_config(
      "[system]\nkind = hubbard\nlattice = 4\nn_up = 5\nn_down = 5\n"
      "[run]\nmethod = exact\niterations = 10\n"
      "[reference]\nkind = dense-oracle\n");
  try {
    run_experiment(cfg);
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    CHECK(std::string(e.what()).find("dense reference unavailable") !=
          std::string::npos);
  }
}

TEST_CASE("run outputs land in the configured files") {
  const fs::path dir = fresh_dir("outputs");
  ExperimentConfig cfg = parse_config(kSmallLatticeExact);
  cfg.iterations = 40;
  cfg.burn_in = 10;
  cfg.window = 30;
  cfg.record_path = (dir / "record.csv").string();
  cfg.summary_path = (dir / "summary.txt").string();
  run_experiment_to_files(cfg);

  std::ifstream rec(cfg.record_path);
  REQUIRE(rec.good());
  std::string header;
  std::getline(rec, header);
  CHECK(header == csv_header());
  long lines = 0;
  std::string line;
  while (std::getline(rec, line)) ++lines;
  CHECK(lines == 40);

  std::ifstream sum(cfg.summary_path);
  REQUIRE(sum.good());
  std::string first;
  std::getline(sum, first);
  CHECK(first == "i0 = 10");
  fs::remove_all(dir);
}

TEST_CASE("reference files round trip") {
  const fs::path dir = fresh_dir("reference");
  const fs::path path = dir / "ref.txt";
  Reference ref;
  ref.e0 = -7.254426010593324;
  ref.has_vector = true;
  ref.u1 = make_sparse(16, {{0, 0.9884462262042656}, {5, -0.1}, {15, 0.25}});
  {
    std::ofstream out(path);
    write_reference(out, ref);
  }
  Reference back = read_reference(path.string(), 16);
  CHECK(back.e0 == ref.e0);
  REQUIRE(back.has_vector);
  CHECK(back.u1.entries == ref.u1.entries);
  fs::remove_all(dir);
}

TEST_CASE("reference file errors name the offending line") {
  const fs::path dir = fresh_dir("badref");
  auto write_file = [&](const std::string& body) {
    const fs::path p = dir / "r.txt";
    std::ofstream out(p);
    out << body;
    out.close();
    return p.string();
  };
  CHECK_THROWS_AS(read_reference((dir / "missing.txt").string(), 4),
                  ConfigError);
  CHECK_THROWS_AS(read_reference(write_file("0 1.0\n"), 4), ConfigError);
  CHECK_THROWS_AS(read_reference(write_file("e0 = -1\n9 0.5\n"), 4),
                  ConfigError);
  CHECK_THROWS_AS(read_reference(write_file("e0 = -1\n1 0.5 junk\n"), 4),
                  ConfigError);
  try {
    read_reference(write_file("e0 = -1\n1 oops\n"), 4);
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    CHECK(std::string(e.what()).find(":2:") != std::string::npos);
  }
  fs::remove_all(dir);
}

TEST_CASE("synthetic hamiltonian has the prescribed spectrum") {
  const long n = 30;
  const double gap = 0.3;
  DenseMatrix h = dense_random_hamiltonian(n, gap, 7);
  DenseEig eig = jacobi_eigensystem(h);
  REQUIRE(eig.values.size() == static_cast<std::size_t>(n));
  CHECK(eig.values[0] == doctest::Approx(-1.0 - gap).epsilon(1e-9));
  for (long i = 1; i < n; ++i) {
    const double want = -1.0 + static_cast<double>(i - 1) / static_cast<double>(n - 1);
    CHECK(eig.values[static_cast<std::size_t>(i)] ==
          doctest::Approx(want).epsilon(1e-9));
  }

  DenseMatrix same = dense_random_hamiltonian(n, gap, 7);
  DenseMatrix other = dense_random_hamiltonian(n, gap, 8);
  bool differs = false;
  for (index_t i = 0; i < n; ++i) {
    for (index_t j = 0; j < n; ++j) {
      CHECK(same.at(i, j) == h.at(i, j));
      if (other.at(i, j) != h.at(i, j)) differs = true;
    }
  }
  CHECK(differs);
  CHECK_THROWS_AS(dense_random_hamiltonian(1, 0.5, 0), std::invalid_argument);
  CHECK_THROWS_AS(dense_random_hamiltonian(10, 0.0, 0), std::invalid_argument);
}

TEST_CASE("start locations track the lowest diagonal") {
  ExperimentConfig cfg = parse_config(
      "[system]\nkind = dense-random\nn = 25\ngap = 0.4\nsystem_seed = 3\n"
      "[run]\nmethod = exact\niterations = 10\n");
  auto h = make_system(cfg);
  index_t best = 0;
  for (index_t k = 1; k < h->dim(); ++k) {
    if (h->diagonal(k) < h->diagonal(best)) best = k;
  }
  CHECK(start_location(cfg, *h) == best);

  ExperimentConfig hub = parse_config(kSmallLatticeExact);
  auto hh = make_system(hub);
  CHECK(start_location(hub, *hh) == 0);
}

TEST_CASE("sweeps fan out per value and collect one table") {
  const fs::path dir = fresh_dir("sweep");
  ExperimentConfig base = parse_config(
      "[system]\nkind = hubbard\nlattice = 2\nn_up = 1\nn_down = 1\n"
      "[run]\nmethod = fri-systematic\nm = 8\ndelta = 0.01\n"
      "iterations = 600\nseed = 11\nzero_walltime = true\n"
      "[stats]\nburn_in = 400\nwindow = 200\n"
      "[reference]\nkind = dense-oracle\n");
  auto rows = sweep(base, "m", {"2", "16", "64"}, dir.string());
  REQUIRE(rows.size() == 3);
  CHECK(rows[0].value == "2");
  CHECK(rows[2].value == "64");
  for (const auto& row : rows) {
    CHECK(std::isfinite(row.summary.mse));
    CHECK(fs::exists(dir / ("m=" + row.value) / "record.csv"));
    CHECK(fs::exists(dir / ("m=" + row.value) / "summary.txt"));
  }
  // m = 64 covers every coordinate: the run is exact and its mse collapses
  // while the m = 2 run keeps sampling noise.
  CHECK(rows[2].summary.mse <= rows[0].summary.mse);
  CHECK(rows[2].summary.avg_error < 1e-8);
  CHECK(rows[0].summary.std_dev > 1e-8);

  std::ifstream table(dir / "sweep_summary.csv");
  REQUIRE(table.good());
  std::string header;
  std::getline(table, header);
  CHECK(header ==
        "param,value,avg_error,std,mse,tau_auto,avg_compress_err,"
        "time_per_iter_s,effective_samples");
  long lines = 0;
  std::string line;
  while (std::getline(table, line)) ++lines;
  CHECK(lines == 3);
  fs::remove_all(dir);
}

TEST_CASE("sweep rejects unknown parameters and bad values") {
  const fs::path dir = fresh_dir("badsweep");
  ExperimentConfig base = parse_config(kSmallLatticeExact);
  CHECK_THROWS_AS(sweep(base, "walkers", {"1"}, (dir / "a").string()),
                  ConfigError);
  CHECK_THROWS_AS(sweep(base, "m", {"12x"}, (dir / "b").string()), ConfigError);
  CHECK(sweep(base, "m", {}, (dir / "c").string()).empty());
  fs::remove_all(dir);
}

TEST_CASE("a sweep over a stalled exact run reports non convergence") {
  const fs::path dir = fresh_dir("stalled");
  ExperimentConfig base = parse_config(
      "[system]\nkind = hubbard\nlattice = 2\nn_up = 1\nn_down = 1\n"
      "[run]\nmethod = exact\ndelta = 0.01\niterations = 4\n"
      "zero_walltime = true\n[stats]\nburn_in = 0\nwindow = 4\n");
  CHECK_THROWS_AS(sweep(base, "iterations", {"4"}, dir.string()),
                  NonConvergence);
  fs::remove_all(dir);
}

}  // TEST_SUITE
