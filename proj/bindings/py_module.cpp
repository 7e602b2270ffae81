#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "qpow/assumptions.hpp"
#include "qpow/compress.hpp"
#include "qpow/config.hpp"
#include "qpow/dense_eig.hpp"
#include "qpow/dense_matrix.hpp"
#include "qpow/errors.hpp"
#include "qpow/estimators.hpp"
#include "qpow/experiment.hpp"
#include "qpow/file_matrix.hpp"
#include "qpow/fri.hpp"
#include "qpow/hubbard.hpp"
#include "qpow/iteration_matrix.hpp"
#include "qpow/power_iteration.hpp"
#include "qpow/rng.hpp"
#include "qpow/statistics.hpp"
#include "qpow/theory.hpp"
#include "qpow/vectors.hpp"

namespace py = pybind11;

namespace {

qpow::CompressionKind kind_from_string(const std::string& kind) {
  if (kind == "systematic") return qpow::CompressionKind::systematic;
  if (kind == "bernoulli") return qpow::CompressionKind::bernoulli;
  if (kind == "ht" || kind == "hard_threshold") {
    return qpow::CompressionKind::hard_threshold;
  }
  throw std::invalid_argument("unknown compression kind '" + kind + "'");
}

qpow::Method method_from_string(const std::string& name) {
  if (name == "exact") return qpow::Method::exact;
  if (name == "fri-systematic") return qpow::Method::fri_systematic;
  if (name == "fri-bernoulli") return qpow::Method::fri_bernoulli;
  if (name == "ht") return qpow::Method::hard_threshold;
  if (name == "fciqmc") return qpow::Method::fciqmc;
  if (name == "ifciqmc") return qpow::Method::ifciqmc;
  throw std::invalid_argument("unknown method '" + name + "'");
}

qpow::HubbardMomentum::Sampling sampling_from_string(const std::string& s) {
  if (s == "uniform") return qpow::HubbardMomentum::Sampling::uniform;
  if (s == "rejection") return qpow::HubbardMomentum::Sampling::rejection;
  throw std::invalid_argument("unknown sampling '" + s + "'");
}

py::dict summary_dict(const qpow::SummaryStats& s) {
  py::dict d;
  d["i0"] = s.i0;
  d["window"] = s.window;
  d["avg_error"] = s.avg_error;
  d["std"] = s.std_dev;
  d["mse"] = s.mse;
  d["tau_auto"] = s.tau_auto;
  d["avg_compress_err"] = s.avg_compress_err;
  d["time_per_iter_s"] = s.time_per_iter_s;
  d["effective_samples"] = s.effective_samples;
  return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "stochastic power iteration eigensolver core";

  py::register_exception<qpow::ConfigError>(m, "ConfigError");
  py::register_exception<qpow::PopulationCollapse>(m, "PopulationCollapse");

  py::class_<qpow::SparseVector>(m, "SparseVector")
      .def_readonly("dim", &qpow::SparseVector::dim)
      .def_readonly("entries", &qpow::SparseVector::entries)
      .def("__len__",
           [](const qpow::SparseVector& v) { return v.entries.size(); })
      .def("__repr__", [](const qpow::SparseVector& v) {
        std::ostringstream os;
        os << "SparseVector(dim=" << v.dim << ", nnz=" << v.entries.size()
           << ")";
        return os.str();
      });

  m.def(
      "make_sparse",
      [](qpow::index_t dim,
         std::vector<std::pair<qpow::index_t, double>> entries) {
        return qpow::make_sparse(dim, std::move(entries));
      },
      py::arg("dim"), py::arg("entries"));
  m.def("norm1", &qpow::norm1, py::arg("v"));
  m.def("norm2", &qpow::norm2, py::arg("v"));
  m.def("dot", &qpow::dot, py::arg("u"), py::arg("v"));
  m.def(
      "tan_angle",
      [](const qpow::SparseVector& u, const qpow::SparseVector& v)
          -> std::optional<double> { return qpow::tan_angle(u, v); },
      py::arg("u"), py::arg("v"),
      "tangent of the angle between u and v; None when they are orthogonal");
  m.def("round_stochastic", &qpow::round_stochastic, py::arg("q"),
        py::arg("u"));

  py::class_<qpow::CounterRng>(m, "CounterRng")
      .def(py::init<std::uint64_t, std::uint64_t, std::uint64_t,
                    std::uint64_t>(),
           py::arg("seed"), py::arg("run") = 0, py::arg("iteration") = 0,
           py::arg("entity") = 0)
      .def("uniform01", &qpow::CounterRng::uniform01)
      .def("uniform_below", &qpow::CounterRng::uniform_below, py::arg("n"))
      .def("next", [](qpow::CounterRng& rng) { return rng(); })
      .def_static(
          "block",
          [](const std::array<std::uint64_t, 4>& counter,
             const std::array<std::uint64_t, 2>& key) {
            return qpow::CounterRng::block(counter, key);
          },
          py::arg("counter"), py::arg("key"),
          "raw keyed permutation of one 4x64-bit counter block");

  m.def(
      "compress",
      [](const qpow::SparseVector& v, const std::string& kind,
         std::int64_t target, qpow::CounterRng& rng) {
        qpow::CompressionSpec spec{kind_from_string(kind), target};
        return qpow::compress(v, spec, rng);
      },
      py::arg("v"), py::arg("kind"), py::arg("m"), py::arg("rng"));

  py::class_<qpow::ColumnOracle>(m, "ColumnOracle")
      .def("dim", &qpow::ColumnOracle::dim)
      .def("diagonal", &qpow::ColumnOracle::diagonal, py::arg("k"))
      .def(
          "offdiag_column",
          [](const qpow::ColumnOracle& o, qpow::index_t k) {
            std::vector<std::pair<qpow::index_t, double>> out;
            for (const qpow::OffdiagEntry& e : o.offdiag_column(k)) {
              out.emplace_back(e.row, e.value);
            }
            return out;
          },
          py::arg("k"))
      .def("offdiag_count", &qpow::ColumnOracle::offdiag_count, py::arg("k"));

  py::class_<qpow::HubbardMomentum, qpow::ColumnOracle>(m, "HubbardMomentum")
      .def(py::init([](int lattice, int n_up, int n_down, double u,
                       const std::string& sampling) {
             return qpow::HubbardMomentum(lattice, n_up, n_down, u,
                                          sampling_from_string(sampling));
           }),
           py::arg("lattice"), py::arg("n_up"), py::arg("n_down"),
           py::arg("u"), py::arg("sampling") = "uniform")
      .def("dispersion", &qpow::HubbardMomentum::dispersion, py::arg("orbital"))
      .def("reference_index", &qpow::HubbardMomentum::reference_index);

  py::class_<qpow::FileMatrix, qpow::ColumnOracle>(m, "FileMatrix")
      .def_static("load", &qpow::FileMatrix::load, py::arg("path"));

  py::class_<qpow::DenseMatrix, qpow::ColumnOracle>(m, "DenseMatrix")
      .def("at", &qpow::DenseMatrix::at, py::arg("i"), py::arg("j"));

  m.def("dense_from_oracle", &qpow::dense_from_oracle, py::arg("oracle"),
        py::arg("max_dim") = 5000);
  m.def(
      "dense_eig_smallest",
      [](const qpow::DenseMatrix& dm) {
        const qpow::SmallestEig eig = qpow::dense_eig_smallest(dm);
        return py::make_tuple(eig.value, eig.vector);
      },
      py::arg("matrix"));

  py::class_<qpow::IterationMatrix, qpow::ColumnOracle>(m, "IterationMatrix")
      .def(py::init<const qpow::ColumnOracle&, double, double>(),
           py::arg("hamiltonian"), py::arg("delta"), py::arg("shift") = 0.0,
           py::keep_alive<1, 2>())
      .def("shift", &qpow::IterationMatrix::shift)
      .def("set_shift", &qpow::IterationMatrix::set_shift, py::arg("s"))
      .def("energy_from_eigenvalue",
           &qpow::IterationMatrix::energy_from_eigenvalue, py::arg("lam"));

  m.def("exact_matvec", &qpow::exact_matvec, py::arg("a"), py::arg("v"));
  m.def(
      "fri_step",
      [](const qpow::ColumnOracle& a, const qpow::SparseVector& v,
         const std::string& kind, std::int64_t target,
         qpow::CounterRng& rng) {
        qpow::CompressionSpec spec{kind_from_string(kind), target};
        const qpow::FriStepResult r = qpow::fri_step(a, v, spec, rng);
        return py::make_tuple(r.v_next, r.av_norm2, r.xi_norm2, r.nnz_matvec);
      },
      py::arg("a"), py::arg("v"), py::arg("kind"), py::arg("m"),
      py::arg("rng"));

  py::class_<qpow::PowerIterationResult>(m, "PowerIterationResult")
      .def_readonly("lam", &qpow::PowerIterationResult::lambda)
      .def_readonly("u", &qpow::PowerIterationResult::u)
      .def_readonly("iterations", &qpow::PowerIterationResult::iterations)
      .def_readonly("converged", &qpow::PowerIterationResult::converged)
      .def_readonly("residual2", &qpow::PowerIterationResult::residual2)
      .def_readonly("stagnation", &qpow::PowerIterationResult::stagnation);
  m.def("exact_power_iteration", &qpow::exact_power_iteration, py::arg("a"),
        py::arg("v0"), py::arg("max_iter"), py::arg("tol"));

  m.def("projected_energy",
        py::overload_cast<const qpow::ColumnOracle&, const qpow::SparseVector&,
                          const qpow::SparseVector&>(&qpow::projected_energy),
        py::arg("h"), py::arg("vstar"), py::arg("v"));

  m.def("autocorrelation_time", &qpow::autocorrelation_time,
        py::arg("series"));

  m.def(
      "predict_theory",
      [](double lambda1, double lambda2, double delta_fail, double epsilon,
         double cos_theta0, double ce, double v0_norm1, double v0_norm2,
         double a_norm1, double a_norm2) {
        qpow::TheoryInputs in;
        in.lambda1 = lambda1;
        in.lambda2 = lambda2;
        in.delta_fail = delta_fail;
        in.epsilon = epsilon;
        in.cos_theta0 = cos_theta0;
        in.ce = ce;
        in.v0_norm1 = v0_norm1;
        in.v0_norm2 = v0_norm2;
        in.a_norm1 = a_norm1;
        in.a_norm2 = a_norm2;
        const qpow::TheoryPrediction p = qpow::predict_theory(in);
        return py::make_tuple(p.t, p.m0);
      },
      py::arg("lambda1"), py::arg("lambda2"), py::arg("delta_fail"),
      py::arg("epsilon"), py::arg("cos_theta0"), py::arg("ce"),
      py::arg("v0_norm1"), py::arg("v0_norm2"), py::arg("a_norm1"),
      py::arg("a_norm2"));

  m.def(
      "assumption_suite",
      [](const qpow::ColumnOracle& a, const std::string& method, long replicas,
         std::int64_t target, std::uint64_t seed) {
        const qpow::AssumptionReport r = qpow::assumption_suite(
            a, method_from_string(method), replicas, target, seed);
        py::dict d;
        d["replicas"] = r.replicas;
        d["m"] = r.m;
        d["mean_zero_pass"] = r.mean_zero_pass;
        d["max_mean_dev_se"] = r.max_mean_dev_se;
        d["variance_pass"] = r.variance_pass;
        d["empirical_ce"] = r.empirical_ce;
        d["variance_bound_ce"] = r.variance_bound_ce;
        d["growth_pass"] = r.growth_pass;
        d["growth_ratio"] = r.growth_ratio;
        return d;
      },
      py::arg("a"), py::arg("method"), py::arg("replicas"), py::arg("m"),
      py::arg("seed") = 7);

  m.def("parse_config",
        [](const std::string& text) {
          return qpow::serialize_config(qpow::parse_config(text));
        },
        py::arg("text"),
        "validate config text and return its canonical form");

  m.def(
      "run_experiment",
      [](const std::string& config_text, std::uint64_t run_index) {
        const qpow::ExperimentConfig cfg = qpow::parse_config(config_text);
        const qpow::ExperimentResult res =
            qpow::run_experiment(cfg, run_index);
        py::dict d;
        d["summary"] = summary_dict(res.summary);
        d["converged"] = res.converged;
        d["final_energy"] = res.final_energy;
        d["reference_energy"] = res.reference_energy;
        py::list t, population, shift, proj_energy, tan_theta;
        for (const qpow::RunRow& row : res.record.rows) {
          t.append(row.t);
          population.append(row.population);
          shift.append(row.shift);
          proj_energy.append(row.proj_energy);
          tan_theta.append(row.tan_theta);
        }
        d["t"] = t;
        d["population"] = population;
        d["shift"] = shift;
        d["proj_energy"] = proj_energy;
        d["tan_theta"] = tan_theta;
        return d;
      },
      py::arg("config_text"), py::arg("run_index") = 0);
}
