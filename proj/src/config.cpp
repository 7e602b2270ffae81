#include "qpow/config.hpp"

#include <cerrno>
#include <cstdlib>
#include <fstream>
#include <set>
#include <sstream>
#include <string>

#include "qpow/errors.hpp"
#include "qpow/statistics.hpp"

namespace qpow {
namespace {

std::string trim(const std::string& s) {
  std::size_t b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  std::size_t e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

[[noreturn]] void fail(const std::string& name, long line,
                       const std::string& msg) {
  throw ConfigError(name + ":" + std::to_string(line) + ": " + msg);
}

double to_double(const std::string& name, long line, const std::string& s) {
  if (s.empty()) fail(name, line, "empty number");
  errno = 0;
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (errno != 0 || end != s.c_str() + s.size()) {
    fail(name, line, "bad number '" + s + "'");
  }
  return v;
}

long long to_ll(const std::string& name, long line, const std::string& s) {
  if (s.empty()) fail(name, line, "empty integer");
  errno = 0;
  char* end = nullptr;
  const long long v = std::strtoll(s.c_str(), &end, 10);
  if (errno != 0 || end != s.c_str() + s.size()) {
    fail(name, line, "bad integer '" + s + "'");
  }
  return v;
}

std::uint64_t to_u64(const std::string& name, long line,
                     const std::string& s) {
  if (s.empty() || s[0] == '-') fail(name, line, "bad unsigned '" + s + "'");
  errno = 0;
  char* end = nullptr;
  const unsigned long long v = std::strtoull(s.c_str(), &end, 10);
  if (errno != 0 || end != s.c_str() + s.size()) {
    fail(name, line, "bad unsigned '" + s + "'");
  }
  return v;
}

bool to_bool(const std::string& name, long line, const std::string& s) {
  if (s == "true") return true;
  if (s == "false") return false;
  fail(name, line, "expected true or false, got '" + s + "'");
}

const char* method_name(RunMethod m) {
  switch (m) {
    case RunMethod::exact: return "exact";
    case RunMethod::fciqmc: return "fciqmc";
    case RunMethod::ifciqmc: return "ifciqmc";
    case RunMethod::fri_systematic: return "fri-systematic";
    case RunMethod::fri_bernoulli: return "fri-bernoulli";
    case RunMethod::hard_threshold: return "ht";
  }
  return "exact";
}

const char* system_name(SystemKind k) {
  switch (k) {
    case SystemKind::hubbard: return "hubbard";
    case SystemKind::file: return "file";
    case SystemKind::dense_random: return "dense-random";
  }
  return "hubbard";
}

const char* reference_name(ReferenceKind k) {
  switch (k) {
    case ReferenceKind::none: return "none";
    case ReferenceKind::dense_oracle: return "dense-oracle";
    case ReferenceKind::file: return "file";
  }
  return "none";
}

void validate(const ExperimentConfig& c) {
  auto bad = [](const std::string& msg) { throw ConfigError(msg); };
  switch (c.system) {
    case SystemKind::hubbard:
      if (c.lattice < 1) bad("lattice must be at least 1");
      if (c.n_up < 0 || c.n_down < 0 || c.n_up + c.n_down < 1) {
        bad("electron counts must be nonnegative with at least one electron");
      }
      break;
    case SystemKind::file:
      if (c.matrix_path.empty()) bad("system file path missing");
      break;
    case SystemKind::dense_random:
      if (c.n < 2) bad("dense-random dimension must be at least 2");
      if (!(c.gap > 0.0)) bad("dense-random gap must be positive");
      break;
  }
  if (!(c.delta > 0.0)) bad("delta must be positive");
  if (c.iterations < 1) bad("iterations must be at least 1");
  if (!(c.tol > 0.0)) bad("tol must be positive");
  if (c.method != RunMethod::exact && c.m < 1) {
    bad("m must be at least 1 for stochastic and threshold methods");
  }
  if (c.m < 0) bad("m must be nonnegative");
  if (c.initial_population < 1) bad("initial_population must be at least 1");
  if (!(c.eta > 0.0)) bad("eta must be positive");
  if (c.q < 1) bad("q must be at least 1");
  if (c.initiator_threshold < 0) bad("initiator_threshold must be nonnegative");
  if (!(c.seconds_budget > 0.0)) bad("seconds_budget must be positive");
  if (c.burn_in && *c.burn_in < 0) bad("burn_in must be nonnegative");
  if (c.window && *c.window < 2) bad("window must be at least 2");
  if (c.reference == ReferenceKind::file && c.reference_path.empty()) {
    bad("reference file path missing");
  }
  if (c.record_path.empty() || c.summary_path.empty()) {
    bad("output paths must be nonempty");
  }
}

}  // namespace

ExperimentConfig parse_config(const std::string& text,
                              const std::string& name) {
  ExperimentConfig c;
  std::set<std::string> seen;
  std::string section;
  std::istringstream in(text);
  std::string raw;
  long lineno = 0;

  while (std::getline(in, raw)) {
    ++lineno;
    const std::size_t hash = raw.find('#');
    if (hash != std::string::npos) raw.erase(hash);
    const std::string line = trim(raw);
    if (line.empty()) continue;

    if (line.front() == '[') {
      if (line.back() != ']') fail(name, lineno, "unterminated section header");
      section = trim(line.substr(1, line.size() - 2));
      if (section != "system" && section != "run" && section != "fciqmc" &&
          section != "stats" && section != "reference" &&
          section != "output") {
        fail(name, lineno, "unknown section [" + section + "]");
      }
      continue;
    }

    const std::size_t eq = line.find('=');
    if (eq == std::string::npos) fail(name, lineno, "expected key = value");
    if (section.empty()) fail(name, lineno, "key outside any section");
    const std::string key = trim(line.substr(0, eq));
    const std::string val = trim(line.substr(eq + 1));
    if (key.empty()) fail(name, lineno, "empty key");
    if (!seen.insert(section + "." + key).second) {
      fail(name, lineno, "duplicate key '" + key + "'");
    }

    if (section == "system") {
      if (key == "kind") {
        if (val == "hubbard") c.system = SystemKind::hubbard;
        else if (val == "file") c.system = SystemKind::file;
        else if (val == "dense-random") c.system = SystemKind::dense_random;
        else fail(name, lineno, "unknown system kind '" + val + "'");
      } else if (key == "lattice") c.lattice = static_cast<long>(to_ll(name, lineno, val));
      else if (key == "n_up") c.n_up = static_cast<long>(to_ll(name, lineno, val));
      else if (key == "n_down") c.n_down = static_cast<long>(to_ll(name, lineno, val));
      else if (key == "u") c.u = to_double(name, lineno, val);
      else if (key == "sampling") {
        if (val == "uniform") c.sampling = HubbardMomentum::Sampling::uniform;
        else if (val == "rejection") c.sampling = HubbardMomentum::Sampling::rejection;
        else fail(name, lineno, "unknown sampling '" + val + "'");
      } else if (key == "path") c.matrix_path = val;
      else if (key == "n") c.n = static_cast<long>(to_ll(name, lineno, val));
      else if (key == "gap") c.gap = to_double(name, lineno, val);
      else if (key == "system_seed") c.system_seed = to_u64(name, lineno, val);
      else fail(name, lineno, "unknown key '" + key + "' in [system]");
    } else if (section == "run") {
      if (key == "method") {
        if (val == "exact") c.method = RunMethod::exact;
        else if (val == "fciqmc") c.method = RunMethod::fciqmc;
        else if (val == "ifciqmc") c.method = RunMethod::ifciqmc;
        else if (val == "fri-systematic") c.method = RunMethod::fri_systematic;
        else if (val == "fri-bernoulli") c.method = RunMethod::fri_bernoulli;
        else if (val == "ht") c.method = RunMethod::hard_threshold;
        else fail(name, lineno, "unknown method '" + val + "'");
      } else if (key == "delta") c.delta = to_double(name, lineno, val);
      else if (key == "m") c.m = to_ll(name, lineno, val);
      else if (key == "iterations") c.iterations = static_cast<long>(to_ll(name, lineno, val));
      else if (key == "seed") c.seed = to_u64(name, lineno, val);
      else if (key == "initial_population") c.initial_population = to_ll(name, lineno, val);
      else if (key == "zero_walltime") c.zero_walltime = to_bool(name, lineno, val);
      else if (key == "tol") c.tol = to_double(name, lineno, val);
      else fail(name, lineno, "unknown key '" + key + "' in [run]");
    } else if (section == "fciqmc") {
      if (key == "eta") c.eta = to_double(name, lineno, val);
      else if (key == "q") c.q = to_ll(name, lineno, val);
      else if (key == "s0") c.s0 = to_double(name, lineno, val);
      else if (key == "initiator_threshold") c.initiator_threshold = to_ll(name, lineno, val);
      else fail(name, lineno, "unknown key '" + key + "' in [fciqmc]");
    } else if (section == "stats") {
      if (key == "burn_in") c.burn_in = static_cast<long>(to_ll(name, lineno, val));
      else if (key == "window") c.window = static_cast<long>(to_ll(name, lineno, val));
      else if (key == "seconds_budget") c.seconds_budget = to_double(name, lineno, val);
      else fail(name, lineno, "unknown key '" + key + "' in [stats]");
    } else if (section == "reference") {
      if (key == "kind") {
        if (val == "none") c.reference = ReferenceKind::none;
        else if (val == "dense-oracle") c.reference = ReferenceKind::dense_oracle;
        else if (val == "file") c.reference = ReferenceKind::file;
        else fail(name, lineno, "unknown reference kind '" + val + "'");
      } else if (key == "path") c.reference_path = val;
      else fail(name, lineno, "unknown key '" + key + "' in [reference]");
    } else {  // output
      if (key == "record") c.record_path = val;
      else if (key == "summary") c.summary_path = val;
      else fail(name, lineno, "unknown key '" + key + "' in [output]");
    }
  }

  auto conflict = [&](const char* key) {
    if (seen.count(std::string("system.") + key)) {
      throw ConfigError(std::string("system key '") + key +
                        "' conflicts with kind " + system_name(c.system));
    }
  };
  if (c.system != SystemKind::hubbard) {
    for (const char* k : {"lattice", "n_up", "n_down", "u", "sampling"}) {
      conflict(k);
    }
  }
  if (c.system != SystemKind::file) conflict("path");
  if (c.system != SystemKind::dense_random) {
    for (const char* k : {"n", "gap", "system_seed"}) conflict(k);
  }
  if (c.reference != ReferenceKind::file && seen.count("reference.path")) {
    throw ConfigError("reference path given without a file reference");
  }

  validate(c);
  return c;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str(), path);
}

std::string serialize_config(const ExperimentConfig& c) {
  std::ostringstream os;
  os << "[system]\n";
  os << "kind = " << system_name(c.system) << '\n';
  switch (c.system) {
    case SystemKind::hubbard:
      os << "lattice = " << c.lattice << '\n';
      os << "n_up = " << c.n_up << '\n';
      os << "n_down = " << c.n_down << '\n';
      os << "u = " << format_g17(c.u) << '\n';
      os << "sampling = "
         << (c.sampling == HubbardMomentum::Sampling::uniform ? "uniform"
                                                              : "rejection")
         << '\n';
      break;
    case SystemKind::file:
      os << "path = " << c.matrix_path << '\n';
      break;
    case SystemKind::dense_random:
      os << "n = " << c.n << '\n';
      os << "gap = " << format_g17(c.gap) << '\n';
      os << "system_seed = " << c.system_seed << '\n';
      break;
  }
  os << "\n[run]\n";
  os << "method = " << method_name(c.method) << '\n';
  os << "delta = " << format_g17(c.delta) << '\n';
  os << "m = " << c.m << '\n';
  os << "iterations = " << c.iterations << '\n';
  os << "seed = " << c.seed << '\n';
  os << "initial_population = " << c.initial_population << '\n';
  os << "zero_walltime = " << (c.zero_walltime ? "true" : "false") << '\n';
  os << "tol = " << format_g17(c.tol) << '\n';
  os << "\n[fciqmc]\n";
  os << "eta = " << format_g17(c.eta) << '\n';
  os << "q = " << c.q << '\n';
  if (c.s0) os << "s0 = " << format_g17(*c.s0) << '\n';
  os << "initiator_threshold = " << c.initiator_threshold << '\n';
  os << "\n[stats]\n";
  if (c.burn_in) os << "burn_in = " << *c.burn_in << '\n';
  if (c.window) os << "window = " << *c.window << '\n';
  os << "seconds_budget = " << format_g17(c.seconds_budget) << '\n';
  os << "\n[reference]\n";
  os << "kind = " << reference_name(c.reference) << '\n';
  if (c.reference == ReferenceKind::file) {
    os << "path = " << c.reference_path << '\n';
  }
  os << "\n[output]\n";
  os << "record = " << c.record_path << '\n';
  os << "summary = " << c.summary_path << '\n';
  return os.str();
}

long default_burn_in(const ExperimentConfig& cfg) {
  if (cfg.burn_in) return *cfg.burn_in;
  switch (cfg.method) {
    case RunMethod::fciqmc:
    case RunMethod::ifciqmc:
      return 2400;
    case RunMethod::exact:
      return cfg.iterations / 2;
    default:
      return 600;
  }
}

long default_window(const ExperimentConfig& cfg) {
  if (cfg.window) return *cfg.window;
  switch (cfg.method) {
    case RunMethod::fciqmc:
    case RunMethod::ifciqmc:
      return 1600;
    case RunMethod::exact:
      return cfg.iterations - cfg.iterations / 2;
    default:
      return 400;
  }
}

}  // namespace qpow
