#include "qpow/file_matrix.hpp"

#include <algorithm>
#include <cstdint>
#include <fstream>
#include <set>
#include <sstream>
#include <string>

#include "qpow/errors.hpp"

namespace qpow {

namespace {

ConfigError parse_error(const std::string& name, long line, const std::string& msg) {
  return ConfigError(name + ":" + std::to_string(line) + ": " + msg);
}

}  // namespace

FileMatrix FileMatrix::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open matrix file: " + path);
  return parse(in, path);
}

FileMatrix FileMatrix::parse(std::istream& in, const std::string& name) {
  FileMatrix m;
  std::string line;
  long lineno = 0;
  bool have_dim = false;
  std::set<std::pair<index_t, index_t>> seen;

  while (std::getline(in, line)) {
    ++lineno;
    std::size_t start = line.find_first_not_of(" \t\r");
    if (start == std::string::npos) continue;
    if (line[start] == '#') continue;
    std::istringstream row(line);
    if (!have_dim) {
      std::int64_t n = 0;
      std::string extra;
      if (!(row >> n) || (row >> extra)) {
        throw parse_error(name, lineno, "expected a single dimension value");
      }
      if (n < 1) throw parse_error(name, lineno, "dimension must be positive");
      m.n_ = n;
      m.diag_.assign(static_cast<std::size_t>(n), 0.0);
      m.cols_.assign(static_cast<std::size_t>(n), {});
      have_dim = true;
      continue;
    }
    std::int64_t i = 0, j = 0;
    double v = 0.0;
    std::string extra;
    if (!(row >> i >> j >> v) || (row >> extra)) {
      throw parse_error(name, lineno, "expected 'i j value'");
    }
    if (i < 1 || i > m.n_ || j < 1 || j > m.n_) {
      throw parse_error(name, lineno, "index out of range");
    }
    if (i > j) {
      throw parse_error(name, lineno,
                        "asymmetric input: lower-triangle entry (use i <= j)");
    }
    if (!seen.insert({i, j}).second) {
      throw parse_error(name, lineno, "duplicate entry (" + std::to_string(i) +
                                          ", " + std::to_string(j) + ")");
    }
    const index_t a = i - 1, b = j - 1;
    if (a == b) {
      m.diag_[a] = v;
    } else if (v != 0.0) {
      m.cols_[b].push_back({a, v});
      m.cols_[a].push_back({b, v});
    }
  }
  if (!have_dim) throw ConfigError(name + ": empty matrix file");
  for (auto& col : m.cols_) {
    std::sort(col.begin(), col.end(),
              [](const OffdiagEntry& x, const OffdiagEntry& y) { return x.row < y.row; });
  }
  return m;
}

std::vector<OffdiagEntry> FileMatrix::offdiag_column(index_t k) const {
  return cols_[k];
}

std::int64_t FileMatrix::offdiag_count(index_t k) const {
  return static_cast<std::int64_t>(cols_[k].size());
}

std::optional<OffdiagSample> FileMatrix::sample_offdiag(index_t k,
                                                        CounterRng& rng) const {
  const auto& col = cols_[k];
  if (col.empty()) return std::nullopt;
  const std::size_t pick = rng.uniform_below(col.size());
  return OffdiagSample{col[pick].row, col[pick].value,
                       1.0 / static_cast<double>(col.size())};
}

}  // namespace qpow
