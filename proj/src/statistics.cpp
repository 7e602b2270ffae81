#include "qpow/statistics.hpp"

#include <cmath>
#include <cstdio>
#include <limits>
#include <stdexcept>

namespace qpow {
namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

void append_opt(std::string& line, const std::optional<double>& v) {
  line.push_back(',');
  if (v) line += format_g17(*v);
}

}  // namespace

std::string format_g17(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string csv_header() {
  return "t,wall_ms,population,shift,proj_energy,l1,l2,nnz_matvec,"
         "rel_compress_err,tan_theta";
}

void write_csv(std::ostream& os, const RunRecord& record) {
  os << csv_header() << '\n';
  for (const RunRow& r : record.rows) {
    std::string line = std::to_string(r.t);
    line.push_back(',');
    line += format_g17(r.wall_ms);
    append_opt(line, r.population);
    append_opt(line, r.shift);
    append_opt(line, r.proj_energy);
    append_opt(line, r.l1);
    append_opt(line, r.l2);
    line.push_back(',');
    if (r.nnz_matvec) line += std::to_string(*r.nnz_matvec);
    append_opt(line, r.rel_compress_err);
    line.push_back(',');
    if (r.tan_theta) {
      line += std::isinf(*r.tan_theta) ? "inf" : format_g17(*r.tan_theta);
    }
    os << line << '\n';
  }
}

double autocorrelation_time(const std::vector<double>& series) {
  const std::size_t n = series.size();
  if (n < 2) throw std::invalid_argument("series too short for tau_auto");
  double mean = 0.0;
  for (double x : series) mean += x;
  mean /= static_cast<double>(n);
  double c0 = 0.0;
  for (double x : series) c0 += (x - mean) * (x - mean);
  c0 /= static_cast<double>(n);
  if (c0 == 0.0) throw std::domain_error("constant series has no tau_auto");

  double tau = 0.0;
  for (std::size_t t = 1; t < n; ++t) {
    double ct = 0.0;
    for (std::size_t i = 0; i + t < n; ++i) {
      ct += (series[i] - mean) * (series[i + t] - mean);
    }
    ct /= static_cast<double>(n);
    tau += ct / c0;
    if (static_cast<double>(t) >= 6.0 * (1.0 + 2.0 * tau)) break;
  }
  return tau;
}

SummaryStats summarize(const RunRecord& record, std::optional<double> e_true,
                       long i0, long w, double seconds_budget) {
  if (w < 2) throw std::invalid_argument("window must hold at least 2 rows");
  if (i0 < 0 ||
      i0 + w > static_cast<long>(record.rows.size())) {
    throw std::invalid_argument("window exceeds record length");
  }
  if (!(seconds_budget > 0.0)) {
    throw std::invalid_argument("seconds_budget must be positive");
  }

  std::vector<double> energy;
  energy.reserve(static_cast<std::size_t>(w));
  double compress_sum = 0.0;
  long compress_count = 0;
  for (long i = i0; i < i0 + w; ++i) {
    const RunRow& r = record.rows[static_cast<std::size_t>(i)];
    if (!r.proj_energy) {
      throw std::invalid_argument("projected energy missing inside window");
    }
    energy.push_back(*r.proj_energy);
    if (r.rel_compress_err) {
      compress_sum += *r.rel_compress_err;
      ++compress_count;
    }
  }

  SummaryStats s;
  s.i0 = i0;
  s.window = w;

  double mean = 0.0;
  for (double e : energy) mean += e;
  mean /= static_cast<double>(w);
  double var = 0.0;
  for (double e : energy) var += (e - mean) * (e - mean);
  var /= static_cast<double>(w - 1);
  const double sample_std = std::sqrt(var);
  // An exactly constant window carries no statistical error; tau is moot.
  s.tau_auto = var == 0.0 ? 0.0 : autocorrelation_time(energy);

  const RunRow& first = record.rows[static_cast<std::size_t>(i0)];
  const RunRow& last = record.rows[static_cast<std::size_t>(i0 + w - 1)];
  s.time_per_iter_s =
      (last.wall_ms - first.wall_ms) / (static_cast<double>(w - 1) * 1000.0);
  s.effective_samples = s.time_per_iter_s > 0.0
                            ? seconds_budget / s.time_per_iter_s
                            : static_cast<double>(w);
  s.std_dev = sample_std * std::sqrt((1.0 + 2.0 * s.tau_auto) /
                                     s.effective_samples);

  if (e_true) {
    double acc = 0.0;
    for (double e : energy) acc += std::abs(e - *e_true);
    s.avg_error = acc / static_cast<double>(w);
    s.mse = s.avg_error * s.avg_error + s.std_dev * s.std_dev;
  } else {
    s.avg_error = kNaN;
    s.mse = kNaN;
  }
  s.avg_compress_err =
      compress_count > 0 ? compress_sum / static_cast<double>(compress_count)
                         : kNaN;
  return s;
}

void write_summary(std::ostream& os, const SummaryStats& s) {
  auto line = [&os](const char* key, double v) {
    os << key << " =";
    if (!std::isnan(v)) os << ' ' << format_g17(v);
    os << '\n';
  };
  os << "i0 = " << s.i0 << '\n';
  os << "window = " << s.window << '\n';
  line("avg_error", s.avg_error);
  line("std", s.std_dev);
  line("mse", s.mse);
  line("tau_auto", s.tau_auto);
  line("avg_compress_err", s.avg_compress_err);
  line("time_per_iter_s", s.time_per_iter_s);
  line("effective_samples", s.effective_samples);
}

double shift_estimate(const RunRecord& record, long i0, long w) {
  if (w < 1) throw std::invalid_argument("window must hold at least 1 row");
  if (i0 < 0 ||
      i0 + w > static_cast<long>(record.rows.size())) {
    throw std::invalid_argument("window exceeds record length");
  }
  double acc = 0.0;
  for (long i = i0; i < i0 + w; ++i) {
    const RunRow& r = record.rows[static_cast<std::size_t>(i)];
    if (r.phase != Phase::controlled || !r.shift) {
      throw std::domain_error("window extends outside the controlled phase");
    }
    acc += *r.shift;
  }
  return acc / static_cast<double>(w);
}

}  // namespace qpow
