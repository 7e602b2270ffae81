#pragma once

#include <optional>
#include <ostream>
#include <string>
#include <vector>

namespace qpow {

enum class Phase { none, growth, controlled };

// One recorded iteration. Absent diagnostics stay unset and serialize as
// empty CSV fields; tan_theta may be +infinity (written as "inf").
struct RunRow {
  long t = 0;
  double wall_ms = 0.0;
  std::optional<double> population;
  std::optional<double> shift;
  std::optional<double> proj_energy;
  std::optional<double> l1;
  std::optional<double> l2;
  std::optional<long long> nnz_matvec;
  std::optional<double> rel_compress_err;
  std::optional<double> tan_theta;
  Phase phase = Phase::none;
};

struct RunRecord {
  std::vector<RunRow> rows;
};

std::string csv_header();
void write_csv(std::ostream& os, const RunRecord& record);

// Sum of empirical lag autocorrelations of the series, truncated at the
// smallest lag T with T >= 6*(1 + 2*sum_{t<=T} rho(t)) and capped at
// length-1. Throws on length < 2 or a constant series.
double autocorrelation_time(const std::vector<double>& series);

struct SummaryStats {
  long i0 = 0;
  long window = 0;
  double avg_error = 0.0;  // NaN when no reference energy was supplied
  double std_dev = 0.0;
  double mse = 0.0;  // NaN when avg_error is
  double tau_auto = 0.0;
  double avg_compress_err = 0.0;  // NaN when never recorded in the window
  double time_per_iter_s = 0.0;
  double effective_samples = 0.0;
};

// Windowed error statistics over rows [i0, i0+w). The effective sample
// count is seconds_budget divided by the measured per_iteration wall time;
// when timing is absent (zeroed clocks) it falls back to w.
SummaryStats summarize(const RunRecord& record, std::optional<double> e_true,
                       long i0, long w, double seconds_budget = 1e4);

void write_summary(std::ostream& os, const SummaryStats& stats);

// Mean shift over rows [i0, i0+w); every row must be in the controlled
// phase with a recorded shift.
double shift_estimate(const RunRecord& record, long i0, long w);

// %.17g rendering used across all text output.
std::string format_g17(double x);

}  // namespace qpow
