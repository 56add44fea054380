#pragma once

// Command-line front-end support: run configuration (flat key=value file plus
// flag overrides), regime classification, the solve/sweep/scan/kernel/verify
// pipelines, and CSV/JSON persistence. Numeric payloads are identical across
// the two formats and contain nothing run-dependent, so repeated runs of the
// same config are bit-identical.

#include <iosfwd>
#include <optional>
#include <string>

#include "resonance/asymptotics.hpp"
#include "resonance/scan.hpp"

namespace resonance::io {

using dispersion::ModelParams;
using riemann::Complex;

std::string version();

struct RunConfig {
  ModelParams params{riemann::Dimension(1)};
  std::vector<double> eps_ladder;  // strictly decreasing; defaults to {epsilon}
  double tol = 1e-12;
  int max_iter = 200;
  double scan_min = 1e-6;
  double scan_max = 10.0;
  int grid_n = 100000;
  std::string out;            // output file; empty = stdout summary only
  std::string format = "csv"; // csv | json
  // kernel sampling options
  double kernel_z_re = -1.0;
  double kernel_z_im = 0.0;
  int kernel_sheet = 0;
  int channel_i = 0;
  int channel_j = 0;
  double x_min = 0.1;
  double x_max = 5.0;
  double xprime = 1.0;

  void validate() const;  // throws std::invalid_argument
};

/// "1e-2,1e-3,..." or "geom:<first>:<last>:<count>" (geometric ladder)
std::vector<double> parse_ladder(const std::string& spec);

/// Flat key=value file; '#' comments and blank lines ignored. Unknown keys
/// are errors. Keys: dimension theta0 c b epsilon eps_ladder tol max_iter
/// scan_min scan_max grid_n out format (plus the kernel options).
RunConfig load_config_file(const std::string& path);
void apply_key(RunConfig& cfg, const std::string& key, const std::string& value);

struct ResultRecord {
  RunConfig config;  // echo; a record re-runs from this alone
  rootfinder::Regime regime;
  std::vector<rootfinder::Singularity> singularities;
  std::optional<asymptotics::ExpansionResult> expansion;
  std::optional<asymptotics::OrderFit> fit;
  std::optional<double> scan_min_abs;
  std::optional<double> scan_median;
  std::optional<double> deep_log_lambda;  // runaway d = 2 eigenvalue, ln(lambda)
  std::optional<rootfinder::EigenvalueWindow> eigenvalue_window;
  std::string error;                      // nonempty when a solver failed
  double wall_time_ms = 0.0;              // in-memory only, never serialized
  std::string library_version = version();
};

/// All near-origin singularities at one parameter point, plus the
/// positive-axis scan summary.
ResultRecord run_solve(const RunConfig& cfg);

/// One solve per ladder epsilon, computed concurrently, reported in ladder
/// order. Failures are carried per-record in `error`.
std::vector<ResultRecord> run_sweep(const RunConfig& cfg);

struct ScanRecord {
  RunConfig config;
  std::vector<double> lambdas;
  std::vector<double> abs_dispersion;
  double min_abs = 0.0;
  double median_abs = 0.0;
  double wall_time_ms = 0.0;
};
ScanRecord run_scan(const RunConfig& cfg);

struct KernelRecord {
  RunConfig config;
  std::vector<double> xs;
  std::vector<Complex> values;
  double wall_time_ms = 0.0;
};
KernelRecord run_kernel(const RunConfig& cfg);

/// Ladder of solves against the regime expansion: the empirical order check.
ResultRecord run_verify(const RunConfig& cfg);

// ---- persistence ----
void write_csv(std::ostream& os, const std::vector<ResultRecord>& records);
void write_json(std::ostream& os, const std::vector<ResultRecord>& records);
void write_csv(std::ostream& os, const ScanRecord& record);
void write_json(std::ostream& os, const ScanRecord& record);
void write_csv(std::ostream& os, const KernelRecord& record);
void write_json(std::ostream& os, const KernelRecord& record);

/// Lossless decimal form (17 significant digits).
std::string format_double(double v);

}  // namespace resonance::io
