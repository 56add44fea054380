// Command-line front end: locate and classify the spectral singularities of
// the two-channel point-interaction Hamiltonian near the continuum threshold.
//
// Subcommands: solve, sweep, scan, kernel, verify. Exit codes: 0 success,
// 1 solver non-convergence, 2 invalid configuration.

#include <fstream>
#include <iostream>

#include "CLI11.hpp"
#include "resonance/io.hpp"

namespace {

using resonance::io::ResultRecord;
using resonance::io::RunConfig;

// Flag values parked here, then applied over the (optional) config file for
// exactly the options the user passed: flags win.
struct FlagValues {
  std::string config_file;
  std::string ladder_spec;
  int dimension = 1;
  double theta0 = 0, c = 0, b = 1, epsilon = 0;
  double tol = 1e-12;
  int max_iter = 200;
  double scan_min = 1e-6, scan_max = 10.0;
  int grid_n = 100000;
  std::string out, format = "csv";
  double z_re = -1.0, z_im = 0.0;
  int sheet = 0, channel_i = 0, channel_j = 0;
  double x_min = 0.1, x_max = 5.0, xprime = 1.0;
};

void add_common(CLI::App* cmd, FlagValues& f) {
  cmd->add_option("--config", f.config_file, "flat key=value config file (flags win)");
  cmd->add_option("-d,--dimension", f.dimension, "spatial dimension (1, 2 or 3)");
  cmd->add_option("--theta0", f.theta0, "lower-channel coupling theta0");
  cmd->add_option("-c,--c", f.c, "upper-channel perturbation strength c");
  cmd->add_option("-b,--b", f.b, "channel coupling b (default 1)");
  cmd->add_option("-e,--epsilon", f.epsilon, "perturbation parameter epsilon");
  cmd->add_option("--eps-ladder", f.ladder_spec,
                  "ladder: comma list or geom:<first>:<last>:<count>");
  cmd->add_option("--tol", f.tol, "relative step tolerance");
  cmd->add_option("--max-iter", f.max_iter, "iteration cap");
  cmd->add_option("--scan-min", f.scan_min, "positive-axis scan lower bound");
  cmd->add_option("--scan-max", f.scan_max, "positive-axis scan upper bound");
  cmd->add_option("--grid-n", f.grid_n, "grid density (>= 16)");
  cmd->add_option("-o,--out", f.out, "output file path");
  cmd->add_option("--format", f.format, "output format: csv or json");
  cmd->add_option("--z-re", f.z_re, "Re(z) of the sampled energy (kernel)");
  cmd->add_option("--z-im", f.z_im, "Im(z) of the sampled energy (kernel)");
  cmd->add_option("--sheet", f.sheet, "z sheet, 0 or -1 (kernel)");
  cmd->add_option("--channel-i", f.channel_i, "row channel, 0 or 1 (kernel)");
  cmd->add_option("--channel-j", f.channel_j, "column channel, 0 or 1 (kernel)");
  cmd->add_option("--x-min", f.x_min, "smallest x sample (kernel)");
  cmd->add_option("--x-max", f.x_max, "largest x sample (kernel)");
  cmd->add_option("--xprime", f.xprime, "fixed x' of the kernel slice");
}

RunConfig build_config(CLI::App* cmd, const FlagValues& f) {
  RunConfig cfg;
  if (!f.config_file.empty()) cfg = resonance::io::load_config_file(f.config_file);
  auto passed = [&](const std::string& name) { return cmd->count(name) > 0; };
  if (passed("--dimension")) cfg.params.dim = resonance::riemann::Dimension(f.dimension);
  if (passed("--theta0")) cfg.params.theta0 = f.theta0;
  if (passed("--c")) cfg.params.c = f.c;
  if (passed("--b")) cfg.params.b = f.b;
  if (passed("--epsilon")) cfg.params.epsilon = f.epsilon;
  if (passed("--eps-ladder")) cfg.eps_ladder = resonance::io::parse_ladder(f.ladder_spec);
  if (passed("--tol")) cfg.tol = f.tol;
  if (passed("--max-iter")) cfg.max_iter = f.max_iter;
  if (passed("--scan-min")) cfg.scan_min = f.scan_min;
  if (passed("--scan-max")) cfg.scan_max = f.scan_max;
  if (passed("--grid-n")) cfg.grid_n = f.grid_n;
  if (passed("--out")) cfg.out = f.out;
  if (passed("--format")) cfg.format = f.format;
  if (passed("--z-re")) cfg.kernel_z_re = f.z_re;
  if (passed("--z-im")) cfg.kernel_z_im = f.z_im;
  if (passed("--sheet")) cfg.kernel_sheet = f.sheet;
  if (passed("--channel-i")) cfg.channel_i = f.channel_i;
  if (passed("--channel-j")) cfg.channel_j = f.channel_j;
  if (passed("--x-min")) cfg.x_min = f.x_min;
  if (passed("--x-max")) cfg.x_max = f.x_max;
  if (passed("--xprime")) cfg.xprime = f.xprime;
  return cfg;
}

void print_singularities(const ResultRecord& rec) {
  std::cout << "regime: case " << rec.regime.case_id << " (d=" << rec.regime.d << ")\n";
  for (const auto& s : rec.singularities) {
    std::cout << "  " << resonance::rootfinder::to_string(s.kind) << " ["
              << resonance::rootfinder::to_string(s.method) << ", sheet " << s.sheet
              << "]: " << resonance::io::format_double(s.location.real());
    if (s.location.imag() != 0.0)
      std::cout << (s.location.imag() < 0 ? " - " : " + ")
                << resonance::io::format_double(std::abs(s.location.imag())) << "i";
    std::cout << "  |D| = " << s.residual << "\n";
  }
  if (rec.deep_log_lambda)
    std::cout << "  runaway eigenvalue: ln(lambda) = "
              << resonance::io::format_double(*rec.deep_log_lambda) << "\n";
  if (rec.eigenvalue_window)
    std::cout << "  no isolated eigenvalue in (-" << rec.eigenvalue_window->bound
              << ", 0): " << (rec.eigenvalue_window->clear ? "confirmed" : "VIOLATED") << "\n";
  if (rec.scan_min_abs)
    std::cout << "  positive-axis scan: min |D| = " << *rec.scan_min_abs
              << ", median = " << *rec.scan_median << "\n";
}

template <class Record>
void emit_file(const RunConfig& cfg, const Record& rec) {
  if (cfg.out.empty()) return;
  std::ofstream out(cfg.out, std::ios::binary);
  if (!out) throw std::invalid_argument("cannot open output file '" + cfg.out + "'");
  if (cfg.format == "json")
    resonance::io::write_json(out, rec);
  else
    resonance::io::write_csv(out, rec);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"spectral singularities of two-channel point-interaction Hamiltonians"};
  app.require_subcommand(1);

  FlagValues f;
  auto* solve = app.add_subcommand("solve", "all near-origin singularities at one point");
  auto* sweep = app.add_subcommand("sweep", "one solve per ladder epsilon");
  auto* scan = app.add_subcommand("scan", "|D_eps| profile on the positive real axis");
  auto* kernel = app.add_subcommand("kernel", "resolvent-correction kernel on a spatial grid");
  auto* verify = app.add_subcommand("verify", "empirical remainder order vs the expansion");
  for (auto* cmd : {solve, sweep, scan, kernel, verify}) add_common(cmd, f);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  CLI::App* active = app.get_subcommands().front();
  RunConfig cfg;
  try {
    cfg = build_config(active, f);
    cfg.validate();
  } catch (const std::exception& e) {
    std::cerr << "configuration error: " << e.what() << "\n";
    return 2;
  }

  namespace io = resonance::io;
  try {
    if (active == solve) {
      const ResultRecord rec = io::run_solve(cfg);
      print_singularities(rec);
      std::cerr << "wall time: " << rec.wall_time_ms << " ms\n";
      emit_file(cfg, std::vector<ResultRecord>{rec});
    } else if (active == sweep) {
      const auto recs = io::run_sweep(cfg);
      bool failed = false;
      for (const auto& r : recs) {
        std::cout << "epsilon = " << io::format_double(r.config.params.epsilon) << ":\n";
        if (!r.error.empty()) {
          std::cout << "  solver error: " << r.error << "\n";
          failed = true;
          continue;
        }
        print_singularities(r);
      }
      emit_file(cfg, recs);
      if (failed) return 1;
    } else if (active == scan) {
      const auto rec = io::run_scan(cfg);
      std::cout << "min |D| = " << io::format_double(rec.min_abs)
                << "\nmedian |D| = " << io::format_double(rec.median_abs) << "\n";
      std::cerr << "wall time: " << rec.wall_time_ms << " ms\n";
      emit_file(cfg, rec);
    } else if (active == kernel) {
      const auto rec = io::run_kernel(cfg);
      std::cout << "sampled " << rec.xs.size() << " kernel values (channel " << cfg.channel_i
                << cfg.channel_j << ")\n";
      std::cerr << "wall time: " << rec.wall_time_ms << " ms\n";
      emit_file(cfg, rec);
    } else if (active == verify) {
      const ResultRecord rec = io::run_verify(cfg);
      std::cout << "case " << rec.regime.case_id
                << ": fitted remainder slope = " << rec.fit->fitted_slope << " (predicted "
                << rec.expansion->remainder_power << "), r^2 = " << rec.fit->r_squared << "\n";
      if (rec.fit->precision_floor_warning)
        std::cout << "warning: residuals at the precision floor were excluded\n";
      for (std::size_t i = 0; i < rec.fit->epsilons.size(); ++i)
        std::cout << "  eps = " << io::format_double(rec.fit->epsilons[i])
                  << "  residual = " << io::format_double(rec.fit->residuals[i]) << "\n";
      emit_file(cfg, std::vector<ResultRecord>{rec});
    }
  } catch (const std::invalid_argument& e) {
    std::cerr << "configuration error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "solver error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
