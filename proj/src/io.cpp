#include "resonance/io.hpp"

#include <omp.h>

#include <algorithm>
#include <cctype>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <ostream>
#include <sstream>

#include "json.hpp"

namespace resonance::io {

namespace {

using json = nlohmann::ordered_json;
using rootfinder::Regime;
using rootfinder::Singularity;
using rootfinder::SingularityKind;

double now_ms() {
  using clock = std::chrono::steady_clock;
  return std::chrono::duration<double, std::milli>(clock::now().time_since_epoch()).count();
}

double parse_number(const std::string& s) {
  std::size_t pos = 0;
  const double v = std::stod(s, &pos);
  while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos]))) ++pos;
  if (pos != s.size()) throw std::invalid_argument("malformed number: '" + s + "'");
  return v;
}

int parse_int(const std::string& s) {
  const double v = parse_number(s);
  if (v != std::floor(v)) throw std::invalid_argument("expected integer: '" + s + "'");
  return static_cast<int>(v);
}

json complex_json(const Complex& z) {
  return json{{"re", z.real()}, {"im", z.imag()}};
}

json singularity_json(const Singularity& s) {
  return json{{"kind", rootfinder::to_string(s.kind)},
              {"method", rootfinder::to_string(s.method)},
              {"sheet", s.sheet},
              {"location", complex_json(s.location)},
              {"residual", s.residual}};
}

json config_json(const RunConfig& c) {
  json j{{"dimension", c.params.dim.value()}, {"theta0", c.params.theta0},
         {"c", c.params.c},                   {"b", c.params.b},
         {"epsilon", c.params.epsilon},       {"tol", c.tol},
         {"max_iter", c.max_iter},            {"scan_min", c.scan_min},
         {"scan_max", c.scan_max},            {"grid_n", c.grid_n},
         {"format", c.format}};
  if (!c.eps_ladder.empty()) j["eps_ladder"] = c.eps_ladder;
  return j;
}

json fit_json(const asymptotics::OrderFit& f) {
  return json{{"epsilons", f.epsilons},
              {"residuals", f.residuals},
              {"fitted_slope", f.fitted_slope},
              {"r_squared", f.r_squared},
              {"precision_floor_warning", f.precision_floor_warning},
              {"excluded_points", f.excluded_points}};
}

json expansion_json(const asymptotics::ExpansionResult& e) {
  json terms = json::array();
  for (const auto& t : e.terms)
    terms.push_back(json{{"coefficient", complex_json(t.coefficient)},
                         {"power", t.power},
                         {"log_power", t.log_power}});
  return json{{"terms", terms},
              {"remainder_power", e.remainder_power},
              {"remainder_log_power", e.remainder_log_power},
              {"remainder_has_log", e.remainder_has_log}};
}

}  // namespace

std::string version() { return "0.1.0"; }

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void RunConfig::validate() const {
  params.validate();
  if (params.epsilon <= 0.0 && eps_ladder.empty())
    throw std::invalid_argument("config: epsilon must be > 0");
  for (std::size_t i = 0; i + 1 < eps_ladder.size(); ++i)
    if (!(eps_ladder[i] > eps_ladder[i + 1]))
      throw std::invalid_argument("config: eps_ladder must be strictly decreasing");
  for (double e : eps_ladder)
    if (!(e > 0.0)) throw std::invalid_argument("config: ladder epsilons must be > 0");
  if (!(tol > 0.0)) throw std::invalid_argument("config: tol must be > 0");
  if (max_iter < 1) throw std::invalid_argument("config: max_iter must be >= 1");
  if (grid_n < 16) throw std::invalid_argument("config: grid density must be >= 16");
  if (!(scan_min > 0.0) || !(scan_max > scan_min))
    throw std::invalid_argument("config: need 0 < scan_min < scan_max");
  if (format != "csv" && format != "json")
    throw std::invalid_argument("config: format must be csv or json");
  if (channel_i < 0 || channel_i > 1 || channel_j < 0 || channel_j > 1)
    throw std::invalid_argument("config: channels are 0 and 1");
  if (kernel_sheet != 0 && kernel_sheet != -1)
    throw std::invalid_argument("config: kernel sheet must be 0 or -1");
  if (!(x_min > 0.0) || !(x_max > x_min) || !(xprime > 0.0))
    throw std::invalid_argument("config: need 0 < x_min < x_max and xprime > 0");
}

std::vector<double> parse_ladder(const std::string& spec) {
  std::vector<double> ladder;
  if (spec.rfind("geom:", 0) == 0) {
    const std::string body = spec.substr(5);
    const auto p1 = body.find(':');
    const auto p2 = body.find(':', p1 == std::string::npos ? p1 : p1 + 1);
    if (p1 == std::string::npos || p2 == std::string::npos)
      throw std::invalid_argument("ladder: expected geom:<first>:<last>:<count>");
    const double first = parse_number(body.substr(0, p1));
    const double last = parse_number(body.substr(p1 + 1, p2 - p1 - 1));
    const int count = parse_int(body.substr(p2 + 1));
    if (count < 2 || !(first > last) || !(last > 0.0))
      throw std::invalid_argument("ladder: need first > last > 0 and count >= 2");
    const double ratio = std::pow(last / first, 1.0 / (count - 1));
    double v = first;
    for (int i = 0; i < count; ++i, v *= ratio) ladder.push_back(v);
    ladder.back() = last;
    return ladder;
  }
  std::stringstream ss(spec);
  std::string item;
  while (std::getline(ss, item, ',')) ladder.push_back(parse_number(item));
  if (ladder.empty()) throw std::invalid_argument("ladder: empty spec");
  return ladder;
}

void apply_key(RunConfig& cfg, const std::string& key, const std::string& value) {
  if (key == "dimension")
    cfg.params.dim = riemann::Dimension(parse_int(value));
  else if (key == "theta0")
    cfg.params.theta0 = parse_number(value);
  else if (key == "c")
    cfg.params.c = parse_number(value);
  else if (key == "b")
    cfg.params.b = parse_number(value);
  else if (key == "epsilon")
    cfg.params.epsilon = parse_number(value);
  else if (key == "eps_ladder")
    cfg.eps_ladder = parse_ladder(value);
  else if (key == "tol")
    cfg.tol = parse_number(value);
  else if (key == "max_iter")
    cfg.max_iter = parse_int(value);
  else if (key == "scan_min")
    cfg.scan_min = parse_number(value);
  else if (key == "scan_max")
    cfg.scan_max = parse_number(value);
  else if (key == "grid_n")
    cfg.grid_n = parse_int(value);
  else if (key == "out")
    cfg.out = value;
  else if (key == "format")
    cfg.format = value;
  else if (key == "kernel_z_re")
    cfg.kernel_z_re = parse_number(value);
  else if (key == "kernel_z_im")
    cfg.kernel_z_im = parse_number(value);
  else if (key == "kernel_sheet")
    cfg.kernel_sheet = parse_int(value);
  else if (key == "channel_i")
    cfg.channel_i = parse_int(value);
  else if (key == "channel_j")
    cfg.channel_j = parse_int(value);
  else if (key == "x_min")
    cfg.x_min = parse_number(value);
  else if (key == "x_max")
    cfg.x_max = parse_number(value);
  else if (key == "xprime")
    cfg.xprime = parse_number(value);
  else
    throw std::invalid_argument("config: unknown key '" + key + "'");
}

RunConfig load_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("config: cannot open '" + path + "'");
  RunConfig cfg;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    const auto notspace = line.find_first_not_of(" \t\r");
    if (notspace == std::string::npos) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw std::invalid_argument("config: line " + std::to_string(lineno) + ": expected key=value");
    auto trim = [](std::string s) {
      const auto b = s.find_first_not_of(" \t\r");
      const auto e = s.find_last_not_of(" \t\r");
      return b == std::string::npos ? std::string{} : s.substr(b, e - b + 1);
    };
    apply_key(cfg, trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
  }
  return cfg;
}

ResultRecord run_solve(const RunConfig& cfg) {
  cfg.validate();
  const double t0 = now_ms();
  ResultRecord rec;
  rec.config = cfg;
  const ModelParams& p = cfg.params;
  rec.regime = rootfinder::classify_regime(p);
  const Regime& regime = rec.regime;

  if (regime.case_id == 4 && regime.theta0_class == rootfinder::Theta0Class::zero) {
    // three-root cluster: eigenvalue plus the conjugate off-axis pair
    const double radius = 10.0 * std::pow(p.epsilon, 4.0 / 3.0);
    for (const auto& s : rootfinder::root_cluster(p, radius)) rec.singularities.push_back(s);
  } else {
    if (regime.has_resonance()) {
      auto [res, trace] = rootfinder::resonance_fixed_point(p, regime, cfg.tol, cfg.max_iter);
      rec.singularities.push_back(res);
    }
    if (regime.has_near_origin_eigenvalue()) {
      try {
        const auto [lo, hi] = rootfinder::regime_bracket(p, regime);
        rec.singularities.push_back(rootfinder::eigenvalue_bisection(p, lo, hi));
      } catch (const rootfinder::UnsupportedRegimeError&) {
        // eigenvalue below the representable range (d = 2 near-threshold case)
      }
    }
  }
  if (regime.case_id == 6) {
    const auto zr = rootfinder::zero_resonance_detector(p);
    if (zr.present && rootfinder::verify_resonant_state(p))
      rec.singularities.push_back(Singularity{SingularityKind::zero_energy_resonance,
                                              Complex(0.0, 0.0), 0,
                                              rootfinder::SolverMethod::limit_detector, 0.0});
  }
  if (regime.has_runaway_eigenvalue()) {
    const auto deep = rootfinder::deep_eigenvalue_search(p);
    rec.deep_log_lambda = deep.log_lambda;
    if (deep.singularity) rec.singularities.push_back(*deep.singularity);
  }
  rec.eigenvalue_window = rootfinder::eigenvalue_free_window(p, regime);

  const auto grid = scan::log_grid(cfg.scan_min, cfg.scan_max, cfg.grid_n);
  auto profile = scan::abs_dispersion_profile_parallel(p, grid);
  rec.scan_min_abs = *std::min_element(profile.begin(), profile.end());
  rec.scan_median = scan::median(std::move(profile));
  try {
    rec.expansion = asymptotics::leading_order(p, regime);
  } catch (const rootfinder::UnsupportedRegimeError&) {
    // the zero-energy regime has no coordinate expansion
  }
  rec.wall_time_ms = now_ms() - t0;
  return rec;
}

std::vector<ResultRecord> run_sweep(const RunConfig& cfg) {
  cfg.validate();
  std::vector<double> ladder = cfg.eps_ladder;
  if (ladder.empty()) ladder.push_back(cfg.params.epsilon);
  std::vector<ResultRecord> records(ladder.size());
  const int cap = scan::solver_threads();
  const int threads = cap > 0 ? cap : omp_get_max_threads();
  const std::size_t n = ladder.size();
#pragma omp parallel for schedule(dynamic) num_threads(threads)
  for (std::size_t i = 0; i < n; ++i) {
    RunConfig point = cfg;
    point.params.epsilon = ladder[i];
    point.eps_ladder.clear();
    try {
      records[i] = run_solve(point);
    } catch (const std::exception& e) {
      records[i].config = point;
      records[i].regime = rootfinder::classify_regime(point.params);
      records[i].error = e.what();
    }
  }
  return records;
}

ScanRecord run_scan(const RunConfig& cfg) {
  cfg.validate();
  const double t0 = now_ms();
  ScanRecord rec;
  rec.config = cfg;
  rec.lambdas = scan::log_grid(cfg.scan_min, cfg.scan_max, cfg.grid_n);
  rec.abs_dispersion = scan::abs_dispersion_profile_parallel(cfg.params, rec.lambdas);
  rec.min_abs = *std::min_element(rec.abs_dispersion.begin(), rec.abs_dispersion.end());
  rec.median_abs = scan::median(rec.abs_dispersion);
  rec.wall_time_ms = now_ms() - t0;
  return rec;
}

KernelRecord run_kernel(const RunConfig& cfg) {
  cfg.validate();
  const double t0 = now_ms();
  KernelRecord rec;
  rec.config = cfg;
  rec.xs.resize(cfg.grid_n);
  for (int i = 0; i < cfg.grid_n; ++i)
    rec.xs[i] = cfg.x_min + (cfg.x_max - cfg.x_min) * i / (cfg.grid_n - 1);
  const riemann::SheetPoint z{Complex(cfg.kernel_z_re, cfg.kernel_z_im), cfg.kernel_sheet};
  rec.values = scan::kernel_profile_parallel(cfg.params, z, 0, cfg.channel_i, cfg.channel_j,
                                             rec.xs, cfg.xprime);
  rec.wall_time_ms = now_ms() - t0;
  return rec;
}

ResultRecord run_verify(const RunConfig& cfg) {
  cfg.validate();
  if (cfg.eps_ladder.size() < 4)
    throw std::invalid_argument("verify: need an eps_ladder with at least 4 points");
  const double t0 = now_ms();
  ResultRecord rec;
  rec.config = cfg;
  rec.regime = rootfinder::classify_regime(cfg.params);
  rec.expansion = asymptotics::leading_order(cfg.params, rec.regime);

  std::map<double, Complex> numeric;
  for (double eps : cfg.eps_ladder) {
    ModelParams p = cfg.params;
    p.epsilon = eps;
    Complex loc;
    if (rec.regime.has_resonance()) {
      auto [res, trace] = rootfinder::resonance_fixed_point(p, rec.regime, cfg.tol, cfg.max_iter);
      loc = res.location;
    } else if (rec.regime.has_near_origin_eigenvalue()) {
      const auto [lo, hi] = rootfinder::regime_bracket(p, rec.regime);
      loc = rootfinder::eigenvalue_bisection(p, lo, hi).location;
    } else {
      throw rootfinder::UnsupportedRegimeError("verify: regime has no tracked singularity");
    }
    numeric[eps] = loc;
    Singularity s{rec.regime.has_resonance() ? SingularityKind::resonance
                                             : SingularityKind::isolated_eigenvalue,
                  loc, rec.regime.has_resonance() ? -1 : 0,
                  rec.regime.has_resonance() ? rootfinder::SolverMethod::fixed_point
                                             : rootfinder::SolverMethod::bisection,
                  0.0};
    rec.singularities.push_back(s);
  }
  rec.fit = asymptotics::fit_remainder_order(numeric, *rec.expansion);
  rec.wall_time_ms = now_ms() - t0;
  return rec;
}

// ---- persistence ------------------------------------------------------------

void write_csv(std::ostream& os, const std::vector<ResultRecord>& records) {
  os << "dimension,theta0,c,b,epsilon,case,kind,method,sheet,re_location,im_location,"
        "residual,error\n";
  for (const auto& r : records) {
    const auto& p = r.config.params;
    auto prefix = [&](std::ostream& o) {
      o << p.dim.value() << ',' << format_double(p.theta0) << ',' << format_double(p.c) << ','
        << format_double(p.b) << ',' << format_double(p.epsilon) << ',' << r.regime.case_id;
    };
    if (!r.error.empty()) {
      prefix(os);
      std::string msg = r.error;
      for (auto& ch : msg)
        if (ch == ',' || ch == '\n') ch = ';';
      os << ",,,,,," << msg << '\n';
      continue;
    }
    for (const auto& s : r.singularities) {
      prefix(os);
      os << ',' << rootfinder::to_string(s.kind) << ',' << rootfinder::to_string(s.method) << ','
         << s.sheet << ',' << format_double(s.location.real()) << ','
         << format_double(s.location.imag()) << ',' << format_double(s.residual) << ",\n";
    }
  }
}

void write_json(std::ostream& os, const std::vector<ResultRecord>& records) {
  json out;
  out["library_version"] = version();
  json arr = json::array();
  for (const auto& r : records) {
    json jr;
    jr["config"] = config_json(r.config);
    jr["case"] = r.regime.case_id;
    json sing = json::array();
    for (const auto& s : r.singularities) sing.push_back(singularity_json(s));
    jr["singularities"] = sing;
    if (r.scan_min_abs) jr["scan_min_abs"] = *r.scan_min_abs;
    if (r.scan_median) jr["scan_median"] = *r.scan_median;
    if (r.deep_log_lambda) jr["deep_log_lambda"] = *r.deep_log_lambda;
    if (r.eigenvalue_window)
      jr["eigenvalue_window"] = json{{"bound", r.eigenvalue_window->bound},
                                     {"clear", r.eigenvalue_window->clear}};
    if (r.expansion) jr["expansion"] = expansion_json(*r.expansion);
    if (r.fit) jr["fit"] = fit_json(*r.fit);
    if (!r.error.empty()) jr["error"] = r.error;
    arr.push_back(jr);
  }
  out["records"] = arr;
  os << out.dump(2) << '\n';
}

void write_csv(std::ostream& os, const ScanRecord& record) {
  os << "lambda,abs_dispersion\n";
  for (std::size_t i = 0; i < record.lambdas.size(); ++i)
    os << format_double(record.lambdas[i]) << ',' << format_double(record.abs_dispersion[i])
       << '\n';
}

void write_json(std::ostream& os, const ScanRecord& record) {
  json out;
  out["library_version"] = version();
  out["config"] = config_json(record.config);
  out["min_abs"] = record.min_abs;
  out["median_abs"] = record.median_abs;
  out["lambda"] = record.lambdas;
  out["abs_dispersion"] = record.abs_dispersion;
  os << out.dump(2) << '\n';
}

void write_csv(std::ostream& os, const KernelRecord& record) {
  os << "x,re_value,im_value\n";
  for (std::size_t i = 0; i < record.xs.size(); ++i)
    os << format_double(record.xs[i]) << ',' << format_double(record.values[i].real()) << ','
       << format_double(record.values[i].imag()) << '\n';
}

void write_json(std::ostream& os, const KernelRecord& record) {
  json out;
  out["library_version"] = version();
  out["config"] = config_json(record.config);
  out["x"] = record.xs;
  json vals = json::array();
  for (const auto& v : record.values) vals.push_back(complex_json(v));
  out["values"] = vals;
  os << out.dump(2) << '\n';
}

}  // namespace resonance::io
