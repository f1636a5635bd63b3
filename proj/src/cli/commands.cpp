#include "commands.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <random>
#include <set>

#include "config_io.hpp"
#include "levyspec/analysis.hpp"
#include "levyspec/error.hpp"
#include "levyspec/format.hpp"
#include "levyspec/oracle.hpp"
#include "levyspec/parallel.hpp"
#include "outputs.hpp"

#ifndef LEVYSPEC_VERSION
#define LEVYSPEC_VERSION "0.0.0"
#endif

namespace levyspec::cli {

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

json number_or_null(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

std::ofstream open_output(const fs::path& path) {
  std::ofstream f(path);
  if (!f) throw Error(ErrorKind::config, "cannot write '" + path.string() + "'");
  return f;
}

void write_json(const json& doc, const fs::path& path) {
  auto f = open_output(path);
  f << doc.dump(2) << '\n';
}

json grid_json(const Grid& g) {
  return {{"n_points", g.size()}, {"dx", g.dx()}, {"requested_dx", g.requested_dx()}, {"adjusted", g.adjusted()}};
}

json flags_json(const std::vector<bool>& v) {
  json a = json::array();
  for (bool b : v) a.push_back(b);
  return a;
}

// ---- solve ---------------------------------------------------------------

struct SolveOptions {
  std::string config;
  std::string output = ".";
  bool stream = false;
};

int cmd_solve(const SolveOptions& o, std::ostream& out) {
  const auto t_start = Clock::now();
  const SolverConfig config = load_config(o.config);
  const fs::path dir(o.output);
  fs::create_directories(dir);

  auto history = open_output(dir / "history.csv");
  write_history_header(config.n_states, history);
  if (o.stream) write_history_header(config.n_states, out);
  const double setup = seconds_since(t_start);

  const auto t_solve = Clock::now();
  const SpectralResult r = run_spectrum(config, [&](std::size_t k, std::span<const double> e) {
    write_history_row(k, e, history);
    if (o.stream) write_history_row(k, e, out);
  });
  const double solve = seconds_since(t_solve);
  history.close();

  const auto t_write = Clock::now();
  {
    auto f = open_output(dir / "energies.csv");
    write_energies_csv(r, f);
  }
  {
    auto f = open_output(dir / "eigenfunctions.csv");
    write_eigenfunctions_csv(r, f);
  }
  json manifest;
  manifest["version"] = LEVYSPEC_VERSION;
  manifest["command"] = "solve";
  manifest["config"] = config_to_json(config);
  manifest["grid"] = grid_json(r.grid);
  manifest["outputs"] = {"energies.csv", "eigenfunctions.csv", "history.csv", "manifest.json"};
  manifest["workers"] = default_workers();
  manifest["results"] = {{"iterations", r.iterations},
                         {"energies", r.energies},
                         {"converged", flags_json(r.converged)},
                         {"bound", flags_json(r.bound)},
                         {"bound_count", r.bound_count()}};
  manifest["timings"] = {{"setup_s", setup}, {"solve_s", solve}, {"write_s", seconds_since(t_write)}};
  write_json(manifest, dir / "manifest.json");

  if (!o.stream) {
    for (std::size_t i = 0; i < r.energies.size(); ++i)
      out << "E_" << i + 1 << " = " << format_double(r.energies[i]) << (r.converged[i] ? "" : "  (not converged)")
          << '\n';
  }
  return r.all_converged() ? kExitOk : kExitUnconverged;
}

// ---- sweep ---------------------------------------------------------------

struct SweepOptions {
  std::string config;
  std::string param;
  std::vector<double> values;
  std::string output = ".";
};

int cmd_sweep(const SweepOptions& o, std::ostream& out) {
  if (o.values.empty()) throw Error(ErrorKind::config, "sweep needs at least one value");
  const SolverConfig base = load_config(o.config);
  const std::size_t count = o.values.size();
  std::vector<std::optional<SpectralResult>> results(count);
  std::vector<std::string> failures(count);
  std::vector<double> timings(count, 0.0);

  // Runs are independent; each uses one worker so the pool covers the values.
  parallel_for(count, default_workers(), [&](std::size_t b, std::size_t e) {
    for (std::size_t v = b; v < e; ++v) {
      const auto t0 = Clock::now();
      try {
        SolverConfig c = with_parameter(base, o.param, o.values[v]);
        c.workers = 1;
        results[v] = run_spectrum(c);
      } catch (const std::exception& ex) {
        failures[v] = ex.what();
      }
      timings[v] = seconds_since(t0);
    }
  });

  std::vector<SweepRow> rows;
  json runs = json::array();
  bool clean = true, failed = false;
  for (std::size_t v = 0; v < count; ++v) {
    json run = {{"param", o.values[v]}, {"time_s", timings[v]}};
    if (!results[v]) {
      run["status"] = "error";
      run["message"] = failures[v];
      failed = true;
    } else {
      const auto& r = *results[v];
      run["status"] = r.all_converged() ? "ok" : "unconverged";
      run["iterations"] = r.iterations;
      run["bound_count"] = r.bound_count();
      clean = clean && r.all_converged();
      for (std::size_t i = 0; i < r.energies.size(); ++i)
        rows.push_back({o.values[v], static_cast<int>(i + 1), r.energies[i], static_cast<bool>(r.converged[i])});
    }
    runs.push_back(run);
  }

  const fs::path dir(o.output);
  fs::create_directories(dir);
  {
    auto f = open_output(dir / "sweep.csv");
    write_sweep_csv(rows, f);
  }
  json manifest;
  manifest["version"] = LEVYSPEC_VERSION;
  manifest["command"] = "sweep";
  manifest["config"] = config_to_json(base);
  manifest["param"] = o.param;
  manifest["values"] = o.values;
  manifest["runs"] = runs;
  manifest["outputs"] = {"sweep.csv", "manifest.json"};
  write_json(manifest, dir / "manifest.json");
  write_sweep_csv(rows, out);
  // A run that could not start is a configuration error; it outranks non-convergence.
  if (failed) return kExitUsage;
  return clean ? kExitOk : kExitUnconverged;
}

// ---- analyze -------------------------------------------------------------

struct AnalyzeOptions {
  std::string input;
  std::string mode;
  int state = 1;
  std::optional<double> param_value;
  std::optional<double> V0;
  std::vector<double> masses;
  double a = 10.0;
  double dx = 0.001;
};

std::vector<SweepRow> load_sweep(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw Error(ErrorKind::config, "cannot read '" + path + "'");
  return read_sweep_csv(f);
}

json fit_json(const FitResult& r) {
  return {{"slope", r.slope},
          {"slope_error", r.slope_error},
          {"intercept", r.intercept},
          {"intercept_error", r.intercept_error},
          {"n_points", r.n_points}};
}

int cmd_analyze(const AnalyzeOptions& o, std::ostream& out) {
  json report;
  report["mode"] = o.mode;
  if (o.mode == "line-fit") {
    if (o.input.empty()) throw Error(ErrorKind::config, "line-fit needs a sweep CSV");
    std::vector<Point> pts;
    for (const auto& r : load_sweep(o.input))
      if (r.n == o.state) pts.emplace_back(std::log(2.0 * r.param), std::log(r.E));
    if (pts.size() < 2) throw Error(ErrorKind::config, "line-fit needs at least 2 rows for the chosen state");
    const FitResult fit = fit_line(pts);
    report["state"] = o.state;
    report["x"] = "ln(2 param)";
    report["y"] = "ln(E)";
    report["fit"] = fit_json(fit);
    report["label_from_intercept"] = label_from_intercept(fit.intercept);
  } else if (o.mode == "power-fit") {
    if (o.input.empty()) throw Error(ErrorKind::config, "power-fit needs a sweep CSV");
    const auto rows = load_sweep(o.input);
    std::set<double> params;
    for (const auto& r : rows) params.insert(r.param);
    double chosen = 0.0;
    if (o.param_value) {
      chosen = *o.param_value;
    } else if (params.size() == 1) {
      chosen = *params.begin();
    } else {
      throw Error(ErrorKind::config, "sweep has several parameter values; pick one with --param-value");
    }
    std::vector<Point> pts;
    for (const auto& r : rows)
      if (r.param == chosen) pts.emplace_back(static_cast<double>(r.n), r.E);
    if (pts.size() < 2) throw Error(ErrorKind::config, "power-fit needs at least 2 states");
    const FitResult fit = fit_power(pts);
    report["param"] = chosen;
    report["exponent"] = fit.slope;
    report["exponent_error"] = fit.slope_error;
    report["prefactor"] = fit.intercept;
    report["prefactor_error"] = fit.intercept_error;
    report["n_points"] = fit.n_points;
  } else if (o.mode == "count") {
    if (!o.V0) throw Error(ErrorKind::config, "count mode needs --V0");
    json entries = json::array();
    if (!o.input.empty()) {
      std::map<double, int> solved;
      for (const auto& r : load_sweep(o.input)) {
        solved.try_emplace(r.param, 0);
        if (r.converged && r.E < *o.V0) ++solved[r.param];
      }
      for (const auto& [m, n] : solved)
        entries.push_back({{"mass", m}, {"computed", n}, {"standard", bound_state_count(m, *o.V0)}});
    } else {
      if (o.masses.empty()) throw Error(ErrorKind::config, "count mode needs a sweep CSV or --masses");
      for (double m : o.masses) entries.push_back({{"mass", m}, {"standard", bound_state_count(m, *o.V0)}});
    }
    report["V0"] = *o.V0;
    report["counts"] = entries;
  } else if (o.mode == "limits") {
    if (o.masses.empty()) throw Error(ErrorKind::config, "limits mode needs --masses");
    const Grid g = make_grid(o.a, o.dx);
    const auto gauss = GridFunction::sample(g, [](double x) { return std::exp(-x * x); });
    NonlocalOptions opts;
    opts.boundary = Boundary::zero_extension;
    opts.singular_correction = true;
    json entries = json::array();
    for (const auto& e : operator_limit_report(o.masses, gauss, opts))
      entries.push_back({{"m", e.m}, {"r_ur", number_or_null(e.r_ur)}, {"r_nr", number_or_null(e.r_nr)}});
    report["a"] = o.a;
    report["dx"] = o.dx;
    report["test_function"] = "exp(-x^2)";
    report["entries"] = entries;
  } else {
    throw Error(ErrorKind::config, "mode must be line-fit, power-fit, count or limits");
  }
  out << report.dump(2) << '\n';
  return kExitOk;
}

// ---- units ---------------------------------------------------------------

struct UnitsOptions {
  std::string kind;
  std::optional<double> b;
  std::optional<double> k;
  double compton = kElectronCompton;
  double ratio = kElectronNeutrinoMassRatio;
  std::optional<double> energy;
  std::optional<double> energy_ev;
  std::optional<double> a_check;
};

int cmd_units(const UnitsOptions& o, std::ostream& out) {
  json r;
  r["hbar_c_eV_m"] = kHbarC;
  if (o.kind == "well") {
    if (!o.b) throw Error(ErrorKind::config, "well units need --b (meters)");
    const UnitScales s = well_unit_scales(*o.b, o.compton);
    r["b_m"] = s.b;
    r["energy_unit_eV"] = s.energy_unit;
    r["compton_m"] = s.compton_wavelength;
    r["mass"] = s.mass;
    if (o.energy) r["energy_eV"] = well_to_dimensional(*o.energy, *o.b);
    if (o.energy_ev) r["energy"] = well_from_dimensional(*o.energy_ev, *o.b);
  } else if (o.kind == "oscillator") {
    if (!o.k) throw Error(ErrorKind::config, "oscillator units need --k (eV/m^2)");
    r["k_eV_per_m2"] = *o.k;
    r["energy_unit_eV"] = oscillator_energy_scale(*o.k);
    r["length_factor_per_m"] = oscillator_length_factor(*o.k);
    if (o.energy) r["energy_eV"] = oscillator_to_dimensional(*o.energy, *o.k);
    if (o.energy_ev) r["energy"] = oscillator_from_dimensional(*o.energy_ev, *o.k);
    if (o.a_check) r["a_m"] = oscillator_domain_bound(*o.a_check, *o.k);
  } else if (o.kind == "compton") {
    const double c = compton_from_mass_ratio(o.compton, o.ratio);
    r["reference_compton_m"] = o.compton;
    r["mass_ratio"] = o.ratio;
    r["compton_m"] = c;
    r["compton_angstrom"] = c * 1e10;
  } else {
    throw Error(ErrorKind::config, "units kind must be well, oscillator or compton");
  }
  out << r.dump(2) << '\n';
  return kExitOk;
}

// ---- oracle-compare -------------------------------------------------------

int cmd_oracle_compare(const std::string& path, std::ostream& out) {
  const SolverConfig config = load_config(path);
  const Grid grid = make_grid(config.a, config.dx);
  const auto t0 = Clock::now();
  const DenseEigenpairs dense = dense_eigensolve(assemble_dense(config.hamiltonian, grid), config.n_states);
  const double dense_s = seconds_since(t0);
  const auto t1 = Clock::now();
  const SpectralResult r = run_spectrum(config);
  const double prop_s = seconds_since(t1);

  json rows = json::array();
  bool ok = true;
  for (std::size_t i = 0; i < config.n_states; ++i) {
    const double e = dense.values[i];
    const double tol = std::max(1e-2, 5.0 * config.h * e * e);
    const double diff = std::abs(r.energies[i] - e);
    ok = ok && diff <= tol && r.converged[i];
    rows.push_back({{"n", i + 1},
                    {"propagator", r.energies[i]},
                    {"oracle", e},
                    {"difference", diff},
                    {"tolerance", tol},
                    {"converged", static_cast<bool>(r.converged[i])}});
  }
  json report = {{"config", config_to_json(config)},
                 {"states", rows},
                 {"agree", ok},
                 {"timings", {{"oracle_s", dense_s}, {"propagator_s", prop_s}}}};
  out << report.dump(2) << '\n';
  return ok ? kExitOk : kExitUnconverged;
}

// ---- bench ---------------------------------------------------------------

struct BenchOptions {
  double a = 50.0;
  double dx = 0.001;
  double mass = 0.0;
  int repeats = 3;
  unsigned seed = 12345;
};

int cmd_bench(const BenchOptions& o, std::ostream& out) {
  if (o.repeats < 1) throw Error(ErrorKind::config, "field 'repeats': must be >= 1");
  const Grid g = make_grid(o.a, o.dx);
  const KernelSpec spec = o.mass > 0.0 ? KernelSpec::quasirelativistic(o.mass) : KernelSpec::cauchy();
  const NonlocalOperator op(tabulate_kernel(spec, g));
  std::mt19937 rng(o.seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::vector<double> f(g.size()), direct(g.size()), transform(g.size());
  double t_direct = 0.0, t_transform = 0.0, worst = 0.0;
  for (int r = 0; r < o.repeats; ++r) {
    for (double& v : f) v = u(rng);
    auto t0 = Clock::now();
    op.apply(f, direct, Backend::direct, default_workers());
    t_direct += seconds_since(t0);
    t0 = Clock::now();
    op.apply(f, transform, Backend::transform, 1);
    t_transform += seconds_since(t0);
    double diff = 0.0, scale = 0.0;
    for (std::size_t i = 0; i < f.size(); ++i) {
      diff = std::max(diff, std::abs(direct[i] - transform[i]));
      scale = std::max(scale, std::abs(direct[i]));
    }
    worst = std::max(worst, diff / scale);
  }
  json r = {{"n_points", g.size()},
            {"offsets", op.table().offsets()},
            {"repeats", o.repeats},
            {"direct_s", t_direct / o.repeats},
            {"transform_s", t_transform / o.repeats},
            {"speedup", t_direct / t_transform},
            {"max_relative_difference", worst}};
  out << r.dump(2) << '\n';
  return kExitOk;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Spectral solver for nonlocal Schrodinger-type Hamiltonians"};
  app.set_version_flag("--version", LEVYSPEC_VERSION);
  app.require_subcommand(1);

  SolveOptions solve;
  auto* s = app.add_subcommand("solve", "Run one configuration and write CSV/JSON results");
  s->add_option("config", solve.config, "JSON config file")->required();
  s->add_option("-o,--output", solve.output, "Output directory");
  s->add_flag("--stream", solve.stream, "Echo per-iteration energies to stdout");

  SweepOptions sweep;
  auto* w = app.add_subcommand("sweep", "Repeat a configuration over values of one parameter");
  w->add_option("config", sweep.config, "Base JSON config file")->required();
  w->add_option("--param", sweep.param, "mass, V0 or a")->required();
  w->add_option("--values", sweep.values, "Comma-separated values")->delimiter(',');
  w->add_option("-o,--output", sweep.output, "Output directory");

  AnalyzeOptions analyze;
  auto* an = app.add_subcommand("analyze", "Fits, bound-state counts and operator-limit reports");
  an->add_option("input", analyze.input, "Sweep CSV (param,n,E,converged)");
  an->add_option("--mode", analyze.mode, "line-fit, power-fit, count or limits")->required();
  an->add_option("--state", analyze.state, "State label used by line-fit");
  an->add_option("--param-value", analyze.param_value, "Sweep value used by power-fit");
  an->add_option("--V0", analyze.V0, "Well depth for count mode");
  an->add_option("--masses", analyze.masses, "Comma-separated masses")->delimiter(',');
  an->add_option("--a", analyze.a, "Half-width for limits mode");
  an->add_option("--dx", analyze.dx, "Spacing for limits mode");

  UnitsOptions units;
  auto* un = app.add_subcommand("units", "Convert between dimensionless and physical units");
  un->add_option("kind", units.kind, "well, oscillator or compton")->required();
  un->add_option("--b", units.b, "Well half-width in meters");
  un->add_option("--k", units.k, "Spring constant in eV/m^2");
  un->add_option("--compton", units.compton, "Reduced Compton wavelength in meters");
  un->add_option("--ratio", units.ratio, "Mass ratio reference/particle for compton");
  un->add_option("--energy", units.energy, "Dimensionless energy to convert to eV");
  un->add_option("--energy-ev", units.energy_ev, "Energy in eV to convert to dimensionless");
  un->add_option("--a-check", units.a_check, "Dimensionless oscillator domain bound");

  std::string oracle_config;
  auto* oc = app.add_subcommand("oracle-compare", "Compare the propagator with dense diagonalization");
  oc->add_option("config", oracle_config, "JSON config file (at most 5000 grid points)")->required();

  BenchOptions bench;
  auto* be = app.add_subcommand("bench", "Time the direct and transform convolution backends");
  be->add_option("--a", bench.a, "Half-width");
  be->add_option("--dx", bench.dx, "Spacing");
  be->add_option("--mass", bench.mass, "Quasirelativistic mass (0 = Cauchy)");
  be->add_option("--repeats", bench.repeats, "Random functions to time");
  be->add_option("--seed", bench.seed, "RNG seed");

  auto* ref = app.add_subcommand("reference", "Print the embedded Cauchy oscillator reference table as CSV");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*s) return cmd_solve(solve, out);
    if (*w) return cmd_sweep(sweep, out);
    if (*an) return cmd_analyze(analyze, out);
    if (*un) return cmd_units(units, out);
    if (*oc) return cmd_oracle_compare(oracle_config, out);
    if (*be) return cmd_bench(bench, out);
    if (*ref) {
      write_reference_csv(out);
      return kExitOk;
    }
  } catch (const Error& e) {
    err << "error (" << to_string(e.kind()) << "): " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  }
  return kExitUsage;
}

}  // namespace levyspec::cli
