#include <cstdio>
#include <iostream>

#include <CLI11.hpp>

#include "homog/projection.hpp"
#include "homog/scenario.hpp"

namespace {

using namespace homog;

// Flags shared by the scenario-running subcommands; every config key can
// be overridden on the command line.
struct ScenarioFlags {
  std::string config_file;
  std::string scenario;
  std::string scheme;
  int nx{0};
  int ny{0};
  std::string phase_map;
  std::string output_dir;
  double cg_tol{-1.0};
  double newton_tol{-1.0};
  int n_steps{0};
  double eigenstrain_amplitude{-1.0};
  bool no_vtk{false};
  bool no_cuts{false};
};

void add_scenario_flags(CLI::App& cmd, ScenarioFlags& f) {
  cmd.add_option("--config", f.config_file, "key = value configuration file");
  cmd.add_option("--scenario", f.scenario,
                 "single_voxel | two_pillars | eshelby | damage | custom");
  cmd.add_option("--scheme", f.scheme, "derivative scheme");
  cmd.add_option("--nx", f.nx, "grid points in x");
  cmd.add_option("--ny", f.ny, "grid points in y (default: nx)");
  cmd.add_option("--phase-map", f.phase_map, "phase map CSV (custom scenario)");
  cmd.add_option("--output-dir", f.output_dir, "artifact directory");
  cmd.add_option("--cg-tol", f.cg_tol, "conjugate-gradient tolerance");
  cmd.add_option("--newton-tol", f.newton_tol, "Newton tolerance");
  cmd.add_option("--n-steps", f.n_steps, "load steps (damage)");
  cmd.add_option("--eigenstrain-amplitude", f.eigenstrain_amplitude,
                 "final eigenstrain amplitude (damage)");
  cmd.add_flag("--no-vtk", f.no_vtk, "skip VTK output");
  cmd.add_flag("--no-line-cuts", f.no_cuts, "skip line-cut CSVs");
}

ScenarioConfig resolve(const ScenarioFlags& f) {
  Config cfg;
  if (!f.config_file.empty()) cfg = read_config(f.config_file);
  if (!f.scenario.empty()) cfg["scenario"] = f.scenario;
  if (!f.scheme.empty()) cfg["scheme"] = f.scheme;
  if (f.nx > 0) cfg["nx"] = std::to_string(f.nx);
  if (f.ny > 0) cfg["ny"] = std::to_string(f.ny);
  if (!f.phase_map.empty()) cfg["phase_map"] = f.phase_map;
  if (!f.output_dir.empty()) cfg["output_dir"] = f.output_dir;
  if (f.cg_tol > 0.0) cfg["cg_tol"] = format_double(f.cg_tol);
  if (f.newton_tol > 0.0) cfg["newton_tol"] = format_double(f.newton_tol);
  if (f.n_steps > 0) cfg["n_steps"] = std::to_string(f.n_steps);
  if (f.eigenstrain_amplitude >= 0.0)
    cfg["eigenstrain_amplitude"] = format_double(f.eigenstrain_amplitude);
  if (f.no_vtk) cfg["vtk"] = "0";
  if (f.no_cuts) cfg["line_cuts"] = "0";
  return ScenarioConfig::from_config(cfg);
}

int run_solve(const ScenarioFlags& f) {
  const ScenarioConfig cfg = resolve(f);
  const RunSummary summary = run_scenario(cfg);
  std::cout << summary.manifest.dump(2) << '\n';
  if (!summary.converged) {
    std::cerr << "solver did not converge; diagnostic manifest written to "
              << cfg.output_dir << '\n';
    return 1;
  }
  return 0;
}

int run_validate_eshelby(ScenarioFlags f) {
  f.scenario = "eshelby";
  const ScenarioConfig cfg = resolve(f);
  const RunSummary summary = run_scenario(cfg);
  std::cout << "scheme: " << to_string(cfg.scheme) << '\n'
            << "interior mean error: "
            << summary.manifest.value("interior_mean_error", -1.0) << '\n'
            << "field L2 error:      " << summary.manifest.value("field_l2_error", -1.0)
            << '\n'
            << "artifacts in " << cfg.output_dir << '\n';
  return summary.converged ? 0 : 1;
}

int run_compare(const ScenarioFlags& f, const std::vector<std::string>& scheme_names) {
  const ScenarioConfig cfg = resolve(f);
  std::vector<Scheme> schemes;
  if (scheme_names.empty()) {
    schemes = all_schemes();
  } else {
    for (const std::string& name : scheme_names) schemes.push_back(parse_scheme(name));
  }
  const std::vector<SchemeRow> rows = compare_schemes(cfg, schemes);
  std::printf("%-18s %-14s %-14s %-14s\n", "scheme", "ringing", "residual", "oracle_err");
  for (const SchemeRow& row : rows) {
    if (row.skipped) {
      std::printf("%-18s skipped: %s\n", row.scheme.c_str(), row.skip_reason.c_str());
    } else if (row.oracle_error >= 0.0) {
      std::printf("%-18s %-14.6g %-14.6g %-14.6g\n", row.scheme.c_str(),
                  row.ringing_score, row.max_residual, row.oracle_error);
    } else {
      std::printf("%-18s %-14.6g %-14.6g %-14s\n", row.scheme.c_str(),
                  row.ringing_score, row.max_residual, "-");
    }
  }
  return 0;
}

int run_dump_symbols(const std::string& scheme_name, int nx, int ny) {
  const Scheme scheme = parse_scheme(scheme_name);
  if (ny <= 0) ny = nx;
  const Grid grid{nx, ny, 1.0, static_cast<double>(ny) / nx};
  check_admissible(scheme, grid);
  const WavevectorTable table = build_wavevectors(grid);
  const int nq = nb_quad(scheme);
  std::cout << "mx,my,kx,ky";
  for (int q = 0; q < nq; ++q)
    for (int axis = 0; axis < 2; ++axis)
      std::cout << ",reD_q" << q << (axis == 0 ? "x" : "y") << ",imD_q" << q
                << (axis == 0 ? "x" : "y");
  std::cout << '\n';
  for (const Wavevector& k : table) {
    std::cout << k.mx << ',' << k.my << ',' << format_double(k.kx) << ','
              << format_double(k.ky);
    for (int q = 0; q < nq; ++q) {
      for (int axis = 0; axis < 2; ++axis) {
        const Complex d = symbol(scheme, axis, q, k, grid);
        std::cout << ',' << format_double(d.real()) << ',' << format_double(d.imag());
      }
    }
    std::cout << '\n';
  }
  return 0;
}

int run_dump_projection(const std::string& scheme_name, const std::string& form_name,
                        int nx, int ny) {
  const Scheme scheme = parse_scheme(scheme_name);
  if (ny <= 0) ny = nx;
  const Grid grid{nx, ny, 1.0, static_cast<double>(ny) / nx};
  const ProjectionOperator op = form_name == "small_strain"
                                    ? build_small_strain_projection(grid, scheme)
                                    : build_projection(grid, scheme);
  std::cout << "k_index,mx,my,row,col,re,im\n";
  const WavevectorTable& table = op.wavevectors();
  for (int k = 0; k < static_cast<int>(table.size()); ++k) {
    const auto block = op.block(k);
    for (int r = 0; r < op.block_dim(); ++r)
      for (int c = 0; c < op.block_dim(); ++c)
        std::cout << k << ',' << table[k].mx << ',' << table[k].my << ',' << r << ','
                  << c << ',' << format_double(block(r, c).real()) << ','
                  << format_double(block(r, c).imag()) << '\n';
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"FFT-accelerated periodic homogenization of 2D microstructures"};
  app.require_subcommand(1);

  ScenarioFlags solve_flags;
  CLI::App* solve_cmd = app.add_subcommand("solve", "run a scenario solve");
  add_scenario_flags(*solve_cmd, solve_flags);

  ScenarioFlags eshelby_flags;
  CLI::App* eshelby_cmd =
      app.add_subcommand("validate-eshelby", "solve the inclusion benchmark and "
                                             "compare against the analytic field");
  add_scenario_flags(*eshelby_cmd, eshelby_flags);

  ScenarioFlags compare_flags;
  std::vector<std::string> compare_names;
  CLI::App* compare_cmd =
      app.add_subcommand("compare-schemes", "run one scenario per derivative scheme");
  add_scenario_flags(*compare_cmd, compare_flags);
  compare_cmd->add_option("--schemes", compare_names,
                          "schemes to compare (default: all six)");

  std::string dump_scheme{"fe_linear"};
  std::string dump_form{"finite_strain"};
  int dump_nx{17};
  int dump_ny{0};
  CLI::App* symbols_cmd =
      app.add_subcommand("dump-symbols", "derivative symbols over the wavevector grid");
  symbols_cmd->add_option("--scheme", dump_scheme, "derivative scheme");
  symbols_cmd->add_option("--nx", dump_nx, "grid points in x");
  symbols_cmd->add_option("--ny", dump_ny, "grid points in y (default: nx)");

  CLI::App* proj_cmd =
      app.add_subcommand("dump-projection", "per-wavevector projection blocks");
  proj_cmd->add_option("--scheme", dump_scheme, "derivative scheme");
  proj_cmd->add_option("--formulation", dump_form, "finite_strain | small_strain");
  proj_cmd->add_option("--nx", dump_nx, "grid points in x");
  proj_cmd->add_option("--ny", dump_ny, "grid points in y (default: nx)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (solve_cmd->parsed()) return run_solve(solve_flags);
    if (eshelby_cmd->parsed()) return run_validate_eshelby(eshelby_flags);
    if (compare_cmd->parsed()) return run_compare(compare_flags, compare_names);
    if (symbols_cmd->parsed()) return run_dump_symbols(dump_scheme, dump_nx, dump_ny);
    if (proj_cmd->parsed()) return run_dump_projection(dump_scheme, dump_form, dump_nx, dump_ny);
  } catch (const std::exception& err) {
    std::cerr << "error: " << err.what() << '\n';
    return 2;
  }
  return 0;
}
