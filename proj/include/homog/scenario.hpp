#ifndef HOMOG_SCENARIO_HPP
#define HOMOG_SCENARIO_HPP

#include <string>
#include <vector>

#include <json.hpp>

#include "homog/io.hpp"
#include "homog/solver.hpp"

namespace homog {

/**
 * Scenario selection plus the handful of knobs the presets allow to be
 * overridden. Zero / negative sentinel values mean "use the preset
 * default"; presets are resolved by build_scenario.
 */
struct ScenarioConfig {
  std::string scenario{"single_voxel"};  // single_voxel | two_pillars | eshelby | damage | custom
  Scheme scheme{Scheme::fe_linear};
  int nx{0};
  int ny{0};
  std::string phase_map_file;  // required for custom, optional override for damage
  std::string output_dir{"out"};
  SolverConfig solver{};
  int n_steps{0};
  double eigenstrain_amplitude{-1.0};
  bool vtk{true};
  bool line_cuts{true};
  Config raw;  // custom-scenario phase table and any extra keys, echoed verbatim

  static ScenarioConfig from_config(const Config& cfg);
  Config to_config() const;
};

/// One line cut: tensor component (i, j) of the result field along row J.
struct LineCut {
  int row;
  int i;
  int j;
  std::string label;
};

/// A fully resolved scenario: geometry, materials, load and output hints.
struct ScenarioSetup {
  Grid grid;
  PhaseMap phases;
  LoadCase load;
  std::vector<LineCut> cuts;
  bool cuts_on_stress{true};  // false: cut the strain / deformation field
  int ringing_i{0};           // component scored for ringing
  int ringing_j{1};
};

ScenarioSetup build_scenario(const ScenarioConfig& cfg);

struct RunSummary {
  bool converged{false};
  nlohmann::json manifest;
};

/**
 * Runs the configured scenario, writing field CSV/VTK files, line cuts,
 * ringing scores, the phase map and a manifest (manifest.json plus a
 * replayable key-value copy of the configuration) into output_dir. On
 * solver non-convergence the diagnostic manifest is still written and
 * the summary reports converged = false.
 */
RunSummary run_scenario(const ScenarioConfig& cfg);

struct SchemeRow {
  std::string scheme;
  bool skipped{false};
  std::string skip_reason;
  double ringing_score{0.0};
  double max_residual{0.0};
  double oracle_error{-1.0};  // relative, -1 when no oracle applies
};

/**
 * Runs the scenario once per scheme (sequentially) and tabulates ringing
 * score, final residual and oracle error. Schemes inadmissible on the
 * grid are reported as skipped with the reason. Throws on an empty list.
 */
std::vector<SchemeRow> compare_schemes(const ScenarioConfig& cfg,
                                       const std::vector<Scheme>& schemes);

}  // namespace homog

#endif
