#ifndef SUPERLENS_EXPERIMENT_HPP
#define SUPERLENS_EXPERIMENT_HPP

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "superlens/forward.hpp"
#include "superlens/grid.hpp"
#include "superlens/profile.hpp"
#include "superlens/reconstruction.hpp"
#include "superlens/scene.hpp"

namespace superlens {

/// One experiment row: a scene, a profile, and a list of cutoffs. The
/// pipeline runs the forward solve and measurement once per scenario, then
/// one reconstruction per cutoff.
struct ScenarioConfig {
  int version = 1;
  std::string name = "custom";
  SceneParameters scene;
  std::string profile = "smooth";  // smooth | tent | boxcar | flat | modes
  // explicit coefficient list for profile == "modes": (n, re, im)
  std::vector<std::array<double, 3>> custom_modes;
  double delta = 0.01;
  std::vector<int> cutoffs{1, 3, 10};
  double noise_level = 0.05;
  std::uint64_t seed = 424242;
  Grid grid;
  int measurement_count = 100;
  double loss_sigma = 0.0;
  std::string output_dir = "out/custom";

  Profile make_profile() const;  // throws ConfigError on unknown profile
  void validate() const;
};

/// Builtin scenarios reproduce the published experiment matrix row by row:
/// smooth-row1..5, nonsmooth-row1..3, discontinuous-row1..3 (plus the
/// noslab-row1 alias for smooth-row1).
ScenarioConfig builtin_scenario(const std::string& name);
std::vector<std::string> builtin_scenario_names();

/// The five slab parameter sets of the smooth-profile matrix, reused by the
/// scaling-factor scan.
std::vector<SceneParameters> reference_parameter_sets();

ScenarioConfig scenario_from_json(std::istream& is);
void scenario_to_json(const ScenarioConfig& config, std::ostream& os);

struct CellResult {
  int cutoff = 0;
  bool failed = false;
  std::string error;
  ErrorMetrics metrics;
  ReconstructedProfile recon;
  std::string recon_csv;  // paths relative to the scenario output dir
  std::string mode_csv;
  std::string plot_svg;
};

struct ScenarioResult {
  ScenarioConfig config;
  bool failed = false;
  std::string error;
  SolveReport solve_report;
  std::string measurement_csv;
  std::string metrics_json;
  std::vector<CellResult> cells;
};

/// Runs one scenario end to end and writes its artifacts (measurement CSV,
/// per-cutoff reconstruction CSV + mode table + SVG, metrics JSON) under
/// config.output_dir. Cell failures are recorded, not raised; a scenario
/// failure (forward solve) marks the whole result failed.
ScenarioResult run_scenario(const ScenarioConfig& config);

/// Writes the overlay SVG (truth solid red, reconstruction dashed blue) for
/// every successful cell of the bundle; returns the files written.
std::vector<std::string> emit_plots(ScenarioResult& result);

struct ExperimentReport {
  std::vector<ScenarioResult> scenarios;
  std::string manifest_path;
};

/// Runs several scenarios on a small worker pool (jobs <= 1 means serial) and
/// writes a run manifest (last) under manifest_dir.
ExperimentReport run_experiment(const std::vector<ScenarioConfig>& configs,
                                int jobs,
                                const std::filesystem::path& manifest_dir);

/// CLI exit-code policy: 0 success, 2 config, 3 numerical, 4 I/O.
int classify_exit_code(const std::exception& e);

}  // namespace superlens

#endif  // SUPERLENS_EXPERIMENT_HPP
