#include "superlens/experiment.hpp"

#include <atomic>
#include <fstream>
#include <system_error>
#include <thread>

#include <json.hpp>

#include "superlens/errors.hpp"
#include "superlens/format.hpp"
#include "superlens/svg.hpp"

namespace superlens {

namespace fs = std::filesystem;
using nlohmann::json;

Profile ScenarioConfig::make_profile() const {
  const double L = scene.period;
  if (profile == "smooth") {
    return Profile::cosine_sum({{1, 0.4}, {3, 0.3}, {10, 0.2}}, delta, L);
  }
  if (profile == "tent") {
    return Profile::tent_sum({{0.3, 0.1, 1.0}, {0.7, 0.1, 1.0}}, delta, L);
  }
  if (profile == "boxcar") {
    return Profile::boxcar_sum({{0.2, 0.4}, {0.6, 0.8}}, delta, L);
  }
  if (profile == "flat") {
    return Profile::flat(L);
  }
  if (profile == "modes") {
    int band = 0;
    for (const auto& m : custom_modes) band = std::max(band, std::abs(static_cast<int>(m[0])));
    ModeCoefficients coeffs(band);
    for (const auto& m : custom_modes) {
      coeffs[static_cast<int>(m[0])] += cplx(m[1], m[2]);
    }
    return Profile::fourier_modes(std::move(coeffs), delta, L);
  }
  throw ConfigError("unknown profile '" + profile + "'");
}

void ScenarioConfig::validate() const {
  if (version != 1) throw ConfigError("unsupported config version");
  scene.validate();
  grid.validate();
  if (delta < 0.0) throw ConfigError("delta must be >= 0");
  if (noise_level < 0.0) throw ConfigError("noise_level must be >= 0");
  if (measurement_count < 2) throw ConfigError("measurements must be >= 2");
  if (cutoffs.empty()) throw ConfigError("at least one cutoff required");
  for (int n : cutoffs) {
    if (n < 0) throw ConfigError("cutoffs must be >= 0");
    if (measurement_count < 2 * n + 1) {
      throw ConfigError("cutoff " + std::to_string(n) +
                        " needs at least 2N+1 measurements");
    }
  }
  make_profile();  // rejects unknown names
}

namespace {

SceneParameters reference_scene(cplx eps, cplx mu) {
  SceneParameters p;
  p.period = 1.0;
  p.wavelength = 1.1;
  p.slab_bottom = 0.1;
  p.slab_top = 0.2;
  p.eps = eps;
  p.mu = mu;
  return p;
}

struct BuiltinRow {
  const char* name;
  const char* profile;
  cplx eps;
  cplx mu;
  std::vector<int> cutoffs;
  double delta;
};

const std::vector<BuiltinRow>& builtin_rows() {
  static const std::vector<BuiltinRow> rows = {
      {"smooth-row1", "smooth", {1.0, 0.0}, {1.0, 0.0}, {1, 3, 10}, 0.01},
      {"smooth-row2", "smooth", {16.0, 0.0}, {1.0, 0.0}, {1, 3, 10}, 0.01},
      {"smooth-row3", "smooth", {-1.0, 0.0}, {-1.0, 0.0}, {1, 3, 10}, 0.01},
      {"smooth-row4", "smooth", {-1.0, 0.05}, {-0.97, 0.0}, {1, 3, 10}, 0.01},
      {"smooth-row5", "smooth", {-1.0, 0.1}, {-1.06, 0.0}, {1, 3, 10}, 0.01},
      {"nonsmooth-row1", "tent", {1.0, 0.0}, {1.0, 0.0}, {1, 2, 4}, 0.01},
      {"nonsmooth-row2", "tent", {16.0, 0.0}, {1.0, 0.0}, {1, 4, 5}, 0.01},
      {"nonsmooth-row3", "tent", {-1.0, 0.0}, {-1.0, 0.0}, {1, 4, 8}, 0.01},
      {"discontinuous-row1", "boxcar", {1.0, 0.0}, {1.0, 0.0}, {1, 2, 3}, 0.001},
      {"discontinuous-row2", "boxcar", {16.0, 0.0}, {1.0, 0.0}, {1, 2, 3}, 0.001},
      {"discontinuous-row3", "boxcar", {-1.0, 0.0}, {-1.0, 0.0}, {1, 2, 20}, 0.001},
  };
  return rows;
}

}  // namespace

std::vector<SceneParameters> reference_parameter_sets() {
  return {reference_scene({1.0, 0.0}, {1.0, 0.0}),
          reference_scene({16.0, 0.0}, {1.0, 0.0}),
          reference_scene({-1.0, 0.0}, {-1.0, 0.0}),
          reference_scene({-1.0, 0.05}, {-0.97, 0.0}),
          reference_scene({-1.0, 0.1}, {-1.06, 0.0})};
}

ScenarioConfig builtin_scenario(const std::string& name) {
  const std::string resolved = (name == "noslab-row1") ? "smooth-row1" : name;
  for (const auto& row : builtin_rows()) {
    if (resolved == row.name) {
      ScenarioConfig config;
      config.name = row.name;
      config.scene = reference_scene(row.eps, row.mu);
      config.profile = row.profile;
      config.delta = row.delta;
      config.cutoffs = row.cutoffs;
      config.output_dir = std::string("out/") + row.name;
      return config;
    }
  }
  throw ConfigError("unknown builtin scenario '" + name + "'");
}

std::vector<std::string> builtin_scenario_names() {
  std::vector<std::string> names;
  for (const auto& row : builtin_rows()) names.emplace_back(row.name);
  return names;
}

ScenarioConfig scenario_from_json(std::istream& is) {
  json j;
  try {
    is >> j;
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config parse error: ") + e.what());
  }
  ScenarioConfig c;
  try {
    c.version = j.value("version", 1);
    c.name = j.value("name", std::string("custom"));
    if (j.contains("scene")) {
      const auto& s = j.at("scene");
      c.scene.period = s.value("period", c.scene.period);
      c.scene.wavelength = s.value("wavelength", c.scene.wavelength);
      c.scene.slab_bottom = s.value("slab_bottom", c.scene.slab_bottom);
      c.scene.slab_top = s.value("slab_top", c.scene.slab_top);
      if (s.contains("eps")) c.scene.eps = cplx(s.at("eps").at(0), s.at("eps").at(1));
      if (s.contains("mu")) c.scene.mu = cplx(s.at("mu").at(0), s.at("mu").at(1));
    }
    c.profile = j.value("profile", c.profile);
    if (j.contains("custom_modes")) {
      for (const auto& m : j.at("custom_modes")) {
        c.custom_modes.push_back({m.at(0), m.at(1), m.at(2)});
      }
    }
    c.delta = j.value("delta", c.delta);
    if (j.contains("cutoffs")) c.cutoffs = j.at("cutoffs").get<std::vector<int>>();
    c.noise_level = j.value("noise_level", c.noise_level);
    c.seed = j.value("seed", c.seed);
    if (j.contains("grid")) {
      const auto& g = j.at("grid");
      c.grid.nx = g.value("nx", c.grid.nx);
      c.grid.ny_omega = g.value("ny_omega", c.grid.ny_omega);
      c.grid.ny_slab = g.value("ny_slab", c.grid.ny_slab);
    }
    c.measurement_count = j.value("measurements", c.measurement_count);
    c.loss_sigma = j.value("loss_sigma", c.loss_sigma);
    c.output_dir = j.value("output_dir", c.output_dir);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config field error: ") + e.what());
  }
  c.validate();
  return c;
}

void scenario_to_json(const ScenarioConfig& c, std::ostream& os) {
  json j;
  j["version"] = c.version;
  j["name"] = c.name;
  j["scene"] = {{"period", c.scene.period},
                {"wavelength", c.scene.wavelength},
                {"slab_bottom", c.scene.slab_bottom},
                {"slab_top", c.scene.slab_top},
                {"eps", {c.scene.eps.real(), c.scene.eps.imag()}},
                {"mu", {c.scene.mu.real(), c.scene.mu.imag()}}};
  j["profile"] = c.profile;
  if (!c.custom_modes.empty()) {
    json modes = json::array();
    for (const auto& m : c.custom_modes) modes.push_back({m[0], m[1], m[2]});
    j["custom_modes"] = modes;
  }
  j["delta"] = c.delta;
  j["cutoffs"] = c.cutoffs;
  j["noise_level"] = c.noise_level;
  j["seed"] = c.seed;
  j["grid"] = {{"nx", c.grid.nx},
               {"ny_omega", c.grid.ny_omega},
               {"ny_slab", c.grid.ny_slab}};
  j["measurements"] = c.measurement_count;
  j["loss_sigma"] = c.loss_sigma;
  j["output_dir"] = c.output_dir;
  os << j.dump(2) << "\n";
}

namespace {

void write_metrics_json(const ScenarioResult& result, std::ostream& os) {
  json j;
  j["scenario"] = result.config.name;
  j["failed"] = result.failed;
  if (!result.error.empty()) j["error"] = result.error;
  j["solve"] = {{"growth_factor", result.solve_report.growth_factor},
                {"min_rel_pivot", result.solve_report.min_rel_pivot},
                {"residual", result.solve_report.residual}};
  j["seed"] = result.config.seed;
  j["noise_level"] = result.config.noise_level;
  json cells = json::array();
  for (const auto& cell : result.cells) {
    json cj;
    cj["cutoff"] = cell.cutoff;
    cj["failed"] = cell.failed;
    if (!cell.error.empty()) cj["error"] = cell.error;
    if (!cell.failed) {
      cj["l2_rel"] = cell.metrics.l2_rel;
      cj["linf_rel"] = cell.metrics.linf_rel;
      cj["max_imag"] = cell.metrics.max_imag;
      json modes = json::array();
      for (const auto& me : cell.metrics.mode_errors) {
        modes.push_back({{"n", me.n}, {"rel_err", me.rel_err}});
      }
      cj["mode_errors"] = modes;
      json skipped = json::array();
      for (int n : cell.recon.skipped_modes) skipped.push_back(n);
      cj["skipped_modes"] = skipped;
      cj["files"] = {{"recon_csv", cell.recon_csv},
                     {"mode_csv", cell.mode_csv},
                     {"plot_svg", cell.plot_svg}};
    }
    cells.push_back(cj);
  }
  j["cells"] = cells;
  os << j.dump(2) << "\n";
}

std::ofstream open_out(const fs::path& path) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::ios_base::failure("cannot open " + path.string() + " for writing");
  return os;
}

}  // namespace

ScenarioResult run_scenario(const ScenarioConfig& config) {
  config.validate();
  ScenarioResult result;
  result.config = config;

  const fs::path out_dir(config.output_dir);
  std::error_code ec;
  fs::create_directories(out_dir, ec);
  if (ec) throw std::ios_base::failure("cannot create " + out_dir.string());

  const Profile truth = config.make_profile();

  MeasurementSet measured;
  try {
    const DiscreteField field = solve_total_field(
        truth, config.scene, config.grid, SolveOptions{config.loss_sigma});
    result.solve_report = field.report;
    const auto trace = field.trace_on_gamma_b();
    const TraceInterpolant interp(trace, config.scene.period);
    MeasurementSet clean =
        sample_measurements(interp, config.scene, config.measurement_count);
    measured = apply_noise(clean, config.noise_level, config.seed);
  } catch (const std::exception& e) {
    result.failed = true;
    result.error = std::string("forward stage: ") + e.what();
    return result;
  }

  {
    auto os = open_out(out_dir / "measurement.csv");
    write_measurement_csv(measured, os);
    result.measurement_csv = "measurement.csv";
  }

  for (int cutoff : config.cutoffs) {
    CellResult cell;
    cell.cutoff = cutoff;
    try {
      cell.recon = reconstruct_profile(measured, config.scene, cutoff,
                                       config.measurement_count);
      cell.metrics = profile_error(cell.recon, truth, 512);
      const std::string stem = "recon_N" + std::to_string(cutoff);
      {
        auto os = open_out(out_dir / (stem + ".csv"));
        write_reconstruction_csv(cell.recon, &truth, os);
        cell.recon_csv = stem + ".csv";
      }
      {
        auto os = open_out(out_dir / ("modes_N" + std::to_string(cutoff) + ".csv"));
        write_mode_table_csv(cell.recon, config.scene, os);
        cell.mode_csv = "modes_N" + std::to_string(cutoff) + ".csv";
      }
    } catch (const std::exception& e) {
      cell.failed = true;
      cell.error = e.what();
    }
    result.cells.push_back(std::move(cell));
  }

  emit_plots(result);

  {
    auto os = open_out(out_dir / "metrics.json");
    write_metrics_json(result, os);
    result.metrics_json = "metrics.json";
  }
  return result;
}

std::vector<std::string> emit_plots(ScenarioResult& result) {
  std::vector<std::string> files;
  if (result.failed) return files;
  const fs::path out_dir(result.config.output_dir);
  const Profile truth = result.config.make_profile();
  const double period = result.config.scene.period;

  for (auto& cell : result.cells) {
    if (cell.failed) continue;
    SvgChart chart;
    chart.title = result.config.name + "  N=" + std::to_string(cell.cutoff) +
                  "  eps=" + fmt_cplx(result.config.scene.eps) +
                  " mu=" + fmt_cplx(result.config.scene.mu);
    chart.x_label = "x";
    chart.y_label = "surface height";

    SvgSeries true_series;
    true_series.color = "#d62728";
    true_series.label = "true profile";
    const int pts = 512;
    for (int i = 0; i <= pts; ++i) {
      const double x = i * period / pts;
      true_series.x.push_back(x);
      true_series.y.push_back(truth.delta() * truth.g(x));
    }
    SvgSeries recon_series;
    recon_series.color = "#1f77b4";
    recon_series.dashed = true;
    recon_series.label = "reconstruction";
    for (std::size_t i = 0; i < cell.recon.grid_x.size(); ++i) {
      recon_series.x.push_back(cell.recon.grid_x[i]);
      recon_series.y.push_back(cell.recon.values[i].real());
    }
    // close the periodic curve
    if (!cell.recon.grid_x.empty()) {
      recon_series.x.push_back(period);
      recon_series.y.push_back(cell.recon.values[0].real());
    }
    chart.series = {true_series, recon_series};

    const std::string name = "recon_N" + std::to_string(cell.cutoff) + ".svg";
    auto os = open_out(out_dir / name);
    write_svg(chart, os);
    cell.plot_svg = name;
    files.push_back(name);
  }
  return files;
}

ExperimentReport run_experiment(const std::vector<ScenarioConfig>& configs,
                                int jobs,
                                const std::filesystem::path& manifest_dir) {
  ExperimentReport report;
  report.scenarios.resize(configs.size());

  const int workers = std::max(1, std::min<int>(jobs, static_cast<int>(configs.size())));
  std::atomic<std::size_t> next{0};
  auto work = [&]() {
    while (true) {
      const std::size_t k = next.fetch_add(1);
      if (k >= configs.size()) break;
      try {
        report.scenarios[k] = run_scenario(configs[k]);
      } catch (const std::exception& e) {
        report.scenarios[k].config = configs[k];
        report.scenarios[k].failed = true;
        report.scenarios[k].error = e.what();
      }
    }
  };
  if (workers <= 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(workers));
    for (int w = 0; w < workers; ++w) pool.emplace_back(work);
    for (auto& t : pool) t.join();
  }

  // manifest last, once every scenario has settled
  std::error_code ec;
  fs::create_directories(manifest_dir, ec);
  json manifest;
  manifest["scenarios"] = json::array();
  for (const auto& r : report.scenarios) {
    json entry;
    entry["name"] = r.config.name;
    entry["output_dir"] = r.config.output_dir;
    entry["failed"] = r.failed;
    if (!r.error.empty()) entry["error"] = r.error;
    int failed_cells = 0;
    for (const auto& c : r.cells) failed_cells += c.failed ? 1 : 0;
    entry["cells"] = r.cells.size();
    entry["failed_cells"] = failed_cells;
    manifest["scenarios"].push_back(entry);
  }
  const fs::path manifest_path = manifest_dir / "run_manifest.json";
  {
    auto os = open_out(manifest_path);
    os << manifest.dump(2) << "\n";
  }
  report.manifest_path = manifest_path.string();
  return report;
}

int classify_exit_code(const std::exception& e) {
  if (dynamic_cast<const ConfigError*>(&e) ||
      dynamic_cast<const std::invalid_argument*>(&e)) {
    return 2;
  }
  if (dynamic_cast<const ResonanceError*>(&e) ||
      dynamic_cast<const ConditioningError*>(&e) ||
      dynamic_cast<const DegenerateModeError*>(&e)) {
    return 3;
  }
  if (dynamic_cast<const std::ios_base::failure*>(&e) ||
      dynamic_cast<const std::filesystem::filesystem_error*>(&e)) {
    return 4;
  }
  return 1;
}

}  // namespace superlens
