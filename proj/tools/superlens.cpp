#include <CLI11.hpp>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>

#include "selfcheck.hpp"
#include "superlens/analytic.hpp"
#include "superlens/errors.hpp"
#include "superlens/experiment.hpp"
#include "superlens/format.hpp"
#include "superlens/forward.hpp"
#include "superlens/measurement.hpp"
#include "superlens/reconstruction.hpp"
#include "superlens/svg.hpp"

namespace fs = std::filesystem;
using namespace superlens;

namespace {

struct SceneFlags {
  double period = 1.0;
  double wavelength = 1.1;
  double slab_bottom = 0.1;
  double slab_top = 0.2;
  double eps_re = -1.0, eps_im = 0.0;
  double mu_re = -1.0, mu_im = 0.0;

  SceneParameters to_scene() const {
    SceneParameters p;
    p.period = period;
    p.wavelength = wavelength;
    p.slab_bottom = slab_bottom;
    p.slab_top = slab_top;
    p.eps = cplx(eps_re, eps_im);
    p.mu = cplx(mu_re, mu_im);
    return p;
  }
};

void add_scene_flags(CLI::App* cmd, SceneFlags& f) {
  cmd->add_option("--period", f.period, "surface period");
  cmd->add_option("--wavelength", f.wavelength, "incident wavelength");
  cmd->add_option("--slab-bottom", f.slab_bottom, "lower slab face a");
  cmd->add_option("--slab-top", f.slab_top, "upper slab face / measurement line b");
  cmd->add_option("--eps-re", f.eps_re, "Re(eps) of the slab");
  cmd->add_option("--eps-im", f.eps_im, "Im(eps) of the slab");
  cmd->add_option("--mu-re", f.mu_re, "Re(mu) of the slab");
  cmd->add_option("--mu-im", f.mu_im, "Im(mu) of the slab");
}

struct GridFlags {
  int nx = 256;
  int ny = 128;       // per-region default
  int ny_omega = 0;   // optional overrides
  int ny_slab = 0;

  Grid to_grid() const {
    Grid g;
    g.nx = nx;
    g.ny_omega = ny_omega > 0 ? ny_omega : ny;
    g.ny_slab = ny_slab > 0 ? ny_slab : ny;
    return g;
  }
};

void add_grid_flags(CLI::App* cmd, GridFlags& f) {
  cmd->add_option("--grid-nx", f.nx, "columns per period");
  cmd->add_option("--grid-ny", f.ny, "points per y-region (both regions)");
  cmd->add_option("--grid-ny-omega", f.ny_omega, "points on [0, a] (overrides --grid-ny)");
  cmd->add_option("--grid-ny-slab", f.ny_slab, "points on [a, b] (overrides --grid-ny)");
}

std::ofstream open_out(const fs::path& path) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::ios_base::failure("cannot open " + path.string() + " for writing");
  return os;
}

std::ifstream open_in(const fs::path& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw std::ios_base::failure("cannot open " + path.string() + " for reading");
  return is;
}

Profile profile_from_name(const std::string& name, double delta, double period) {
  ScenarioConfig c;
  c.profile = name;
  c.delta = delta;
  c.scene.period = period;
  return c.make_profile();
}

int cmd_forward(const SceneFlags& sf, const GridFlags& gf, const std::string& profile,
                double delta, double loss, const std::string& out_dir,
                const std::string& dump_field) {
  const SceneParameters scene = sf.to_scene();
  const Profile prof = profile_from_name(profile, delta, scene.period);
  const Grid grid = gf.to_grid();
  const DiscreteField field = solve_total_field(prof, scene, grid, SolveOptions{loss});

  fs::create_directories(out_dir);
  {
    auto os = open_out(fs::path(out_dir) / "trace.csv");
    write_trace_csv(field, os);
  }
  if (!dump_field.empty()) {
    auto os = open_out(dump_field);
    write_field_binary(field, os);
  }
  std::cout << "forward: " << grid.nx << "x" << grid.levels() << " grid, residual "
            << field.report.residual << ", pivot growth " << field.report.growth_factor
            << "\nagreement written to " << (fs::path(out_dir) / "trace.csv").string()
            << "\n";
  return 0;
}

int cmd_measure(const std::string& trace_path, int m_count, double noise,
                std::uint64_t seed, const std::string& out_file) {
  auto is = open_in(trace_path);
  const TraceData trace = read_trace_csv(is);
  const TraceInterpolant interp(trace.values, trace.scene.period);
  MeasurementSet ms = sample_measurements(interp, trace.scene, m_count);
  ms = apply_noise(ms, noise, seed);
  if (fs::path(out_file).has_parent_path()) {
    fs::create_directories(fs::path(out_file).parent_path());
  }
  auto os = open_out(out_file);
  write_measurement_csv(ms, os);
  std::cout << "measure: " << m_count + 1 << " samples, noise " << noise << ", seed "
            << seed << " -> " << out_file << "\n";
  return 0;
}

int cmd_reconstruct(const std::string& measurement_path, int cutoff,
                    const std::string& profile, double delta,
                    const std::string& out_dir) {
  auto is = open_in(measurement_path);
  const MeasurementSet ms = read_measurement_csv(is);
  const ReconstructedProfile recon =
      reconstruct_profile(ms, ms.scene, cutoff, ms.count_m);

  fs::create_directories(out_dir);
  const std::string stem = "recon_N" + std::to_string(cutoff);

  std::optional<Profile> truth;
  if (!profile.empty()) truth = profile_from_name(profile, delta, ms.scene.period);

  {
    auto os = open_out(fs::path(out_dir) / (stem + ".csv"));
    write_reconstruction_csv(recon, truth ? &*truth : nullptr, os);
  }
  {
    auto os = open_out(fs::path(out_dir) / ("modes_N" + std::to_string(cutoff) + ".csv"));
    write_mode_table_csv(recon, ms.scene, os);
  }
  {
    SvgChart chart;
    chart.title = "reconstruction N=" + std::to_string(cutoff);
    chart.x_label = "x";
    chart.y_label = "surface height";
    if (truth) {
      SvgSeries ts;
      ts.color = "#d62728";
      ts.label = "true profile";
      for (int i = 0; i <= 512; ++i) {
        const double x = i * ms.scene.period / 512;
        ts.x.push_back(x);
        ts.y.push_back(truth->delta() * truth->g(x));
      }
      chart.series.push_back(std::move(ts));
    }
    SvgSeries rs;
    rs.color = "#1f77b4";
    rs.dashed = true;
    rs.label = "reconstruction";
    for (std::size_t i = 0; i < recon.grid_x.size(); ++i) {
      rs.x.push_back(recon.grid_x[i]);
      rs.y.push_back(recon.values[i].real());
    }
    chart.series.push_back(std::move(rs));
    auto os = open_out(fs::path(out_dir) / (stem + ".svg"));
    write_svg(chart, os);
  }
  std::cout << "reconstruct: N=" << cutoff << ", max imaginary residual "
            << recon.max_imag();
  if (truth) {
    const ErrorMetrics metrics = profile_error(recon, *truth, 512);
    std::cout << ", rel l2 error " << metrics.l2_rel;
  }
  if (!recon.skipped_modes.empty()) {
    std::cout << ", skipped " << recon.skipped_modes.size() << " degenerate modes";
  }
  std::cout << " -> " << out_dir << "\n";
  return 0;
}

int cmd_upsilon(int n_max, const std::vector<std::string>& set_specs,
                const std::string& out_dir) {
  std::vector<SceneParameters> sets;
  if (set_specs.empty()) {
    sets = reference_parameter_sets();
  } else {
    for (const auto& spec : set_specs) {
      double er, ei, mr, mi;
      if (std::sscanf(spec.c_str(), "%lf,%lf,%lf,%lf", &er, &ei, &mr, &mi) != 4) {
        throw ConfigError("--set expects 'eps_re,eps_im,mu_re,mu_im', got '" + spec + "'");
      }
      SceneParameters p = reference_parameter_sets()[0];
      p.eps = cplx(er, ei);
      p.mu = cplx(mr, mi);
      sets.push_back(p);
    }
  }
  const UpsilonScan scan = upsilon_scan(n_max, sets);

  fs::create_directories(out_dir);
  {
    auto os = open_out(fs::path(out_dir) / "upsilon.csv");
    write_upsilon_csv(scan, os);
  }
  {
    SvgChart chart;
    chart.title = "scaling factor magnitude";
    chart.x_label = "mode n";
    chart.y_label = "|Upsilon_n| (log)";
    chart.log_y = true;
    const char* colors[] = {"#d62728", "#ff7f0e", "#2ca02c", "#1f77b4", "#9467bd",
                            "#8c564b"};
    for (std::size_t s = 0; s < sets.size(); ++s) {
      SvgSeries series;
      series.color = colors[s % 6];
      series.label = "eps=" + fmt_cplx(sets[s].eps) + " mu=" + fmt_cplx(sets[s].mu);
      for (int n = 0; n <= scan.n_max; ++n) {
        if (scan.skipped[s][static_cast<std::size_t>(n)]) continue;
        series.x.push_back(n);
        series.y.push_back(scan.magnitude[s][static_cast<std::size_t>(n)]);
      }
      chart.series.push_back(std::move(series));
    }
    auto os = open_out(fs::path(out_dir) / "upsilon.svg");
    write_svg(chart, os);
  }
  std::cout << "upsilon: n = 0.." << n_max << ", " << sets.size() << " parameter sets -> "
            << out_dir << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "superlens: near-field reconstruction of low-amplitude periodic PEC "
      "surfaces imaged through a negative-index slab"};
  app.require_subcommand(1);

  // forward ------------------------------------------------------------
  SceneFlags fw_scene;
  GridFlags fw_grid;
  std::string fw_profile = "smooth";
  double fw_delta = 0.01, fw_loss = 0.0;
  std::string fw_out = "out/forward", fw_dump;
  auto* fwd = app.add_subcommand("forward", "solve the direct problem and dump the trace");
  add_scene_flags(fwd, fw_scene);
  add_grid_flags(fwd, fw_grid);
  fwd->add_option("--profile", fw_profile, "smooth|tent|boxcar|flat");
  fwd->add_option("--delta", fw_delta, "surface deformation amplitude");
  fwd->add_option("--loss", fw_loss, "optional loss sigma added to eps");
  fwd->add_option("--out", fw_out, "output directory");
  fwd->add_option("--dump-field", fw_dump, "optional binary dump of the full field");

  // measure ------------------------------------------------------------
  std::string ms_trace = "out/forward/trace.csv";
  int ms_count = 100;
  double ms_noise = 0.05;
  std::uint64_t ms_seed = 424242;
  std::string ms_out = "out/measurement.csv";
  auto* measure = app.add_subcommand("measure", "sample the trace and apply noise");
  measure->add_option("--trace", ms_trace, "trace CSV from `forward`");
  measure->add_option("--measurements", ms_count, "number of intervals M (M+1 samples)");
  measure->add_option("--noise", ms_noise, "relative noise level");
  measure->add_option("--seed", ms_seed, "noise seed");
  measure->add_option("--out", ms_out, "output CSV");

  // reconstruct ----------------------------------------------------------
  std::string rc_measurement = "out/measurement.csv";
  int rc_cutoff = 10;
  std::string rc_profile;
  double rc_delta = 0.01;
  std::string rc_out = "out/reconstruct";
  auto* rec = app.add_subcommand("reconstruct", "invert a measurement CSV");
  rec->add_option("--measurement", rc_measurement, "measurement CSV");
  rec->add_option("--cutoff", rc_cutoff, "mode cutoff N");
  rec->add_option("--profile", rc_profile, "optional truth profile for error metrics");
  rec->add_option("--delta", rc_delta, "truth profile amplitude");
  rec->add_option("--out", rc_out, "output directory");

  // upsilon --------------------------------------------------------------
  int up_nmax = 20;
  std::vector<std::string> up_sets;
  std::string up_out = "out/upsilon";
  auto* ups = app.add_subcommand("upsilon", "scaling-factor resolution scan");
  ups->add_option("--n-max", up_nmax, "largest mode index");
  ups->add_option("--set", up_sets, "parameter set 'eps_re,eps_im,mu_re,mu_im' (repeatable)");
  ups->add_option("--out", up_out, "output directory");

  // experiment -----------------------------------------------------------
  std::vector<std::string> ex_builtins;
  std::vector<std::string> ex_configs;
  std::string ex_out = "out";
  int ex_jobs = 1;
  SceneFlags ex_scene;
  bool ex_scene_set = false;
  std::string ex_profile;
  double ex_delta = -1.0, ex_noise = -1.0, ex_loss = -1.0;
  std::int64_t ex_seed = -1;
  std::vector<int> ex_cutoffs;
  int ex_nx = 0, ex_ny = 0, ex_measurements = 0;
  auto* exp = app.add_subcommand("experiment", "run builtin or configured scenario rows");
  exp->add_option("--builtin", ex_builtins, "builtin scenario name or 'all' (repeatable)");
  exp->add_option("--config", ex_configs, "scenario config JSON (repeatable)");
  exp->add_option("--out", ex_out, "output root directory");
  exp->add_option("--jobs", ex_jobs, "scenario worker pool size");
  auto* o1 = exp->add_option("--eps-re", ex_scene.eps_re, "override Re(eps)");
  auto* o2 = exp->add_option("--eps-im", ex_scene.eps_im, "override Im(eps)");
  auto* o3 = exp->add_option("--mu-re", ex_scene.mu_re, "override Re(mu)");
  auto* o4 = exp->add_option("--mu-im", ex_scene.mu_im, "override Im(mu)");
  exp->add_option("--profile", ex_profile, "override profile");
  exp->add_option("--delta", ex_delta, "override delta");
  exp->add_option("--noise", ex_noise, "override noise level");
  exp->add_option("--seed", ex_seed, "override seed");
  exp->add_option("--cutoff", ex_cutoffs, "override cutoff list (repeatable)");
  exp->add_option("--grid-nx", ex_nx, "override grid nx");
  exp->add_option("--grid-ny", ex_ny, "override grid ny (both regions)");
  exp->add_option("--measurements", ex_measurements, "override measurement count");
  exp->add_option("--loss", ex_loss, "override loss sigma");

  // validate ---------------------------------------------------------------
  auto* val = app.add_subcommand("validate", "run the oracle/property self-checks");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (fwd->parsed()) {
      return cmd_forward(fw_scene, fw_grid, fw_profile, fw_delta, fw_loss, fw_out, fw_dump);
    }
    if (measure->parsed()) {
      return cmd_measure(ms_trace, ms_count, ms_noise, ms_seed, ms_out);
    }
    if (rec->parsed()) {
      return cmd_reconstruct(rc_measurement, rc_cutoff, rc_profile, rc_delta, rc_out);
    }
    if (ups->parsed()) {
      return cmd_upsilon(up_nmax, up_sets, up_out);
    }
    if (exp->parsed()) {
      std::vector<ScenarioConfig> configs;
      for (const auto& name : ex_builtins) {
        if (name == "all") {
          for (const auto& b : builtin_scenario_names()) {
            configs.push_back(builtin_scenario(b));
          }
        } else {
          configs.push_back(builtin_scenario(name));
        }
      }
      for (const auto& file : ex_configs) {
        auto is = open_in(file);
        configs.push_back(scenario_from_json(is));
      }
      if (configs.empty()) throw ConfigError("experiment: nothing to run (use --builtin or --config)");
      for (auto& c : configs) {
        if (o1->count()) c.scene.eps = cplx(ex_scene.eps_re, c.scene.eps.imag());
        if (o2->count()) c.scene.eps = cplx(c.scene.eps.real(), ex_scene.eps_im);
        if (o3->count()) c.scene.mu = cplx(ex_scene.mu_re, c.scene.mu.imag());
        if (o4->count()) c.scene.mu = cplx(c.scene.mu.real(), ex_scene.mu_im);
        if (!ex_profile.empty()) c.profile = ex_profile;
        if (ex_delta >= 0.0) c.delta = ex_delta;
        if (ex_noise >= 0.0) c.noise_level = ex_noise;
        if (ex_loss >= 0.0) c.loss_sigma = ex_loss;
        if (ex_seed >= 0) c.seed = static_cast<std::uint64_t>(ex_seed);
        if (!ex_cutoffs.empty()) c.cutoffs = ex_cutoffs;
        if (ex_nx > 0) c.grid.nx = ex_nx;
        if (ex_ny > 0) c.grid.ny_omega = c.grid.ny_slab = ex_ny;
        if (ex_measurements > 0) c.measurement_count = ex_measurements;
        c.output_dir = (fs::path(ex_out) / c.name).string();
        c.validate();
      }
      const ExperimentReport report = run_experiment(configs, ex_jobs, ex_out);
      bool any_failed = false;
      for (const auto& r : report.scenarios) {
        int failed_cells = 0;
        for (const auto& cell : r.cells) failed_cells += cell.failed ? 1 : 0;
        any_failed = any_failed || r.failed || failed_cells > 0;
        std::cout << (r.failed ? "[FAIL] " : (failed_cells ? "[PART] " : "[ OK ] "))
                  << r.config.name << " -> " << r.config.output_dir;
        if (r.failed) std::cout << "  (" << r.error << ")";
        std::cout << "\n";
      }
      std::cout << "manifest: " << report.manifest_path << "\n";
      return any_failed ? 3 : 0;
    }
    if (val->parsed()) {
      const int failures = tools::run_selfcheck(std::cout);
      std::cout << (failures == 0 ? "validate: all checks passed\n"
                                  : "validate: FAILURES PRESENT\n");
      return failures == 0 ? 0 : 3;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return classify_exit_code(e);
  }
  return 0;
}
