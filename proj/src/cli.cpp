#include "spinpair/cli.hpp"

#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "spinpair/errors.hpp"
#include "spinpair/interaction.hpp"
#include "spinpair/io.hpp"

namespace spinpair {

namespace {

using nlohmann::json;

Vector3 parse_vector3(const std::string& text, const char* what) {
  std::stringstream ss(text);
  std::string cell;
  std::vector<double> vals;
  while (std::getline(ss, cell, ',')) vals.push_back(std::stod(cell));
  if (vals.size() == 1) return Vector3(0, 0, vals[0]);
  if (vals.size() != 3)
    throw ValidationError(std::string(what) + ": expected 1 or 3 comma-separated values");
  return Vector3(vals[0], vals[1], vals[2]);
}

Matrix3 parse_g_tensor(const std::string& text, const char* what) {
  const Vector3 d = parse_vector3(text, what);
  return d.asDiagonal();
}

json anticrossing_to_json(const AnticrossingReport& r) {
  json j{{"field_T", r.field_T},
         {"center_GHz", r.center_GHz},
         {"gap_GHz", r.gap_GHz},
         {"type", r.type == AnticrossingType::Spin ? "spin" : "optical"},
         {"state", to_string(r.state)},
         {"branch_a", r.branch_a},
         {"branch_b", r.branch_b}};
  switch (r.dark) {
    case DarkBranch::Lower: j["dark_branch"] = "lower"; break;
    case DarkBranch::Upper: j["dark_branch"] = "upper"; break;
    case DarkBranch::None: j["dark_branch"] = "none"; break;
  }
  return j;
}

ModelConfig load_config(const std::string& config_path, const std::string& preset) {
  if (!preset.empty()) {
    ModelConfig cfg;
    cfg.model = preset_model(preset);
    return cfg;
  }
  if (config_path.empty())
    throw ValidationError("either --config or --preset is required");
  return read_config(config_path);
}

void write_anticross_json(const std::vector<AnticrossingReport>& reports,
                          const std::string& path) {
  json out = json::array();
  for (const auto& r : reports) out.push_back(anticrossing_to_json(r));
  std::ofstream f(path);
  if (!f) throw IoError("cannot open " + path + " for writing");
  f << out.dump(2) << "\n";
}

int cmd_simulate(const std::string& config_path, const std::string& preset,
                 double bmin, double bmax, int steps, bool range_set,
                 const std::string& out_csv, const std::string& out_pgm,
                 const std::string& out_anticross) {
  ModelConfig cfg = load_config(config_path, preset);
  if (range_set) {
    cfg.b_min_T = bmin;
    cfg.b_max_T = bmax;
  }
  if (steps > 0) cfg.steps = steps;
  const SweepResult result =
      sweep(cfg.model, cfg.sweep_axis, cfg.b_min_T, cfg.b_max_T, cfg.steps, cfg.sweep);
  write_spectrum_csv(result.map, out_csv);
  std::cout << "wrote " << out_csv << " (" << result.map.field_T.size() << " x "
            << result.map.frequency_GHz.size() << " grid)\n";
  if (!out_pgm.empty()) {
    const RenderedImage img = render_map(result.map, cfg.render_floor);
    write_pgm(img, result.map, out_pgm);
    std::cout << "wrote " << out_pgm << "\n";
  }
  if (!out_anticross.empty()) {
    const auto reports = detect_anticrossings(cfg.model, cfg.sweep_axis, result);
    write_anticross_json(reports, out_anticross);
    std::cout << "wrote " << out_anticross << " (" << reports.size()
              << " anticrossings)\n";
  }
  return 0;
}

int cmd_anticross(const std::string& config_path, const std::string& preset,
                  double bmin, double bmax, int steps, bool range_set,
                  const std::string& out_path) {
  ModelConfig cfg = load_config(config_path, preset);
  if (range_set) {
    cfg.b_min_T = bmin;
    cfg.b_max_T = bmax;
  }
  if (steps > 0) cfg.steps = steps;

  std::vector<AnticrossingReport> reports;
  if (cfg.model.kappa != 0.0 && cfg.model.ion1_active && cfg.model.ion2_active) {
    reports = dark_state_analysis(cfg.model, cfg.sweep_axis, cfg.b_min_T,
                                  cfg.b_max_T, cfg.steps);
    const SweepResult result = sweep(cfg.model, cfg.sweep_axis, cfg.b_min_T,
                                     cfg.b_max_T, cfg.steps, cfg.sweep);
    for (const auto& r : detect_anticrossings(cfg.model, cfg.sweep_axis, result))
      if (r.type == AnticrossingType::Spin) reports.push_back(r);
  } else {
    const SweepResult result = sweep(cfg.model, cfg.sweep_axis, cfg.b_min_T,
                                     cfg.b_max_T, cfg.steps, cfg.sweep);
    reports = detect_anticrossings(cfg.model, cfg.sweep_axis, result);
  }
  std::sort(reports.begin(), reports.end(),
            [](const auto& a, const auto& b) { return a.field_T < b.field_T; });
  write_anticross_json(reports, out_path);
  std::cout << "wrote " << out_path << " (" << reports.size() << " anticrossings)\n";
  for (const auto& r : reports) {
    std::cout << "  " << (r.type == AnticrossingType::Spin ? "spin" : "optical")
              << " at " << r.field_T << " T, gap " << r.gap_GHz << " GHz";
    if (r.dark == DarkBranch::Lower) std::cout << ", dark branch: lower";
    if (r.dark == DarkBranch::Upper) std::cout << ", dark branch: upper";
    std::cout << "\n";
  }
  return 0;
}

int cmd_fit(const std::string& peaks_path, const std::string& config_path,
            const std::string& free_list, const std::string& out_path,
            uint64_t seed, int restarts) {
  const std::vector<Peak> peaks = read_peaks(peaks_path);
  const ModelConfig cfg = read_config(config_path);

  FitSpec spec;
  spec.initial = cfg.model;
  spec.axis = cfg.sweep_axis;
  spec.seed = seed;
  spec.restarts = restarts;
  std::stringstream ss(free_list);
  std::string name;
  while (std::getline(ss, name, ','))
    if (!name.empty()) spec.free_names.push_back(name);

  const FitResult result = fit_model(spec, peaks);
  const FitQualityReport quality = fit_quality_report(result, peaks);

  json jparams = json::array();
  for (size_t i = 0; i < result.names.size(); ++i)
    jparams.push_back({{"name", result.names[i]},
                       {"value", result.values[i]},
                       {"std_error", result.std_errors[i]},
                       {"unit", fit_parameter(result.names[i]).unit}});
  json jassoc = json::array();
  for (size_t p = 0; p < peaks.size(); ++p)
    jassoc.push_back({{"field_T", peaks[p].field_T},
                      {"frequency_GHz", peaks[p].frequency_GHz},
                      {"line_index", result.association.line_index[p]},
                      {"residual_GHz", result.association.residual_GHz[p]}});
  ModelConfig fitted_cfg = cfg;
  fitted_cfg.model = result.model;
  json out{{"converged", result.converged},
           {"objective", result.objective},
           {"rms_GHz", result.rms_GHz},
           {"reduced_chi2", quality.reduced_chi2},
           {"iterations", result.iterations},
           {"evaluations", result.evaluations},
           {"parameters", jparams},
           {"association", jassoc},
           {"config", json::parse(to_json_string(fitted_cfg))}};
  std::ofstream f(out_path);
  if (!f) throw IoError("cannot open " + out_path + " for writing");
  f << out.dump(2) << "\n";

  std::cout << quality.text;
  if (!result.converged) {
    std::cerr << "fit did not converge within the iteration budget\n";
    return 3;
  }
  std::cout << "wrote " << out_path << "\n";
  return 0;
}

int cmd_dipole(const std::string& g1_text, const std::string& g2_text,
               const std::string& g1e_text, const std::string& g2e_text,
               double r_angstrom, const std::string& axis_text,
               const std::string& scan_text, const std::string& jobs_text) {
  const Matrix3 g1 = parse_g_tensor(g1_text, "--g1");
  const Matrix3 g2 = parse_g_tensor(g2_text, "--g2");
  const Vector3 axis = parse_vector3(axis_text, "--axis");
  if (axis.norm() == 0.0) throw ValidationError("--axis: zero vector");

  const Matrix3 jdd = dipole_coupling(g1, g2, axis.normalized() * r_angstrom);
  std::cout << "dipole-dipole coupling at " << r_angstrom << " angstrom (GHz):\n";
  for (int r = 0; r < 3; ++r) {
    std::cout << "  ";
    for (int c = 0; c < 3; ++c) std::cout << jdd(r, c) << (c < 2 ? "  " : "\n");
  }
  std::cout << "|J_dd,zz| = " << std::abs(jdd(2, 2)) << " GHz\n";

  if (!jobs_text.empty()) {
    std::stringstream ss(jobs_text);
    std::string cell;
    std::vector<double> jobs;
    while (std::getline(ss, cell, ',')) jobs.push_back(std::stod(cell));
    if (jobs.size() != 3)
      throw ValidationError("--jobs: expected J00zz,J10zz,J01zz");
    const Matrix3 g1e = g1e_text.empty() ? g1 : parse_g_tensor(g1e_text, "--g1-excited");
    const Matrix3 g2e = g2e_text.empty() ? g2 : parse_g_tensor(g2e_text, "--g2-excited");
    const std::vector<StateCoupling> states = {
        {"G00", g1(2, 2), g2(2, 2), jobs[0]},
        {"E10", g1e(2, 2), g2(2, 2), jobs[1]},
        {"E01", g1(2, 2), g2e(2, 2), jobs[2]}};

    const ExchangeReport here = exchange_report_at(states, axis, r_angstrom);
    std::cout << "exchange fractions at " << r_angstrom << " angstrom:";
    for (size_t i = 0; i < states.size(); ++i)
      std::cout << " " << states[i].label << "=" << here.fraction[i];
    std::cout << " aggregate=" << here.aggregate_fraction
              << (here.exceeds_unity ? " (exceeds dipole-only bound)" : "") << "\n";

    if (!scan_text.empty()) {
      std::stringstream sc(scan_text);
      std::vector<double> parts;
      while (std::getline(sc, cell, ':')) parts.push_back(std::stod(cell));
      if (parts.size() != 3)
        throw ValidationError("--scan: expected rmin:rmax:steps");
      const ExchangeScan scan = min_exchange_scan(
          states, axis, parts[0], parts[1], static_cast<int>(parts[2]));
      std::cout << "minimum worst-state exchange fraction "
                << scan.best.max_fraction << " at " << scan.best_r_angstrom
                << " angstrom\n";
    }
  }
  return 0;
}

int cmd_extract(const std::string& map_path, double k_mad, double min_sep,
                const std::string& out_path) {
  const RawMap map = read_raw_map_csv(map_path);
  ExtractOptions opts;
  opts.k_mad = k_mad;
  opts.min_separation_GHz = min_sep;
  const std::vector<Peak> peaks = extract_peaks(map, opts);
  write_peaks(peaks, out_path);
  std::cout << "wrote " << out_path << " (" << peaks.size() << " peaks)\n";
  return 0;
}

}  // namespace

int run_cli(const std::vector<std::string>& args) {
  CLI::App app{"Coupled rare-earth ion pair spectra: simulation, fitting and analysis"};
  app.require_subcommand(1);

  // simulate
  auto* sim = app.add_subcommand("simulate", "simulate a spectral map over a field sweep");
  std::string sim_config, sim_preset, sim_out, sim_pgm, sim_ac;
  double sim_bmin = 0.0, sim_bmax = 0.0;
  int sim_steps = 0;
  sim->add_option("--config", sim_config, "model config JSON");
  sim->add_option("--preset", sim_preset, "built-in model (siteA or siteB)")
      ->check(CLI::IsMember({"siteA", "siteB"}));
  auto* bmin_opt = sim->add_option("--bmin", sim_bmin, "sweep start (T)");
  auto* bmax_opt = sim->add_option("--bmax", sim_bmax, "sweep end (T)");
  sim->add_option("--steps", sim_steps, "number of field steps");
  sim->add_option("--out", sim_out, "output map CSV")->required();
  sim->add_option("--png-out", sim_pgm, "output 16-bit PGM image");
  sim->add_option("--anticross-out", sim_ac, "anticrossing report JSON");

  // fit
  auto* fit = app.add_subcommand("fit", "fit model parameters to a peak list");
  std::string fit_peaks, fit_config, fit_free, fit_out;
  uint64_t fit_seed = 0;
  int fit_restarts = 5;
  fit->add_option("--peaks", fit_peaks, "peak list CSV")->required();
  fit->add_option("--config", fit_config, "initial model config JSON")->required();
  fit->add_option("--free", fit_free, "comma-separated free parameters")->required();
  fit->add_option("--out", fit_out, "fitted result JSON")->required();
  fit->add_option("--seed", fit_seed, "restart RNG seed (default 0)");
  fit->add_option("--restarts", fit_restarts, "random restarts (default 5)");

  // anticross
  auto* ac = app.add_subcommand("anticross", "locate anticrossings and dark branches");
  std::string ac_config, ac_preset, ac_out;
  double ac_bmin = 0.0, ac_bmax = 0.0;
  int ac_steps = 0;
  ac->add_option("--config", ac_config, "model config JSON");
  ac->add_option("--preset", ac_preset, "built-in model (siteA or siteB)")
      ->check(CLI::IsMember({"siteA", "siteB"}));
  auto* ac_bmin_opt = ac->add_option("--bmin", ac_bmin, "sweep start (T)");
  auto* ac_bmax_opt = ac->add_option("--bmax", ac_bmax, "sweep end (T)");
  ac->add_option("--steps", ac_steps, "number of field steps");
  ac->add_option("--out", ac_out, "output JSON")->required();

  // dipole
  auto* dip = app.add_subcommand("dipole", "magnetic dipole-dipole coupling and exchange budget");
  std::string dip_g1, dip_g2, dip_g1e, dip_g2e, dip_axis = "0,0,1", dip_scan, dip_jobs;
  double dip_r = 0.0;
  dip->add_option("--g1", dip_g1, "ion 1 ground g (gz or gx,gy,gz, GHz/T)")->required();
  dip->add_option("--g2", dip_g2, "ion 2 ground g (GHz/T)")->required();
  dip->add_option("--g1-excited", dip_g1e, "ion 1 excited g (GHz/T)");
  dip->add_option("--g2-excited", dip_g2e, "ion 2 excited g (GHz/T)");
  dip->add_option("--r-angstrom", dip_r, "ion separation (angstrom)")->required();
  dip->add_option("--axis", dip_axis, "separation direction x,y,z");
  dip->add_option("--scan", dip_scan, "separation scan rmin:rmax:steps");
  dip->add_option("--jobs", dip_jobs, "observed J00zz,J10zz,J01zz (GHz)");

  // extract
  auto* ext = app.add_subcommand("extract", "extract peaks from a raw map CSV");
  std::string ext_map, ext_out;
  double ext_kmad = 5.0, ext_minsep = 0.3;
  ext->add_option("--map", ext_map, "raw map CSV")->required();
  ext->add_option("--kmad", ext_kmad, "threshold in robust sigma units (default 5)");
  ext->add_option("--min-separation", ext_minsep, "minimum peak spacing GHz (default 0.3)");
  ext->add_option("--out", ext_out, "output peaks CSV")->required();

  std::vector<std::string> argv(args);
  std::reverse(argv.begin(), argv.end());  // CLI11 wants reversed args
  try {
    app.parse(argv);
  } catch (const CLI::CallForHelp& e) {
    std::cout << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    std::cerr << e.what() << "\n" << app.help();
    return 1;
  }

  try {
    if (sim->parsed()) {
      const bool range_set = bmin_opt->count() > 0 || bmax_opt->count() > 0;
      if (bmin_opt->count() != bmax_opt->count())
        throw ValidationError("--bmin and --bmax must be given together");
      return cmd_simulate(sim_config, sim_preset, sim_bmin, sim_bmax, sim_steps,
                          range_set, sim_out, sim_pgm, sim_ac);
    }
    if (fit->parsed())
      return cmd_fit(fit_peaks, fit_config, fit_free, fit_out, fit_seed, fit_restarts);
    if (ac->parsed()) {
      const bool range_set = ac_bmin_opt->count() > 0 || ac_bmax_opt->count() > 0;
      if (ac_bmin_opt->count() != ac_bmax_opt->count())
        throw ValidationError("--bmin and --bmax must be given together");
      return cmd_anticross(ac_config, ac_preset, ac_bmin, ac_bmax, ac_steps,
                           range_set, ac_out);
    }
    if (dip->parsed())
      return cmd_dipole(dip_g1, dip_g2, dip_g1e, dip_g2e, dip_r, dip_axis, dip_scan,
                        dip_jobs);
    if (ext->parsed()) return cmd_extract(ext_map, ext_kmad, ext_minsep, ext_out);
  } catch (const ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const NumericalError& e) {
    std::cerr << "numerical error: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 1;
}

}  // namespace spinpair
