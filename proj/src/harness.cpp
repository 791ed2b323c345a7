#include "nanorod/harness.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace nanorod {

namespace {

const char* kVersion = "0.1.0";

cd parse_complex(const json& v, const char* key) {
  if (v.is_number()) return {v.get<double>(), 0.0};
  if (v.is_array() && v.size() == 2 && v[0].is_number() && v[1].is_number())
    return {v[0].get<double>(), v[1].get<double>()};
  throw ConfigError(std::string(key) + ": expected a number or [re, im]");
}

Vec3 parse_vec3(const json& v, const char* key) {
  if (v.is_array() && v.size() == 3 && v[0].is_number() && v[1].is_number() && v[2].is_number())
    return {v[0].get<double>(), v[1].get<double>(), v[2].get<double>()};
  throw ConfigError(std::string(key) + ": expected [x, y, z]");
}

template <class T>
void get(const json& obj, const char* key, T& out) {
  if (!obj.contains(key)) return;
  try {
    out = obj.at(key).get<T>();
  } catch (const json::exception& e) {
    throw ConfigError(std::string(key) + ": " + e.what());
  }
}

json cjson(cd z) { return json::array({z.real(), z.imag()}); }
json vjson(const Vec3& v) { return json::array({v.x(), v.y(), v.z()}); }

bool known_mode(const std::string& m) {
  static const char* modes[] = {"mesh",    "spectrum", "solve",   "scan",
                                "scaling", "figure1",  "figure2", "asymptotic-compare"};
  return std::find(std::begin(modes), std::end(modes), m) != std::end(modes);
}

}  // namespace

Scenario scenario_from_json(const json& cfg) {
  if (!cfg.is_object()) throw ConfigError("config root must be an object");
  Scenario s;
  get(cfg, "mode", s.mode);
  if (!known_mode(s.mode)) throw ConfigError("mode: unknown value '" + s.mode + "'");
  if (cfg.contains("geometry")) {
    const json& g = cfg["geometry"];
    get(g, "curve", s.geometry.curve);
    get(g, "length", s.geometry.length);
    get(g, "delta", s.geometry.delta);
    get(g, "n_axial", s.geometry.n_axial);
    get(g, "n_circum", s.geometry.n_circum);
    get(g, "cap_refine", s.geometry.cap_refine);
    get(g, "axial_grading", s.geometry.axial_grading);
    get(g, "sphere_radius", s.geometry.sphere_radius);
    get(g, "sphere_m", s.geometry.sphere_m);
    if (g.contains("points"))
      for (const auto& p : g["points"]) s.geometry.points.push_back(parse_vec3(p, "points"));
    if (g.contains("n_circum") && !g.contains("cap_refine"))
      s.geometry.cap_refine = s.geometry.n_circum / 4;
  }
  if (cfg.contains("material")) {
    const json& m = cfg["material"];
    if (m.contains("eps_c")) {
      if (m["eps_c"].is_string())
        s.material.eps_c_rule = m["eps_c"].get<std::string>();
      else
        s.material.eps_c = parse_complex(m["eps_c"], "eps_c");
    }
    get(m, "eps_m", s.material.eps_m);
    if (m.contains("mu_c")) s.material.mu_c = parse_complex(m["mu_c"], "mu_c");
    get(m, "mu_m", s.material.mu_m);
  }
  if (cfg.contains("wave")) {
    const json& w = cfg["wave"];
    if (w.contains("d")) s.wave.d = parse_vec3(w["d"], "d");
    if (w.contains("amplitude")) s.wave.amplitude = parse_complex(w["amplitude"], "amplitude");
    if (w.contains("omega")) {
      if (w["omega"].is_string())
        s.wave.omega_rule = w["omega"].get<std::string>();
      else
        get(w, "omega", s.wave.omega);
    }
  }
  if (cfg.contains("spectrum")) {
    get(cfg["spectrum"], "modes", s.modes);
    get(cfg["spectrum"], "eta0", s.eta0);
  }
  if (cfg.contains("output")) {
    const json& o = cfg["output"];
    get(o, "dir", s.out_dir);
    get(o, "grid_n", s.grid_n);
    get(o, "grid_scale", s.grid_scale);
    get(o, "vtk", s.vtk);
    get(o, "dump_operators", s.dump_operators);
    get(o, "energy", s.compute_energy);
    get(o, "collar", s.collar);
  }
  if (cfg.contains("energy")) {
    const json& e = cfg["energy"];
    get(e, "h", s.energy.h);
    get(e, "ratio", s.energy.ratio);
    get(e, "margin", s.energy.margin);
    get(e, "inflate", s.energy.inflate);
    if (e.contains("box_lo")) s.energy.lo = parse_vec3(e["box_lo"], "box_lo");
    if (e.contains("box_hi")) s.energy.hi = parse_vec3(e["box_hi"], "box_hi");
  }
  if (cfg.contains("sweep")) {
    const json& w = cfg["sweep"];
    get(w, "axis", s.sweep.axis);
    get(w, "values", s.sweep.values);
    get(w, "mode_index", s.sweep.mode_index);
    get(w, "s", s.sweep.s);
    get(w, "grid_n", s.sweep.grid_n);
    static const char* axes[] = {"omega", "rho", "delta", "eps_c_real"};
    if (std::find(std::begin(axes), std::end(axes), s.sweep.axis) == std::end(axes))
      throw ConfigError("sweep.axis: unknown value '" + s.sweep.axis + "'");
  }
  if (!(s.wave.d.norm() > 0)) throw ConfigError("wave.d must be nonzero");
  s.wave.d.normalize();
  if (!(s.eta0 > 0)) throw ConfigError("spectrum.eta0 must be positive");
  resolve_rules(s);
  return s;
}

void resolve_rules(Scenario& s) {
  if (s.wave.omega_rule == "delta_cuberoot") {
    s.wave.omega = std::cbrt(s.geometry.delta);
  } else if (!s.wave.omega_rule.empty()) {
    throw ConfigError("wave.omega: unknown rule '" + s.wave.omega_rule + "'");
  }
  if (s.material.eps_c_rule == "figure") {
    s.material.eps_c = cd(-1.0, std::pow(s.wave.omega, 4));
  } else if (!s.material.eps_c_rule.empty()) {
    throw ConfigError("material.eps_c: unknown rule '" + s.material.eps_c_rule + "'");
  }
  s.wave.omega_rule.clear();
  s.material.eps_c_rule.clear();
}

json scenario_to_json(const Scenario& s) {
  json j;
  j["mode"] = s.mode;
  j["geometry"] = {{"curve", s.geometry.curve},         {"length", s.geometry.length},
                   {"delta", s.geometry.delta},         {"n_axial", s.geometry.n_axial},
                   {"n_circum", s.geometry.n_circum},   {"cap_refine", s.geometry.cap_refine},
                   {"axial_grading", s.geometry.axial_grading},
                   {"sphere_radius", s.geometry.sphere_radius},
                   {"sphere_m", s.geometry.sphere_m}};
  if (!s.geometry.points.empty()) {
    json pts = json::array();
    for (const auto& p : s.geometry.points) pts.push_back(vjson(p));
    j["geometry"]["points"] = pts;
  }
  j["material"] = {{"eps_c", cjson(s.material.eps_c)},
                   {"eps_m", s.material.eps_m},
                   {"mu_c", cjson(s.material.mu_c)},
                   {"mu_m", s.material.mu_m}};
  j["wave"] = {{"d", vjson(s.wave.d)},
               {"amplitude", cjson(s.wave.amplitude)},
               {"omega", s.wave.omega}};
  j["spectrum"] = {{"modes", s.modes}, {"eta0", s.eta0}};
  j["output"] = {{"dir", s.out_dir},   {"grid_n", s.grid_n}, {"grid_scale", s.grid_scale},
                 {"vtk", s.vtk},       {"energy", s.compute_energy},
                 {"collar", s.collar}, {"dump_operators", s.dump_operators}};
  j["energy"] = {{"h", s.energy.h},
                 {"ratio", s.energy.ratio},
                 {"margin", s.energy.margin},
                 {"inflate", s.energy.inflate},
                 {"box_lo", vjson(s.energy.lo)},
                 {"box_hi", vjson(s.energy.hi)}};
  j["sweep"] = {{"axis", s.sweep.axis},
                {"values", s.sweep.values},
                {"mode_index", s.sweep.mode_index},
                {"s", s.sweep.s},
                {"grid_n", s.sweep.grid_n}};
  return j;
}

void apply_resolution(Scenario& s, int level) {
  static const int circum[] = {12, 16, 24, 32};
  if (level < 0 || level > 3) throw ConfigError("resolution level must be 0..3");
  s.geometry.n_circum = circum[level];
  s.geometry.cap_refine = circum[level] / 4;
  s.geometry.n_axial = 0;
  s.geometry.sphere_m = 8 + 4 * level;
  s.energy.h = s.geometry.delta / (4 + level);
}

Scenario figure_scenario(int which) {
  if (which != 1 && which != 2) throw ConfigError("figure must be 1 or 2");
  Scenario s;
  s.mode = which == 1 ? "figure1" : "figure2";
  s.geometry.curve = which == 1 ? "straight" : "paper";
  s.geometry.length = 4.0;
  s.geometry.delta = 0.25;
  s.wave.omega_rule = "delta_cuberoot";
  s.material.eps_c_rule = "figure";
  s.material.eps_m = 1.0;
  s.material.mu_c = 1.0;
  s.material.mu_m = 1.0;
  s.wave.amplitude = 1e3;
  s.energy.h = 0.05;
  resolve_rules(s);
  return s;
}

Problem build_problem(const GeometryConfig& g, double collar) {
  Problem pb;
  if (g.curve == "sphere") {
    pb.sphere = true;
    pb.mesh = build_sphere_mesh(g.sphere_radius, g.sphere_m);
    pb.collar = collar > 0 ? collar : default_collar(pb.mesh);
    const double r = g.sphere_radius, c = pb.collar;
    pb.classify = [r, c](const Vec3& x) {
      const double sd = x.norm() - r;
      if (std::abs(sd) < c) return Classification{PointClass::NearBoundary, sd};
      return Classification{sd < 0 ? PointClass::Inside : PointClass::Outside, sd};
    };
    return pb;
  }
  if (g.curve == "straight") {
    if (!(g.length > 0)) throw ConfigError("geometry.length must be positive");
    pb.curve = straight_curve(g.length);
  } else if (g.curve == "paper") {
    pb.curve = paper_curve();
  } else if (g.curve == "custom") {
    pb.curve = custom_curve(g.points);
  } else {
    throw ConfigError("geometry.curve: unknown value '" + g.curve + "'");
  }
  pb.spec.curve = pb.curve;
  pb.spec.delta = g.delta;
  pb.spec.n_axial = g.n_axial;
  pb.spec.n_circum = g.n_circum;
  pb.spec.cap_refine = g.cap_refine;
  pb.spec.axial_grading = g.axial_grading;
  pb.mesh = build_rod_mesh(pb.spec);
  pb.collar = collar > 0 ? collar : default_collar(pb.mesh);
  pb.classify = rod_classifier(pb.curve, g.delta, pb.collar);
  return pb;
}

int select_resonant_mode(const NPSpectrum& s, const Eigen::VectorXd& coupling, double min_lambda) {
  int best = -1;
  double score = -1.0;
  for (int j = 1; j < s.size(); ++j) {
    if (std::abs(s.lambdas[j]) < min_lambda || std::abs(s.lambdas[j]) > 0.49) continue;
    const double v = coupling[j] * coupling[j] / s.a[j];
    if (v > score) {
      score = v;
      best = j;
    }
  }
  if (best < 0) throw SpectralError("no mode eligible for resonance");
  return best;
}

RunOutcome solve_scenario(const Problem& pb, const NPModel& model, const Scenario& sc,
                          const NPSpectrum* spectrum, bool with_grid, int grid_n) {
  if (!(sc.wave.omega > 0)) throw ConfigError("wave.omega must be positive");
  RunOutcome out;
  out.wn = Wavenumbers::make(sc.wave.omega, sc.material.eps_c, sc.material.eps_m,
                             sc.material.mu_c, sc.material.mu_m);
  IncidentWave wave{sc.wave.d, sc.wave.amplitude};
  const TransmissionOperators ops = assemble_transmission(pb.mesh, model, out.wn);
  out.dens = solve_transmission(pb.mesh, ops, wave);
  Solution sol{&pb.mesh, out.wn, wave, out.dens, pb.classify, pb.collar};
  if (with_grid)
    out.grid = resonance_strength(sol, figure_slice(pb.mesh, grid_n > 0 ? grid_n : sc.grid_n,
                                                    sc.grid_scale),
                                  true);
  if (sc.compute_energy) out.energies = energies(sol, sc.energy);
  if (spectrum) {
    double m = std::numeric_limits<double>::infinity();
    for (int j = 1; j < spectrum->size(); ++j)
      if (std::abs(spectrum->lambdas[j]) >= 1e-3)
        m = std::min(m, std::abs(tau_value(spectrum->lambdas[j], sc.material.eps_c,
                                           sc.material.eps_m)));
    out.min_tau = m;
  }
  return out;
}

namespace {

std::string path_in(const Scenario& sc, const std::string& name) { return sc.out_dir + "/" + name; }

void write_metadata(const Scenario& sc, const Problem& pb, const json& extra) {
  json meta;
  meta["scenario"] = scenario_to_json(sc);
  meta["version"] = kVersion;
  meta["eigen"] = std::to_string(EIGEN_WORLD_VERSION) + "." + std::to_string(EIGEN_MAJOR_VERSION) +
                  "." + std::to_string(EIGEN_MINOR_VERSION);
  meta["panels"] = pb.mesh.size();
  meta["collar"] = pb.collar;
  meta["warnings"] = pb.mesh.warnings;
  for (auto it = extra.begin(); it != extra.end(); ++it) meta[it.key()] = it.value();
  write_text(path_in(sc, "metadata.json"), meta.dump(2) + "\n");
}

void write_solution(const Scenario& sc, const std::string& stem, const RunOutcome& r) {
  r.grid.write_csv(path_in(sc, stem + "_field.csv"));
  if (sc.vtk) r.grid.write_vtk(path_in(sc, stem + "_field.vtk"));
  if (sc.compute_energy) write_energies_csv(r.energies, path_in(sc, stem + "_energies.csv"));
}

double resonant_theta(const Problem& pb, const NPModel& model, const NPSpectrum& spec,
                      const Scenario& sc, double omega, int& mode) {
  if (sc.sweep.mode_index == -2) return (1.0 / sc.material.eps_c).real();
  if (mode < 0) {
    const Eigen::VectorXd c =
        spec.eigfuncs.transpose() * (model.M * coupling_vector(pb.mesh, model, sc.wave.d));
    mode = sc.sweep.mode_index >= 0 ? sc.sweep.mode_index : select_resonant_mode(spec, c);
  }
  return track_resonance(pb.mesh, model, spec, mode, omega, sc.material.eps_m).theta;
}

int run_sweep(const Scenario& sc, std::ostream& log) {
  Problem pb = build_problem(sc.geometry, sc.collar);
  NPModel model = build_np_model(pb.mesh);
  NPSpectrum spec = np_spectrum(model, 0);
  int mode = -1;
  double theta = (1.0 / sc.material.eps_c).real();
  const double rho0 = (1.0 / sc.material.eps_c).imag();
  if (sc.sweep.axis == "rho") theta = resonant_theta(pb, model, spec, sc, sc.wave.omega, mode);

  CsvWriter csv(path_in(sc, "sweep.csv"),
                {"axis", "value", "E_o", "E_i", "electric", "max_theta", "min_tau", "rcond",
                 "status"});
  for (double v : sc.sweep.values) {
    Scenario run = sc;
    try {
      if (sc.sweep.axis == "rho") {
        run.material.eps_c = 1.0 / cd(theta, v);
      } else if (sc.sweep.axis == "eps_c_real") {
        run.material.eps_c = cd(v, sc.material.eps_c.imag());
      } else if (sc.sweep.axis == "omega") {
        run.wave.omega = v;
      } else {
        run.geometry.delta = v;
      }
      RunOutcome r;
      if (sc.sweep.axis == "delta") {
        Problem p2 = build_problem(run.geometry, sc.collar);
        NPModel m2 = build_np_model(p2.mesh);
        NPSpectrum s2 = np_spectrum(m2, 0);
        r = solve_scenario(p2, m2, run, &s2, true, sc.sweep.grid_n);
      } else {
        r = solve_scenario(pb, model, run, &spec, true, sc.sweep.grid_n);
      }
      csv.row({sc.sweep.axis, fmt(v), fmt(r.energies.E_o), fmt(r.energies.E_i),
               fmt(r.energies.electric), fmt(r.grid.theta_scale), fmt(r.min_tau),
               fmt(r.dens.rcond), "ok"});
    } catch (const std::exception& e) {
      log << "sweep value " << v << " failed: " << e.what() << "\n";
      csv.row({sc.sweep.axis, fmt(v), "nan", "nan", "nan", "nan", "nan", "nan", "failed"});
    }
  }
  write_metadata(sc, pb, {{"resonant_mode", mode}, {"theta", theta}, {"rho0", rho0}});
  return 0;
}

int run_scaling(const Scenario& sc, std::ostream& log) {
  Problem pb = build_problem(sc.geometry, sc.collar);
  NPModel model = build_np_model(pb.mesh);
  NPSpectrum spec = np_spectrum(model, 0);
  int mode = -1;
  CsvWriter csv(path_in(sc, "scaling.csv"), {"omega", "rho", "delta", "E_full", "E_pred"});
  for (double w : sc.sweep.values) {
    const double rho = -std::pow(w, sc.sweep.s);
    const double theta = resonant_theta(pb, model, spec, sc, w, mode);
    Scenario run = sc;
    run.wave.omega = w;
    run.material.eps_c = 1.0 / cd(theta, rho);
    try {
      const RunOutcome r = solve_scenario(pb, model, run, nullptr, false);
      const BlowupPrediction bp = blowup_scaling_prediction(w, rho, sc.geometry.delta);
      csv.row({fmt(w), fmt(rho), fmt(sc.geometry.delta), fmt(r.energies.E_o), fmt(bp.dominant)});
    } catch (const std::exception& e) {
      log << "scaling omega " << w << " failed: " << e.what() << "\n";
      csv.row({fmt(w), fmt(rho), fmt(sc.geometry.delta), "nan", "nan"});
    }
  }
  write_metadata(sc, pb, {{"resonant_mode", mode}});
  return 0;
}

int run_asymptotic_compare(const Scenario& sc, std::ostream&) {
  Problem pb = build_problem(sc.geometry, sc.collar);
  if (pb.sphere) throw ConfigError("asymptotic-compare needs a rod geometry");
  NPModel model = build_np_model(pb.mesh);
  NPSpectrum spec = np_spectrum(model, 0);
  QuasiStaticModel qs =
      make_quasistatic_model(pb.mesh, model, spec, pb.curve, sc.geometry.delta, sc.wave.d);
  const RunOutcome r = solve_scenario(pb, model, [&] {
    Scenario t = sc;
    t.compute_energy = false;
    return t;
  }(), nullptr, false);
  IncidentWave wave{sc.wave.d, sc.wave.amplitude};
  Solution sol{&pb.mesh, r.wn, wave, r.dens, pb.classify, pb.collar};
  QSMaterial mat{sc.material.eps_c, sc.material.eps_m, sc.material.mu_m, sc.wave.amplitude};
  const auto J = all_modes(qs);
  const double R = 10.0 * pb.curve.arclength();
  CsvWriter csv(path_in(sc, "asymptotic_compare.csv"),
                {"x", "y", "z", "re_u", "im_u", "re_us", "im_us", "theta", "mask", "source"});
  for (int i = 0; i < 8; ++i) {
    const double t = kPi * (i + 0.5) / 8;
    const Vec3 x = R * Vec3(std::sin(t) * 0.6, std::sin(t) * 0.8, std::cos(t));
    const FieldSample f = eval_point(sol, x);
    csv.row({fmt(x.x()), fmt(x.y()), fmt(x.z()), fmt(f.u.real()), fmt(f.u.imag()),
             fmt(f.us.real()), fmt(f.us.imag()), fmt(f.theta), "outside", "full"});
    const cd ua = us_asymptotic(qs, sc.wave.omega, mat, J, x);
    const cd ui = wave.value(r.wn.k_m, x);
    csv.row({fmt(x.x()), fmt(x.y()), fmt(x.z()), fmt((ua + ui).real()), fmt((ua + ui).imag()),
             fmt(ua.real()), fmt(ua.imag()), "nan", "outside", "asymptotic"});
  }
  write_metadata(sc, pb, json::object());
  return 0;
}

int run_impl(const Scenario& sc, std::ostream& log) {
  ensure_dir(sc.out_dir);
  if (sc.mode == "scan") return run_sweep(sc, log);
  if (sc.mode == "scaling") return run_scaling(sc, log);
  if (sc.mode == "asymptotic-compare") return run_asymptotic_compare(sc, log);

  if (sc.mode == "figure1" || sc.mode == "figure2") {
    Scenario fig = figure_scenario(sc.mode == "figure1" ? 1 : 2);
    fig.geometry.n_circum = sc.geometry.n_circum;
    fig.geometry.cap_refine = sc.geometry.cap_refine;
    fig.geometry.n_axial = sc.geometry.n_axial;
    fig.out_dir = sc.out_dir;
    fig.grid_n = sc.grid_n;
    fig.vtk = sc.vtk;
    fig.compute_energy = sc.compute_energy;
    fig.energy.ratio = sc.energy.ratio;
    fig.energy.h = sc.energy.h;
    Problem pb = build_problem(fig.geometry, sc.collar);
    NPModel model = build_np_model(pb.mesh);
    json extra;
    const Vec3 dirs[2] = {Vec3::UnitX(), Vec3::UnitZ()};
    const char* names[2] = {"d100", "d001"};
    for (int i = 0; i < 2; ++i) {
      fig.wave.d = dirs[i];
      const RunOutcome r = solve_scenario(pb, model, fig);
      write_solution(fig, sc.mode + "_" + names[i], r);
      extra[names[i]] = {{"E_o", r.energies.E_o},
                         {"E_i", r.energies.E_i},
                         {"electric", r.energies.electric},
                         {"max_abs_re_us", r.grid.us_scale},
                         {"rcond", r.dens.rcond}};
      log << sc.mode << " " << names[i] << ": E_o=" << r.energies.E_o
          << " E_i=" << r.energies.E_i << "\n";
    }
    write_metadata(fig, pb, extra);
    return 0;
  }

  Problem pb = build_problem(sc.geometry, sc.collar);
  for (const auto& w : pb.mesh.warnings) log << "warning: " << w << "\n";
  if (sc.mode == "mesh") {
    write_mesh(pb.mesh, path_in(sc, "mesh.txt"));
    log << "panels " << pb.mesh.size() << ", area " << pb.mesh.total_area << ", volume "
        << pb.mesh.volume() << "\n";
    write_metadata(sc, pb, {{"area", pb.mesh.total_area}, {"volume", pb.mesh.volume()}});
    return 0;
  }
  NPModel model = build_np_model(pb.mesh);
  if (sc.mode == "spectrum") {
    NPSpectrum spec = np_spectrum(model, sc.modes);
    ResonanceParams rp = tau_values(spec, sc.material.eps_c, sc.material.eps_m, sc.eta0,
                                    sc.material.mu_m);
    write_spectrum_csv(spec, &rp, path_in(sc, "spectrum.csv"));
    const std::string table = spectrum_table(spec, &rp);
    write_text(path_in(sc, "spectrum.txt"), table);
    log << table;
    write_metadata(sc, pb,
                   {{"asymmetry", spec.asymmetry},
                    {"lambda0_rayleigh", spec.lambda0_rayleigh},
                    {"calderon_residual", spec.calderon_residual},
                    {"orthogonality_error", spec.orthogonality_error}});
    return 0;
  }
  // solve
  if (sc.wave.omega * pb.mesh.max_diameter() > 0 &&
      sc.wave.omega * (pb.sphere ? 2 * sc.geometry.sphere_radius
                                 : pb.curve.arclength() + 2 * sc.geometry.delta) >= 1.0)
    log << "warning: omega * diameter >= 1, outside the quasi-static regime\n";
  if (sc.dump_operators) {
    const Wavenumbers wn = Wavenumbers::make(sc.wave.omega, sc.material.eps_c, sc.material.eps_m,
                                             sc.material.mu_c, sc.material.mu_m);
    const TransmissionOperators ops = assemble_transmission(pb.mesh, model, wn);
    dump_operator(ops.Sm, path_in(sc, "S_km.txt"));
    dump_operator(ops.Km, path_in(sc, "K_km.txt"));
  }
  NPSpectrum spec = np_spectrum(model, sc.modes);
  const RunOutcome r = solve_scenario(pb, model, sc, &spec);
  write_solution(sc, "solve", r);
  log << "E_o=" << r.energies.E_o << " E_i=" << r.energies.E_i
      << " electric=" << r.energies.electric << " rcond=" << r.dens.rcond << "\n";
  write_metadata(sc, pb,
                 {{"rcond", r.dens.rcond},
                  {"residual", r.dens.residual},
                  {"min_tau", r.min_tau},
                  {"max_abs_re_us", r.grid.us_scale}});
  return 0;
}

}  // namespace

int run(const Scenario& sc, std::ostream& log) {
  try {
    return run_impl(sc, log);
  } catch (const ConfigError& e) {
    log << "config error: " << e.what() << "\n";
    return 2;
  } catch (const GeometryError& e) {
    log << "config error: " << e.what() << "\n";
    return 2;
  } catch (const KernelError& e) {
    log << "config error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    log << "numerical failure: " << e.what() << "\n";
    return 3;
  }
}

}  // namespace nanorod
