#pragma once

#include "nanorod/asymptotics.hpp"
#include "nanorod/fields.hpp"
#include "nanorod/io.hpp"
#include "nanorod/solver.hpp"
#include "nanorod/spectral.hpp"

#include <ostream>
#include <string>
#include <vector>

namespace nanorod {

struct GeometryConfig {
  std::string curve = "straight";  // straight | paper | custom | sphere
  double length = 4.0;
  double delta = 0.25;
  int n_axial = 0;
  int n_circum = 16;
  int cap_refine = 4;
  double axial_grading = 1.0;
  std::vector<Vec3> points;  // custom centerline
  double sphere_radius = 1.0;
  int sphere_m = 16;
};

struct MaterialConfig {
  cd eps_c{-3.0, 0.5};
  double eps_m = 1.0;
  cd mu_c{1.0, 0.0};
  double mu_m = 1.0;
  /// "figure": eps_c = -1 + i omega^4.
  std::string eps_c_rule;
};

struct WaveConfig {
  Vec3 d = Vec3::UnitZ();
  cd amplitude{1e3, 0.0};
  double omega = 0.1;
  /// "delta_cuberoot": omega = delta^(1/3).
  std::string omega_rule;
};

struct SweepConfig {
  std::string axis = "rho";  // omega | rho | delta | eps_c_real
  std::vector<double> values;
  /// Resonant mode for rho and scaling sweeps; -1 picks the best-coupled mode,
  /// -2 keeps the configured theta.
  int mode_index = -1;
  double s = 2.0;  // scaling: rho = -omega^s
  int grid_n = 61;
};

struct Scenario {
  std::string mode = "solve";
  GeometryConfig geometry;
  MaterialConfig material;
  WaveConfig wave;
  int modes = 60;
  double eta0 = 0.05;
  double collar = 0.0;  // 0 picks default_collar
  EnergyOptions energy;
  bool compute_energy = true;
  int grid_n = 201;
  double grid_scale = 1.5;
  bool vtk = false;
  bool dump_operators = false;
  std::string out_dir = "out";
  SweepConfig sweep;
};

/// Throws ConfigError on unknown modes or malformed values.
Scenario scenario_from_json(const json& cfg);
json scenario_to_json(const Scenario& s);
/// Desk resolution levels 0..3 (n_circum 12, 16, 24, 32).
void apply_resolution(Scenario& s, int level);
/// Figure scenarios: 1 = straight rod, 2 = curved centerline.
Scenario figure_scenario(int which);
/// Expands omega and eps_c rules.
void resolve_rules(Scenario& s);

struct Problem {
  CenterlineCurve curve;
  RodSpec spec;
  SurfaceMesh mesh;
  double collar = 0.0;
  bool sphere = false;
  Classifier classify;
};
Problem build_problem(const GeometryConfig& g, double collar = 0.0);

/// Mode with the largest |c_j|^2 / a_j among modes with |lambda_j| >= min_lambda.
int select_resonant_mode(const NPSpectrum& s, const Eigen::VectorXd& coupling,
                         double min_lambda = 1e-2);

struct RunOutcome {
  Energies energies;
  FieldGrid grid;
  DensityPair dens;
  Wavenumbers wn;
  double min_tau = 0.0;
};

/// One full solve with fields and (optionally) energies.
RunOutcome solve_scenario(const Problem& pb, const NPModel& model, const Scenario& sc,
                          const NPSpectrum* spectrum = nullptr, bool with_grid = true,
                          int grid_n = 0);

/// Dispatches on sc.mode and writes artifacts into sc.out_dir. Returns 0 on
/// success, 2 on configuration errors, 3 on numerical failures.
int run(const Scenario& sc, std::ostream& log);

}  // namespace nanorod
