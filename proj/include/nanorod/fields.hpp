#pragma once

#include "nanorod/solver.hpp"

#include <functional>
#include <string>
#include <vector>

namespace nanorod {

struct LayerValue {
  cd value{0.0, 0.0};
  CVec3 grad = CVec3::Zero();
};

/// S^k[sigma](x) and its gradient at an off-surface point.
LayerValue eval_single_layer(cd k, const SurfaceMesh& mesh, const Eigen::VectorXcd& sigma,
                             const Vec3& x, const QuadOptions& opt = evaluation_quadrature());

using Classifier = std::function<Classification(const Vec3&)>;
/// Rod classifier from the tube-and-cap model.
Classifier rod_classifier(const CenterlineCurve& curve, double delta, double collar);
/// Classifier from a closed mesh: ray-cast inside test, near band by distance to
/// the closest vertex or centroid.
Classifier mesh_classifier(const SurfaceMesh& mesh, double collar);

/// Everything needed to evaluate the fields of one solve.
struct Solution {
  const SurfaceMesh* mesh = nullptr;
  Wavenumbers wn;
  IncidentWave wave;
  DensityPair dens;
  Classifier classify;
  double collar = 0.0;
};

struct FieldSample {
  PointClass cls = PointClass::Outside;
  cd u{0.0, 0.0}, us{0.0, 0.0};   // us = u - u^i on both sides
  CVec3 grad_u = CVec3::Zero(), grad_us = CVec3::Zero();
  double theta = 0.0;  // |grad Re us|
};

/// Outside: u = u^i + S^km[psi]; inside: u = S^kc[phi]. NearBoundary points are
/// evaluated with the outside representation when `force` is set, else skipped.
FieldSample eval_point(const Solution& sol, const Vec3& x, bool force = false);

struct FieldGrid {
  int nx = 0, ny = 0;
  std::vector<Vec3> points;
  std::vector<FieldSample> samples;
  bool normalized = false;
  double theta_scale = 1.0;  // divisor applied to theta when normalized
  double us_scale = 1.0;     // max |Re us| over valid points

  /// Divides theta by its maximum over valid points.
  void normalize();
  void write_csv(const std::string& path) const;
  void write_vtk(const std::string& path) const;
};

/// Plane grid: origin + i*du*eu + j*dv*ev.
FieldGrid make_plane_grid(const Vec3& origin, const Vec3& eu, const Vec3& ev, double lu, double lv,
                          int nu, int nv);
/// Slice in the (x2, x3)-plane at x1 = 0 over the mesh's bounding rectangle
/// scaled by `scale` and squared up.
FieldGrid figure_slice(const SurfaceMesh& mesh, int n = 201, double scale = 1.5);

FieldGrid eval_field(const Solution& sol, FieldGrid grid);
/// Same as eval_field; theta normalized to max 1 when requested.
FieldGrid resonance_strength(const Solution& sol, FieldGrid grid, bool normalize = true);

struct EnergyOptions {
  Vec3 lo = Vec3::Zero(), hi = Vec3::Zero();  // box B; zero extent picks the default
  double h = 0.05;        // fine spacing near the rod
  int ratio = 5;          // coarse spacing = ratio * h
  double margin = 0.5;    // fine cells within this distance of the rod
  double inflate = 1.5;   // default box: bbox inflated by inflate * max bbox extent
};

struct Energies {
  double E_o = 0.0, E_i = 0.0, electric = 0.0;
  double grad_us_sq = 0.0;  // ||grad us||^2 outside (complex)
  double collar = 0.0, h = 0.0;
  std::size_t n_outside = 0, n_inside = 0, n_skipped = 0;
};

Energies energies(const Solution& sol, const EnergyOptions& opt = {});
void write_energies_csv(const Energies& e, const std::string& path);

/// Bounding box of the mesh vertices.
void mesh_bbox(const SurfaceMesh& mesh, Vec3& lo, Vec3& hi);

}  // namespace nanorod
