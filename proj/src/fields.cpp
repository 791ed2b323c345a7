#include "nanorod/fields.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

namespace nanorod {

LayerValue eval_single_layer(cd k, const SurfaceMesh& mesh, const Eigen::VectorXcd& sigma,
                             const Vec3& x, const QuadOptions& opt) {
  LayerValue out;
  const bool stat = k == 0.0;
  for (std::size_t q = 0; q < mesh.size(); ++q) {
    const cd s = sigma[q];
    cd val = 0.0;
    CVec3 g = CVec3::Zero();
    integrate_panel(x, mesh.panels[q], opt, [&](const Vec3& y, double w) {
      const Vec3 d = x - y;
      const double r = d.norm();
      if (r == 0.0) return;
      const cd G = stat ? cd(-1.0 / (4 * kPi * r)) : -std::exp(kI * k * r) / (4 * kPi * r);
      val += G * w;
      const cd f = G * (kI * k - 1.0 / r) / r * w;
      g += f * d.cast<cd>();
    });
    out.value += val * s;
    out.grad += g * s;
  }
  return out;
}

Classifier rod_classifier(const CenterlineCurve& curve, double delta, double collar) {
  return [curve, delta, collar](const Vec3& x) { return classify_point(x, curve, delta, collar); };
}

Classifier mesh_classifier(const SurfaceMesh& mesh, double collar) {
  return [&mesh, collar](const Vec3& x) {
    double dmin = std::numeric_limits<double>::infinity();
    for (const auto& p : mesh.panels) {
      dmin = std::min(dmin, (p.centroid - x).norm());
      for (const auto& v : p.v) dmin = std::min(dmin, (v - x).norm());
    }
    const bool inside = mesh_contains(mesh, x);
    const double sd = inside ? -dmin : dmin;
    if (dmin < collar) return Classification{PointClass::NearBoundary, sd};
    return Classification{inside ? PointClass::Inside : PointClass::Outside, sd};
  };
}

FieldSample eval_point(const Solution& sol, const Vec3& x, bool force) {
  FieldSample s;
  s.cls = sol.classify(x).cls;
  if (s.cls == PointClass::NearBoundary && !force) return s;
  const cd ui = sol.wave.value(sol.wn.k_m, x);
  const CVec3 gi = sol.wave.gradient(sol.wn.k_m, x);
  if (s.cls == PointClass::Inside) {
    const LayerValue lv = eval_single_layer(sol.wn.k_c, *sol.mesh, sol.dens.phi, x);
    s.u = lv.value;
    s.grad_u = lv.grad;
    s.us = s.u - ui;
    s.grad_us = s.grad_u - gi;
  } else {
    const LayerValue lv = eval_single_layer(sol.wn.k_m, *sol.mesh, sol.dens.psi, x);
    s.us = lv.value;
    s.grad_us = lv.grad;
    s.u = s.us + ui;
    s.grad_u = s.grad_us + gi;
  }
  s.theta = s.grad_us.real().norm();
  return s;
}

void FieldGrid::normalize() {
  double tmax = 0.0;
  for (const auto& s : samples)
    if (s.cls != PointClass::NearBoundary) tmax = std::max(tmax, s.theta);
  if (tmax > 0) {
    for (auto& s : samples) s.theta /= tmax;
    theta_scale = tmax;
  }
  normalized = true;
}

void FieldGrid::write_csv(const std::string& path) const {
  std::FILE* f = std::fopen(path.c_str(), "w");
  if (!f) throw SolverError("cannot write " + path);
  std::fprintf(f, "x,y,z,re_u,im_u,re_us,im_us,theta,mask\n");
  for (std::size_t i = 0; i < points.size(); ++i) {
    const auto& s = samples[i];
    const char* m = s.cls == PointClass::Inside    ? "inside"
                    : s.cls == PointClass::Outside ? "outside"
                                                   : "near";
    std::fprintf(f, "%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%s\n", points[i].x(),
                 points[i].y(), points[i].z(), s.u.real(), s.u.imag(), s.us.real(), s.us.imag(),
                 s.theta, m);
  }
  std::fclose(f);
}

void FieldGrid::write_vtk(const std::string& path) const {
  std::FILE* f = std::fopen(path.c_str(), "w");
  if (!f) throw SolverError("cannot write " + path);
  std::fprintf(f, "# vtk DataFile Version 3.0\nnanorod field\nASCII\nDATASET STRUCTURED_GRID\n");
  std::fprintf(f, "DIMENSIONS %d %d 1\nPOINTS %zu double\n", nx, ny, points.size());
  for (const auto& p : points) std::fprintf(f, "%.17g %.17g %.17g\n", p.x(), p.y(), p.z());
  std::fprintf(f, "POINT_DATA %zu\n", points.size());
  auto scalar = [&](const char* name, auto get) {
    std::fprintf(f, "SCALARS %s double 1\nLOOKUP_TABLE default\n", name);
    for (const auto& s : samples) std::fprintf(f, "%.17g\n", get(s));
  };
  scalar("abs_re_us", [](const FieldSample& s) { return std::abs(s.us.real()); });
  scalar("theta", [](const FieldSample& s) { return s.theta; });
  scalar("mask", [](const FieldSample& s) { return double(int(s.cls)); });
  std::fclose(f);
}

FieldGrid make_plane_grid(const Vec3& origin, const Vec3& eu, const Vec3& ev, double lu, double lv,
                          int nu, int nv) {
  if (nu < 2 || nv < 2) throw SolverError("plane grid needs at least 2 x 2 points");
  FieldGrid g;
  g.nx = nu;
  g.ny = nv;
  for (int j = 0; j < nv; ++j)
    for (int i = 0; i < nu; ++i)
      g.points.push_back(origin + (lu * i / (nu - 1)) * eu + (lv * j / (nv - 1)) * ev);
  g.samples.resize(g.points.size());
  return g;
}

void mesh_bbox(const SurfaceMesh& mesh, Vec3& lo, Vec3& hi) {
  lo = Vec3::Constant(std::numeric_limits<double>::infinity());
  hi = -lo;
  for (const auto& v : mesh.vertices) {
    lo = lo.cwiseMin(v);
    hi = hi.cwiseMax(v);
  }
}

FieldGrid figure_slice(const SurfaceMesh& mesh, int n, double scale) {
  Vec3 lo, hi;
  mesh_bbox(mesh, lo, hi);
  const double cy = 0.5 * (lo.y() + hi.y()), cz = 0.5 * (lo.z() + hi.z());
  const double half = 0.5 * scale * std::max(hi.y() - lo.y(), hi.z() - lo.z());
  return make_plane_grid(Vec3(0.0, cy - half, cz - half), Vec3::UnitY(), Vec3::UnitZ(), 2 * half,
                         2 * half, n, n);
}

FieldGrid eval_field(const Solution& sol, FieldGrid grid) {
  const int n = int(grid.points.size());
  grid.samples.resize(n);
#pragma omp parallel for schedule(dynamic, 32)
  for (int i = 0; i < n; ++i) grid.samples[i] = eval_point(sol, grid.points[i]);
  double m = 0.0;
  for (const auto& s : grid.samples)
    if (s.cls != PointClass::NearBoundary) m = std::max(m, std::abs(s.us.real()));
  grid.us_scale = m;
  return grid;
}

FieldGrid resonance_strength(const Solution& sol, FieldGrid grid, bool normalize) {
  grid = eval_field(sol, std::move(grid));
  if (normalize) grid.normalize();
  return grid;
}

Energies energies(const Solution& sol, const EnergyOptions& opt) {
  Vec3 rlo, rhi;
  mesh_bbox(*sol.mesh, rlo, rhi);
  Vec3 lo = opt.lo, hi = opt.hi;
  if ((hi - lo).minCoeff() <= 0) {
    const double pad = opt.inflate * (rhi - rlo).maxCoeff();
    lo = rlo - Vec3::Constant(pad);
    hi = rhi + Vec3::Constant(pad);
  }
  if (!((lo.array() < rlo.array()).all() && (rhi.array() < hi.array()).all()))
    throw SolverError("energy box does not strictly contain the rod");
  if (!(opt.h > 0) || opt.ratio < 1) throw SolverError("energy grid spacing must be positive");

  const double H = opt.h * opt.ratio;
  const Eigen::Array3i nc = ((hi - lo) / H).array().ceil().cast<int>();
  struct Node {
    Vec3 x;
    double vol;
  };
  std::vector<Node> nodes;
  const double reach = opt.margin + 0.5 * std::sqrt(3.0) * H;
  for (int k = 0; k < nc[2]; ++k)
    for (int j = 0; j < nc[1]; ++j)
      for (int i = 0; i < nc[0]; ++i) {
        const Vec3 c = lo + H * Vec3(i + 0.5, j + 0.5, k + 0.5);
        if (std::abs(sol.classify(c).signed_distance) > reach) {
          nodes.push_back({c, H * H * H});
          continue;
        }
        const Vec3 corner = lo + H * Vec3(i, j, k);
        const double h3 = opt.h * opt.h * opt.h;
        for (int c3 = 0; c3 < opt.ratio; ++c3)
          for (int c2 = 0; c2 < opt.ratio; ++c2)
            for (int c1 = 0; c1 < opt.ratio; ++c1)
              nodes.push_back({corner + opt.h * Vec3(c1 + 0.5, c2 + 0.5, c3 + 0.5), h3});
      }

  // Per-node contributions summed serially so results do not depend on the thread count.
  const int n = int(nodes.size());
  std::vector<FieldSample> vals(n);
#pragma omp parallel for schedule(dynamic, 64)
  for (int i = 0; i < n; ++i) vals[i] = eval_point(sol, nodes[i].x);
  double eo = 0, ei = 0, el = 0, gs = 0;
  std::size_t no = 0, ni = 0, ns = 0;
  for (int i = 0; i < n; ++i) {
    const FieldSample& s = vals[i];
    const double v = nodes[i].vol;
    if (s.cls == PointClass::Outside) {
      eo += s.grad_us.real().squaredNorm() * v;
      gs += s.grad_us.squaredNorm() * v;
      ++no;
    } else if (s.cls == PointClass::Inside) {
      ei += s.grad_u.real().squaredNorm() * v;
      el += s.grad_u.squaredNorm() * v;
      ++ni;
    } else {
      ++ns;
    }
  }
  Energies e;
  e.E_o = std::sqrt(eo);
  e.E_i = std::sqrt(ei);
  e.electric = sol.wn.eps_c.imag() * el / (8 * kPi);
  e.grad_us_sq = gs;
  e.collar = sol.collar;
  e.h = opt.h;
  e.n_outside = no;
  e.n_inside = ni;
  e.n_skipped = ns;
  return e;
}

void write_energies_csv(const Energies& e, const std::string& path) {
  std::FILE* f = std::fopen(path.c_str(), "w");
  if (!f) throw SolverError("cannot write " + path);
  std::fprintf(f, "E_o,E_i,electric,collar,h\n%.17g,%.17g,%.17g,%.17g,%.17g\n", e.E_o, e.E_i,
               e.electric, e.collar, e.h);
  std::fclose(f);
}

}  // namespace nanorod
