#include "nanorod/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>

namespace nanorod {

namespace {

constexpr double kPi = 3.14159265358979323846;

Panel make_panel(const SurfaceMesh& m, const std::array<int, 3>& tri, Region region) {
  Panel p;
  for (int i = 0; i < 3; ++i) p.v[i] = m.vertices[tri[i]];
  p.centroid = (p.v[0] + p.v[1] + p.v[2]) / 3.0;
  Vec3 c = (p.v[1] - p.v[0]).cross(p.v[2] - p.v[0]);
  p.area = 0.5 * c.norm();
  p.normal = c.normalized();
  p.diameter = std::max({(p.v[0] - p.v[1]).norm(), (p.v[1] - p.v[2]).norm(),
                         (p.v[2] - p.v[0]).norm()});
  p.region = region;
  p.foot = Vec3::Zero();
  p.foot_s = 0.0;
  return p;
}

// Hemisphere of radius r about `center` whose pole points along `axis`.
// Row k (0..m) sits at polar angle (pi/2) k/m and carries 4k vertices; the
// last row is the supplied equator ring (4m vertices at azimuth 2 pi q / 4m).
void add_cap(SurfaceMesh& mesh, const Vec3& center, const Vec3& axis, const Vec3& n1,
             const Vec3& n2, double r, int m, const std::vector<int>& equator, Region region) {
  std::vector<std::vector<int>> rows(m + 1);
  rows[0].push_back(int(mesh.vertices.size()));
  mesh.vertices.push_back(center + r * axis);
  for (int k = 1; k < m; ++k) {
    double th = 0.5 * kPi * k / m;
    for (int q = 0; q < 4 * k; ++q) {
      double ph = 2 * kPi * q / (4.0 * k);
      rows[k].push_back(int(mesh.vertices.size()));
      mesh.vertices.push_back(center + r * (std::cos(th) * axis +
                                            std::sin(th) * (std::cos(ph) * n1 + std::sin(ph) * n2)));
    }
  }
  rows[m] = equator;
  auto idx = [&](int k, int o, int q) {
    if (k == 0) return rows[0][0];
    return rows[k][(o * k + q) % (4 * k)];
  };
  for (int k = 1; k <= m; ++k) {
    for (int o = 0; o < 4; ++o) {
      for (int q = 0; q < k; ++q) {
        std::array<int, 3> up{idx(k, o, q), idx(k, o, q + 1), idx(k - 1, o, q)};
        mesh.triangles.push_back(up);
        mesh.panels.push_back(make_panel(mesh, up, region));
        if (q + 1 < k) {
          std::array<int, 3> dn{idx(k - 1, o, q), idx(k, o, q + 1), idx(k - 1, o, q + 1)};
          mesh.triangles.push_back(dn);
          mesh.panels.push_back(make_panel(mesh, dn, region));
        }
      }
    }
  }
}

// Flip triangles whose normal points toward `inner(panel)`.
void orient(SurfaceMesh& mesh, std::size_t first, const std::function<Vec3(const Panel&)>& inner) {
  for (std::size_t i = first; i < mesh.panels.size(); ++i) {
    auto& p = mesh.panels[i];
    if (p.normal.dot(p.centroid - inner(p)) < 0) {
      std::swap(mesh.triangles[i][1], mesh.triangles[i][2]);
      std::swap(p.v[1], p.v[2]);
      p.normal = -p.normal;
    }
  }
}

}  // namespace

std::vector<double> axial_stations(const RodSpec& spec) {
  const double S = spec.curve.arclength();
  const double g = spec.axial_grading;
  const double h_ring = 2 * kPi * spec.delta / spec.n_circum;
  // Relative spacing profile: 1 at the ends, g in the middle (smoothstep ramp).
  auto h = [&](double s) {
    double x = std::min(s, S - s) / (0.5 * S);
    x = std::clamp(x, 0.0, 1.0);
    return 1.0 + (g - 1.0) * x * x * (3 - 2 * x);
  };
  const int nt = 20000;
  std::vector<double> cum(nt + 1, 0.0);
  for (int i = 0; i < nt; ++i) {
    double a = S * i / nt, b = S * (i + 1) / nt;
    cum[i + 1] = cum[i] + 0.5 * (b - a) * (1 / h(a) + 1 / h(b));
  }
  int n = spec.n_axial;
  if (n == 0) n = std::max(2, int(std::lround(cum[nt] / h_ring)));
  if (n % 2) ++n;  // even count keeps the facade mirror-symmetric
  std::vector<double> st(n + 1);
  st[0] = 0.0;
  st[n] = S;
  for (int k = 1; k < n; ++k) {
    double target = cum[nt] * k / n;
    auto it = std::upper_bound(cum.begin(), cum.end(), target);
    int i = std::clamp(int(it - cum.begin()) - 1, 0, nt - 1);
    double f = (target - cum[i]) / (cum[i + 1] - cum[i]);
    st[k] = S * (i + f) / nt;
  }
  return st;
}

SurfaceMesh build_rod_mesh(const RodSpec& spec) {
  spec.validate();
  const auto& curve = spec.curve;
  const FrameField frames(curve);
  const int nc = spec.n_circum, m = spec.cap_refine;
  const double d = spec.delta, S = curve.arclength();
  const auto st = axial_stations(spec);
  const int na = int(st.size()) - 1;

  SurfaceMesh mesh;
  std::vector<std::vector<int>> ring(na + 1, std::vector<int>(nc));
  for (int i = 0; i <= na; ++i) {
    Frame f = frames.at(curve, st[i]);
    Vec3 c = curve.point(st[i]);
    for (int k = 0; k < nc; ++k) {
      double ph = 2 * kPi * k / nc;
      ring[i][k] = int(mesh.vertices.size());
      mesh.vertices.push_back(c + d * (std::cos(ph) * f.n1 + std::sin(ph) * f.n2));
    }
  }
  // Facade quads; the diagonal direction flips at mid-length so the
  // triangulation is symmetric under reversal of the centerline.
  for (int i = 0; i < na; ++i) {
    for (int k = 0; k < nc; ++k) {
      int a = ring[i][k], b = ring[i][(k + 1) % nc], c = ring[i + 1][(k + 1) % nc],
          e = ring[i + 1][k];
      std::array<int, 3> t1, t2;
      if (2 * i < na) {
        t1 = {a, b, c};
        t2 = {a, c, e};
      } else {
        t1 = {a, b, e};
        t2 = {b, c, e};
      }
      for (auto& t : {t1, t2}) {
        mesh.triangles.push_back(t);
        mesh.panels.push_back(make_panel(mesh, t, Region::Facade));
      }
    }
  }
  for (auto& p : mesh.panels) {
    auto f = curve.foot(p.centroid);
    p.foot = f.z;
    p.foot_s = f.s;
  }
  orient(mesh, 0, [](const Panel& p) { return p.foot; });

  std::size_t first = mesh.panels.size();
  Frame fa = frames.at(curve, 0.0);
  add_cap(mesh, curve.P0(), -fa.t, fa.n1, fa.n2, d, m, ring[0], Region::CapA);
  for (std::size_t i = first; i < mesh.panels.size(); ++i) {
    mesh.panels[i].foot = curve.P0();
    mesh.panels[i].foot_s = 0.0;
  }
  first = mesh.panels.size();
  Frame fb = frames.at(curve, S);
  add_cap(mesh, curve.Q0(), fb.t, fb.n1, fb.n2, d, m, ring[na], Region::CapB);
  for (std::size_t i = first; i < mesh.panels.size(); ++i) {
    mesh.panels[i].foot = curve.Q0();
    mesh.panels[i].foot_s = S;
  }
  orient(mesh, 0, [](const Panel& p) { return p.foot; });

  mesh.total_area = 0.0;
  for (const auto& p : mesh.panels) mesh.total_area += p.area;
  if (mesh.max_diameter() > d)
    mesh.warnings.push_back("resolution coarse: max panel diameter " +
                            std::to_string(mesh.max_diameter()) + " exceeds delta");
  return mesh;
}

SurfaceMesh build_sphere_mesh(double radius, int m) {
  if (!(radius > 0) || m < 1) throw GeometryError("sphere mesh needs radius > 0 and m >= 1");
  SurfaceMesh mesh;
  const Vec3 e1(1, 0, 0), e2(0, 1, 0), e3(0, 0, 1);
  std::vector<int> eq(4 * m);
  for (int q = 0; q < 4 * m; ++q) {
    double ph = 2 * kPi * q / (4.0 * m);
    eq[q] = int(mesh.vertices.size());
    mesh.vertices.push_back(radius * (std::cos(ph) * e1 + std::sin(ph) * e2));
  }
  add_cap(mesh, Vec3::Zero(), e3, e1, e2, radius, m, eq, Region::CapA);
  add_cap(mesh, Vec3::Zero(), -e3, e1, e2, radius, m, eq, Region::CapB);
  orient(mesh, 0, [](const Panel&) { return Vec3::Zero(); });
  mesh.total_area = 0.0;
  for (auto& p : mesh.panels) {
    p.foot = Vec3::Zero();
    mesh.total_area += p.area;
  }
  return mesh;
}

double SurfaceMesh::max_diameter() const {
  double d = 0.0;
  for (const auto& p : panels) d = std::max(d, p.diameter);
  return d;
}

double SurfaceMesh::volume() const {
  double v = 0.0;
  for (const auto& p : panels) v += p.centroid.dot(p.normal) * p.area;
  return v / 3.0;
}

Eigen::VectorXd SurfaceMesh::areas() const {
  Eigen::VectorXd a(panels.size());
  for (std::size_t i = 0; i < panels.size(); ++i) a[i] = panels[i].area;
  return a;
}

std::vector<int> SurfaceMesh::indices(Region r) const {
  std::vector<int> out;
  for (std::size_t i = 0; i < panels.size(); ++i)
    if (panels[i].region == r) out.push_back(int(i));
  return out;
}

bool SurfaceMesh::watertight() const {
  std::map<std::pair<int, int>, int> directed;
  for (const auto& t : triangles)
    for (int e = 0; e < 3; ++e) directed[{t[e], t[(e + 1) % 3]}]++;
  for (const auto& [edge, count] : directed) {
    if (count != 1) return false;
    auto it = directed.find({edge.second, edge.first});
    if (it == directed.end() || it->second != 1) return false;
  }
  return true;
}

double default_collar(const SurfaceMesh& mesh) { return 0.25 * mesh.max_diameter(); }

bool mesh_contains(const SurfaceMesh& mesh, const Vec3& x) {
  // Fixed generic direction avoids grazing edges of the structured meshes.
  const Vec3 dir = Vec3(0.5773502691896258, 0.4472135954999579, 0.6830127018922193).normalized();
  int hits = 0;
  for (const auto& p : mesh.panels) {
    Vec3 e1 = p.v[1] - p.v[0], e2 = p.v[2] - p.v[0];
    Vec3 h = dir.cross(e2);
    double a = e1.dot(h);
    if (std::abs(a) < 1e-14) continue;
    double f = 1.0 / a;
    Vec3 s = x - p.v[0];
    double u = f * s.dot(h);
    if (u < 0 || u > 1) continue;
    Vec3 q = s.cross(e1);
    double v = f * dir.dot(q);
    if (v < 0 || u + v > 1) continue;
    if (f * e2.dot(q) > 0) ++hits;
  }
  return hits % 2 == 1;
}

void write_mesh(const SurfaceMesh& mesh, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw GeometryError("cannot write mesh file " + path);
  char buf[64];
  for (const auto& p : mesh.panels) {
    for (int i = 0; i < 3; ++i)
      for (int c = 0; c < 3; ++c) {
        std::snprintf(buf, sizeof buf, "%.17g ", p.v[i][c]);
        out << buf;
      }
    out << region_name(p.region) << '\n';
  }
}

}  // namespace nanorod
