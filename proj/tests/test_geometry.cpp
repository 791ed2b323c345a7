#include "nanorod/geometry.hpp"
#include "nanorod/kernels.hpp"

#include <doctest.h>

#include <cmath>
#include <functional>
#include <random>

using namespace nanorod;

namespace {

double simpson(const std::function<double(double)>& f, double a, double b, double fa, double fm,
               double fb, double whole, double tol, int depth) {
  const double m = 0.5 * (a + b), lm = 0.5 * (a + m), rm = 0.5 * (m + b);
  const double flm = f(lm), frm = f(rm);
  const double left = (m - a) / 6 * (fa + 4 * flm + fm), right = (b - m) / 6 * (fm + 4 * frm + fb);
  if (depth <= 0 || std::abs(left + right - whole) <= 15 * tol)
    return left + right + (left + right - whole) / 15;
  return simpson(f, a, m, fa, flm, fm, left, tol / 2, depth - 1) +
         simpson(f, m, b, fm, frm, fb, right, tol / 2, depth - 1);
}

double adaptive_simpson(const std::function<double(double)>& f, double a, double b) {
  const double fa = f(a), fb = f(b), fm = f(0.5 * (a + b));
  return simpson(f, a, b, fa, fm, fb, (b - a) / 6 * (fa + 4 * fm + fb), 1e-12, 40);
}

RodSpec rod(double L, double delta, int n_circum) {
  RodSpec s;
  s.curve = straight_curve(L);
  s.delta = delta;
  s.n_circum = n_circum;
  s.cap_refine = n_circum / 4;
  return s;
}

}  // namespace

TEST_CASE("straight centerline has the requested length") {
  const CenterlineCurve c = straight_curve(4.0);
  CHECK(c.arclength() == doctest::Approx(4.0).epsilon(1e-14));
  CHECK((c.Q0() - c.P0()).norm() == doctest::Approx(4.0).epsilon(1e-14));
  CHECK(c.is_straight());
}

TEST_CASE("curved centerline arclength matches adaptive Simpson") {
  const double t0 = -0.5 * kPi + 0.3, t1 = 0.5 * kPi - 0.3;
  const double exact = adaptive_simpson(
      [](double t) { return std::hypot(0.5 * std::sin(t), 2.0 * std::cos(t)); }, t0, t1);
  const CenterlineCurve c = paper_curve();
  CHECK(c.arclength() == doctest::Approx(exact).epsilon(1e-6));
  CHECK((c.P0() - Vec3(0, 0.5 * (std::cos(t0) - 1), 2 * std::sin(t0))).norm() < 1e-12);
  CHECK((c.Q0() - Vec3(0, 0.5 * (std::cos(t1) - 1), 2 * std::sin(t1))).norm() < 1e-12);
}

TEST_CASE("curve points lie on the ellipse and tangents are unit") {
  const CenterlineCurve c = paper_curve();
  for (int i = 0; i <= 50; ++i) {
    const double s = c.arclength() * i / 50;
    const Vec3 x = c.point(s);
    // (2 x2 + 1)^2 + (x3 / 2)^2 = 1 and x1 = 0
    CHECK(std::abs(x.x()) < 1e-12);
    CHECK(std::pow(2 * x.y() + 1, 2) + std::pow(0.5 * x.z(), 2) == doctest::Approx(1.0).epsilon(1e-6));
    CHECK(c.tangent(s).norm() == doctest::Approx(1.0).epsilon(1e-9));
  }
}

TEST_CASE("rotation-minimizing frames are orthonormal and untwisted on a planar curve") {
  const CenterlineCurve c = paper_curve(512);
  const FrameField ff = rotation_minimizing_frames(c);
  const auto& fr = ff.frames();
  REQUIRE(fr.size() == c.samples().size());
  double twist = 0.0;
  for (std::size_t i = 0; i < fr.size(); ++i) {
    const Frame& f = fr[i];
    CHECK(std::abs(f.t.dot(f.n1)) < 1e-10);
    CHECK(std::abs(f.t.dot(f.n2)) < 1e-10);
    CHECK(std::abs(f.n1.dot(f.n2)) < 1e-10);
    CHECK((f.t - c.samples()[i].tangent).norm() < 1e-10);
    // For a curve in the x1 = 0 plane the plane normal is transported unchanged.
    twist = std::max(twist, std::abs(std::abs(f.n1.x()) + std::abs(f.n2.x()) -
                                     (std::abs(fr[0].n1.x()) + std::abs(fr[0].n2.x()))));
  }
  CHECK(twist < 1e-8);
}

TEST_CASE("rod mesh is watertight and its area converges") {
  const double L = 4.0, delta = 0.25;
  const double exact_area = 2 * kPi * delta * L + 4 * kPi * delta * delta;
  const double exact_vol = kPi * delta * delta * L + 4.0 / 3.0 * kPi * std::pow(delta, 3);
  double prev = 1e9;
  for (int n : {12, 24}) {
    const SurfaceMesh m = build_rod_mesh(rod(L, delta, n));
    CHECK(m.watertight());
    const double err = std::abs(m.total_area - exact_area) / exact_area;
    CHECK(err < prev);
    CHECK(err < 0.05);
    CHECK(m.volume() == doctest::Approx(exact_vol).epsilon(0.05));
    prev = err;
  }
}

TEST_CASE("panel normals point outward") {
  const SurfaceMesh m = build_rod_mesh(rod(4.0, 0.25, 12));
  const CenterlineCurve c = straight_curve(4.0);
  for (const auto& p : m.panels) {
    const Vec3 out = p.centroid - c.foot(p.centroid).z;
    CHECK(out.dot(p.normal) > 0);
  }
}

TEST_CASE("sphere mesh") {
  const SurfaceMesh m = build_sphere_mesh(1.0, 8);
  CHECK(m.size() == 8u * 64u);
  CHECK(m.watertight());
  CHECK(m.total_area == doctest::Approx(4 * kPi).epsilon(0.02));
  for (const auto& v : m.vertices) CHECK(v.norm() == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("blowup map round trip") {
  RodSpec s;
  s.curve = paper_curve();
  s.delta = 0.2;
  s.n_circum = 12;
  s.cap_refine = 3;
  std::mt19937 rng(7);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const FrameField ff = rotation_minimizing_frames(s.curve);
  for (int i = 0; i < 50; ++i) {
    const double sa = s.curve.arclength() * (0.05 + 0.9 * u(rng));
    const Frame f = ff.at(s.curve, sa);
    const double r = s.delta * u(rng), a = 2 * kPi * u(rng);
    const Vec3 x = s.curve.point(sa) + r * (std::cos(a) * f.n1 + std::sin(a) * f.n2);
    const Vec3 y = blowup_map(x, s);
    CHECK((blowup_inverse(y, s) - x).norm() < 1e-9);
    CHECK((y - s.curve.point(sa)).norm() == doctest::Approx(r / s.delta).epsilon(1e-6));
  }
  CHECK_THROWS_AS(blowup_map(s.curve.point(1.0) + Vec3(1, 0, 0), s), GeometryError);
}

TEST_CASE("tube classification agrees with ray casting") {
  RodSpec s = rod(4.0, 0.25, 16);
  const SurfaceMesh m = build_rod_mesh(s);
  std::mt19937 rng(11);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  int checked = 0;
  for (int i = 0; i < 400; ++i) {
    const Vec3 x(0.5 * u(rng), 0.5 * u(rng), 2.5 * u(rng));
    const Classification c = classify_point(x, s.curve, s.delta, 0.05);
    if (c.cls == PointClass::NearBoundary) continue;
    CHECK((c.cls == PointClass::Inside) == mesh_contains(m, x));
    ++checked;
  }
  CHECK(checked > 100);
}

TEST_CASE("invalid rod specifications are rejected") {
  RodSpec s = rod(4.0, 0.25, 12);
  s.cap_refine = 4;
  CHECK_THROWS_AS(build_rod_mesh(s), GeometryError);
  s = rod(4.0, -0.1, 12);
  CHECK_THROWS_AS(build_rod_mesh(s), GeometryError);
  RodSpec curved;
  curved.curve = paper_curve();
  curved.delta = 0.9 * curved.curve.min_radius_of_curvature() * 1.5;
  curved.n_circum = 12;
  curved.cap_refine = 3;
  CHECK_THROWS_AS(build_rod_mesh(curved), GeometryError);
  CHECK_THROWS_AS(straight_curve(-1.0), GeometryError);
}

TEST_CASE("default collar is a quarter of the largest panel diameter") {
  const SurfaceMesh m = build_rod_mesh(rod(4.0, 0.25, 12));
  CHECK(default_collar(m) == doctest::Approx(0.25 * m.max_diameter()));
}
