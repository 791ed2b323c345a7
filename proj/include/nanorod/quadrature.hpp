#pragma once

#include "nanorod/geometry.hpp"

#include <algorithm>
#include <array>
#include <cmath>

namespace nanorod {

/// Seven-point degree-5 triangle rule (barycentric nodes, weights sum to 1).
struct TriangleRule {
  std::array<std::array<double, 3>, 7> bary;
  std::array<double, 7> w;
};
const TriangleRule& seven_point_rule();

/// Integral of 1/|x - y| over a flat triangle for x in the triangle's plane.
double inverse_distance_integral(const Vec3& x, const Vec3& a, const Vec3& b, const Vec3& c);

/// Distance-based quadrature selection. A source triangle farther than
/// far_ratio diameters from the target uses its centroid; between near_ratio and
/// far_ratio the seven-point rule; closer than near_ratio it is split in four.
struct QuadOptions {
  double far_ratio = 2.0;
  double near_ratio = 1.0;
  int max_depth = 6;
};

/// Options used for dense operator assembly.
inline QuadOptions assembly_quadrature() { return {2.0, 1.0, 4}; }
/// Options used for field evaluation off the surface.
inline QuadOptions evaluation_quadrature() { return {4.0, 1.5, 12}; }

/// Calls f(y, weight) for every quadrature node of triangle (a, b, c) as seen
/// from target x. Weights sum to the triangle area.
template <class F>
void integrate_triangle(const Vec3& x, const Vec3& a, const Vec3& b, const Vec3& c,
                        double area, const QuadOptions& opt, F&& f, int depth = 0) {
  const Vec3 cen = (a + b + c) / 3.0;
  const double diam =
      std::sqrt(std::max({(a - b).squaredNorm(), (b - c).squaredNorm(), (c - a).squaredNorm()}));
  const double d = (x - cen).norm();
  if (d > opt.far_ratio * diam) {
    f(cen, area);
    return;
  }
  if (d > opt.near_ratio * diam || depth >= opt.max_depth) {
    const auto& r = seven_point_rule();
    for (int i = 0; i < 7; ++i)
      f(Vec3(r.bary[i][0] * a + r.bary[i][1] * b + r.bary[i][2] * c), r.w[i] * area);
    return;
  }
  const Vec3 ab = 0.5 * (a + b), bc = 0.5 * (b + c), ca = 0.5 * (c + a);
  const double q = 0.25 * area;
  integrate_triangle(x, a, ab, ca, q, opt, f, depth + 1);
  integrate_triangle(x, ab, b, bc, q, opt, f, depth + 1);
  integrate_triangle(x, ca, bc, c, q, opt, f, depth + 1);
  integrate_triangle(x, ab, bc, ca, q, opt, f, depth + 1);
}

template <class F>
void integrate_panel(const Vec3& x, const Panel& p, const QuadOptions& opt, F&& f) {
  integrate_triangle(x, p.v[0], p.v[1], p.v[2], p.area, opt, f);
}

/// Seven-point rule on a panel without subdivision.
template <class F>
void seven_point(const Panel& p, F&& f) {
  const auto& r = seven_point_rule();
  for (int i = 0; i < 7; ++i)
    f(Vec3(r.bary[i][0] * p.v[0] + r.bary[i][1] * p.v[1] + r.bary[i][2] * p.v[2]),
      r.w[i] * p.area);
}

}  // namespace nanorod
