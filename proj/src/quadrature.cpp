#include "nanorod/quadrature.hpp"

#include <cmath>

namespace nanorod {

const TriangleRule& seven_point_rule() {
  static const TriangleRule rule = [] {
    const double a1 = 0.059715871789769820, b1 = 0.470142064105115090;
    const double a2 = 0.797426985353087322, b2 = 0.101286507323456339;
    const double w0 = 0.225, w1 = 0.132394152788506181, w2 = 0.125939180544827153;
    TriangleRule r;
    r.bary = {{{1.0 / 3, 1.0 / 3, 1.0 / 3},
               {a1, b1, b1},
               {b1, a1, b1},
               {b1, b1, a1},
               {a2, b2, b2},
               {b2, a2, b2},
               {b2, b2, a2}}};
    r.w = {w0, w1, w1, w1, w2, w2, w2};
    return r;
  }();
  return rule;
}

double inverse_distance_integral(const Vec3& x, const Vec3& a, const Vec3& b, const Vec3& c) {
  const Vec3 n = (b - a).cross(c - a).normalized();
  const Vec3 v[3] = {a, b, c};
  double sum = 0.0;
  for (int i = 0; i < 3; ++i) {
    const Vec3 &p = v[i], &q = v[(i + 1) % 3];
    const Vec3 e = (q - p).normalized();
    const Vec3 m = e.cross(n);  // in-plane outward edge normal for counter-clockwise order
    const double d = (p - x).dot(m);
    if (std::abs(d) < 1e-300) continue;
    const double sm = (p - x).dot(e), sp = (q - x).dot(e);
    sum += d * (std::asinh(sp / std::abs(d)) - std::asinh(sm / std::abs(d)));
  }
  return std::abs(sum);
}

}  // namespace nanorod
