#include "nanorod/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace nanorod {

namespace {

constexpr double kPi = 3.14159265358979323846;

// 10-point Gauss-Legendre on [-1, 1].
constexpr double kGLx[10] = {-0.9739065285171717, -0.8650633666889845, -0.6794095682990244,
                             -0.4333953941292472, -0.1488743389816312, 0.1488743389816312,
                             0.4333953941292472,  0.6794095682990244,  0.8650633666889845,
                             0.9739065285171717};
constexpr double kGLw[10] = {0.0666713443086881, 0.1494513491505806, 0.2190863625159820,
                             0.2692667193099963, 0.2955242247147529, 0.2955242247147529,
                             0.2692667193099963, 0.2190863625159820, 0.1494513491505806,
                             0.0666713443086881};

double speed_integral(const std::function<Vec3(double)>& dx, double a, double b) {
  double h = 0.5 * (b - a), m = 0.5 * (a + b), acc = 0.0;
  for (int i = 0; i < 10; ++i) acc += kGLw[i] * dx(m + h * kGLx[i]).norm();
  return acc * h;
}

struct Hermite {
  Vec3 x0, x1, m0, m1;
  double h;
  Vec3 p(double u) const {
    double u2 = u * u, u3 = u2 * u;
    return (2 * u3 - 3 * u2 + 1) * x0 + (u3 - 2 * u2 + u) * h * m0 + (-2 * u3 + 3 * u2) * x1 +
           (u3 - u2) * h * m1;
  }
  Vec3 dp(double u) const {  // d/du
    double u2 = u * u;
    return (6 * u2 - 6 * u) * x0 + (3 * u2 - 4 * u + 1) * h * m0 + (-6 * u2 + 6 * u) * x1 +
           (3 * u2 - 2 * u) * h * m1;
  }
  Vec3 ddp(double u) const {
    return (12 * u - 6) * x0 + (6 * u - 4) * h * m0 + (-12 * u + 6) * x1 + (6 * u - 2) * h * m1;
  }
};

}  // namespace

CenterlineCurve::CenterlineCurve(std::vector<CurveSample> samples, bool straight)
    : samples_(std::move(samples)), straight_(straight) {
  if (samples_.size() < 2) throw GeometryError("centerline needs at least two samples");
  for (std::size_t i = 0; i < samples_.size(); ++i) {
    auto& c = samples_[i];
    double n = c.tangent.norm();
    if (!(n > 0)) throw GeometryError("centerline sample with zero tangent");
    c.tangent /= n;
    if (i > 0) {
      if (!(c.t > samples_[i - 1].t)) throw GeometryError("centerline samples not ordered in t");
      if ((c.x - samples_[i - 1].x).norm() == 0.0)
        throw GeometryError("centerline has repeated consecutive points");
    }
  }
  if ((P0() - Q0()).norm() == 0.0) throw GeometryError("centerline is closed (P0 == Q0)");
  build_chunks();
}

void CenterlineCurve::build_chunks() {
  chunks_.clear();
  const std::size_t n = samples_.size(), width = 32;
  for (std::size_t b = 0; b + 1 < n; b += width) {
    std::size_t e = std::min(n - 1, b + width);
    Vec3 c = Vec3::Zero();
    for (std::size_t i = b; i <= e; ++i) c += samples_[i].x;
    c /= double(e - b + 1);
    double r = 0.0, seg = 0.0;
    for (std::size_t i = b; i <= e; ++i) r = std::max(r, (samples_[i].x - c).norm());
    for (std::size_t i = b; i < e; ++i) seg = std::max(seg, samples_[i + 1].s - samples_[i].s);
    chunks_.push_back({b, e, c, r + 0.25 * seg});
  }
}

std::size_t CenterlineCurve::segment(double s) const {
  auto it = std::upper_bound(samples_.begin(), samples_.end(), s,
                             [](double v, const CurveSample& c) { return v < c.s; });
  std::size_t i = (it == samples_.begin()) ? 0 : std::size_t(it - samples_.begin()) - 1;
  return std::min(i, samples_.size() - 2);
}

Vec3 CenterlineCurve::point(double s) const {
  s = std::clamp(s, 0.0, arclength());
  if (straight_) return P0() + s * samples_.front().tangent;
  std::size_t i = segment(s);
  const auto &a = samples_[i], &b = samples_[i + 1];
  Hermite H{a.x, b.x, a.tangent, b.tangent, b.s - a.s};
  return H.p((s - a.s) / H.h);
}

Vec3 CenterlineCurve::tangent(double s) const {
  s = std::clamp(s, 0.0, arclength());
  if (straight_) return samples_.front().tangent;
  std::size_t i = segment(s);
  const auto &a = samples_[i], &b = samples_[i + 1];
  Hermite H{a.x, b.x, a.tangent, b.tangent, b.s - a.s};
  return H.dp((s - a.s) / H.h).normalized();
}

CenterlineCurve::Foot CenterlineCurve::foot(const Vec3& x) const {
  if (straight_) {
    const Vec3& t = samples_.front().tangent;
    double s = std::clamp((x - P0()).dot(t), 0.0, arclength());
    return {s, P0() + s * t};
  }
  // Best chord projection, pruned by chunk bounding spheres.
  double best = std::numeric_limits<double>::infinity();
  std::size_t best_i = 0;
  double best_u = 0.0;
  for (const auto& ch : chunks_) {
    double lb = (x - ch.center).norm() - ch.radius;
    if (lb > 0 && lb * lb > best) continue;
    for (std::size_t i = ch.begin; i < ch.end; ++i) {
      Vec3 a = samples_[i].x, d = samples_[i + 1].x - a;
      double u = std::clamp((x - a).dot(d) / d.squaredNorm(), 0.0, 1.0);
      double dist2 = (a + u * d - x).squaredNorm();
      if (dist2 < best) {
        best = dist2;
        best_i = i;
        best_u = u;
      }
    }
  }
  // Newton refinement on the Hermite segment and its neighbours.
  double best_s = 0.0;
  Vec3 best_z;
  best = std::numeric_limits<double>::infinity();
  std::size_t lo = best_i > 0 ? best_i - 1 : 0, hi = std::min(best_i + 1, samples_.size() - 2);
  for (std::size_t i = lo; i <= hi; ++i) {
    const auto &a = samples_[i], &b = samples_[i + 1];
    Hermite H{a.x, b.x, a.tangent, b.tangent, b.s - a.s};
    double u = (i == best_i) ? best_u : (i < best_i ? 1.0 : 0.0);
    for (int it = 0; it < 30; ++it) {
      Vec3 r = H.p(u) - x, d1 = H.dp(u), d2 = H.ddp(u);
      double f = r.dot(d1), fp = d1.squaredNorm() + r.dot(d2);
      if (fp <= 0) fp = d1.squaredNorm();
      double un = std::clamp(u - f / fp, 0.0, 1.0);
      bool done = std::abs(un - u) < 1e-15;
      u = un;
      if (done) break;
    }
    Vec3 z = H.p(u);
    double d2 = (z - x).squaredNorm();
    if (d2 < best) {
      best = d2;
      best_z = z;
      // Hermite parameter is close to, not exactly, arclength within a segment.
      best_s = a.s + u * H.h;
    }
  }
  if (best_s <= 0.0) return {0.0, P0()};
  if (best_s >= arclength()) return {arclength(), Q0()};
  return {best_s, best_z};
}

double CenterlineCurve::min_radius_of_curvature() const {
  if (straight_) return std::numeric_limits<double>::infinity();
  double kmax = 0.0;
  for (std::size_t i = 0; i + 1 < samples_.size(); ++i) {
    double ds = samples_[i + 1].s - samples_[i].s;
    double ang = std::acos(std::clamp(samples_[i].tangent.dot(samples_[i + 1].tangent), -1.0, 1.0));
    kmax = std::max(kmax, ang / ds);
  }
  return kmax > 0 ? 1.0 / kmax : std::numeric_limits<double>::infinity();
}

CenterlineCurve straight_curve(double L, int n_samples) {
  if (!(L > 0)) throw GeometryError("straight centerline needs L > 0");
  n_samples = std::max(n_samples, 1);
  std::vector<CurveSample> s;
  for (int i = 0; i <= n_samples; ++i) {
    double a = L * i / n_samples;
    s.push_back({a, a, Vec3(0, 0, -0.5 * L + a), Vec3(0, 0, 1)});
  }
  return CenterlineCurve(std::move(s), true);
}

CenterlineCurve parametric_curve(const std::function<Vec3(double)>& x,
                                 const std::function<Vec3(double)>& dx, double t0, double t1,
                                 int n_samples) {
  if (!(t1 > t0)) throw GeometryError("parametric curve needs t1 > t0");
  const int nt = std::max(n_samples, 16);
  std::vector<double> tt(nt + 1), ss(nt + 1, 0.0);
  for (int i = 0; i <= nt; ++i) tt[i] = t0 + (t1 - t0) * i / nt;
  for (int i = 0; i < nt; ++i) ss[i + 1] = ss[i] + speed_integral(dx, tt[i], tt[i + 1]);
  const double S = ss[nt];
  std::vector<CurveSample> out;
  for (int k = 0; k <= n_samples; ++k) {
    double target = S * k / n_samples;
    double t;
    if (k == 0) {
      t = t0;
    } else if (k == n_samples) {
      t = t1;
    } else {
      auto it = std::upper_bound(ss.begin(), ss.end(), target);
      int i = std::clamp(int(it - ss.begin()) - 1, 0, nt - 1);
      t = tt[i] + (target - ss[i]) / dx(tt[i]).norm();
      for (int iter = 0; iter < 50; ++iter) {
        double f = ss[i] + speed_integral(dx, tt[i], t) - target;
        double step = f / dx(t).norm();
        t -= step;
        if (std::abs(step) < 1e-15 * (1 + std::abs(t))) break;
      }
    }
    out.push_back({t, target, x(t), dx(t).normalized()});
  }
  return CenterlineCurve(std::move(out));
}

CenterlineCurve paper_curve(int n_samples) {
  const double a = -kPi / 2 + 0.3, b = kPi / 2 - 0.3;
  return parametric_curve(
      [](double t) { return Vec3(0.0, 0.5 * (std::cos(t) - 1.0), 2.0 * std::sin(t)); },
      [](double t) { return Vec3(0.0, -0.5 * std::sin(t), 2.0 * std::cos(t)); }, a, b,
      n_samples);
}

CenterlineCurve custom_curve(const std::vector<Vec3>& pts) {
  if (pts.size() < 2) throw GeometryError("custom centerline needs at least two points");
  std::vector<CurveSample> out;
  double s = 0.0;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    if (i > 0) {
      double d = (pts[i] - pts[i - 1]).norm();
      if (d == 0.0) throw GeometryError("custom centerline has repeated points");
      s += d;
    }
    Vec3 t = (i == 0)                ? Vec3(pts[1] - pts[0])
             : (i + 1 == pts.size()) ? Vec3(pts[i] - pts[i - 1])
                                     : Vec3(pts[i + 1] - pts[i - 1]);
    out.push_back({s, s, pts[i], t});
  }
  return CenterlineCurve(std::move(out));
}

namespace {

Frame double_reflect(const Frame& f, const Vec3& x0, const Vec3& x1, const Vec3& t1) {
  Vec3 v1 = x1 - x0;
  double c1 = v1.squaredNorm();
  Vec3 rL = f.n1, tL = f.t;
  if (c1 > 0) {
    rL = f.n1 - (2.0 / c1) * v1.dot(f.n1) * v1;
    tL = f.t - (2.0 / c1) * v1.dot(f.t) * v1;
  }
  Vec3 v2 = t1 - tL;
  double c2 = v2.squaredNorm();
  Vec3 r1 = c2 > 1e-300 ? Vec3(rL - (2.0 / c2) * v2.dot(rL) * v2) : rL;
  // Re-orthonormalize against round-off drift.
  r1 = (r1 - r1.dot(t1) * t1).normalized();
  return {t1, r1, t1.cross(r1)};
}

}  // namespace

FrameField::FrameField(const CenterlineCurve& curve) {
  const auto& s = curve.samples();
  Vec3 t0 = s.front().tangent;
  int axis = 0;
  for (int i = 1; i < 3; ++i)
    if (std::abs(t0[i]) < std::abs(t0[axis])) axis = i;
  Vec3 e = Vec3::Unit(axis);
  Vec3 n1 = (e - e.dot(t0) * t0).normalized();
  frames_.push_back({t0, n1, t0.cross(n1)});
  for (std::size_t i = 1; i < s.size(); ++i)
    frames_.push_back(double_reflect(frames_.back(), s[i - 1].x, s[i].x, s[i].tangent));
}

Frame FrameField::at(const CenterlineCurve& curve, double s) const {
  const auto& smp = curve.samples();
  s = std::clamp(s, 0.0, curve.arclength());
  auto it = std::upper_bound(smp.begin(), smp.end(), s,
                             [](double v, const CurveSample& c) { return v < c.s; });
  std::size_t i = (it == smp.begin()) ? 0 : std::size_t(it - smp.begin()) - 1;
  i = std::min(i, smp.size() - 1);
  if (smp[i].s == s) return frames_[i];
  return double_reflect(frames_[i], smp[i].x, curve.point(s), curve.tangent(s));
}

FrameField rotation_minimizing_frames(const CenterlineCurve& curve) { return FrameField(curve); }

const char* region_name(Region r) {
  switch (r) {
    case Region::CapA: return "CapA";
    case Region::Facade: return "Facade";
    case Region::CapB: return "CapB";
  }
  return "?";
}

void RodSpec::validate() const {
  if (curve.samples().size() < 2) throw GeometryError("rod spec has no centerline");
  if (!(delta > 0)) throw GeometryError("rod radius delta must be positive");
  if (cap_refine < 1) throw GeometryError("cap_refine must be >= 1");
  if (n_circum != 4 * cap_refine)
    throw GeometryError("n_circum must equal 4 * cap_refine so caps weld to the facade ring");
  if (n_axial < 0) throw GeometryError("n_axial must be >= 0");
  if (!(axial_grading >= 1.0)) throw GeometryError("axial_grading must be >= 1");
  double R = curve.min_radius_of_curvature();
  if (delta > curvature_guard * R)
    throw GeometryError("delta = " + std::to_string(delta) + " exceeds " +
                        std::to_string(curvature_guard) + " x minimal radius of curvature " +
                        std::to_string(R));
  // Embedded-tube check: well separated curve points stay 2 delta apart.
  const auto& s = curve.samples();
  std::size_t stride = 1;
  while (stride < s.size() && s[stride].s < 0.25 * delta) ++stride;
  for (std::size_t i = 0; i < s.size(); i += stride)
    for (std::size_t j = i + stride; j < s.size(); j += stride)
      if (s[j].s - s[i].s > kPi * delta && (s[i].x - s[j].x).norm() <= 2 * delta)
        throw GeometryError("centerline comes within 2 delta of itself; tube would self-intersect");
}

Vec3 blowup_map(const Vec3& x, const RodSpec& spec) {
  const auto& c = spec.curve;
  auto f = c.foot(x);
  double d = (x - f.z).norm();
  if (d > spec.delta * (1 + 1e-9) + 1e-12) throw GeometryError("blowup_map: point outside the rod");
  return f.z + (x - f.z) / spec.delta;
}

Vec3 blowup_inverse(const Vec3& y, const RodSpec& spec) {
  const auto& c = spec.curve;
  auto f = c.foot(y);
  double d = (y - f.z).norm();
  if (d > 1 + 1e-9) throw GeometryError("blowup_inverse: point outside the reference rod");
  return f.z + spec.delta * (y - f.z);
}

Classification classify_point(const Vec3& x, const CenterlineCurve& curve, double delta,
                              double collar) {
  double sd = curve.distance(x) - delta;
  if (std::abs(sd) < collar) return {PointClass::NearBoundary, sd};
  return {sd < 0 ? PointClass::Inside : PointClass::Outside, sd};
}

Classification classify_point(const Vec3& x, const RodSpec& spec, double collar) {
  return classify_point(x, spec.curve, spec.delta, collar);
}

}  // namespace nanorod
