#pragma once

#include <Eigen/Dense>

#include <array>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

namespace nanorod {

using Vec3 = Eigen::Vector3d;

struct GeometryError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct CurveSample {
  double t;
  double s;  // arclength from P0
  Vec3 x;
  Vec3 tangent;
};

/// Arclength-sampled centerline. Between samples the curve is the cubic
/// Hermite interpolant of positions and unit tangents.
class CenterlineCurve {
 public:
  CenterlineCurve() = default;
  explicit CenterlineCurve(std::vector<CurveSample> samples, bool straight = false);

  const std::vector<CurveSample>& samples() const { return samples_; }
  Vec3 P0() const { return samples_.front().x; }
  Vec3 Q0() const { return samples_.back().x; }
  double arclength() const { return samples_.back().s; }
  bool is_straight() const { return straight_; }

  Vec3 point(double s) const;
  Vec3 tangent(double s) const;

  struct Foot {
    double s;
    Vec3 z;
  };
  /// Nearest point on the curve (parameter clamped to [0, arclength]).
  Foot foot(const Vec3& x) const;
  double distance(const Vec3& x) const { return (x - foot(x).z).norm(); }

  /// Minimal radius of curvature estimated from sample tangents.
  double min_radius_of_curvature() const;

 private:
  std::size_t segment(double s) const;
  void build_chunks();

  std::vector<CurveSample> samples_;
  bool straight_ = false;
  struct Chunk {
    std::size_t begin, end;
    Vec3 center;
    double radius;
  };
  std::vector<Chunk> chunks_;
};

CenterlineCurve straight_curve(double L, int n_samples = 64);
/// x(t) = (0, (cos t - 1)/2, 2 sin t), t in [-pi/2 + 0.3, pi/2 - 0.3].
CenterlineCurve paper_curve(int n_samples = 2048);
/// Arbitrary smooth parametrization; resampled uniformly in arclength.
CenterlineCurve parametric_curve(const std::function<Vec3(double)>& x,
                                 const std::function<Vec3(double)>& dx, double t0,
                                 double t1, int n_samples = 2048);
/// Polyline input; tangents by central differences, t = arclength.
CenterlineCurve custom_curve(const std::vector<Vec3>& points);

struct Frame {
  Vec3 t, n1, n2;
};

class FrameField {
 public:
  FrameField() = default;
  explicit FrameField(const CenterlineCurve& curve);
  const std::vector<Frame>& frames() const { return frames_; }
  /// Frame at arbitrary arclength, transported from the preceding sample.
  Frame at(const CenterlineCurve& curve, double s) const;

 private:
  std::vector<Frame> frames_;
};

/// Rotation-minimizing frames by the double-reflection method.
FrameField rotation_minimizing_frames(const CenterlineCurve& curve);

struct RodSpec {
  CenterlineCurve curve;
  double delta = 0.25;
  int n_axial = 0;      // facade intervals; 0 picks a spacing close to the ring spacing
  int n_circum = 16;    // must equal 4 * cap_refine
  int cap_refine = 4;   // polar rows per hemisphere
  double axial_grading = 1.0;  // mid-facade spacing / end spacing
  double curvature_guard = 0.9;  // reject delta > guard * min radius of curvature

  void validate() const;
};

enum class Region { CapA = 0, Facade = 1, CapB = 2 };
const char* region_name(Region r);

struct Panel {
  std::array<Vec3, 3> v;
  Vec3 centroid;
  Vec3 normal;
  double area;
  double diameter;
  Region region;
  Vec3 foot;
  double foot_s;
};

struct SurfaceMesh {
  std::vector<Vec3> vertices;
  std::vector<std::array<int, 3>> triangles;
  std::vector<Panel> panels;
  double total_area = 0.0;
  std::vector<std::string> warnings;

  std::size_t size() const { return panels.size(); }
  double max_diameter() const;
  /// Divergence-theorem volume.
  double volume() const;
  Eigen::VectorXd areas() const;
  std::vector<int> indices(Region r) const;
  /// Each undirected edge shared by exactly two triangles, with opposite orientation.
  bool watertight() const;
};

SurfaceMesh build_rod_mesh(const RodSpec& spec);
/// Closed sphere: two octant-subdivided hemispheres welded at the equator (8 m^2 panels).
SurfaceMesh build_sphere_mesh(double radius, int m);
/// Facade ring stations in arclength.
std::vector<double> axial_stations(const RodSpec& spec);

Vec3 blowup_map(const Vec3& x, const RodSpec& spec);
Vec3 blowup_inverse(const Vec3& y, const RodSpec& spec);

enum class PointClass { Inside, Outside, NearBoundary };
struct Classification {
  PointClass cls;
  double signed_distance;  // distance to centerline minus delta
};
Classification classify_point(const Vec3& x, const CenterlineCurve& curve, double delta,
                              double collar);
Classification classify_point(const Vec3& x, const RodSpec& spec, double collar);
/// Default collar: a quarter of the largest panel diameter.
double default_collar(const SurfaceMesh& mesh);

/// Ray-casting inside test against the triangulation.
bool mesh_contains(const SurfaceMesh& mesh, const Vec3& x);

void write_mesh(const SurfaceMesh& mesh, const std::string& path);

}  // namespace nanorod
