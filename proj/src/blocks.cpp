#include "nanorod/operators.hpp"

#include <cmath>
#include <cstdio>

namespace nanorod {

namespace {

struct Target {
  Vec3 x, nu;
  bool valid = true;
};

Vec3 end_point(const CenterlineCurve& curve, End end) {
  return end == End::P0 ? curve.P0() : curve.Q0();
}

Vec3 outward_axis(const CenterlineCurve& curve, End end) {
  return end == End::P0 ? Vec3(-curve.tangent(0.0)) : curve.tangent(curve.arclength());
}

Target make_target(const Panel& P, const CenterlineCurve& curve, const BlockSpec& spec) {
  switch (spec.mode) {
    case ProjectionMode::Direct:
      return {P.centroid, P.normal};
    case ProjectionMode::Foot:
      return {P.foot, P.normal};
    case ProjectionMode::Endpoint:
      return {end_point(curve, spec.end), outward_axis(curve, spec.end)};
    case ProjectionMode::Rim: {
      const Vec3 radial = P.centroid - P.foot;
      const double r = radial.norm();
      if (r == 0.0) return {P.centroid, P.normal, false};
      const Vec3 u = radial / r;
      return {end_point(curve, spec.end) + r * u, u};
    }
  }
  return {P.centroid, P.normal};
}

bool source_is_point(ProjectionMode mode) {
  return mode == ProjectionMode::Foot || mode == ProjectionMode::Endpoint;
}

}  // namespace

BoundaryOperator assemble_block(const BlockSpec& spec, const SurfaceMesh& mesh,
                                const CenterlineCurve& curve, const Eigen::MatrixXd* full_static,
                                const QuadOptions& opt) {
  if (spec.rows.empty() || spec.cols.empty()) throw OperatorError("assemble_block: empty region");
  const int n = int(mesh.size());
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(n, n);
  if (spec.mode == ProjectionMode::Direct && spec.kernel == BlockKernel::NPAdjoint &&
      full_static) {
    for (int p : spec.rows)
      for (int q : spec.cols) m(p, q) = (*full_static)(p, q);
    return {OperatorKind::Block, 0.0, 0, std::move(m)};
  }

  const int nr = int(spec.rows.size());
#pragma omp parallel for schedule(dynamic, 8)
  for (int i = 0; i < nr; ++i) {
    const int p = spec.rows[i];
    const Panel& P = mesh.panels[p];
    const Target t = make_target(P, curve, spec);
    if (!t.valid) continue;
    for (int q : spec.cols) {
      const Panel& Q = mesh.panels[q];
      cd acc = 0.0;
      if (source_is_point(spec.mode)) {
        const Vec3 d = t.x - Q.foot;
        const double r = d.norm();
        if (r <= spec.exclusion || r == 0.0) continue;
        acc = spec.kernel == BlockKernel::SingleLayer
                  ? cd(-Q.area / (4 * kPi * r))
                  : cd(d.dot(t.nu) * Q.area / (4 * kPi * r * r * r));
      } else if (q == p && spec.mode == ProjectionMode::Direct) {
        if (spec.kernel == BlockKernel::SingleLayer) {
          acc = -inverse_distance_integral(P.centroid, P.v[0], P.v[1], P.v[2]) / (4 * kPi);
        } else {
          if (!full_static) throw OperatorError("assemble_block: NP diagonal needs full operator");
          acc = (*full_static)(p, p);
        }
      } else {
        integrate_panel(t.x, Q, opt, [&](const Vec3& y, double w) {
          const Vec3 d = t.x - y;
          const double r = d.norm();
          if (r == 0.0) return;
          acc += spec.kernel == BlockKernel::SingleLayer ? -w / (4 * kPi * r)
                                                         : d.dot(t.nu) * w / (4 * kPi * r * r * r);
        });
      }
      m(p, q) = acc;
    }
  }
  return {OperatorKind::Block, 0.0, 0, std::move(m)};
}

std::vector<int> collar_indices(const SurfaceMesh& mesh, const CenterlineCurve& curve, End end,
                                double collar) {
  const Vec3 e = end_point(curve, end);
  std::vector<int> out;
  for (std::size_t i = 0; i < mesh.size(); ++i) {
    const Panel& P = mesh.panels[i];
    if (P.region == Region::Facade && (P.foot - e).norm() < collar) out.push_back(int(i));
  }
  return out;
}

BoundaryOperator assemble_k0_star(const SurfaceMesh& reference, const CenterlineCurve& curve,
                                  double collar, const Eigen::MatrixXd* full_static,
                                  const QuadOptions& opt) {
  Eigen::MatrixXd own;
  if (!full_static) {
    own = laplace_np_adjoint(reference, opt);
    full_static = &own;
  }
  const auto capA = reference.indices(Region::CapA);
  const auto capB = reference.indices(Region::CapB);
  const auto colA = collar_indices(reference, curve, End::P0, collar);
  const auto colB = collar_indices(reference, curve, End::Q0, collar);
  if (colA.empty() || colB.empty())
    throw OperatorError("assemble_k0_star: collar contains no facade panel");

  Eigen::MatrixXcd m = assemble_block({BlockKernel::NPAdjoint, capA, capA, ProjectionMode::Direct},
                                      reference, curve, full_static, opt)
                           .matrix;
  m += assemble_block({BlockKernel::NPAdjoint, capB, capB, ProjectionMode::Direct}, reference,
                      curve, full_static, opt)
           .matrix;
  m += assemble_block({BlockKernel::NPAdjoint, colA, capA, ProjectionMode::Rim, End::P0},
                      reference, curve, full_static, opt)
           .matrix;
  m += assemble_block({BlockKernel::NPAdjoint, colB, capB, ProjectionMode::Rim, End::Q0},
                      reference, curve, full_static, opt)
           .matrix;
  return {OperatorKind::K0Star, 0.0, 0, std::move(m)};
}

BoundaryOperator assemble_k1_star(const SurfaceMesh& reference, const CenterlineCurve& curve,
                                  double collar, const QuadOptions& opt) {
  const auto capA = reference.indices(Region::CapA);
  const auto capB = reference.indices(Region::CapB);
  const auto facade = reference.indices(Region::Facade);
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(reference.size(), reference.size());
  BlockSpec a{BlockKernel::NPAdjoint, capA, facade, ProjectionMode::Endpoint, End::P0, collar};
  BlockSpec b{BlockKernel::NPAdjoint, capB, facade, ProjectionMode::Endpoint, End::Q0, collar};
  BlockSpec f{BlockKernel::NPAdjoint, facade, facade, ProjectionMode::Foot, End::P0, collar};
  m += assemble_block(a, reference, curve, nullptr, opt).matrix;
  m += assemble_block(b, reference, curve, nullptr, opt).matrix;
  m += assemble_block(f, reference, curve, nullptr, opt).matrix;
  return {OperatorKind::K1Star, 0.0, 1, std::move(m)};
}

void dump_operator(const Eigen::MatrixXcd& m, const std::string& path) {
  std::FILE* f = std::fopen(path.c_str(), "w");
  if (!f) throw OperatorError("cannot write " + path);
  std::fprintf(f, "%ld %ld\n", long(m.rows()), long(m.cols()));
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j)
      std::fprintf(f, "%s%.17g %.17g", j ? " " : "", m(i, j).real(), m(i, j).imag());
    std::fputc('\n', f);
  }
  std::fclose(f);
}

}  // namespace nanorod
