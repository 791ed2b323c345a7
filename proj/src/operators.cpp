#include "nanorod/operators.hpp"

#include <cmath>

namespace nanorod {

namespace {

// Fills the off-diagonal entries (p, q) = sum over the quadrature nodes y of
// panel q of kern(panel p, y) * weight.
template <class T, class Kern>
Eigen::Matrix<T, Eigen::Dynamic, Eigen::Dynamic> assemble_offdiag(const SurfaceMesh& mesh,
                                                                  const QuadOptions& opt,
                                                                  Kern kern) {
  const int n = int(mesh.size());
  Eigen::Matrix<T, Eigen::Dynamic, Eigen::Dynamic> m =
      Eigen::Matrix<T, Eigen::Dynamic, Eigen::Dynamic>::Zero(n, n);
#pragma omp parallel for schedule(dynamic, 16)
  for (int p = 0; p < n; ++p) {
    const Panel& P = mesh.panels[p];
    for (int q = 0; q < n; ++q) {
      if (q == p) continue;
      T acc = T(0);
      integrate_panel(P.centroid, mesh.panels[q], opt,
                      [&](const Vec3& y, double w) { acc += kern(P, y) * w; });
      m(p, q) = acc;
    }
  }
  return m;
}

// -(e^{ikr} - 1) / (4 pi r), continuous at r = 0. Small |kr| uses the series:
// exp(z) - 1 cancels completely for tiny real z, which drops the O(k) term
// when k is imaginary.
cd smooth_remainder(cd k, double r) {
  const cd z = kI * k * r;
  if (std::abs(z) < 1e-2) {
    const cd s = 1.0 + z / 2.0 * (1.0 + z / 3.0 * (1.0 + z / 4.0 * (1.0 + z / 5.0)));
    return -kI * k * s / (4 * kPi);
  }
  return -(std::exp(z) - 1.0) / (4 * kPi * r);
}

double static_self_term(const Panel& p) {
  return -inverse_distance_integral(p.centroid, p.v[0], p.v[1], p.v[2]) / (4 * kPi);
}

void apply_gauss_closure(Eigen::MatrixXd& K, const Eigen::VectorXd& w) {
  const Eigen::Index n = K.rows();
  for (Eigen::Index p = 0; p < n; ++p) {
    double s = 0.0;
    for (Eigen::Index q = 0; q < n; ++q)
      if (q != p) s += K(q, p) * w[q];
    K(p, p) = 0.5 - s / w[p];
  }
}

Eigen::MatrixXd static_np_offdiag(const SurfaceMesh& mesh, const QuadOptions& opt) {
  return assemble_offdiag<double>(mesh, opt, [](const Panel& P, const Vec3& y) {
    const Vec3 d = P.centroid - y;
    const double r = d.norm();
    return d.dot(P.normal) / (4 * kPi * r * r * r);
  });
}

}  // namespace

Eigen::MatrixXcd single_layer_raw(cd k, const SurfaceMesh& mesh, const QuadOptions& opt) {
  if (k == 0.0) return laplace_single_layer_raw(mesh, opt).cast<cd>();
  Eigen::MatrixXcd S = assemble_offdiag<cd>(mesh, opt, [k](const Panel& P, const Vec3& y) {
    const double r = (P.centroid - y).norm();
    return -std::exp(kI * k * r) / (4 * kPi * r);
  });
  for (std::size_t p = 0; p < mesh.size(); ++p) {
    const Panel& P = mesh.panels[p];
    cd acc = static_self_term(P);
    seven_point(P, [&](const Vec3& y, double w) {
      acc += smooth_remainder(k, (P.centroid - y).norm()) * w;
    });
    S(p, p) = acc;
  }
  return S;
}

Eigen::MatrixXd laplace_single_layer_raw(const SurfaceMesh& mesh, const QuadOptions& opt) {
  Eigen::MatrixXd S = assemble_offdiag<double>(mesh, opt, [](const Panel& P, const Vec3& y) {
    return -1.0 / (4 * kPi * (P.centroid - y).norm());
  });
  for (std::size_t p = 0; p < mesh.size(); ++p) S(p, p) = static_self_term(mesh.panels[p]);
  return S;
}

BoundaryOperator assemble_single_layer(cd k, const SurfaceMesh& mesh, const QuadOptions& opt) {
  return {OperatorKind::SingleLayer, k, 0,
          weighted_symmetrize(single_layer_raw(k, mesh, opt), mesh.areas())};
}

Eigen::MatrixXd laplace_single_layer(const SurfaceMesh& mesh, const QuadOptions& opt) {
  return weighted_symmetrize(laplace_single_layer_raw(mesh, opt), mesh.areas());
}

Eigen::MatrixXd laplace_np_adjoint(const SurfaceMesh& mesh, const QuadOptions& opt) {
  Eigen::MatrixXd K = static_np_offdiag(mesh, opt);
  apply_gauss_closure(K, mesh.areas());
  return K;
}

Eigen::MatrixXcd np_adjoint_dynamic_part(cd k, const SurfaceMesh& mesh, const QuadOptions& opt) {
  return assemble_offdiag<cd>(mesh, opt, [k](const Panel& P, const Vec3& y) {
    const Vec3 d = P.centroid - y;
    const double r = d.norm();
    const cd g = -std::exp(kI * k * r) / (4 * kPi * r);
    // nu . (grad G^k - grad G^0), grouped to limit cancellation
    const cd f = (g * kI * k * r - (g + 1.0 / (4 * kPi * r))) / (r * r);
    return f * d.dot(P.normal);
  });
}

BoundaryOperator assemble_np_adjoint(cd k, const SurfaceMesh& mesh, const QuadOptions& opt) {
  Eigen::MatrixXcd K = laplace_np_adjoint(mesh, opt).cast<cd>();
  if (k != 0.0) K += np_adjoint_dynamic_part(k, mesh, opt);
  return {OperatorKind::NPAdjoint, k, 0, std::move(K)};
}

BoundaryOperator assemble_series_term(SeriesKind kind, int j, const SurfaceMesh& mesh,
                                      const QuadOptions& opt) {
  if (j < 1) throw OperatorError("series term order must be >= 1");
  if (kind == SeriesKind::S) {
    const cd c = series_S_coeff(j);
    Eigen::MatrixXcd S = assemble_offdiag<cd>(mesh, opt, [c, j](const Panel& P, const Vec3& y) {
      return c * std::pow((P.centroid - y).norm(), j - 1);
    });
    for (std::size_t p = 0; p < mesh.size(); ++p) {
      const Panel& P = mesh.panels[p];
      cd acc = 0.0;
      seven_point(P, [&](const Vec3& y, double w) {
        acc += c * std::pow((P.centroid - y).norm(), j - 1) * w;
      });
      S(p, p) = acc;
    }
    return {OperatorKind::SeriesS, 0.0, j, weighted_symmetrize(S, mesh.areas())};
  }
  const int n = int(mesh.size());
  if (j == 1) return {OperatorKind::SeriesK, 0.0, 1, Eigen::MatrixXcd::Zero(n, n)};
  const cd c = series_K_coeff(j);
  // Flat panels: <x - y, nu_x> vanishes on the self panel.
  Eigen::MatrixXcd K = assemble_offdiag<cd>(mesh, opt, [c, j](const Panel& P, const Vec3& y) {
    const Vec3 d = P.centroid - y;
    return c * std::pow(d.norm(), j - 3) * d.dot(P.normal);
  });
  return {OperatorKind::SeriesK, 0.0, j, std::move(K)};
}

GramHstar gram_from_single_layer(const Eigen::MatrixXd& S0, const Eigen::VectorXd& w) {
  Eigen::MatrixXd M = -(w.asDiagonal() * S0);
  M = 0.5 * (M + M.transpose()).eval();
  Eigen::LLT<Eigen::MatrixXd> llt(M);
  if (llt.info() != Eigen::Success)
    throw OperatorError("H* Gram matrix is not positive definite; mesh too distorted");
  return {std::move(M)};
}

GramHstar assemble_gram_hstar(const SurfaceMesh& mesh, const QuadOptions& opt) {
  return gram_from_single_layer(laplace_single_layer(mesh, opt), mesh.areas());
}

NPModel build_np_model(const SurfaceMesh& mesh, const QuadOptions& opt) {
  NPModel m;
  m.w = mesh.areas();
  m.S = laplace_single_layer(mesh, opt);
  m.Kraw = laplace_np_adjoint(mesh, opt);
  m.M = gram_from_single_layer(m.S, m.w).matrix;
  m.S_lu = m.S.partialPivLu();
  const Eigen::Index n = m.w.size();

  Eigen::MatrixXd B = m.M * m.Kraw;
  const double bnorm = B.norm();
  m.asymmetry = bnorm > 0 ? (B - B.transpose()).norm() / bnorm : 0.0;
  B = 0.5 * (B + B.transpose()).eval();

  m.u0 = m.S_lu.solve(Eigen::VectorXd::Ones(n));
  const Eigen::VectorXd a = m.M * m.u0;  // equals -w up to round-off
  const double c = m.u0.dot(a);
  if (!(c > 0)) throw OperatorError("S^-1[1] has non-positive H* norm");
  const Eigen::VectorXd Bu = B * m.u0;
  const double uBu = m.u0.dot(Bu);
  m.lambda0_rayleigh = uBu / c;
  {
    const Eigen::VectorXd r = m.Kraw * m.u0 - 0.5 * m.u0;
    m.calderon_residual = std::sqrt(std::abs(r.dot(m.M * r)) / c);
  }

  // P = I - u0 a^T / c; B_H = P^T B P + a a^T / (2c)
  m.B = B;
  m.B.noalias() -= (Bu * a.transpose()) / c;
  m.B.noalias() -= (a * Bu.transpose()) / c;
  m.B.noalias() += (a * a.transpose()) * ((uBu / c + 0.5) / c);
  m.B = 0.5 * (m.B + m.B.transpose()).eval();

  // K = M^-1 B_H = -S^-1 W^-1 B_H
  Eigen::MatrixXd rhs = m.w.cwiseInverse().asDiagonal() * m.B;
  m.K = -m.S_lu.solve(rhs);
  return m;
}

cd foot_single_layer(const SurfaceMesh& mesh, const std::vector<int>& sources,
                     const Eigen::VectorXcd& phi, const Vec3& x) {
  cd acc = 0.0;
  for (int q : sources) {
    const Panel& P = mesh.panels[q];
    acc += -phi[q] * P.area / (4 * kPi * (x - P.foot).norm());
  }
  return acc;
}

}  // namespace nanorod
