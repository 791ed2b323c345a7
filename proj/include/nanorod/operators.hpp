#pragma once

#include "nanorod/geometry.hpp"
#include "nanorod/kernels.hpp"
#include "nanorod/quadrature.hpp"

#include <Eigen/Dense>

#include <string>
#include <vector>

namespace nanorod {

struct OperatorError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

enum class OperatorKind { SingleLayer, NPAdjoint, SeriesS, SeriesK, Block, K0Star, K1Star };

struct BoundaryOperator {
  OperatorKind kind;
  cd k{0.0, 0.0};
  int j = 0;
  Eigen::MatrixXcd matrix;
};

/// Nystrom single layer, before symmetrization. Off-diagonal entries integrate
/// the kernel over the source panel; the diagonal is the analytic static
/// integral plus a seven-point integral of the smooth remainder G^k - G^0.
Eigen::MatrixXcd single_layer_raw(cd k, const SurfaceMesh& mesh,
                                  const QuadOptions& opt = assembly_quadrature());
/// Static single layer, real.
Eigen::MatrixXd laplace_single_layer_raw(const SurfaceMesh& mesh,
                                         const QuadOptions& opt = assembly_quadrature());

/// S -> (S + W^-1 S^T W) / 2. Leaves centroid-rule entries untouched and makes
/// W S exactly symmetric.
template <class Mat>
Mat weighted_symmetrize(const Mat& S, const Eigen::VectorXd& w) {
  Mat T = S.transpose();
  for (Eigen::Index p = 0; p < S.rows(); ++p)
    for (Eigen::Index q = 0; q < S.cols(); ++q) T(p, q) *= w[q] / w[p];
  return 0.5 * (S + T);
}

/// Weighted-symmetric single layer.
BoundaryOperator assemble_single_layer(cd k, const SurfaceMesh& mesh,
                                       const QuadOptions& opt = assembly_quadrature());
Eigen::MatrixXd laplace_single_layer(const SurfaceMesh& mesh,
                                     const QuadOptions& opt = assembly_quadrature());

/// Nystrom NP adjoint. The diagonal is fixed by the static Gauss closure
/// sum_q K*_qp A_q = A_p / 2, so that W^-1 K*^T W maps 1 to 1/2. The dynamic
/// part has no self-term on flat panels.
BoundaryOperator assemble_np_adjoint(cd k, const SurfaceMesh& mesh,
                                     const QuadOptions& opt = assembly_quadrature());
Eigen::MatrixXd laplace_np_adjoint(const SurfaceMesh& mesh,
                                   const QuadOptions& opt = assembly_quadrature());
/// Dynamic remainder K*^k - K*^0 (no diagonal).
Eigen::MatrixXcd np_adjoint_dynamic_part(cd k, const SurfaceMesh& mesh,
                                         const QuadOptions& opt = assembly_quadrature());

enum class SeriesKind { S, K };
/// j-th frequency-series term. S terms are weighted-symmetrized like the single layer.
BoundaryOperator assemble_series_term(SeriesKind kind, int j, const SurfaceMesh& mesh,
                                      const QuadOptions& opt = assembly_quadrature());

struct GramHstar {
  Eigen::MatrixXd matrix;
};
/// M = -W S^0, symmetrized. Rejects indefinite results.
GramHstar assemble_gram_hstar(const SurfaceMesh& mesh,
                              const QuadOptions& opt = assembly_quadrature());
GramHstar gram_from_single_layer(const Eigen::MatrixXd& S0, const Eigen::VectorXd& w);

/// Static discrete operators sharing one H* structure.
///
/// `K` is the H*-self-adjoint part of the Nystrom NP adjoint with the exact
/// eigenpair K u0 = u0 / 2, u0 = S^-1[1], imposed by deflation. The solver adds
/// the same static correction (K - Kraw) to every dynamic NP operator so that
/// spectra and transmission solves see one operator.
struct NPModel {
  Eigen::VectorXd w;
  Eigen::MatrixXd S;
  Eigen::MatrixXd Kraw;
  Eigen::MatrixXd K;
  Eigen::MatrixXd M;
  Eigen::MatrixXd B;  // M K, symmetric
  Eigen::VectorXd u0;
  Eigen::PartialPivLU<Eigen::MatrixXd> S_lu;

  double asymmetry = 0.0;          // ||M Kraw - (M Kraw)^T|| / ||M Kraw||
  double lambda0_rayleigh = 0.0;   // u0 Rayleigh quotient of the symmetrized Kraw
  double calderon_residual = 0.0;  // ||Kraw u0 - u0/2||_M / ||u0||_M

  std::size_t size() const { return std::size_t(w.size()); }
  Eigen::MatrixXd static_correction() const { return K - Kraw; }
};

NPModel build_np_model(const SurfaceMesh& mesh, const QuadOptions& opt = assembly_quadrature());

// ---------------------------------------------------------------------------
// Region-restricted blocks on the reference rod.

enum class BlockKernel { SingleLayer, NPAdjoint };
/// direct: panel centroids; foot: target and source replaced by their centerline
/// feet; endpoint: target replaced by P0 (or Q0) with the outward axis as normal and
/// sources by their feet; rim: target moved along its foot frame to the cap rim
/// at P0 (or Q0) with the radial normal there, sources direct.
enum class ProjectionMode { Direct, Foot, Endpoint, Rim };
enum class End { P0, Q0 };

struct BlockSpec {
  BlockKernel kernel = BlockKernel::NPAdjoint;
  std::vector<int> rows, cols;
  ProjectionMode mode = ProjectionMode::Direct;
  End end = End::P0;
  /// Sources whose feet lie closer than this to the target point (foot, endpoint
  /// modes) are dropped.
  double exclusion = 0.0;
};

/// Block embedded in an N x N zero matrix. Direct NPAdjoint blocks copy the
/// entries (including the Gauss-closure diagonal) of `full_static`.
BoundaryOperator assemble_block(const BlockSpec& spec, const SurfaceMesh& mesh,
                                const CenterlineCurve& curve,
                                const Eigen::MatrixXd* full_static = nullptr,
                                const QuadOptions& opt = assembly_quadrature());

/// Facade panels whose foot is within `collar` of P0 (resp. Q0).
std::vector<int> collar_indices(const SurfaceMesh& mesh, const CenterlineCurve& curve, End end,
                                double collar);

/// Limiting cap operator on the reference rod (radius 1) with collar width `collar`.
BoundaryOperator assemble_k0_star(const SurfaceMesh& reference, const CenterlineCurve& curve,
                                  double collar, const Eigen::MatrixXd* full_static = nullptr,
                                  const QuadOptions& opt = assembly_quadrature());
/// First-order correction, assembled for diagnostics only.
BoundaryOperator assemble_k1_star(const SurfaceMesh& reference, const CenterlineCurve& curve,
                                  double collar, const QuadOptions& opt = assembly_quadrature());

/// Foot-collapsed static single layer over `sources`: sum G^0(x - z_q) phi_q A_q.
cd foot_single_layer(const SurfaceMesh& mesh, const std::vector<int>& sources,
                     const Eigen::VectorXcd& phi, const Vec3& x);

/// Row-major text dump of a complex matrix ("re im" pairs).
void dump_operator(const Eigen::MatrixXcd& m, const std::string& path);

}  // namespace nanorod
