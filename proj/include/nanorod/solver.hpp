#pragma once

#include "nanorod/operators.hpp"
#include "nanorod/spectral.hpp"

#include <Eigen/Dense>

#include <limits>

namespace nanorod {

struct SolverError : std::runtime_error {
  using std::runtime_error::runtime_error;
  double rcond = 0.0;
  SolverError(const std::string& what, double rc) : std::runtime_error(what), rcond(rc) {}
};

struct IncidentWave {
  Vec3 d{0.0, 0.0, 1.0};
  cd amplitude{1e3, 0.0};

  void validate() const;
  cd value(cd k_m, const Vec3& x) const;
  CVec3 gradient(cd k_m, const Vec3& x) const;
};

/// Normal derivative of the incident wave on the boundary. `Discrete` takes the
/// interior Neumann trace of the single-layer representation of u^i, which
/// makes the discrete transmission system exact for a transparent inclusion;
/// `Analytic` is i k_m (d . nu) u^i at centroids.
enum class NeumannTrace { Discrete, Analytic };

struct SolverOptions {
  NeumannTrace trace = NeumannTrace::Discrete;
  /// Add the H*-symmetrizing static correction to the dynamic NP operators.
  bool static_correction = true;
  /// Rejected when the reciprocal condition estimate falls below this.
  double min_rcond = 1e3 * std::numeric_limits<double>::epsilon();
  QuadOptions quad = assembly_quadrature();
};

/// Dense operators of the transmission system for one material.
struct TransmissionOperators {
  Wavenumbers wn;
  Eigen::MatrixXcd Sc, Sm, Kc, Km;
};

TransmissionOperators assemble_transmission(const SurfaceMesh& mesh, const NPModel& model,
                                            const Wavenumbers& wn,
                                            const SolverOptions& opt = {});

struct IncidentTraces {
  Eigen::VectorXcd u, dnu;
};
IncidentTraces incident_traces(const SurfaceMesh& mesh, const TransmissionOperators& ops,
                               const IncidentWave& wave, NeumannTrace trace);

struct DensityPair {
  Eigen::VectorXcd phi, psi;
  double residual = 0.0;  // relative residual of the block system
  double rcond = 0.0;
};

/// [S^kc, -S^km; (-1/2 + K*^kc)/eps_c, -(1/2 + K*^km)/eps_m] (phi, psi) = (u^i, d_nu u^i / eps_m)
DensityPair solve_transmission(const SurfaceMesh& mesh, const TransmissionOperators& ops,
                               const IncidentWave& wave, const SolverOptions& opt = {});

struct ReducedSystem {
  Eigen::MatrixXcd A;
  Eigen::VectorXcd f;
};
/// A = (1/eps_m)(1/2 + K*^km) + (1/eps_c)(1/2 - K*^kc)(S^kc)^-1 S^km,
/// f = -(1/eps_m) d_nu u^i - (1/eps_c)(1/2 - K*^kc)(S^kc)^-1 u^i.
ReducedSystem reduced_system(const TransmissionOperators& ops, const IncidentTraces& traces);
Eigen::MatrixXcd reduced_operator(const TransmissionOperators& ops);

/// psi from A psi = f, phi = (S^kc)^-1 (S^km psi + u^i).
DensityPair solve_reduced(const SurfaceMesh& mesh, const TransmissionOperators& ops,
                          const IncidentWave& wave, const SolverOptions& opt = {});

/// 1/2 (1/eps_m + 1/eps_c) + (1/eps_m - 1/eps_c) K*.
Eigen::MatrixXcd reduced_operator_static(const NPModel& model, cd eps_c, double eps_m);
/// (mu_m - mu_c) K_2 + ((eps_m mu_m - eps_c mu_c)/eps_c)(1/2 - K*) S^-1 S_2.
Eigen::MatrixXcd reduced_operator_second_order(const SurfaceMesh& mesh, const NPModel& model,
                                               const Wavenumbers& wn,
                                               const QuadOptions& opt = assembly_quadrature());

/// Static discrete image of d . nu: the interior Neumann trace (-1/2 + K*) S^-1 [d . x].
Eigen::VectorXd coupling_vector(const SurfaceMesh& mesh, const NPModel& model, const Vec3& d);

/// Resonant permittivity corrected for the frequency shift of mode j: theta is
/// iterated until the eigenvalue of A(omega; theta) continuing tau_j has zero
/// real part.
struct TrackedResonance {
  double theta = 0.0;       // Re(1/eps_c) at resonance
  double lambda_eff = 0.0;  // shifted eigenvalue
  double shift = 0.0;       // lambda_eff - lambda_j
  cd mu{0.0, 0.0};          // eigenvalue of A at the final theta
  int iterations = 0;
};
TrackedResonance track_resonance(const SurfaceMesh& mesh, const NPModel& model,
                                 const NPSpectrum& spectrum, int j, double omega, double eps_m,
                                 int iterations = 4, const SolverOptions& opt = {});

}  // namespace nanorod
