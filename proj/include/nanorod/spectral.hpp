#pragma once

#include "nanorod/operators.hpp"

#include <Eigen/Dense>

#include <string>
#include <vector>

namespace nanorod {

struct SpectralError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Eigenpairs of the static NP adjoint in the H* inner product, ordered by
/// decreasing |lambda| (lambda_0 = 1/2 first). Eigenfunctions are normalized in
/// L^2(boundary); a_j = <phi_j, phi_j>_{H*}.
struct NPSpectrum {
  Eigen::VectorXd lambdas;
  Eigen::MatrixXd eigfuncs;
  Eigen::VectorXd a;
  std::size_t n_panels = 0;

  double asymmetry = 0.0;
  double lambda0_rayleigh = 0.0;
  double calderon_residual = 0.0;
  double orthogonality_error = 0.0;  // max |<phi_i, phi_j>_{H*}| / sqrt(a_i a_j), i != j

  int size() const { return int(lambdas.size()); }
};

/// `m` = 0 keeps every eigenpair.
NPSpectrum np_spectrum(const NPModel& model, int m = 60);
NPSpectrum np_spectrum(const SurfaceMesh& mesh, int m = 60);

/// Groups of indices whose eigenvalues differ by less than `tol` (relative to 1/2).
std::vector<std::vector<int>> eigenvalue_clusters(const Eigen::VectorXd& lambdas, double tol);

/// sum_j lambda_j <psi, phi_j>_{H*} / a_j phi_j over the first m modes.
Eigen::VectorXd spectral_apply(const NPSpectrum& s, const Eigen::MatrixXd& M,
                               const Eigen::VectorXd& psi, int m);

struct ResonanceParams {
  cd eps_c{1.0, 0.0};
  double eps_m = 1.0;
  double theta = 0.0;  // Re(1/eps_c)
  double rho = 0.0;    // Im(1/eps_c)
  Eigen::VectorXcd tau;
  double eta0 = 0.05;
  std::vector<int> J;
  /// tau_0 differs from 1/mu_m (the stated closed form) when eps_m != mu_m.
  bool tau0_note = false;
};

/// 1/2 (1/eps_m + 1/eps_c) + (1/eps_m - 1/eps_c) lambda
cd tau_value(double lambda, cd eps_c, double eps_m);
ResonanceParams tau_values(const NPSpectrum& s, cd eps_c, double eps_m, double eta0 = 0.05,
                           double mu_m = 1.0);
/// Modes j >= 1 with |tau_j| < eta0. Quadrature-noise modes (|lambda| < tail) are skipped.
std::vector<int> resonance_index_set(const ResonanceParams& p, const NPSpectrum& s, double eta0,
                                     double tail = 1e-3);

/// eps_c = 1 / (theta + i rho) with theta = eps_m^-1 (2 lambda + 1) / (2 lambda - 1).
cd resonant_permittivity(double lambda, double eps_m, double rho);
cd resonant_permittivity_for_mode(int j, const NPSpectrum& s, double eps_m, double rho);
/// lambda(t) = (t + 1) / (2 (t - 1)).
cd lambda_of_ratio(cd t);

/// Spectrum of the limiting cap operator on the reference rod.
struct K0Spectrum {
  Eigen::VectorXd lambdas;  // real parts, decreasing |lambda|
  Eigen::VectorXd imag;     // imaginary parts of the same eigenvalues
  Eigen::MatrixXcd eigfuncs;
  Eigen::VectorXd facade_amplitude;  // facade rows outside both collars, relative to ||phi||
  Eigen::VectorXd collar_amplitude;  // collar rows, relative to ||phi||
  Eigen::VectorXcd moment_a, moment_b;  // integrals over the two caps
  bool mirror_paired = false;
  BoundaryOperator op;
};

K0Spectrum k0_spectrum(const SurfaceMesh& reference, const CenterlineCurve& curve, double collar,
                       const Eigen::MatrixXd* full_static = nullptr);

/// Least-squares fit lambda(delta) = l0 + l1 delta; returns l1.
double richardson_first_order(const std::vector<double>& deltas,
                              const std::vector<double>& lambdas);

/// Text table and CSV (j,lambda,a,abs_tau,in_J).
std::string spectrum_table(const NPSpectrum& s, const ResonanceParams* p = nullptr);
void write_spectrum_csv(const NPSpectrum& s, const ResonanceParams* p, const std::string& path);

}  // namespace nanorod
