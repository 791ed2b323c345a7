#pragma once

#include "nanorod/solver.hpp"
#include "nanorod/spectral.hpp"

#include <vector>

namespace nanorod {

struct AsymptoticError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

/// Static spectral data feeding the quasi-static formulas.
///
/// coupling[j] = <dnu, phi_j>_{H*} with dnu the static image of d . nu;
/// moment_a[j], moment_b[j] are the cap integrals of phi_j rescaled to the
/// reference rod (divided by delta^2).
struct QuasiStaticModel {
  NPSpectrum spectrum;
  Eigen::VectorXd coupling;
  Eigen::VectorXd moment_a, moment_b;
  Eigen::VectorXd lambda1;  // first-order delta corrections, zero by default
  CenterlineCurve curve;
  double delta = 0.0;
  Vec3 d = Vec3::UnitZ();
};

QuasiStaticModel make_quasistatic_model(const SurfaceMesh& mesh, const NPModel& model,
                                        NPSpectrum spectrum, const CenterlineCurve& curve,
                                        double delta, const Vec3& d);

struct QSMaterial {
  cd eps_c{-3.0, 0.5};
  double eps_m = 1.0, mu_m = 1.0;
  cd amplitude{1.0, 0.0};
};

/// Modes 1 .. n-1.
std::vector<int> all_modes(const QuasiStaticModel& m);

/// amplitude * sum_{j in J} i omega sqrt(mu_m eps_m) (1/eps_c - 1/eps_m) c_j phi_j / (a_j tau_j)
Eigen::VectorXcd psi_quasistatic(const QuasiStaticModel& m, double omega, const QSMaterial& mat,
                                 const std::vector<int>& J);

/// Far-field leading term with the cap-collapsed single layer
/// m^a G^0(x - P0) + m^b G^0(x - Q0). Rejects points inside the rod.
cd us_asymptotic(const QuasiStaticModel& m, double omega, const QSMaterial& mat,
                 const std::vector<int>& J, const Vec3& x);
/// Interior counterpart with prefactor sqrt(mu_m / eps_m). Rejects points outside.
cd u_interior_asymptotic(const QuasiStaticModel& m, double omega, const QSMaterial& mat,
                         const std::vector<int>& J, const Vec3& x);

/// Shared denominators lambda(eps_m/eps_c) - lambda_j + delta (1/eps_c - 1/eps_m)^-1 lambda_{j,1}.
cd asymptotic_denominator(const QuasiStaticModel& m, const QSMaterial& mat, int j);

/// Straight-rod amplitude profile |x - P0| + |x - Q0| evaluated branchwise on the
/// facade (through the foot offset l) and on the caps.
double p_straight(const Vec3& x, double L, double delta, const Vec3& P0, const Vec3& Q0,
                  double tol = 1e-9);

struct BlowupPrediction {
  double dominant = 0.0;        // |rho|^-1 omega
  double sub_omega2 = 0.0;      // |rho|^-1 omega^2
  double sub_sqrt = 0.0;        // omega^(1/2)
  double regime = 0.0;          // |rho|^-1 omega^2 delta
  bool outside_regime = false;  // regime > c1
};
BlowupPrediction blowup_scaling_prediction(double omega, double rho, double delta,
                                           double c1 = 0.1);

}  // namespace nanorod
