#include "nanorod/asymptotics.hpp"

#include <cmath>

namespace nanorod {

QuasiStaticModel make_quasistatic_model(const SurfaceMesh& mesh, const NPModel& model,
                                        NPSpectrum spectrum, const CenterlineCurve& curve,
                                        double delta, const Vec3& d) {
  if (!(delta > 0)) throw AsymptoticError("delta must be positive");
  QuasiStaticModel m;
  m.curve = curve;
  m.delta = delta;
  m.d = d;
  const Eigen::VectorXd dnu = coupling_vector(mesh, model, d);
  const Eigen::VectorXd Mdnu = model.M * dnu;
  m.coupling = spectrum.eigfuncs.transpose() * Mdnu;
  const int n = spectrum.size();
  m.moment_a = Eigen::VectorXd::Zero(n);
  m.moment_b = Eigen::VectorXd::Zero(n);
  for (std::size_t p = 0; p < mesh.size(); ++p) {
    const Region r = mesh.panels[p].region;
    if (r == Region::Facade) continue;
    const Eigen::VectorXd row = spectrum.eigfuncs.row(p).transpose() * (model.w[p] / (delta * delta));
    if (r == Region::CapA)
      m.moment_a += row;
    else
      m.moment_b += row;
  }
  m.lambda1 = Eigen::VectorXd::Zero(n);
  m.spectrum = std::move(spectrum);
  return m;
}

std::vector<int> all_modes(const QuasiStaticModel& m) {
  std::vector<int> J;
  for (int j = 1; j < m.spectrum.size(); ++j) J.push_back(j);
  return J;
}

Eigen::VectorXcd psi_quasistatic(const QuasiStaticModel& m, double omega, const QSMaterial& mat,
                                 const std::vector<int>& J) {
  const cd pre = mat.amplitude * kI * omega * std::sqrt(mat.mu_m * mat.eps_m) *
                 (1.0 / mat.eps_c - 1.0 / mat.eps_m);
  Eigen::VectorXcd psi = Eigen::VectorXcd::Zero(m.spectrum.eigfuncs.rows());
  if (pre == 0.0) return psi;
  for (int j : J) {
    const cd tau = tau_value(m.spectrum.lambdas[j], mat.eps_c, mat.eps_m);
    if (tau == 0.0) throw AsymptoticError("tau_j vanishes: lossless resonance");
    psi += (pre * m.coupling[j] / (m.spectrum.a[j] * tau)) * m.spectrum.eigfuncs.col(j).cast<cd>();
  }
  return psi;
}

cd asymptotic_denominator(const QuasiStaticModel& m, const QSMaterial& mat, int j) {
  cd den = lambda_of_ratio(mat.eps_m / mat.eps_c) - m.spectrum.lambdas[j];
  if (m.lambda1[j] != 0.0)
    den += m.delta * m.lambda1[j] / (1.0 / mat.eps_c - 1.0 / mat.eps_m);
  return den;
}

namespace {

cd cap_sum(const QuasiStaticModel& m, const QSMaterial& mat, const std::vector<int>& J,
           const Vec3& x, cd pre) {
  const Vec3 P0 = m.curve.P0(), Q0 = m.curve.Q0();
  const double ga = -1.0 / (4 * kPi * (x - P0).norm());
  const double gb = -1.0 / (4 * kPi * (x - Q0).norm());
  cd acc = 0.0;
  for (int j : J) {
    const double shat = m.moment_a[j] * ga + m.moment_b[j] * gb;
    acc += m.coupling[j] / m.spectrum.a[j] * shat * m.delta * m.delta /
           asymptotic_denominator(m, mat, j);
  }
  return pre * acc;
}

}  // namespace

cd us_asymptotic(const QuasiStaticModel& m, double omega, const QSMaterial& mat,
                 const std::vector<int>& J, const Vec3& x) {
  if (m.curve.distance(x) <= m.delta) throw AsymptoticError("us_asymptotic: point inside the rod");
  if (mat.eps_c == cd(mat.eps_m)) return 0.0;
  return cap_sum(m, mat, J, x, mat.amplitude * kI * omega * std::sqrt(mat.mu_m * mat.eps_m));
}

cd u_interior_asymptotic(const QuasiStaticModel& m, double omega, const QSMaterial& mat,
                         const std::vector<int>& J, const Vec3& x) {
  if (m.curve.distance(x) >= m.delta)
    throw AsymptoticError("u_interior_asymptotic: point outside the rod");
  if (mat.eps_c == cd(mat.eps_m)) return 0.0;
  return cap_sum(m, mat, J, x, mat.amplitude * kI * omega * std::sqrt(mat.mu_m / mat.eps_m));
}

double p_straight(const Vec3& x, double L, double delta, const Vec3& P0, const Vec3& Q0,
                  double tol) {
  const Vec3 axis = (Q0 - P0) / L;
  const double s = (x - P0).dot(axis);
  const Vec3 mid = 0.5 * (P0 + Q0);
  if (s < 0) {
    if (std::abs((x - P0).norm() - delta) > tol) throw AsymptoticError("p_straight: x not on the rod");
    return delta + std::sqrt(delta * delta + L * L + 2 * (x - P0).dot(P0 - Q0));
  }
  if (s > L) {
    if (std::abs((x - Q0).norm() - delta) > tol) throw AsymptoticError("p_straight: x not on the rod");
    return delta + std::sqrt(delta * delta + L * L + 2 * (x - Q0).dot(Q0 - P0));
  }
  const Vec3 z = P0 + s * axis;
  if (std::abs((x - z).norm() - delta) > tol) throw AsymptoticError("p_straight: x not on the rod");
  const double l = (z - mid).norm();
  const double a = 0.5 * L - l, b = 0.5 * L + l;
  return std::sqrt(a * a + delta * delta) + std::sqrt(b * b + delta * delta);
}

BlowupPrediction blowup_scaling_prediction(double omega, double rho, double delta, double c1) {
  if (!(omega > 0) || rho == 0.0 || !(delta > 0))
    throw AsymptoticError("blowup prediction needs omega > 0, rho != 0, delta > 0");
  BlowupPrediction b;
  const double ir = 1.0 / std::abs(rho);
  b.dominant = ir * omega;
  b.sub_omega2 = ir * omega * omega;
  b.sub_sqrt = std::sqrt(omega);
  b.regime = ir * omega * omega * delta;
  b.outside_regime = b.regime > c1;
  return b;
}

}  // namespace nanorod
