#include "nanorod/solver.hpp"

#include <cmath>

namespace nanorod {

void IncidentWave::validate() const {
  if (std::abs(d.norm() - 1.0) > 1e-12) throw SolverError("incident direction must be a unit vector");
}

cd IncidentWave::value(cd k_m, const Vec3& x) const {
  return amplitude * std::exp(kI * k_m * d.dot(x));
}

CVec3 IncidentWave::gradient(cd k_m, const Vec3& x) const {
  return (kI * k_m * value(k_m, x)) * d.cast<cd>();
}

TransmissionOperators assemble_transmission(const SurfaceMesh& mesh, const NPModel& model,
                                            const Wavenumbers& wn, const SolverOptions& opt) {
  TransmissionOperators ops;
  ops.wn = wn;
  ops.Sc = assemble_single_layer(wn.k_c, mesh, opt.quad).matrix;
  ops.Sm = assemble_single_layer(wn.k_m, mesh, opt.quad).matrix;
  ops.Kc = model.K.cast<cd>();
  ops.Km = model.K.cast<cd>();
  if (!opt.static_correction) {
    ops.Kc = model.Kraw.cast<cd>();
    ops.Km = model.Kraw.cast<cd>();
  }
  if (wn.k_c != 0.0) ops.Kc += np_adjoint_dynamic_part(wn.k_c, mesh, opt.quad);
  if (wn.k_m != 0.0) ops.Km += np_adjoint_dynamic_part(wn.k_m, mesh, opt.quad);
  return ops;
}

IncidentTraces incident_traces(const SurfaceMesh& mesh, const TransmissionOperators& ops,
                               const IncidentWave& wave, NeumannTrace trace) {
  wave.validate();
  const int n = int(mesh.size());
  IncidentTraces t;
  t.u.resize(n);
  for (int p = 0; p < n; ++p) t.u[p] = wave.value(ops.wn.k_m, mesh.panels[p].centroid);
  if (trace == NeumannTrace::Analytic) {
    t.dnu.resize(n);
    for (int p = 0; p < n; ++p)
      t.dnu[p] = kI * ops.wn.k_m * wave.d.dot(mesh.panels[p].normal) * t.u[p];
  } else {
    const Eigen::VectorXcd sigma = ops.Sm.partialPivLu().solve(t.u);
    t.dnu = ops.Km * sigma - 0.5 * sigma;
  }
  return t;
}

namespace {

Eigen::PartialPivLU<Eigen::MatrixXcd> checked_lu(const Eigen::MatrixXcd& A, double min_rcond,
                                                 const char* what, double* rcond) {
  Eigen::PartialPivLU<Eigen::MatrixXcd> lu(A);
  const double rc = lu.rcond();
  if (rcond) *rcond = rc;
  if (!(rc >= min_rcond))
    throw SolverError(std::string(what) + ": system is numerically singular (rcond " +
                          std::to_string(rc) + ")",
                      rc);
  return lu;
}

}  // namespace

DensityPair solve_transmission(const SurfaceMesh& mesh, const TransmissionOperators& ops,
                               const IncidentWave& wave, const SolverOptions& opt) {
  const Eigen::Index n = Eigen::Index(mesh.size());
  const IncidentTraces tr = incident_traces(mesh, ops, wave, opt.trace);
  const cd ec = ops.wn.eps_c, em = ops.wn.eps_m;
  const Eigen::MatrixXcd I = Eigen::MatrixXcd::Identity(n, n);

  Eigen::MatrixXcd B(2 * n, 2 * n);
  B.topLeftCorner(n, n) = ops.Sc;
  B.topRightCorner(n, n) = -ops.Sm;
  B.bottomLeftCorner(n, n) = (ops.Kc - 0.5 * I) / ec;
  B.bottomRightCorner(n, n) = -(ops.Km + 0.5 * I) / em;
  Eigen::VectorXcd rhs(2 * n);
  rhs.head(n) = tr.u;
  rhs.tail(n) = tr.dnu / em;

  DensityPair out;
  auto lu = checked_lu(B, opt.min_rcond, "transmission", &out.rcond);
  const Eigen::VectorXcd x = lu.solve(rhs);
  out.phi = x.head(n);
  out.psi = x.tail(n);
  out.residual = (B * x - rhs).norm() / std::max(rhs.norm(), 1e-300);
  return out;
}

ReducedSystem reduced_system(const TransmissionOperators& ops, const IncidentTraces& traces) {
  const Eigen::Index n = ops.Sc.rows();
  const cd ec = ops.wn.eps_c, em = ops.wn.eps_m;
  const Eigen::MatrixXcd I = Eigen::MatrixXcd::Identity(n, n);
  const auto Sc_lu = ops.Sc.partialPivLu();
  const Eigen::MatrixXcd half_minus = 0.5 * I - ops.Kc;
  ReducedSystem r;
  r.A = (0.5 * I + ops.Km) / em + half_minus * Sc_lu.solve(ops.Sm) / ec;
  r.f = -traces.dnu / em - half_minus * Sc_lu.solve(traces.u) / ec;
  return r;
}

Eigen::MatrixXcd reduced_operator(const TransmissionOperators& ops) {
  const Eigen::Index n = ops.Sc.rows();
  const Eigen::MatrixXcd I = Eigen::MatrixXcd::Identity(n, n);
  return (0.5 * I + ops.Km) / cd(ops.wn.eps_m) +
         (0.5 * I - ops.Kc) * ops.Sc.partialPivLu().solve(ops.Sm) / ops.wn.eps_c;
}

DensityPair solve_reduced(const SurfaceMesh& mesh, const TransmissionOperators& ops,
                          const IncidentWave& wave, const SolverOptions& opt) {
  const IncidentTraces tr = incident_traces(mesh, ops, wave, opt.trace);
  const ReducedSystem rs = reduced_system(ops, tr);
  DensityPair out;
  auto lu = checked_lu(rs.A, opt.min_rcond, "reduced", &out.rcond);
  out.psi = lu.solve(rs.f);
  out.phi = ops.Sc.partialPivLu().solve(ops.Sm * out.psi + tr.u);
  out.residual = (rs.A * out.psi - rs.f).norm() / std::max(rs.f.norm(), 1e-300);
  return out;
}

Eigen::MatrixXcd reduced_operator_static(const NPModel& model, cd eps_c, double eps_m) {
  const Eigen::Index n = model.K.rows();
  return (0.5 * (1.0 / eps_m + 1.0 / eps_c)) * Eigen::MatrixXcd::Identity(n, n) +
         (1.0 / eps_m - 1.0 / eps_c) * model.K.cast<cd>();
}

Eigen::MatrixXcd reduced_operator_second_order(const SurfaceMesh& mesh, const NPModel& model,
                                               const Wavenumbers& wn, const QuadOptions& opt) {
  const Eigen::Index n = model.K.rows();
  const Eigen::MatrixXcd K2 = assemble_series_term(SeriesKind::K, 2, mesh, opt).matrix;
  const Eigen::MatrixXcd S2 = assemble_series_term(SeriesKind::S, 2, mesh, opt).matrix;
  const Eigen::MatrixXcd half_minus =
      0.5 * Eigen::MatrixXcd::Identity(n, n) - model.K.cast<cd>();
  const Eigen::MatrixXcd SinvS2 = model.S.cast<cd>().partialPivLu().solve(S2);
  const cd mm = wn.mu_m, em = wn.eps_m;
  return (mm - wn.mu_c) * K2 + ((em * mm - wn.eps_c * wn.mu_c) / wn.eps_c) * half_minus * SinvS2;
}

Eigen::VectorXd coupling_vector(const SurfaceMesh& mesh, const NPModel& model, const Vec3& d) {
  Eigen::VectorXd dx(mesh.size());
  for (std::size_t p = 0; p < mesh.size(); ++p) dx[p] = d.dot(mesh.panels[p].centroid);
  const Eigen::VectorXd sigma = model.S_lu.solve(dx);
  return model.K * sigma - 0.5 * sigma;
}

TrackedResonance track_resonance(const SurfaceMesh& mesh, const NPModel& model,
                                 const NPSpectrum& spectrum, int j, double omega, double eps_m,
                                 int iterations, const SolverOptions& opt) {
  if (j < 1 || j >= spectrum.size()) throw SpectralError("track_resonance: invalid mode");
  const double lj = spectrum.lambdas[j];
  TrackedResonance tr;
  tr.theta = (2 * lj + 1) / (eps_m * (2 * lj - 1));
  Eigen::VectorXcd v = spectrum.eigfuncs.col(j).cast<cd>();
  const Eigen::MatrixXcd M = model.M.cast<cd>();
  double lambda = lj;
  for (int it = 0; it < iterations; ++it) {
    const cd eps_c = 1.0 / tr.theta;
    const Wavenumbers wn = Wavenumbers::make(omega, eps_c, eps_m);
    const TransmissionOperators ops = assemble_transmission(mesh, model, wn, opt);
    const Eigen::MatrixXcd A = reduced_operator(ops);
    // Rayleigh-quotient iteration in the H* pairing
    cd mu = v.dot(M * (A * v)) / v.dot(M * v);
    for (int k = 0; k < 3; ++k) {
      Eigen::MatrixXcd Ash = A;
      Ash.diagonal().array() -= mu;
      Eigen::VectorXcd nv = Ash.partialPivLu().solve(v);
      v = nv / nv.norm();
      mu = v.dot(M * (A * v)) / v.dot(M * v);
    }
    const double scale = 1.0 / eps_m - tr.theta;
    const double big_lambda = 0.5 * (tr.theta + 1.0 / eps_m) / (tr.theta - 1.0 / eps_m);
    lambda = big_lambda + (mu / scale).real();
    tr.mu = mu;
    tr.theta = (2 * lambda + 1) / (eps_m * (2 * lambda - 1));
    tr.iterations = it + 1;
  }
  tr.lambda_eff = lambda;
  tr.shift = lambda - lj;
  return tr;
}

}  // namespace nanorod
