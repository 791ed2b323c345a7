#include "nanorod/spectral.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>

namespace nanorod {

namespace {

std::vector<int> order_by_magnitude(const Eigen::VectorXd& v) {
  std::vector<int> idx(v.size());
  std::iota(idx.begin(), idx.end(), 0);
  std::stable_sort(idx.begin(), idx.end(),
                   [&](int a, int b) { return std::abs(v[a]) > std::abs(v[b]); });
  return idx;
}

template <class Vec>
void fix_sign(Vec& v) {
  Eigen::Index k;
  v.cwiseAbs().maxCoeff(&k);
  if constexpr (std::is_same_v<typename Vec::Scalar, cd>) {
    const cd ph = v[k] / std::abs(v[k]);
    v /= ph;
  } else {
    if (v[k] < 0) v = -v;
  }
}

}  // namespace

NPSpectrum np_spectrum(const NPModel& model, int m) {
  const int n = int(model.size());
  Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> ges(model.B, model.M);
  if (ges.info() != Eigen::Success) throw SpectralError("generalized eigensolve did not converge");

  const Eigen::VectorXd& ev = ges.eigenvalues();
  const auto order = order_by_magnitude(ev);
  const int keep = (m <= 0 || m > n) ? n : m;

  NPSpectrum s;
  s.n_panels = model.size();
  s.lambdas.resize(keep);
  s.eigfuncs.resize(n, keep);
  s.a.resize(keep);
  for (int i = 0; i < keep; ++i) {
    Eigen::VectorXd v = ges.eigenvectors().col(order[i]);
    const double l2 = std::sqrt(v.cwiseAbs2().dot(model.w));
    v /= l2;
    fix_sign(v);
    s.lambdas[i] = ev[order[i]];
    s.eigfuncs.col(i) = v;
    s.a[i] = v.dot(model.M * v);
  }

  const int check = std::min(keep, 200);
  const Eigen::MatrixXd G =
      s.eigfuncs.leftCols(check).transpose() * model.M * s.eigfuncs.leftCols(check);
  double orth = 0.0;
  for (int i = 0; i < check; ++i)
    for (int j = 0; j < check; ++j)
      if (i != j) orth = std::max(orth, std::abs(G(i, j)) / std::sqrt(G(i, i) * G(j, j)));
  s.orthogonality_error = orth;
  s.asymmetry = model.asymmetry;
  s.lambda0_rayleigh = model.lambda0_rayleigh;
  s.calderon_residual = model.calderon_residual;
  return s;
}

NPSpectrum np_spectrum(const SurfaceMesh& mesh, int m) { return np_spectrum(build_np_model(mesh), m); }

std::vector<std::vector<int>> eigenvalue_clusters(const Eigen::VectorXd& lambdas, double tol) {
  std::vector<int> idx(lambdas.size());
  std::iota(idx.begin(), idx.end(), 0);
  std::stable_sort(idx.begin(), idx.end(), [&](int a, int b) { return lambdas[a] > lambdas[b]; });
  std::vector<std::vector<int>> out;
  for (int i : idx) {
    if (!out.empty() && std::abs(lambdas[out.back().back()] - lambdas[i]) < 0.5 * tol)
      out.back().push_back(i);
    else
      out.push_back({i});
  }
  return out;
}

Eigen::VectorXd spectral_apply(const NPSpectrum& s, const Eigen::MatrixXd& M,
                               const Eigen::VectorXd& psi, int m) {
  m = std::min(m, s.size());
  const Eigen::VectorXd Mpsi = M * psi;
  Eigen::VectorXd out = Eigen::VectorXd::Zero(psi.size());
  for (int j = 0; j < m; ++j)
    out += s.lambdas[j] * s.eigfuncs.col(j).dot(Mpsi) / s.a[j] * s.eigfuncs.col(j);
  return out;
}

cd tau_value(double lambda, cd eps_c, double eps_m) {
  if (eps_c == 0.0) throw SpectralError("eps_c must be nonzero");
  if (!(eps_m > 0)) throw SpectralError("eps_m must be positive");
  return 0.5 * (1.0 / eps_m + 1.0 / eps_c) + (1.0 / eps_m - 1.0 / eps_c) * lambda;
}

ResonanceParams tau_values(const NPSpectrum& s, cd eps_c, double eps_m, double eta0,
                           double mu_m) {
  ResonanceParams p;
  p.eps_c = eps_c;
  p.eps_m = eps_m;
  const cd inv = 1.0 / eps_c;
  p.theta = inv.real();
  p.rho = inv.imag();
  p.tau.resize(s.size());
  for (int j = 0; j < s.size(); ++j) p.tau[j] = tau_value(s.lambdas[j], eps_c, eps_m);
  p.eta0 = eta0;
  p.J = resonance_index_set(p, s, eta0);
  p.tau0_note = std::abs(1.0 / eps_m - 1.0 / mu_m) > 1e-14;
  return p;
}

std::vector<int> resonance_index_set(const ResonanceParams& p, const NPSpectrum& s, double eta0,
                                     double tail) {
  std::vector<int> J;
  for (int j = 1; j < int(p.tau.size()); ++j)
    if (std::abs(s.lambdas[j]) >= tail && std::abs(p.tau[j]) < eta0) J.push_back(j);
  return J;
}

cd resonant_permittivity(double lambda, double eps_m, double rho) {
  if (std::abs(lambda - 0.5) < 1e-14) throw SpectralError("lambda = 1/2 has no resonant permittivity");
  const double theta = (2 * lambda + 1) / (eps_m * (2 * lambda - 1));
  return 1.0 / cd(theta, rho);
}

cd resonant_permittivity_for_mode(int j, const NPSpectrum& s, double eps_m, double rho) {
  if (j < 0 || j >= s.size()) throw SpectralError("mode index out of range");
  return resonant_permittivity(s.lambdas[j], eps_m, rho);
}

cd lambda_of_ratio(cd t) {
  if (t == 1.0) throw SpectralError("lambda(t) undefined at t = 1");
  return (t + 1.0) / (2.0 * (t - 1.0));
}

K0Spectrum k0_spectrum(const SurfaceMesh& reference, const CenterlineCurve& curve, double collar,
                       const Eigen::MatrixXd* full_static) {
  K0Spectrum out;
  out.op = assemble_k0_star(reference, curve, collar, full_static);
  const Eigen::MatrixXcd& K = out.op.matrix;
  const auto capA = reference.indices(Region::CapA);
  const auto capB = reference.indices(Region::CapB);
  const auto colA = collar_indices(reference, curve, End::P0, collar);
  const auto colB = collar_indices(reference, curve, End::Q0, collar);
  const int n = int(reference.size());
  const Eigen::VectorXd w = reference.areas();

  auto block = [&](const std::vector<int>& idx) {
    Eigen::MatrixXd b(idx.size(), idx.size());
    for (std::size_t i = 0; i < idx.size(); ++i)
      for (std::size_t j = 0; j < idx.size(); ++j) b(i, j) = K(idx[i], idx[j]).real();
    return b;
  };
  const Eigen::MatrixXd KA = block(capA), KB = block(capB);
  out.mirror_paired = capA.size() == capB.size() && (KA - KB).norm() <= 1e-10 * KA.norm();

  std::vector<cd> vals;
  std::vector<Eigen::VectorXcd> vecs;
  auto add_mode = [&](cd mu, const Eigen::VectorXcd& va, const Eigen::VectorXcd& vb) {
    Eigen::VectorXcd phi = Eigen::VectorXcd::Zero(n);
    for (std::size_t i = 0; i < capA.size(); ++i) phi[capA[i]] = va[i];
    for (std::size_t i = 0; i < capB.size(); ++i) phi[capB[i]] = vb[i];
    if (std::abs(mu) > 1e-14) {
      const Eigen::VectorXcd cap = phi;
      for (int r : colA) phi[r] = (K.row(r) * cap).value() / mu;
      for (int r : colB) phi[r] = (K.row(r) * cap).value() / mu;
    }
    vals.push_back(mu);
    vecs.push_back(phi);
  };

  Eigen::EigenSolver<Eigen::MatrixXd> esA(KA);
  if (esA.info() != Eigen::Success) throw SpectralError("cap eigensolve did not converge");
  if (out.mirror_paired) {
    for (Eigen::Index i = 0; i < esA.eigenvalues().size(); ++i) {
      const Eigen::VectorXcd v = esA.eigenvectors().col(i);
      add_mode(esA.eigenvalues()[i], v, v);
      add_mode(esA.eigenvalues()[i], v, -v);
    }
  } else {
    Eigen::EigenSolver<Eigen::MatrixXd> esB(KB);
    if (esB.info() != Eigen::Success) throw SpectralError("cap eigensolve did not converge");
    for (Eigen::Index i = 0; i < esA.eigenvalues().size(); ++i)
      add_mode(esA.eigenvalues()[i], esA.eigenvectors().col(i),
               Eigen::VectorXcd::Zero(capB.size()));
    for (Eigen::Index i = 0; i < esB.eigenvalues().size(); ++i)
      add_mode(esB.eigenvalues()[i], Eigen::VectorXcd::Zero(capA.size()),
               esB.eigenvectors().col(i));
  }

  Eigen::VectorXd re(vals.size());
  for (std::size_t i = 0; i < vals.size(); ++i) re[i] = vals[i].real();
  const auto order = order_by_magnitude(re);

  std::vector<char> outside(n, 0);
  for (int i = 0; i < n; ++i) outside[i] = reference.panels[i].region == Region::Facade;
  for (int r : colA) outside[r] = 0;
  for (int r : colB) outside[r] = 0;

  const int m = int(vals.size());
  out.lambdas.resize(m);
  out.imag.resize(m);
  out.eigfuncs.resize(n, m);
  out.facade_amplitude.resize(m);
  out.collar_amplitude.resize(m);
  out.moment_a.resize(m);
  out.moment_b.resize(m);
  for (int i = 0; i < m; ++i) {
    Eigen::VectorXcd phi = vecs[order[i]];
    phi /= std::sqrt(phi.cwiseAbs2().dot(w));
    fix_sign(phi);
    const double nrm = phi.norm();
    double fac = 0.0, col = 0.0;
    for (int r = 0; r < n; ++r) {
      if (outside[r]) fac = std::max(fac, std::abs(phi[r]));
    }
    for (int r : colA) col = std::max(col, std::abs(phi[r]));
    for (int r : colB) col = std::max(col, std::abs(phi[r]));
    cd ma = 0.0, mb = 0.0;
    for (int r : capA) ma += phi[r] * w[r];
    for (int r : capB) mb += phi[r] * w[r];
    out.lambdas[i] = vals[order[i]].real();
    out.imag[i] = vals[order[i]].imag();
    out.eigfuncs.col(i) = phi;
    out.facade_amplitude[i] = fac / nrm;
    out.collar_amplitude[i] = col / nrm;
    out.moment_a[i] = ma;
    out.moment_b[i] = mb;
  }
  return out;
}

double richardson_first_order(const std::vector<double>& deltas,
                              const std::vector<double>& lambdas) {
  if (deltas.size() != lambdas.size() || deltas.size() < 2)
    throw SpectralError("richardson fit needs at least two matching samples");
  const double n = double(deltas.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < deltas.size(); ++i) {
    sx += deltas[i];
    sy += lambdas[i];
    sxx += deltas[i] * deltas[i];
    sxy += deltas[i] * lambdas[i];
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

std::string spectrum_table(const NPSpectrum& s, const ResonanceParams* p) {
  std::string out;
  char buf[160];
  std::snprintf(buf, sizeof buf, "%5s %14s %14s %14s %5s\n", "j", "lambda", "a", "|tau|", "in_J");
  out += buf;
  for (int j = 0; j < s.size(); ++j) {
    double at = p ? std::abs(p->tau[j]) : 0.0;
    bool in = p && std::find(p->J.begin(), p->J.end(), j) != p->J.end();
    std::snprintf(buf, sizeof buf, "%5d %14.8f %14.6e %14.6e %5d\n", j, s.lambdas[j], s.a[j], at,
                  int(in));
    out += buf;
  }
  if (p && p->tau0_note)
    out += "note: tau_0 computed as 1/eps_m; differs from 1/mu_m for this material\n";
  return out;
}

void write_spectrum_csv(const NPSpectrum& s, const ResonanceParams* p, const std::string& path) {
  std::FILE* f = std::fopen(path.c_str(), "w");
  if (!f) throw SpectralError("cannot write " + path);
  std::fprintf(f, "j,lambda,a,abs_tau,in_J\n");
  for (int j = 0; j < s.size(); ++j) {
    double at = p ? std::abs(p->tau[j]) : 0.0;
    bool in = p && std::find(p->J.begin(), p->J.end(), j) != p->J.end();
    std::fprintf(f, "%d,%.17g,%.17g,%.17g,%d\n", j, s.lambdas[j], s.a[j], at, int(in));
  }
  std::fclose(f);
}

}  // namespace nanorod
