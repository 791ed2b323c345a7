#include "nanorod/solver.hpp"
#include "nanorod/spectral.hpp"

#include <doctest.h>

#include <cmath>

using namespace nanorod;

namespace {

SurfaceMesh rod_mesh(double L, double delta, int n_circum) {
  RodSpec s;
  s.curve = straight_curve(L);
  s.delta = delta;
  s.n_circum = n_circum;
  s.cap_refine = n_circum / 4;
  return build_rod_mesh(s);
}

}  // namespace

TEST_CASE("sphere eigenvalues and multiplicities") {
  const NPSpectrum s = np_spectrum(build_sphere_mesh(1.0, 8), 16);
  int idx = 0;
  for (int n = 0; n <= 3; ++n)
    for (int m = 0; m < 2 * n + 1; ++m, ++idx)
      CHECK(s.lambdas[idx] == doctest::Approx(1.0 / (2 * (2 * n + 1))).epsilon(0.05));
  const auto cl = eigenvalue_clusters(s.lambdas.head(9), 0.02);
  REQUIRE(cl.size() == 3);
  CHECK(cl[0].size() == 1);
  CHECK(cl[1].size() == 3);
  CHECK(cl[2].size() == 5);
}

TEST_CASE("rod spectrum: ordering, normalization, orthogonality, zero moments") {
  const SurfaceMesh m = rod_mesh(3.0, 0.3, 12);
  const NPModel model = build_np_model(m);
  const NPSpectrum s = np_spectrum(model, 0);
  REQUIRE(s.size() == int(m.size()));
  CHECK(s.lambdas[0] == doctest::Approx(0.5).epsilon(1e-12));
  for (int j = 1; j < s.size(); ++j) {
    CHECK(std::abs(s.lambdas[j]) <= std::abs(s.lambdas[j - 1]) + 1e-15);
    CHECK(std::abs(s.lambdas[j]) < 0.5);
    CHECK(s.a[j] > 0);
  }
  CHECK(s.orthogonality_error < 1e-10);
  const Eigen::VectorXd w = m.areas();
  for (int j = 0; j < s.size(); j += 7) {
    CHECK(s.eigfuncs.col(j).cwiseAbs2().dot(w) == doctest::Approx(1.0).epsilon(1e-12));
    if (j > 0) CHECK(std::abs(w.dot(s.eigfuncs.col(j))) < 1e-10);
  }
}

TEST_CASE("static reduced operator acts diagonally on eigenfunctions") {
  const SurfaceMesh m = rod_mesh(3.0, 0.3, 12);
  const NPModel model = build_np_model(m);
  const NPSpectrum s = np_spectrum(model, 20);
  const cd eps_c(-3.0, 0.5);
  const Eigen::MatrixXcd A0 = reduced_operator_static(model, eps_c, 1.0);
  for (int j = 0; j < 20; ++j) {
    const Eigen::VectorXcd phi = s.eigfuncs.col(j).cast<cd>();
    const cd tau = tau_value(s.lambdas[j], eps_c, 1.0);
    CHECK((A0 * phi - tau * phi).norm() < 1e-9 * phi.norm());
  }
}

TEST_CASE("spectral decomposition reconstructs K") {
  const SurfaceMesh m = rod_mesh(2.0, 0.3, 12);
  const NPModel model = build_np_model(m);
  const NPSpectrum s = np_spectrum(model, 0);
  Eigen::VectorXd psi(m.size());
  for (std::size_t i = 0; i < m.size(); ++i)
    psi[i] = std::sin(m.panels[i].centroid.z()) + m.panels[i].centroid.x();
  const Eigen::VectorXd a = spectral_apply(s, model.M, psi, s.size());
  CHECK((a - model.K * psi).norm() < 1e-9 * (model.K * psi).norm());
}

TEST_CASE("tau values") {
  // eps_c = eps_m: tau = 1/eps_m for every lambda.
  for (double l : {0.5, 0.2, -0.1})
    CHECK(std::abs(tau_value(l, 2.0, 2.0) - 0.5) < 1e-15);
  // lambda_0 = 1/2 gives 1/eps_m.
  CHECK(std::abs(tau_value(0.5, cd(-3, 0.5), 1.0) - 1.0) < 1e-15);
  // Hand value: eps_c = -2, eps_m = 1, lambda = 0.1: 0.5 * 0.5 + 1.5 * 0.1 = 0.4.
  CHECK(std::abs(tau_value(0.1, -2.0, 1.0) - 0.4) < 1e-15);
}

TEST_CASE("resonant permittivity zeroes the real part of tau") {
  for (double l : {0.3, 0.1, -0.2}) {
    for (double rho : {-1e-1, -1e-3}) {
      const cd e = resonant_permittivity(l, 1.0, rho);
      const cd tau = tau_value(l, e, 1.0);
      CHECK(std::abs(tau.real()) < 1e-12);
      CHECK((1.0 / e).imag() == doctest::Approx(rho).epsilon(1e-12));
      CHECK(std::abs(tau.imag()) == doctest::Approx(std::abs(rho) * (0.5 - l)).epsilon(1e-10));
    }
    const cd e0 = 1.0 / ((2 * l + 1) / (2 * l - 1));
    CHECK(std::abs(lambda_of_ratio(1.0 / e0) - l) < 1e-12);
  }
  CHECK_THROWS_AS(resonant_permittivity(0.5, 1.0, -0.1), SpectralError);
  CHECK_THROWS_AS(lambda_of_ratio(1.0), SpectralError);
}

TEST_CASE("resonance index set") {
  const SurfaceMesh m = rod_mesh(3.0, 0.3, 12);
  const NPSpectrum s = np_spectrum(m, 30);
  const cd e = resonant_permittivity_for_mode(3, s, 1.0, -1e-3);
  const ResonanceParams p = tau_values(s, e, 1.0, 0.05);
  const auto J = resonance_index_set(p, s, 0.05);
  CHECK(std::find(J.begin(), J.end(), 3) != J.end());
  CHECK(std::find(J.begin(), J.end(), 0) == J.end());
  const ResonanceParams q = tau_values(s, cd(2.0, 0.1), 1.0, 0.05);
  CHECK(resonance_index_set(q, s, 0.05).empty());
}

TEST_CASE("limiting cap operator spectrum") {
  RodSpec spec;
  spec.curve = straight_curve(12.0);
  spec.delta = 1.0;
  spec.n_circum = 12;
  spec.cap_refine = 3;
  const SurfaceMesh ref = build_rod_mesh(spec);
  const K0Spectrum k = k0_spectrum(ref, spec.curve, 0.5);
  // The two caps of a straight rod carry the same spectrum.
  for (int i = 0; i + 1 < 12; i += 2)
    CHECK(std::abs(k.lambdas[i] - k.lambdas[i + 1]) < 1e-3 * std::abs(k.lambdas[i]));
  CHECK(k.facade_amplitude.maxCoeff() == 0.0);
  CHECK(k.lambdas.size() > 0);
  for (int i = 1; i < k.lambdas.size(); ++i)
    CHECK(std::abs(k.lambdas[i]) <= std::abs(k.lambdas[i - 1]) + 1e-15);
  // Each eigenpair satisfies the operator equation.
  for (int i = 0; i < 6; ++i) {
    const Eigen::VectorXcd v = k.eigfuncs.col(i);
    const cd mu(k.lambdas[i], k.imag[i]);
    CHECK((k.op.matrix * v - mu * v).norm() < 1e-8 * v.norm());
  }
}

TEST_CASE("first-order Richardson slope") {
  CHECK(richardson_first_order({0.4, 0.2, 0.1}, {1.4, 1.2, 1.1}) == doctest::Approx(1.0));
}
