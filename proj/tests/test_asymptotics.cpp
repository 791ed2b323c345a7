#include "nanorod/asymptotics.hpp"

#include <doctest.h>

#include <cmath>

using namespace nanorod;

namespace {

struct Setup {
  RodSpec spec;
  SurfaceMesh mesh;
  NPModel model;
  NPSpectrum spectrum;
};

Setup setup(double delta = 0.25) {
  Setup s;
  s.spec.curve = straight_curve(2.0);
  s.spec.delta = delta;
  s.spec.n_circum = 12;
  s.spec.cap_refine = 3;
  s.mesh = build_rod_mesh(s.spec);
  s.model = build_np_model(s.mesh);
  s.spectrum = np_spectrum(s.model, 0);
  return s;
}

}  // namespace

TEST_CASE("p on the straight rod") {
  const double L = 4.0, d = 0.25;
  const Vec3 P0(0, 0, -2), Q0(0, 0, 2);
  CHECK(p_straight(Vec3(0, 0, -2 - d), L, d, P0, Q0) == doctest::Approx(L + 2 * d).epsilon(1e-15));
  CHECK(p_straight(Vec3(d, 0, 0), L, d, P0, Q0) ==
        doctest::Approx(std::sqrt(L * L + 4 * d * d)).epsilon(1e-15));
  // Facade and cap branches meet continuously at the rim.
  const Vec3 rim(0, d, -2);
  const double facade = std::sqrt(d * d) + std::sqrt(L * L + d * d);
  CHECK(p_straight(rim, L, d, P0, Q0) == doctest::Approx(facade).epsilon(1e-12));
  // Agrees with the sum of distances to the tip-side points on both branches.
  for (const Vec3& x : {Vec3(0.1, 0.2, 0.7), Vec3(0, 0.25, 1.2)}) {
    const Vec3 y = Vec3(0, 0, x.z()) + d * Vec3(x.x(), x.y(), 0).normalized();
    const double l = y.z();
    const double f = std::sqrt(std::pow(L / 2 - l, 2) + d * d) + std::sqrt(std::pow(L / 2 + l, 2) + d * d);
    CHECK(p_straight(y, L, d, P0, Q0) == doctest::Approx(f).epsilon(1e-14));
  }
  CHECK_THROWS_AS(p_straight(Vec3(1, 1, 0), L, d, P0, Q0), AsymptoticError);
}

TEST_CASE("quasi-static density is linear in omega") {
  const Setup s = setup();
  const QuasiStaticModel m =
      make_quasistatic_model(s.mesh, s.model, s.spectrum, s.spec.curve, 0.25, Vec3::UnitZ());
  const QSMaterial mat;
  const auto J = all_modes(m);
  const Eigen::VectorXcd a = psi_quasistatic(m, 0.01, mat, J);
  const Eigen::VectorXcd b = psi_quasistatic(m, 0.02, mat, J);
  CHECK((b - 2.0 * a).norm() < 1e-13 * b.norm());
  const Vec3 x(3, 4, 12);
  const cd ua = us_asymptotic(m, 0.01, mat, J, x), ub = us_asymptotic(m, 0.02, mat, J, x);
  CHECK(std::abs(ub - 2.0 * ua) < 1e-13 * std::abs(ub));
}

TEST_CASE("quasi-static density solves the static reduced equation") {
  const Setup s = setup();
  const Vec3 d = Vec3::UnitZ();
  const QuasiStaticModel m =
      make_quasistatic_model(s.mesh, s.model, s.spectrum, s.spec.curve, 0.25, d);
  QSMaterial mat;
  const double omega = 0.01;
  const Eigen::VectorXcd psi = psi_quasistatic(m, omega, mat, all_modes(m));
  // A0 psi = -(1/eps_m)(1 - eps_m/eps_c)... reduces to the first-order right-hand side
  // i omega sqrt(mu eps) (1/eps_c - 1/eps_m) dnu.
  const Eigen::MatrixXcd A0 = reduced_operator_static(s.model, mat.eps_c, mat.eps_m);
  const Eigen::VectorXcd rhs = kI * omega * (1.0 / mat.eps_c - 1.0 / mat.eps_m) *
                               coupling_vector(s.mesh, s.model, d).cast<cd>();
  CHECK((A0 * psi - rhs).norm() < 1e-8 * rhs.norm());
}

TEST_CASE("asymptotic fields reject points on the wrong side") {
  const Setup s = setup();
  const QuasiStaticModel m =
      make_quasistatic_model(s.mesh, s.model, s.spectrum, s.spec.curve, 0.25, Vec3::UnitZ());
  const QSMaterial mat;
  const auto J = all_modes(m);
  CHECK_THROWS_AS(us_asymptotic(m, 0.1, mat, J, Vec3(0, 0, 0.1)), AsymptoticError);
  CHECK_THROWS_AS(u_interior_asymptotic(m, 0.1, mat, J, Vec3(0, 3, 0)), AsymptoticError);
  CHECK_NOTHROW(us_asymptotic(m, 0.1, mat, J, Vec3(0, 3, 0)));
  CHECK_NOTHROW(u_interior_asymptotic(m, 0.1, mat, J, Vec3(0, 0, 0.1)));
}

TEST_CASE("leading far-field term carries the delta^2 factor") {
  const Setup s = setup();
  QuasiStaticModel m =
      make_quasistatic_model(s.mesh, s.model, s.spectrum, s.spec.curve, 0.25, Vec3::UnitZ());
  const QSMaterial mat;
  const auto J = all_modes(m);
  const Vec3 x(3, 4, 12);
  const cd a = us_asymptotic(m, 0.05, mat, J, x);
  m.delta *= 0.5;
  const cd b = us_asymptotic(m, 0.05, mat, J, x);
  CHECK(std::abs(a / b) == doctest::Approx(4.0).epsilon(1e-12));
}

TEST_CASE("denominator without first-order correction") {
  const Setup s = setup();
  const QuasiStaticModel m =
      make_quasistatic_model(s.mesh, s.model, s.spectrum, s.spec.curve, 0.25, Vec3::UnitZ());
  const QSMaterial mat;
  for (int j = 1; j < 5; ++j) {
    const cd lam = lambda_of_ratio(mat.eps_m / mat.eps_c);
    CHECK(std::abs(asymptotic_denominator(m, mat, j) - (lam - s.spectrum.lambdas[j])) < 1e-14);
    // (1/eps_c - 1/eps_m) / tau_j = 1 / (lambda(eps_m/eps_c) - lambda_j)
    const cd tau = tau_value(s.spectrum.lambdas[j], mat.eps_c, mat.eps_m);
    CHECK(std::abs((1.0 / mat.eps_c - 1.0 / mat.eps_m) / tau - 1.0 / (lam - s.spectrum.lambdas[j])) <
          1e-12);
  }
}

TEST_CASE("blowup scaling prediction") {
  const BlowupPrediction p = blowup_scaling_prediction(0.1, -1e-3, 0.25);
  CHECK(p.dominant == doctest::Approx(100.0));
  CHECK(p.sub_omega2 == doctest::Approx(10.0));
  CHECK(p.sub_sqrt == doctest::Approx(std::sqrt(0.1)));
  CHECK(p.regime == doctest::Approx(2.5));
  CHECK(p.outside_regime);
  CHECK_FALSE(blowup_scaling_prediction(0.01, -1e-3, 0.1).outside_regime);
}
