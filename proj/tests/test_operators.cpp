#include "nanorod/operators.hpp"

#include <doctest.h>

#include <cmath>

using namespace nanorod;

namespace {

SurfaceMesh small_rod(double L = 2.0, double delta = 0.25, int n_circum = 12) {
  RodSpec s;
  s.curve = straight_curve(L);
  s.delta = delta;
  s.n_circum = n_circum;
  s.cap_refine = n_circum / 4;
  return build_rod_mesh(s);
}

// Integral of 1/|x - y| over a triangle for x in its plane, by polar
// integration about x: the integral equals the integral over angle of the
// distance from x to the boundary along that ray.
double polar_oracle(const Vec3& x, const Vec3& a, const Vec3& b, const Vec3& c) {
  const Vec3 n = (b - a).cross(c - a).normalized();
  const Vec3 e1 = (a - x).normalized(), e2 = n.cross(e1);
  const Vec3 v[3] = {a, b, c};
  const int m = 200000;
  double sum = 0.0;
  for (int i = 0; i < m; ++i) {
    const double th = 2 * kPi * (i + 0.5) / m;
    const Vec3 dir = std::cos(th) * e1 + std::sin(th) * e2;
    double rmin = 1e300;
    for (int k = 0; k < 3; ++k) {
      const Vec3 p = v[k], q = v[(k + 1) % 3];
      // Solve x + r dir = p + s (q - p) in the plane.
      const Vec3 e = q - p;
      const Vec3 w = p - x;
      const double det = dir.cross(-e).dot(n);
      if (std::abs(det) < 1e-14) continue;
      const double r = w.cross(-e).dot(n) / det;
      const double s = dir.cross(w).dot(n) / det;
      if (r > 0 && s >= -1e-12 && s <= 1 + 1e-12) rmin = std::min(rmin, r);
    }
    sum += rmin;
  }
  return sum * 2 * kPi / m;
}

}  // namespace

TEST_CASE("self-term integral matches polar integration") {
  const Vec3 a(0, 0, 0), b(1.0, 0.1, 0), c(0.3, 0.8, 0);
  const Vec3 cen = (a + b + c) / 3.0;
  CHECK(inverse_distance_integral(cen, a, b, c) ==
        doctest::Approx(polar_oracle(cen, a, b, c)).epsilon(1e-6));
  const Vec3 off = 0.6 * a + 0.3 * b + 0.1 * c;
  CHECK(inverse_distance_integral(off, a, b, c) ==
        doctest::Approx(polar_oracle(off, a, b, c)).epsilon(1e-6));
}

TEST_CASE("sphere single layer maps 1 to -R") {
  const SurfaceMesh m = build_sphere_mesh(1.5, 8);
  const Eigen::MatrixXd S = laplace_single_layer(m);
  const Eigen::VectorXd v = S * Eigen::VectorXd::Ones(m.size());
  CHECK(v.mean() == doctest::Approx(-1.5).epsilon(0.02));
  CHECK((v.array() + 1.5).abs().maxCoeff() < 0.05 * 1.5);
}

TEST_CASE("weighted symmetrization makes W S symmetric") {
  const SurfaceMesh m = small_rod();
  const Eigen::VectorXd w = m.areas();
  const Eigen::MatrixXd S = laplace_single_layer(m);
  const Eigen::MatrixXd WS = w.asDiagonal() * S;
  CHECK((WS - WS.transpose()).norm() <= 1e-13 * WS.norm());
}

TEST_CASE("static single layer is negative definite") {
  const SurfaceMesh m = small_rod();
  const GramHstar g = assemble_gram_hstar(m);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(g.matrix);
  CHECK(es.eigenvalues().minCoeff() > 0);
  CHECK((g.matrix - g.matrix.transpose()).norm() <= 1e-12 * g.matrix.norm());
  Eigen::MatrixXd bad = -g.matrix;
  CHECK_THROWS_AS(gram_from_single_layer(bad.cwiseQuotient(-m.areas().replicate(1, m.size())),
                                         m.areas()),
                  OperatorError);
}

TEST_CASE("Gauss closure: adjoint NP operator maps constants to 1/2") {
  const SurfaceMesh m = small_rod();
  const Eigen::MatrixXd K = laplace_np_adjoint(m);
  const Eigen::VectorXd w = m.areas();
  const Eigen::VectorXd col = (w.asDiagonal() * K).colwise().sum().transpose();
  CHECK((col - 0.5 * w).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("first single-layer series term is the constant kernel") {
  const SurfaceMesh m = small_rod();
  const Eigen::MatrixXcd S1 = assemble_series_term(SeriesKind::S, 1, m).matrix;
  const Eigen::VectorXd w = m.areas();
  double err = 0.0;
  for (Eigen::Index p = 0; p < S1.rows(); ++p)
    for (Eigen::Index q = 0; q < S1.cols(); ++q)
      err = std::max(err, std::abs(S1(p, q) - cd(0, -w[q] / (4 * kPi))));
  CHECK(err < 1e-15);
  CHECK(assemble_series_term(SeriesKind::K, 1, m).matrix.cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("NP series truncation converges at the expected rate") {
  const SurfaceMesh m = small_rod();
  const Eigen::MatrixXcd K0 = laplace_np_adjoint(m).cast<cd>();
  const Eigen::MatrixXcd K2 = assemble_series_term(SeriesKind::K, 2, m).matrix;
  const Eigen::MatrixXcd K3 = assemble_series_term(SeriesKind::K, 3, m).matrix;
  auto err = [&](double k, int J) {
    Eigen::MatrixXcd s = K0 + k * k * K2;
    if (J >= 3) s += k * k * k * K3;
    return (assemble_np_adjoint(k, m).matrix - s).norm();
  };
  const double s2 = std::log2(err(0.2, 2) / err(0.1, 2));
  const double s3 = std::log2(err(0.2, 3) / err(0.1, 3));
  CHECK(s2 == doctest::Approx(3.0).epsilon(0.1));
  CHECK(s3 == doctest::Approx(4.0).epsilon(0.1));
}

TEST_CASE("single-layer series holds for imaginary and complex wavenumbers") {
  const SurfaceMesh m = small_rod();
  const Eigen::MatrixXcd S0 = laplace_single_layer(m).cast<cd>();
  const Eigen::MatrixXcd S1 = assemble_series_term(SeriesKind::S, 1, m).matrix;
  const Eigen::MatrixXcd S2 = assemble_series_term(SeriesKind::S, 2, m).matrix;
  for (cd dir : {cd(1, 0), cd(0, 1), cd(0.6, 0.8)}) {
    auto err = [&](double s) {
      const cd k = s * dir;
      return (assemble_single_layer(k, m).matrix - S0 - k * S1 - k * k * S2).norm();
    };
    CHECK(std::log2(err(0.1) / err(0.05)) == doctest::Approx(3.0).epsilon(0.1));
  }
}

TEST_CASE("NP model: pinned eigenpair and H* self-adjointness") {
  const SurfaceMesh m = small_rod();
  const NPModel model = build_np_model(m);
  CHECK((model.K * model.u0 - 0.5 * model.u0).norm() <= 1e-10 * model.u0.norm());
  const Eigen::MatrixXd MK = model.M * model.K;
  CHECK((MK - MK.transpose()).norm() <= 1e-10 * MK.norm());
  CHECK(model.asymmetry < 0.05);
  CHECK(model.calderon_residual < 0.01);
}

TEST_CASE("limiting cap operator structure") {
  RodSpec s;
  s.curve = straight_curve(12.0);
  s.delta = 1.0;
  s.n_circum = 12;
  s.cap_refine = 3;
  const SurfaceMesh ref = build_rod_mesh(s);
  const Eigen::MatrixXd full = laplace_np_adjoint(ref);
  const double collar = 0.5;
  const Eigen::MatrixXcd K0 = assemble_k0_star(ref, s.curve, collar, &full).matrix;
  const auto capA = ref.indices(Region::CapA);
  const auto colA = collar_indices(ref, s.curve, End::P0, collar);
  const auto colB = collar_indices(ref, s.curve, End::Q0, collar);
  CHECK(!colA.empty());
  std::vector<char> keep(ref.size(), 0);
  for (int i : colA) keep[i] = 1;
  for (int i : colB) keep[i] = 1;
  for (std::size_t r = 0; r < ref.size(); ++r) {
    if (ref.panels[r].region != Region::Facade || keep[r]) continue;
    CHECK(K0.row(r).cwiseAbs().maxCoeff() == 0.0);
  }
  for (int p : capA)
    for (int q : capA) CHECK(K0(p, q).real() == full(p, q));
  for (int p : capA)
    for (std::size_t q = 0; q < ref.size(); ++q)
      if (ref.panels[q].region != Region::CapA) CHECK(K0(p, q) == cd(0.0, 0.0));
}

TEST_CASE("foot-collapsed single layer approaches the full one far away") {
  RodSpec s;
  s.curve = straight_curve(2.0);
  s.delta = 0.1;
  s.n_circum = 12;
  s.cap_refine = 3;
  const SurfaceMesh m = build_rod_mesh(s);
  Eigen::VectorXcd phi(m.size());
  std::vector<int> all(m.size());
  for (std::size_t i = 0; i < m.size(); ++i) {
    phi[i] = 1.0 + m.panels[i].centroid.z();
    all[i] = int(i);
  }
  for (double R : {5.0, 20.0}) {
    const Vec3 x = R * Vec3(0.6, 0.0, 0.8);
    cd exact = 0.0;
    for (std::size_t q = 0; q < m.size(); ++q)
      exact += green(0.0, x, m.panels[q].centroid) * phi[q] * m.panels[q].area;
    const cd foot = foot_single_layer(m, all, phi, x);
    CHECK(std::abs(foot - exact) < 0.1 * s.delta / R * std::abs(exact) + 1e-14);
  }
}

TEST_CASE("operator dump round trip") {
  Eigen::MatrixXcd a(2, 3);
  a << cd(1, 2), cd(0.1, -3), cd(1e-300, 0), cd(-4, 5.5), cd(0, 0), cd(3.14159, 2.71828);
  const std::string path = "dump_test.txt";
  dump_operator(a, path);
  std::FILE* f = std::fopen(path.c_str(), "r");
  REQUIRE(f);
  long r = 0, c = 0;
  REQUIRE(std::fscanf(f, "%ld %ld", &r, &c) == 2);
  CHECK(r == 2);
  CHECK(c == 3);
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 3; ++j) {
      double re, im;
      REQUIRE(std::fscanf(f, "%lf %lf", &re, &im) == 2);
      CHECK(cd(re, im) == a(i, j));
    }
  std::fclose(f);
  std::remove(path.c_str());
}
