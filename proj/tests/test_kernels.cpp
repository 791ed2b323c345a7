#include "nanorod/kernels.hpp"

#include <doctest.h>

#include <cmath>

using namespace nanorod;

TEST_CASE("principal square root lies in the upper half plane") {
  for (cd z : {cd(4, 0), cd(-1, 0.1), cd(-3, -0.5), cd(2, 0.3), cd(-1, 0)}) {
    const cd r = principal_sqrt(z);
    CHECK(std::abs(r * r - z) < 1e-12 * std::abs(z));
    CHECK(r.imag() >= 0.0);
  }
}

TEST_CASE("wavenumbers follow omega sqrt(eps mu)") {
  const Wavenumbers wn = Wavenumbers::make(0.3, cd(-2, 0.5), 1.5, cd(1.2, 0), 0.8);
  CHECK(std::abs(wn.k_m - 0.3 * std::sqrt(1.5 * 0.8)) < 1e-14);
  CHECK(std::abs(wn.k_c * wn.k_c - 0.09 * cd(-2, 0.5) * 1.2) < 1e-14);
}

TEST_CASE("Green's function gradient matches central differences") {
  const Vec3 x(0.3, -0.2, 0.7), y(-0.4, 0.5, 0.1);
  for (cd k : {cd(0, 0), cd(0.7, 0), cd(1.1, 0.2)}) {
    const CVec3 g = grad_green_x(k, x, y);
    const double h = 1e-5;
    for (int i = 0; i < 3; ++i) {
      Vec3 e = Vec3::Zero();
      e[i] = h;
      const cd fd = (green(k, x + e, y) - green(k, x - e, y)) / (2 * h);
      CHECK(std::abs(fd - g[i]) < 1e-8);
    }
  }
}

TEST_CASE("static Green's function") {
  const Vec3 x(1, 2, 3), y(0, 0, 1);
  const double r = (x - y).norm();
  CHECK(std::abs(green(0.0, x, y) - cd(-1.0 / (4 * kPi * r))) < 1e-15);
}

TEST_CASE("series terms resum to the Green's function") {
  const Vec3 x(0.2, 0.4, -0.3), y(-0.5, 0.1, 0.6);
  const Vec3 nu = Vec3(1, 2, -1).normalized();
  for (double k : {0.1, 0.5, 1.5}) {
    cd s = green(0.0, x, y), kk = 0.0;
    for (int j = 1; j <= 30; ++j) {
      s += std::pow(k, j) * series_S_term(j, x, y);
      kk += std::pow(k, j) * series_K_term(j, x, y, nu);
    }
    CHECK(std::abs(s - green(k, x, y)) < 1e-13);
    // NP kernel: grad_x G . nu minus its static part.
    const cd dyn = (grad_green_x(k, x, y) - grad_green_x(0.0, x, y)).cwiseProduct(nu.cast<cd>()).sum();
    CHECK(std::abs(kk - dyn) < 1e-12);
  }
}

TEST_CASE("first NP series term vanishes") {
  const Vec3 x(0.2, 0.4, -0.3), y(-0.5, 0.1, 0.6);
  CHECK(series_K_term(1, x, y, Vec3::UnitZ()) == cd(0.0, 0.0));
  CHECK(series_K_coeff(1) == cd(0.0, 0.0));
  CHECK(std::abs(series_S_coeff(1) - cd(0, -1.0 / (4 * kPi))) < 1e-16);
}
