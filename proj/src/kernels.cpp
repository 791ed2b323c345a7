#include "nanorod/kernels.hpp"

#include <cmath>

namespace nanorod {

cd principal_sqrt(cd z) {
  cd r = std::sqrt(z);
  if (r.imag() < 0 || (r.imag() == 0 && r.real() < 0)) r = -r;
  return r;
}

Wavenumbers Wavenumbers::make(double omega, cd eps_c, double eps_m, cd mu_c, double mu_m) {
  if (!(omega > 0)) throw KernelError("omega must be positive");
  if (!(eps_m > 0) || !(mu_m > 0)) throw KernelError("eps_m and mu_m must be positive");
  if (eps_c == 0.0 || mu_c == 0.0) throw KernelError("eps_c and mu_c must be nonzero");
  Wavenumbers w;
  w.omega = omega;
  w.eps_c = eps_c;
  w.mu_c = mu_c;
  w.eps_m = eps_m;
  w.mu_m = mu_m;
  w.k_c = omega * principal_sqrt(eps_c * mu_c);
  w.k_m = omega * std::sqrt(eps_m * mu_m);
  return w;
}

cd green(cd k, const Vec3& x, const Vec3& y) {
  double r = (x - y).norm();
  if (r == 0.0) throw KernelError("green: x == y");
  return -std::exp(kI * k * r) / (4 * kPi * r);
}

CVec3 grad_green_x(cd k, const Vec3& x, const Vec3& y) {
  Vec3 d = x - y;
  double r = d.norm();
  if (r == 0.0) throw KernelError("grad_green_x: x == y");
  cd g = -std::exp(kI * k * r) / (4 * kPi * r);
  cd f = g * (kI * k - 1.0 / r) / r;
  return f * d.cast<cd>();
}

namespace {
cd ipow(int j) {
  static const cd p[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
  return p[((j % 4) + 4) % 4];
}
double factorial(int j) {
  double f = 1.0;
  for (int i = 2; i <= j; ++i) f *= i;
  return f;
}
}  // namespace

cd series_S_coeff(int j) {
  if (j < 1) throw KernelError("series_S_term: j must be >= 1");
  return -ipow(j) / (4 * kPi * factorial(j));
}

cd series_K_coeff(int j) {
  if (j < 1) throw KernelError("series_K_term: j must be >= 1");
  return -ipow(j) * double(j - 1) / (4 * kPi * factorial(j));
}

cd series_S_term(int j, const Vec3& x, const Vec3& y) {
  cd c = series_S_coeff(j);
  if (j == 1) return c;
  return c * std::pow((x - y).norm(), j - 1);
}

cd series_K_term(int j, const Vec3& x, const Vec3& y, const Vec3& nu_x) {
  cd c = series_K_coeff(j);
  Vec3 d = x - y;
  double r = d.norm();
  if (r == 0.0 && j <= 2) throw KernelError("series_K_term: x == y for j <= 2");
  if (j == 1 || r == 0.0) return 0.0;
  return c * std::pow(r, j - 3) * d.dot(nu_x);
}

}  // namespace nanorod
