#pragma once

#include <Eigen/Dense>

#include <complex>
#include <stdexcept>

namespace nanorod {

using cd = std::complex<double>;
using Vec3 = Eigen::Vector3d;
using CVec3 = Eigen::Vector3cd;

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr cd kI{0.0, 1.0};

struct KernelError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

/// Square root with nonnegative imaginary part.
cd principal_sqrt(cd z);

struct Wavenumbers {
  double omega = 0.0;
  cd eps_c{1.0, 0.0}, mu_c{1.0, 0.0};
  double eps_m = 1.0, mu_m = 1.0;
  cd k_c{0.0, 0.0}, k_m{0.0, 0.0};

  static Wavenumbers make(double omega, cd eps_c, double eps_m = 1.0, cd mu_c = 1.0,
                          double mu_m = 1.0);
};

/// -exp(ik|x-y|) / (4 pi |x-y|)
cd green(cd k, const Vec3& x, const Vec3& y);
/// Gradient of green in x.
CVec3 grad_green_x(cd k, const Vec3& x, const Vec3& y);

/// j-th term of the k-series of the single-layer kernel: -i^j/(4 pi j!) r^(j-1).
cd series_S_term(int j, const Vec3& x, const Vec3& y);
/// j-th term of the k-series of the NP kernel: -i^j (j-1)/(4 pi j!) r^(j-3) <x-y, nu_x>.
cd series_K_term(int j, const Vec3& x, const Vec3& y, const Vec3& nu_x);

/// Kernel coefficient helpers shared with operator assembly.
cd series_S_coeff(int j);  // -i^j / (4 pi j!)
cd series_K_coeff(int j);  // -i^j (j-1) / (4 pi j!)

/// Default truncation order of frequency series.
inline constexpr int kDefaultSeriesOrder = 8;
/// Truncation guard: k * diam below this keeps the factorial tail negligible.
inline constexpr double kSeriesGuard = 0.5;

}  // namespace nanorod
