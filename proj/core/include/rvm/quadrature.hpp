// Quadrature rules used by the wave-equation oracles.
#pragma once

#include <functional>
#include <vector>

#include "rvm/vec3.hpp"

namespace rvm {

struct Rule1D {
  std::vector<double> x;
  std::vector<double> w;
};

/// n-point Gauss-Legendre rule on [a, b].
Rule1D gauss_legendre(int n, double a = -1.0, double b = 1.0);

struct AdaptiveResult {
  double value = 0.0;
  double error = 0.0;
};

/// Adaptive Gauss-Kronrod (15 points) on [a, b] to relative tolerance `tol`.
AdaptiveResult integrate_adaptive(const std::function<double(double)>& f, double a, double b, double tol = 1e-10,
                                  int max_depth = 15);

/// Same, splitting [a, b] at the given interior breakpoints.
AdaptiveResult integrate_adaptive(const std::function<double(double)>& f, double a, double b,
                                  const std::vector<double>& breaks, double tol = 1e-10, int max_depth = 15);

/// Product rule on the unit sphere: Gauss-Legendre in mu = cos(theta) on
/// [-1, mu_max] and the periodic trapezoid rule with 2n points in phi, about
/// the polar axis `pole`. Returns the integral over the cap mu <= mu_max of
/// f(omega) d Omega.
double sphere_cap_integral(const std::function<double(const Vec3&)>& f, const Vec3& pole, double mu_max, int n);

}  // namespace rvm
