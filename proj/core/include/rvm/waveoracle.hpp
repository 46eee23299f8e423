/**
 * @file waveoracle.hpp
 * @brief Integral-representation solutions of the 3-D wave equation
 * psi_tt - lap psi = eta, used as independent oracles:
 *   retarded part   psi(t,x) = 1/(4 pi) int_{|x-z|<=t} eta(t - |x-z|, z) / |x-z| dz,
 *   Kirchhoff part  psi(t,x) = mean over |z-x| = t of psi0 + grad psi0 . (z-x) + t psi1,
 * plus the change-of-variables identity for radial kernels and the
 * self-similar identity box[t^-2 psi(x/t)] = t^-4 (L psi)(x/t).
 */
#pragma once

#include <functional>
#include <string>
#include <vector>

#include "rvm/limitfields.hpp"
#include "rvm/vec3.hpp"

namespace rvm {

/// Source eta(t, x) with declared support envelope |x| <= zeta t + L.
/// Evaluation outside the envelope returns exactly zero.
struct SourceFn {
  std::function<double(double, const Vec3&)> eta;
  double zeta = 0.0;
  double L = 1.0;

  double radius(double t) const { return zeta * t + L; }
  double operator()(double t, const Vec3& x) const {
    if (!eta || t < 0.0 || norm(x) > radius(t)) return 0.0;
    return eta(t, x);
  }
};

struct QuadratureParams {
  double tol = 1e-10;
  int sphere_n = 24;
  int max_depth = 15;
};

struct OracleValue {
  double value = 0.0;
  double error = 0.0;  ///< absolute quadrature error estimate
};

/// Retarded integral over shells r = |x - z| (retarded time t - r exact per
/// shell), adaptive Gauss-Kronrod in r with the support kinks as breakpoints,
/// product sphere rule on the part of each shell inside the envelope.
OracleValue retarded_solution(const SourceFn& eta, double t, const Vec3& x, const QuadratureParams& qp = {});

/// Kirchhoff formula for data psi0, psi1 supported in |z| <= data_radius.
/// Exactly zero once t > |x| + data_radius.
double kirchhoff_homogeneous(const std::function<double(const Vec3&)>& psi0,
                             const std::function<Vec3(const Vec3&)>& grad_psi0,
                             const std::function<double(const Vec3&)>& psi1, double data_radius, double t,
                             const Vec3& x, int sphere_n = 32);

/// Spherical-wave reduction for radial data psi0 = phi(|x|), psi1 = 0:
/// psi(t, r) = [(r+t) phi(r+t) + (r-t) phi(|r-t|)] / (2r), and phi(t) + t phi'(t) at r = 0.
double radial_dalembert(const std::function<double(double)>& phi, const std::function<double(double)>& dphi, double t,
                        double r);

struct GSCheck {
  double lhs = 0.0;
  double rhs = 0.0;
  double diff = 0.0;      ///< |lhs - rhs|
  double relative = 0.0;  ///< diff / |lhs|
};

/// lhs = int_{|y-z|<=s} Phi(s - |y-z|, |z|) Psi(|y-z|) dz (3-D quadrature in
/// shells about y), rhs = (2 pi/|y|) int_0^s (s-tau) Psi(s-tau)
/// int_{|s-|y|-tau|}^{s+|y|-tau} Phi(tau, lambda) lambda d lambda d tau.
GSCheck gs_reduction_check(const std::function<double(double, double)>& Phi, const std::function<double(double)>& Psi,
                           const Vec3& y, double s, double tol = 1e-12);

/// box_h[t^-2 psi(x/t)] - t^-4 (L psi)(x/t) with centred second differences of
/// step h in t and each x_i. Throws ValidationError when the stencil leaves the
/// cone |x| < gamma t (margin 2h).
double self_similar_residual(const std::function<double(const Vec3&)>& psi,
                             const std::function<double(const Vec3&)>& L_psi, double t, const Vec3& x, double h,
                             double gamma);

struct LWaveTime {
  double t = 0.0;
  double sup_err = 0.0;
  double sup_ref = 0.0;
  std::size_t n_samples = 0;
  double quadrature_err_max = 0.0;
};

struct LWaveReport {
  std::vector<LWaveTime> times;
  std::vector<double> doubling_ratios;  ///< sup_err(2T)/sup_err(T)
  bool pass = false;
  SolveReport solve;
  double gamma = 0.0;
  double zeta_prime = 0.0;
};

struct LWaveOptions {
  double zeta_prime = 0.5;  ///< support radius of eta_inf
  double amplitude = 1.0;
  double gamma = 0.75;
  int cells = 32;           ///< solve spacing gamma / cells
  std::vector<double> times{2.0, 4.0, 8.0, 16.0};
  int samples = 24;
  QuadratureParams quad{1e-9, 16, 12};
};

/// eta_inf = amplitude * L[(zeta'^2 - |q|^2)^4_+] (closed form, C^1, supported
/// in |q| <= zeta'), source eta(t,x) = (1+t)^-4 eta_inf(x/(1+t)). Compares
/// t^2 psi(t,x) (retarded quadrature) with psi_inf(x/t) from the Dirichlet
/// solve at sample points |x| <= 0.8 gamma t.
LWaveReport lwave_check(const LWaveOptions& opt);

/// Closed-form profiles used above.
double lwave_psi_star(const Vec3& q, double zeta_prime);
double lwave_eta_inf(const Vec3& q, double zeta_prime);

}  // namespace rvm
