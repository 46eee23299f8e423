#include "rvm/quadrature.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <algorithm>
#include <cmath>

#include "rvm/error.hpp"

namespace rvm {

Rule1D gauss_legendre(int n, double a, double b) {
  if (n < 1) throw ValidationError("", "gauss_legendre: n must be positive");
  Rule1D r;
  r.x.resize(static_cast<std::size_t>(n));
  r.w.resize(static_cast<std::size_t>(n));
  const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double z = std::cos(M_PI * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = 0.0;
      for (int k = 1; k <= n; ++k) {
        const double p2 = p1;
        p1 = p0;
        p0 = ((2.0 * k - 1.0) * z * p1 - (k - 1.0) * p2) / k;
      }
      dp = n * (z * p0 - p1) / (z * z - 1.0);
      const double dz = p0 / dp;
      z -= dz;
      if (std::fabs(dz) < 1e-16) break;
    }
    const double w = 2.0 / ((1.0 - z * z) * dp * dp);
    r.x[static_cast<std::size_t>(i)] = mid - half * z;
    r.x[static_cast<std::size_t>(n - 1 - i)] = mid + half * z;
    r.w[static_cast<std::size_t>(i)] = r.w[static_cast<std::size_t>(n - 1 - i)] = half * w;
  }
  return r;
}

AdaptiveResult integrate_adaptive(const std::function<double(double)>& f, double a, double b, double tol,
                                  int max_depth) {
  AdaptiveResult r;
  if (a == b) return r;
  double err = 0.0;
  r.value = boost::math::quadrature::gauss_kronrod<double, 15>::integrate(f, a, b, static_cast<unsigned>(max_depth),
                                                                          tol, &err);
  r.error = err * std::fabs(r.value);
  return r;
}

AdaptiveResult integrate_adaptive(const std::function<double(double)>& f, double a, double b,
                                  const std::vector<double>& breaks, double tol, int max_depth) {
  std::vector<double> pts{a};
  for (double c : breaks)
    if (c > a && c < b) pts.push_back(c);
  std::sort(pts.begin() + 1, pts.end());
  pts.push_back(b);
  AdaptiveResult total;
  for (std::size_t k = 0; k + 1 < pts.size(); ++k) {
    const AdaptiveResult part = integrate_adaptive(f, pts[k], pts[k + 1], tol, max_depth);
    total.value += part.value;
    total.error += part.error;
  }
  return total;
}

double sphere_cap_integral(const std::function<double(const Vec3&)>& f, const Vec3& pole, double mu_max, int n) {
  if (mu_max <= -1.0) return 0.0;
  mu_max = std::min(mu_max, 1.0);
  // orthonormal frame (e1, e2, e3 = pole)
  Vec3 e3 = pole;
  const double pn = norm(e3);
  e3 = pn > 0.0 ? e3 / pn : Vec3{0.0, 0.0, 1.0};
  const Vec3 trial = std::fabs(e3.x) < 0.9 ? Vec3{1.0, 0.0, 0.0} : Vec3{0.0, 1.0, 0.0};
  Vec3 e1 = cross(trial, e3);
  e1 = e1 / norm(e1);
  const Vec3 e2 = cross(e3, e1);
  const Rule1D mu = gauss_legendre(n, -1.0, mu_max);
  const int nphi = 2 * n;
  const double dphi = 2.0 * M_PI / nphi;
  double total = 0.0;
  for (std::size_t i = 0; i < mu.x.size(); ++i) {
    const double m = mu.x[i];
    const double s = std::sqrt(std::max(0.0, 1.0 - m * m));
    double ring = 0.0;
    for (int k = 0; k < nphi; ++k) {
      const double ph = (k + 0.5) * dphi;
      ring += f(s * std::cos(ph) * e1 + s * std::sin(ph) * e2 + m * e3);
    }
    total += mu.w[i] * ring * dphi;
  }
  return total;
}

}  // namespace rvm
