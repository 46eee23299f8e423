#include "rvm/waveoracle.hpp"

#include <algorithm>
#include <cmath>

#include "rvm/error.hpp"
#include "rvm/quadrature.hpp"

namespace rvm {
namespace {

// Largest mu = omega . xhat for which |x + r omega| <= R.
double cap_limit(double xn, double r, double R) {
  if (r == 0.0) return xn <= R ? 1.0 : -2.0;
  if (xn == 0.0) return r <= R ? 1.0 : -2.0;
  return (R * R - xn * xn - r * r) / (2.0 * r * xn);
}

}  // namespace

OracleValue retarded_solution(const SourceFn& eta, double t, const Vec3& x, const QuadratureParams& qp) {
  if (!(t > 0.0)) throw ValidationError("t", "retarded_solution needs t > 0");
  OracleValue out;
  if (!eta.eta) return out;
  const double xn = norm(x);
  const Vec3 pole = xn > 0.0 ? x / xn : Vec3{0.0, 0.0, 1.0};
  auto shell = [&](double r) -> double {
    const double tr = t - r;
    const double mu = cap_limit(xn, r, eta.radius(tr));
    if (mu <= -1.0) return 0.0;
    return r * sphere_cap_integral([&](const Vec3& w) { return eta(tr, x + r * w); }, pole, mu, qp.sphere_n);
  };
  // kinks where the shell starts or stops meeting the support
  const double z = eta.zeta, L = eta.L;
  std::vector<double> breaks{(z * t + L - xn) / (1.0 + z), (z * t + L + xn) / (1.0 + z)};
  if (z < 1.0) breaks.push_back((xn - z * t - L) / (1.0 - z));
  const AdaptiveResult r = integrate_adaptive(shell, 0.0, t, breaks, qp.tol, qp.max_depth);
  out.value = r.value / (4.0 * M_PI);
  out.error = r.error / (4.0 * M_PI);
  return out;
}

double kirchhoff_homogeneous(const std::function<double(const Vec3&)>& psi0,
                             const std::function<Vec3(const Vec3&)>& grad_psi0,
                             const std::function<double(const Vec3&)>& psi1, double data_radius, double t,
                             const Vec3& x, int sphere_n) {
  if (!(t > 0.0)) throw ValidationError("t", "kirchhoff_homogeneous needs t > 0");
  const double xn = norm(x);
  const double mu = cap_limit(xn, t, data_radius);
  if (mu <= -1.0) return 0.0;
  const Vec3 pole = xn > 0.0 ? x / xn : Vec3{0.0, 0.0, 1.0};
  const double total = sphere_cap_integral(
      [&](const Vec3& w) {
        const Vec3 z = x + t * w;
        double v = 0.0;
        if (psi0) v += psi0(z);
        if (grad_psi0) v += dot(grad_psi0(z), t * w);
        if (psi1) v += t * psi1(z);
        return v;
      },
      pole, mu, sphere_n);
  return total / (4.0 * M_PI);
}

double radial_dalembert(const std::function<double(double)>& phi, const std::function<double(double)>& dphi, double t,
                        double r) {
  if (r == 0.0) return phi(t) + t * dphi(t);
  return ((r + t) * phi(r + t) + (r - t) * phi(std::fabs(r - t))) / (2.0 * r);
}

GSCheck gs_reduction_check(const std::function<double(double, double)>& Phi, const std::function<double(double)>& Psi,
                           const Vec3& y, double s, double tol) {
  const double yn = norm(y);
  if (!(s > 0.0) || !(yn > 0.0)) throw ValidationError("", "gs_reduction_check needs s > 0 and y != 0");
  GSCheck out;
  // z = y + r omega with omega = (sqrt(1-mu^2) cos phi, ..., mu) about yhat; the
  // azimuthal integral is carried out with the trapezoid rule (integrand independent of phi)
  const int nphi = 8;
  auto mu_integrand = [&](double r, double mu) {
    const double zz = std::sqrt(std::max(0.0, yn * yn + r * r + 2.0 * r * yn * mu));
    double ring = 0.0;
    for (int k = 0; k < nphi; ++k) ring += Phi(s - r, zz);
    return ring * (2.0 * M_PI / nphi);
  };
  auto shell = [&](double r) {
    if (r == 0.0) return 0.0;
    const AdaptiveResult in =
        integrate_adaptive([&](double mu) { return mu_integrand(r, mu); }, -1.0, 1.0, tol, 15);
    return r * r * Psi(r) * in.value;
  };
  out.lhs = integrate_adaptive(shell, 0.0, s, std::vector<double>{yn}, tol, 15).value;

  auto outer = [&](double tau) {
    const double a = std::fabs(s - yn - tau), b = s + yn - tau;
    const AdaptiveResult in = integrate_adaptive([&](double l) { return Phi(tau, l) * l; }, a, b, tol, 15);
    return (s - tau) * Psi(s - tau) * in.value;
  };
  out.rhs = 2.0 * M_PI / yn * integrate_adaptive(outer, 0.0, s, std::vector<double>{s - yn}, tol, 15).value;
  out.diff = std::fabs(out.lhs - out.rhs);
  out.relative = out.lhs != 0.0 ? out.diff / std::fabs(out.lhs) : out.diff;
  return out;
}

double self_similar_residual(const std::function<double(const Vec3&)>& psi,
                             const std::function<double(const Vec3&)>& L_psi, double t, const Vec3& x, double h,
                             double gamma) {
  if (!(h > 0.0) || !(t > h)) throw ValidationError("h", "finite-difference step must be positive and below t");
  // the stencil reaches |x| + sqrt(3) h at time t - h
  if (!(norm(x) + 2.0 * h < gamma * (t - h)))
    throw ValidationError("x", "self_similar_residual: stencil leaves the cone |x| < gamma t");
  auto Phi = [&](double tt, const Vec3& xx) { return psi(xx / tt) / (tt * tt); };
  const double c = Phi(t, x);
  double box = (Phi(t + h, x) - 2.0 * c + Phi(t - h, x)) / (h * h);
  for (int i = 0; i < 3; ++i) {
    Vec3 e;
    e[i] = h;
    box -= (Phi(t, x + e) - 2.0 * c + Phi(t, x - e)) / (h * h);
  }
  return box - L_psi(x / t) / std::pow(t, 4);
}

double lwave_psi_star(const Vec3& q, double zp) {
  const double a = zp * zp - norm2(q);
  return a > 0.0 ? a * a * a * a : 0.0;
}

double lwave_eta_inf(const Vec3& q, double zp) {
  const double r = norm(q);
  const double a = zp * zp - r * r;
  if (a <= 0.0) return 0.0;
  const double u = a * a * a * a;
  const double du = -8.0 * r * a * a * a;
  const double d2u = -8.0 * a * a * a + 48.0 * r * r * a * a;
  return apply_L_radial(r, u, du, d2u);
}

LWaveReport lwave_check(const LWaveOptions& opt) {
  if (!(opt.zeta_prime < opt.gamma)) throw ValidationError("zeta_prime", "source support must lie inside gamma");
  LWaveReport rep;
  rep.gamma = opt.gamma;
  rep.zeta_prime = opt.zeta_prime;
  const double zp = opt.zeta_prime;
  const double amp = opt.amplitude;

  const double h = opt.gamma / opt.cells;
  EllipticProblem pb;
  pb.gamma = opt.gamma;
  pb.source = MomentumGridFunction(elliptic_lattice(opt.gamma, h), 1, GridTag::psi);
  const Lattice& g = pb.source.grid;
  for (int k = 0; k < g.n; ++k)
    for (int j = 0; j < g.n; ++j)
      for (int i = 0; i < g.n; ++i) pb.source.at(i, j, k) = amp * lwave_eta_inf(g.node(i, j, k), zp);
  const MomentumGridFunction psi_inf = solve_dirichlet(pb, &rep.solve);

  SourceFn eta;
  eta.zeta = zp;
  eta.L = zp;
  if (amp != 0.0)
    eta.eta = [zp, amp](double t, const Vec3& x) {
      const double s = 1.0 + t;
      return amp * lwave_eta_inf(x / s, zp) / (s * s * s * s);
    };

  // sample directions on a Fibonacci sphere with radii spread over (0, 0.8 gamma t]
  const double golden = M_PI * (3.0 - std::sqrt(5.0));
  for (double t : opt.times) {
    LWaveTime row;
    row.t = t;
    for (int m = 0; m < opt.samples; ++m) {
      const double zc = 1.0 - 2.0 * (m + 0.5) / opt.samples;
      const double rr = std::sqrt(std::max(0.0, 1.0 - zc * zc));
      const double ph = golden * m;
      const double frac = 0.8 * (m + 1.0) / opt.samples;
      const Vec3 x = (frac * opt.gamma * t) * Vec3{rr * std::cos(ph), rr * std::sin(ph), zc};
      const OracleValue v = retarded_solution(eta, t, x, opt.quad);
      const double ref = psi_inf.interpolate(x / t);
      row.sup_err = std::max(row.sup_err, std::fabs(t * t * v.value - ref));
      row.sup_ref = std::max(row.sup_ref, std::fabs(ref));
      row.quadrature_err_max = std::max(row.quadrature_err_max, t * t * v.error);
      ++row.n_samples;
    }
    rep.times.push_back(row);
  }
  bool ok = rep.times.size() >= 3;
  for (std::size_t k = 1; k < rep.times.size(); ++k) {
    const double a = rep.times[k - 1].sup_err, b = rep.times[k].sup_err;
    rep.doubling_ratios.push_back(a > 0.0 ? b / a : (b == 0.0 ? 0.0 : INFINITY));
    if (!(b < a) && !(a == 0.0 && b == 0.0)) ok = false;
  }
  rep.pass = ok;
  return rep;
}

}  // namespace rvm
