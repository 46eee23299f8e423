#include "rvm/sampling.hpp"

#include <boost/random/sobol.hpp>

#include <cmath>
#include <random>

#include "rvm/error.hpp"

namespace rvm {

double bump(double s) {
  const double a = 1.0 - s * s;
  return a > 0.0 ? a * a * a : 0.0;
}

double bump_derivative(double s) {
  const double a = 1.0 - s * s;
  return a > 0.0 ? -6.0 * s * a * a : 0.0;
}

double bump_cdf(double s) {
  if (s <= -1.0) return 0.0;
  if (s >= 1.0) return 1.0;
  const double s2 = s * s;
  const double prim = s * (1.0 - s2 + 0.6 * s2 * s2 - s2 * s2 * s2 / 7.0);
  return (prim + 16.0 / 35.0) / kBumpIntegral;
}

double bump_inverse_cdf(double u) {
  if (u <= 0.0) return -1.0;
  if (u >= 1.0) return 1.0;
  double lo = -1.0, hi = 1.0, s = 0.0;
  for (int it = 0; it < 100; ++it) {
    const double f = bump_cdf(s) - u;
    if (f > 0.0) hi = s; else lo = s;
    const double d = bump(s) / kBumpIntegral;
    double next = d > 0.0 ? s - f / d : 0.5 * (lo + hi);
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    if (std::fabs(next - s) < 1e-15) return next;
    s = next;
  }
  return s;
}

namespace {

double product_density(const Vec3& y, const Vec3& c, double h) {
  const double norm = 1.0 / (h * kBumpIntegral);
  double v = 1.0;
  for (int i = 0; i < 3; ++i) {
    v *= bump((y[i] - c[i]) / h) * norm;
    if (v == 0.0) return 0.0;
  }
  return v;
}

std::uint64_t splitmix(std::uint64_t& z) {
  z += 0x9e3779b97f4a7c15ULL;
  std::uint64_t r = z;
  r = (r ^ (r >> 30)) * 0xbf58476d1ce4e5b9ULL;
  r = (r ^ (r >> 27)) * 0x94d049bb133111ebULL;
  return r ^ (r >> 31);
}

}  // namespace

double BumpProfile::density_x(const Vec3& x) const { return product_density(x, center_x, width_x); }
double BumpProfile::density_p(const Vec3& p) const { return product_density(p, center_p, width_p); }

double BumpProfile::support_x() const {
  Vec3 far;
  for (int i = 0; i < 3; ++i) far[i] = std::fabs(center_x[i]) + width_x;
  return norm(far);
}

double BumpProfile::support_p() const {
  Vec3 far;
  for (int i = 0; i < 3; ++i) far[i] = std::fabs(center_p[i]) + width_p;
  return norm(far);
}

BumpProfile BumpProfile::mirrored() const {
  BumpProfile m = *this;
  m.center_x = -center_x;
  m.center_p = -center_p;
  return m;
}

std::vector<Particle> sample_particles(const BumpProfile& prof, int species, const SamplingOptions& opt) {
  if (opt.count < 1) throw ValidationError("count", "need at least one particle");
  if (!(prof.mass >= 0.0)) throw ValidationError("mass", "profile amplitude must be nonnegative");
  if (!(prof.width_x > 0.0) || !(prof.width_p > 0.0)) throw ValidationError("width", "bump widths must be positive");
  const std::size_t n = opt.count;
  const double w = prof.mass / static_cast<double>(n);
  std::vector<Particle> out;
  out.reserve(n);
  if (n == 1) {
    out.push_back({prof.center_x, prof.center_p, prof.mass, species, opt.tracers > 0});
    return out;
  }

  std::uint64_t state = opt.seed * 0x2545f4914f6cdd1dULL + static_cast<std::uint64_t>(species) + 1;
  std::uint64_t shift[6];
  for (auto& s : shift) s = splitmix(state);
  boost::random::sobol qrng(6);
  std::mt19937_64 prng(splitmix(state));
  std::uniform_real_distribution<double> uni(0.0, 1.0);

  auto next_point = [&](double u[6]) {
    if (opt.method == SamplingMethod::sobol) {
      for (int d = 0; d < 6; ++d) {
        const std::uint64_t bits = static_cast<std::uint64_t>(qrng()) ^ shift[d];
        u[d] = (static_cast<double>(bits >> 11) + 0.5) * 0x1.0p-53;
      }
    } else {
      for (int d = 0; d < 6; ++d) u[d] = uni(prng);
    }
  };

  double u[6];
  while (out.size() < n) {
    next_point(u);
    Particle a;
    a.weight = w;
    a.species = species;
    for (int i = 0; i < 3; ++i) {
      a.p[i] = prof.center_p[i] + prof.width_p * bump_inverse_cdf(u[i]);
      a.x[i] = prof.center_x[i] + prof.width_x * bump_inverse_cdf(u[3 + i]);
    }
    out.push_back(a);
    if (opt.antithetic && out.size() < n) {
      Particle b = a;
      b.x = 2.0 * prof.center_x - a.x;
      b.p = 2.0 * prof.center_p - a.p;
      out.push_back(b);
    }
  }
  for (std::size_t k = 0; k < std::min(opt.tracers, n); ++k) out[k].tracer = true;
  return out;
}

std::vector<Particle> mirror_particles(const std::vector<Particle>& src, int species) {
  std::vector<Particle> out(src);
  for (auto& q : out) {
    q.x = -q.x;
    q.p = -q.p;
    q.species = species;
  }
  return out;
}

}  // namespace rvm
