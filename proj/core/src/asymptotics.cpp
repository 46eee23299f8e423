#include "rvm/asymptotics.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "rvm/decay_fit.hpp"
#include "rvm/error.hpp"

namespace rvm {

MomentumGridFunction spatial_average(const std::vector<Vec3>& p, const std::vector<double>& weight,
                                     const std::vector<int>& species_id, int species, const Lattice& grid,
                                     double time) {
  MomentumGridFunction F(grid, 1, GridTag::F, species);
  F.time = time;
  const double r = 1.0 / grid.spacing;
  const double vol = r * r * r;
  for (std::size_t k = 0; k < p.size(); ++k) {
    if (species_id[k] != species) continue;
    int idx[3];
    for (int d = 0; d < 3; ++d) {
      const long i = std::lround((p[k][d] - grid.origin) * r);
      if (i < 0 || i >= grid.n) {
        std::ostringstream os;
        os << "spatial_average: momentum " << p[k] << " outside the histogram lattice";
        throw ValidationError("[diagnostics].histogram_halfwidth", os.str());
      }
      idx[d] = static_cast<int>(i);
    }
    F.at(idx[0], idx[1], idx[2]) += weight[k] * vol;
  }
  return F;
}

MomentumGridFunction smooth(const MomentumGridFunction& f, double width) {
  const double h = f.grid.spacing;
  if (width <= h * (1.0 + 1e-12)) return f;
  const int m = static_cast<int>(std::ceil(width / h));
  std::vector<double> k1(static_cast<std::size_t>(2 * m + 1));
  double s = 0.0;
  for (int a = -m; a <= m; ++a) {
    const double u = a * h / width;
    const double b = std::max(0.0, 1.0 - u * u);
    k1[static_cast<std::size_t>(a + m)] = b * b * b;
    s += b * b * b;
  }
  for (double& v : k1) v /= s;
  // separable passes with zero outside the lattice; mass is conserved because
  // the supports stay away from the lattice edge
  const int n = f.grid.n;
  MomentumGridFunction out = f;
  std::vector<double> line(static_cast<std::size_t>(n)), res(static_cast<std::size_t>(n));
  for (int c = 0; c < f.ncomp; ++c)
    for (int axis = 0; axis < 3; ++axis)
      for (int b = 0; b < n; ++b)
        for (int a = 0; a < n; ++a) {
          auto at = [&](int t) -> double& {
            return axis == 0 ? out.at(t, a, b, c) : axis == 1 ? out.at(a, t, b, c) : out.at(a, b, t, c);
          };
          for (int t = 0; t < n; ++t) line[static_cast<std::size_t>(t)] = at(t);
          for (int t = 0; t < n; ++t) {
            double acc = 0.0;
            for (int d = -m; d <= m; ++d) {
              const int u = t + d;
              if (u < 0 || u >= n) continue;
              acc += k1[static_cast<std::size_t>(d + m)] * line[static_cast<std::size_t>(u)];
            }
            res[static_cast<std::size_t>(t)] = acc;
          }
          for (int t = 0; t < n; ++t) at(t) = res[static_cast<std::size_t>(t)];
        }
  return out;
}

LimitF limit_F(const std::vector<MomentumGridFunction>& snaps, double kernel_width) {
  if (snaps.size() < 3) throw ValidationError("", "limit_F: need at least 3 snapshots");
  LimitF out;
  bool all_zero = true;
  for (std::size_t k = 1; k < snaps.size(); ++k) {
    if (!(snaps[k].grid == snaps[0].grid) || snaps[k].ncomp != snaps[0].ncomp)
      throw ValidationError("", "limit_F: snapshots live on different lattices");
    double d = 0.0;
    for (std::size_t m = 0; m < snaps[k].data.size(); ++m)
      d = std::max(d, std::fabs(snaps[k].data[m] - snaps[k - 1].data[m]));
    if (d != 0.0) all_zero = false;
    out.report.times.push_back(snaps[k].time);
    out.report.sup_difference.push_back(d);
  }
  out.report.exact = all_zero;
  out.report.decreasing = all_zero || strictly_decreasing(out.report.sup_difference);
  out.F_inf = smooth(snaps.back(), kernel_width);
  return out;
}

Lattice velocity_lattice(double gamma, int cells) {
  if (!(gamma > 0.0) || cells < 2) throw ValidationError("", "velocity_lattice: bad parameters");
  const double h = gamma / cells;
  return Lattice::symmetric(gamma + 2.0 * h, h);
}

MomentumGridFunction limit_density(const MomentumGridFunction& F_inf, const SpeciesSpec& s, const Lattice& vgrid) {
  MomentumGridFunction out(vgrid, 1, GridTag::rho_inf, F_inf.species);
  out.time = F_inf.time;
  const int n = vgrid.n;
  for (int k = 0; k < n; ++k)
    for (int j = 0; j < n; ++j)
      for (int i = 0; i < n; ++i) {
        const Vec3 q = vgrid.node(i, j, k);
        if (s.model == VelocityModel::relativistic && norm(q) >= kMaxSpeed) continue;
        const Vec3 p = inverse_velocity(q, s);
        const double F = F_inf.interpolate(p);
        if (F != 0.0) out.at(i, j, k) = inv_det_D(p, s) * F;
      }
  return out;
}

MomentumGridFunction limit_rho(const std::vector<MomentumGridFunction>& F_inf, const std::vector<SpeciesSpec>& species,
                               const Lattice& vgrid) {
  if (F_inf.size() != species.size()) throw ValidationError("", "limit_rho: one F_inf per species is required");
  MomentumGridFunction rho(vgrid, 1, GridTag::rho_inf, -1);
  for (std::size_t a = 0; a < species.size(); ++a) {
    if (species[a].charge == 0.0) continue;
    const MomentumGridFunction d = limit_density(F_inf[a], species[a], vgrid);
    for (std::size_t m = 0; m < rho.data.size(); ++m) rho.data[m] += species[a].charge * d.data[m];
    rho.time = F_inf[a].time;
  }
  return rho;
}

MomentumGridFunction limit_j(const MomentumGridFunction& rho) {
  MomentumGridFunction j(rho.grid, 3, GridTag::j_inf, rho.species);
  j.time = rho.time;
  const int n = rho.grid.n;
  for (int k = 0; k < n; ++k)
    for (int jj = 0; jj < n; ++jj)
      for (int i = 0; i < n; ++i) {
        const Vec3 q = rho.grid.node(i, jj, k);
        const double r = rho.at(i, jj, k);
        for (int c = 0; c < 3; ++c) j.at(i, jj, k, c) = q[c] * r;
      }
  return j;
}

LimitDerivatives limit_derivatives(const MomentumGridFunction& rho, const MomentumGridFunction& j) {
  if (!(rho.grid == j.grid) || j.ncomp != 3) throw ValidationError("", "limit_derivatives: mismatched grids");
  const Lattice& g = rho.grid;
  const int n = g.n;
  const double r = 0.5 / g.spacing;
  LimitDerivatives d;
  d.grad_rho = MomentumGridFunction(g, 3, GridTag::rho_inf, rho.species);
  d.grad_j = MomentumGridFunction(g, 9, GridTag::j_inf, rho.species);
  d.E_source = MomentumGridFunction(g, 3, GridTag::E_inf, rho.species);
  d.B_source = MomentumGridFunction(g, 3, GridTag::B_inf, rho.species);
  for (int k = 1; k < n - 1; ++k)
    for (int jj = 1; jj < n - 1; ++jj)
      for (int i = 1; i < n - 1; ++i) {
        const int ip[3] = {i + 1, jj, k}, jp[3] = {i, jj + 1, k}, kp[3] = {i, jj, k + 1};
        const int im[3] = {i - 1, jj, k}, jm[3] = {i, jj - 1, k}, km[3] = {i, jj, k - 1};
        const int* plus[3] = {ip, jp, kp};
        const int* minus[3] = {im, jm, km};
        auto diff = [&](const MomentumGridFunction& f, int c, int dir) {
          return r * (f.at(plus[dir][0], plus[dir][1], plus[dir][2], c) - f.at(minus[dir][0], minus[dir][1], minus[dir][2], c));
        };
        const Vec3 q = g.node(i, jj, k);
        double gj[3][3];
        for (int dir = 0; dir < 3; ++dir) d.grad_rho.at(i, jj, k, dir) = diff(rho, 0, dir);
        for (int c = 0; c < 3; ++c)
          for (int dir = 0; dir < 3; ++dir) {
            gj[c][dir] = diff(j, c, dir);
            d.grad_j.at(i, jj, k, 3 * c + dir) = gj[c][dir];
          }
        for (int c = 0; c < 3; ++c) {
          const double qgrad = q.x * gj[c][0] + q.y * gj[c][1] + q.z * gj[c][2];
          d.E_source.at(i, jj, k, c) = -d.grad_rho.at(i, jj, k, c) + 3.0 * j.at(i, jj, k, c) + qgrad;
        }
        d.B_source.at(i, jj, k, 0) = gj[2][1] - gj[1][2];
        d.B_source.at(i, jj, k, 1) = gj[0][2] - gj[2][0];
        d.B_source.at(i, jj, k, 2) = gj[1][0] - gj[0][1];
      }
  return d;
}

RescaledComparison rescaled_compare(const MomentumGridFunction& space, const std::function<double(const Vec3&)>& ref,
                                    double t, double cone_speed, double power) {
  if (!(t > 0.0)) throw ValidationError("", "rescaled_compare: t must be positive");
  if (cone_speed * t < 4.0 * space.grid.spacing)
    throw ValidationError("", "rescaled_compare: the cone spans fewer than 4 cells at t = " + std::to_string(t));
  RescaledComparison out;
  out.time = t;
  const double tp = std::pow(t, power);
  const int n = space.grid.n;
  for (int k = 0; k < n; ++k)
    for (int j = 0; j < n; ++j)
      for (int i = 0; i < n; ++i) {
        const Vec3 q = space.grid.node(i, j, k) / t;
        const double r = norm(q) < 1.0 ? ref(q) : 0.0;
        out.max_reference = std::max(out.max_reference, std::fabs(r));
        out.sup_error = std::max(out.sup_error, std::fabs(tp * space.at(i, j, k) - r));
      }
  return out;
}

RescaledComparison rescaled_compare(const MomentumGridFunction& space, const MomentumGridFunction& ref, double t,
                                    double cone_speed, double power) {
  return rescaled_compare(space, [&ref](const Vec3& q) { return ref.interpolate(q); }, t, cone_speed, power);
}

}  // namespace rvm
