#include "rvm/limitfields.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "rvm/error.hpp"

namespace rvm {

double apply_L_radial(double r, double u, double du, double d2u, LVariant variant) {
  const double du_over_r = r > 0.0 ? du / r : d2u;
  double v = (r * r - 1.0) * d2u - 2.0 * du_over_r;
  if (variant != LVariant::principal_only) v += 6.0 * r * du;
  if (variant == LVariant::full) v += 6.0 * u;
  return v;
}

Lattice elliptic_lattice(double gamma, double h) { return Lattice::symmetric(gamma + h, h); }

namespace {

struct Stencil {
  const Lattice& g;
  LVariant variant;
  double h;
  double r2;   // 1/h^2
  double r4;   // 1/(4h^2)
  double r1;   // 1/(2h)

  Stencil(const Lattice& lat, LVariant v)
      : g(lat), variant(v), h(lat.spacing), r2(1.0 / (h * h)), r4(0.25 / (h * h)), r1(0.5 / h) {}

  // strides in the flat index
  std::ptrdiff_t sx() const { return 1; }
  std::ptrdiff_t sy() const { return g.n; }
  std::ptrdiff_t sz() const { return static_cast<std::ptrdiff_t>(g.n) * g.n; }

  double diagonal(const Vec3& q) const {
    double d = 2.0 * (3.0 - norm2(q)) * r2;  // -2 (q_i^2 - 1)/h^2 summed over i
    if (variant == LVariant::full) d += 6.0;
    return d;
  }

  double apply(const double* u, std::size_t id, const Vec3& q) const {
    const std::ptrdiff_t s[3] = {sx(), sy(), sz()};
    const double* c = u + id;
    double v = 0.0;
    for (int i = 0; i < 3; ++i) {
      const double up = c[s[i]], um = c[-s[i]];
      v += (q[i] * q[i] - 1.0) * (up - 2.0 * c[0] + um) * r2;
      if (variant != LVariant::principal_only) v += 6.0 * q[i] * (up - um) * r1;
    }
    for (int i = 0; i < 3; ++i)
      for (int j = i + 1; j < 3; ++j) {
        const double mixed = c[s[i] + s[j]] - c[s[i] - s[j]] - c[-s[i] + s[j]] + c[-s[i] - s[j]];
        v += 2.0 * q[i] * q[j] * mixed * r4;
      }
    if (variant == LVariant::full) v += 6.0 * c[0];
    return v;
  }
};

double h_of(const Lattice& g) { return g.spacing; }

bool on_ring(const Lattice& g, int i, int j, int k) {
  return i == 0 || j == 0 || k == 0 || i == g.n - 1 || j == g.n - 1 || k == g.n - 1;
}

}  // namespace

MomentumGridFunction apply_L(const MomentumGridFunction& u, LVariant variant) {
  if (u.ncomp != 1) throw ValidationError("", "apply_L expects a scalar grid function");
  MomentumGridFunction out(u.grid, 1, u.tag, u.species);
  out.time = u.time;
  const Stencil st(u.grid, variant);
  const int n = u.grid.n;
  for (int k = 1; k < n - 1; ++k)
    for (int j = 1; j < n - 1; ++j)
      for (int i = 1; i < n - 1; ++i) {
        const std::size_t id = u.grid.index(i, j, k);
        out.data[id] = st.apply(u.data.data(), id, u.grid.node(i, j, k));
      }
  return out;
}

MomentumGridFunction solve_dirichlet(const EllipticProblem& pb, SolveReport* report) {
  const MomentumGridFunction& src = pb.source;
  if (src.ncomp != 1) throw ValidationError("", "solve_dirichlet expects a scalar source");
  if (!(1.0 - pb.gamma * pb.gamma > 0.01))
    throw ValidationError("gamma", "ellipticity margin 1 - gamma^2 = " + std::to_string(1.0 - pb.gamma * pb.gamma) +
                                       " is not above 0.01");
  const Lattice& g = src.grid;
  if (g.last() < pb.gamma)
    throw ValidationError("", "solve_dirichlet: lattice does not cover the ball |q| < gamma");
  const Stencil st(g, pb.variant);
  const int n = g.n;

  std::vector<std::size_t> ids;
  std::vector<Vec3> qs;
  for (int k = 0; k < n; ++k)
    for (int j = 0; j < n; ++j)
      for (int i = 0; i < n; ++i) {
        if (on_ring(g, i, j, k)) continue;
        const Vec3 q = g.node(i, j, k);
        if (norm(q) < pb.gamma) {
          ids.push_back(g.index(i, j, k));
          qs.push_back(q);
        }
      }
  const std::size_t m = ids.size();
  MomentumGridFunction u(g, 1, src.tag, src.species);
  u.time = src.time;
  SolveReport rep;
  rep.unknowns = m;

  // Exterior stencil neighbours are ghost values extrapolated along the stencil
  // direction through the zero on the sphere |q| = gamma: quadratic through the
  // opposite node when it is an unknown, linear otherwise.
  std::vector<char> inside(g.size(), 0);
  for (std::size_t a = 0; a < m; ++a) inside[ids[a]] = 1;
  std::vector<double> extra(m, 0.0);
  struct Coupling {
    std::size_t row;
    std::size_t node;
    double w;
  };
  std::vector<Coupling> couple;
  const std::ptrdiff_t stride[3] = {st.sx(), st.sy(), st.sz()};
  for (std::size_t a = 0; a < m; ++a) {
    const Vec3& q = qs[a];
    auto ghost = [&](std::ptrdiff_t off, const Vec3& dq, double w) {
      if (inside[ids[a] + off]) return;
      // |q + theta dq| = gamma with theta in (0, 1]
      const double A = norm2(dq), B = dot(q, dq), C = norm2(q) - pb.gamma * pb.gamma;
      const double theta = std::max((-B + std::sqrt(B * B - A * C)) / A, 1e-6);
      if (inside[ids[a] - off]) {
        // quadratic through the opposite node, the centre and the zero at theta
        extra[a] -= w * 2.0 * (1.0 - theta) / theta;
        couple.push_back({a, ids[a] - off, w * (1.0 - theta) / (1.0 + theta)});
      } else {
        extra[a] += w * (1.0 - 1.0 / theta);
      }
    };
    for (int i = 0; i < 3; ++i) {
      Vec3 e;
      e[i] = h_of(g);
      const double w2 = (q[i] * q[i] - 1.0) * st.r2;
      const double w1 = pb.variant != LVariant::principal_only ? 6.0 * q[i] * st.r1 : 0.0;
      ghost(stride[i], e, w2 + w1);
      ghost(-stride[i], -e, w2 - w1);
    }
    for (int i = 0; i < 3; ++i)
      for (int j = i + 1; j < 3; ++j)
        for (int si = -1; si <= 1; si += 2)
          for (int sj = -1; sj <= 1; sj += 2) {
            Vec3 e;
            e[i] = si * h_of(g);
            e[j] = sj * h_of(g);
            ghost(si * stride[i] + sj * stride[j], e, 2.0 * q[i] * q[j] * si * sj * st.r4);
          }
  }

  std::vector<double> b(m), dinv(m);
  double bnorm = 0.0;
  for (std::size_t a = 0; a < m; ++a) {
    b[a] = src.data[ids[a]];
    bnorm += b[a] * b[a];
    dinv[a] = 1.0 / (st.diagonal(qs[a]) + extra[a]);
  }
  bnorm = std::sqrt(bnorm);
  if (bnorm == 0.0) {
    if (report) *report = rep;
    return u;
  }

  // full-lattice scratch so the stencil can read zero exterior values
  std::vector<double> full(g.size(), 0.0);
  auto matvec = [&](const std::vector<double>& x, std::vector<double>& y) {
    for (std::size_t a = 0; a < m; ++a) full[ids[a]] = x[a];
    for (std::size_t a = 0; a < m; ++a) y[a] = st.apply(full.data(), ids[a], qs[a]) + extra[a] * x[a];
    for (const auto& c : couple) y[c.row] += c.w * full[c.node];
  };
  auto dot = [m](const std::vector<double>& x, const std::vector<double>& y) {
    double s = 0.0;
    for (std::size_t a = 0; a < m; ++a) s += x[a] * y[a];
    return s;
  };

  // right-preconditioned BiCGSTAB, M = diag
  std::vector<double> x(m, 0.0), r = b, rhat = b, p(m, 0.0), v(m, 0.0), s(m), t(m), ph(m), sh(m);
  double rho = 1.0, alpha = 1.0, omega = 1.0;
  double rel = 1.0;
  rep.history.push_back(rel);
  int it = 0;
  for (; it < pb.max_iterations && rel > pb.tol; ++it) {
    const double rho_new = dot(rhat, r);
    if (rho_new == 0.0 || omega == 0.0) {
      // breakdown: restart from the current iterate
      matvec(x, t);
      for (std::size_t a = 0; a < m; ++a) r[a] = b[a] - t[a];
      rhat = r;
      std::fill(p.begin(), p.end(), 0.0);
      std::fill(v.begin(), v.end(), 0.0);
      rho = alpha = omega = 1.0;
      continue;
    }
    const double beta = (rho_new / rho) * (alpha / omega);
    rho = rho_new;
    for (std::size_t a = 0; a < m; ++a) p[a] = r[a] + beta * (p[a] - omega * v[a]);
    for (std::size_t a = 0; a < m; ++a) ph[a] = dinv[a] * p[a];
    matvec(ph, v);
    alpha = rho / dot(rhat, v);
    for (std::size_t a = 0; a < m; ++a) s[a] = r[a] - alpha * v[a];
    for (std::size_t a = 0; a < m; ++a) sh[a] = dinv[a] * s[a];
    matvec(sh, t);
    const double tt = dot(t, t);
    omega = tt > 0.0 ? dot(t, s) / tt : 0.0;
    for (std::size_t a = 0; a < m; ++a) {
      x[a] += alpha * ph[a] + omega * sh[a];
      r[a] = s[a] - omega * t[a];
    }
    rel = std::sqrt(dot(r, r)) / bnorm;
    rep.history.push_back(rel);
  }
  // confirm with the true residual
  matvec(x, t);
  double tr = 0.0;
  for (std::size_t a = 0; a < m; ++a) tr += (b[a] - t[a]) * (b[a] - t[a]);
  rep.residual = std::sqrt(tr) / bnorm;
  rep.iterations = it;
  if (rep.residual > 10.0 * pb.tol) {
    std::ostringstream os;
    os << "solve_dirichlet: relative residual " << rep.residual << " after " << it << " iterations (target " << pb.tol
       << ")";
    throw ConvergenceError(os.str(), rep.history);
  }
  for (std::size_t a = 0; a < m; ++a) u.data[ids[a]] = x[a];
  if (report) *report = rep;
  return u;
}

MomentumGridFunction solve_components(const MomentumGridFunction& source, double gamma, GridTag tag, double tol,
                                      std::vector<SolveReport>* reports) {
  MomentumGridFunction out(source.grid, source.ncomp, tag, source.species);
  out.time = source.time;
  const std::size_t sz = source.grid.size();
  for (int c = 0; c < source.ncomp; ++c) {
    EllipticProblem pb;
    pb.gamma = gamma;
    pb.tol = tol;
    pb.source = MomentumGridFunction(source.grid, 1, tag, source.species);
    std::copy(source.data.begin() + static_cast<std::ptrdiff_t>(c * sz),
              source.data.begin() + static_cast<std::ptrdiff_t>((c + 1) * sz), pb.source.data.begin());
    SolveReport rep;
    const MomentumGridFunction u = solve_dirichlet(pb, &rep);
    std::copy(u.data.begin(), u.data.end(), out.data.begin() + static_cast<std::ptrdiff_t>(c * sz));
    if (reports) reports->push_back(rep);
  }
  return out;
}

MomentumGridFunction limit_E(const MomentumGridFunction& E_source, double gamma, double tol,
                             std::vector<SolveReport>* reports) {
  return solve_components(E_source, gamma, GridTag::E_inf, tol, reports);
}

MomentumGridFunction limit_B(const MomentumGridFunction& B_source, double gamma, double tol,
                             std::vector<SolveReport>* reports) {
  return solve_components(B_source, gamma, GridTag::B_inf, tol, reports);
}

Vec3 K_infinity(const Vec3& p, const SpeciesSpec& s, const MomentumGridFunction& E_inf, const MomentumGridFunction& B_inf,
                double gamma) {
  if (s.charge == 0.0) return {};
  const Vec3 v = velocity(p, s);
  if (!(norm(v) < gamma))
    throw DomainError("K_infinity: |v(p)| = " + std::to_string(norm(v)) + " is outside the limit-field ball");
  return s.charge * (E_inf.interpolate_vec(v) + cross(v, B_inf.interpolate_vec(v)));
}

}  // namespace rvm
