#include "rvm/deposit.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "rvm/error.hpp"
#include "rvm/maxwell.hpp"
#include "rvm/parallel.hpp"

namespace rvm {
namespace {

void check_inside(const Vec3& x, const GridGeometry& g) {
  // keep the 4-node stencil away from the periodic seam
  const double lim = g.extent - 2.0 * g.dx();
  if (!(std::fabs(x.x) < lim && std::fabs(x.y) < lim && std::fabs(x.z) < lim)) {
    std::ostringstream os;
    os << "particle at " << x << " is outside the deposit region |x_i| < " << lim;
    throw ConeEscapeError(os.str());
  }
}

}  // namespace

void deposit_rho(const std::vector<Vec3>& x, const std::vector<double>& q, const GridGeometry& g,
                 std::vector<double>& rho, int workers) {
  if (x.size() != q.size()) throw ValidationError("", "deposit_rho: positions and charges differ in length");
  rho.assign(g.size(), 0.0);
  const double r = 1.0 / g.dx();
  const double vol = 1.0 / std::pow(g.dx(), 3);
  workers = std::max(1, workers);
  // extended-precision accumulation keeps the cancellation between species at round-off
  std::vector<std::vector<long double>> priv(static_cast<std::size_t>(workers));
  parallel_chunks(x.size(), workers, [&](std::size_t b, std::size_t e, int w) {
    std::vector<long double>& out = priv[static_cast<std::size_t>(w)];
    out.assign(g.size(), 0.0L);
    for (std::size_t n = b; n < e; ++n) {
      check_inside(x[n], g);
      int i0[3];
      double f[3];
      for (int d = 0; d < 3; ++d) {
        const double s = (x[n][d] + g.extent) * r;
        const double fl = std::floor(s);
        i0[d] = static_cast<int>(fl);
        f[d] = s - fl;
      }
      const double qq = q[n] * vol;
      for (int c = 0; c < 8; ++c) {
        const int di = c & 1, dj = (c >> 1) & 1, dk = (c >> 2) & 1;
        const double wt = (di ? f[0] : 1.0 - f[0]) * (dj ? f[1] : 1.0 - f[1]) * (dk ? f[2] : 1.0 - f[2]);
        out[g.index(i0[0] + di, i0[1] + dj, i0[2] + dk)] += static_cast<long double>(qq) * wt;
      }
    }
  });
  for (std::size_t m = 0; m < rho.size(); ++m) {
    long double sum = 0.0L;
    for (const auto& p : priv) sum += p[m];
    rho[m] = static_cast<double>(sum);
  }
}

void deposit_current(const std::vector<Vec3>& x_old, const std::vector<Vec3>& x_new, const std::vector<double>& q,
                     const GridGeometry& g, double dt, StaggeredVector& j, int workers) {
  if (x_old.size() != x_new.size() || x_old.size() != q.size())
    throw ValidationError("", "deposit_current: array lengths differ");
  j = StaggeredVector(g.size());
  const double r = 1.0 / g.dx();
  // j_x(i+1/2) - j_x(i-1/2) = -(q dx / (dx^3 dt)) W_x(i)
  const double coef = g.dx() / (std::pow(g.dx(), 3) * dt);
  workers = std::max(1, workers);
  struct Acc {
    std::vector<long double> x, y, z;
  };
  std::vector<Acc> priv(static_cast<std::size_t>(workers));

  parallel_chunks(x_old.size(), workers, [&](std::size_t b, std::size_t e, int w) {
    Acc& out = priv[static_cast<std::size_t>(w)];
    out.x.assign(g.size(), 0.0L);
    out.y.assign(g.size(), 0.0L);
    out.z.assign(g.size(), 0.0L);
    for (std::size_t n = b; n < e; ++n) {
      check_inside(x_old[n], g);
      check_inside(x_new[n], g);
      // 4-node window starting one node below the old cell
      int base[3];
      double S0[3][4] = {}, DS[3][4] = {};
      for (int d = 0; d < 3; ++d) {
        const double s0 = (x_old[n][d] + g.extent) * r;
        const double s1 = (x_new[n][d] + g.extent) * r;
        if (std::fabs(s1 - s0) >= 1.0)
          throw ValidationError("[time].dt", "particle moved a full cell in one step");
        const int c0 = static_cast<int>(std::floor(s0));
        base[d] = c0 - 1;
        const double f0 = s0 - c0;
        S0[d][1] = 1.0 - f0;
        S0[d][2] = f0;
        const int c1 = static_cast<int>(std::floor(s1));
        const double f1 = s1 - c1;
        double S1[4] = {};
        S1[c1 - base[d]] += 1.0 - f1;
        S1[c1 - base[d] + 1] += f1;
        for (int a = 0; a < 4; ++a) DS[d][a] = S1[a] - S0[d][a];
      }
      const double qc = q[n] * coef;
      // W_x(a,b,c) = DSx(a) (S0y S0z + DSy S0z/2 + S0y DSz/2 + DSy DSz/3), cyclic for y, z
      for (int c = 0; c < 4; ++c)
        for (int bb = 0; bb < 4; ++bb) {
          long double acc = 0.0L;
          const double wyz = S0[1][bb] * S0[2][c] + 0.5 * DS[1][bb] * S0[2][c] + 0.5 * S0[1][bb] * DS[2][c] +
                             DS[1][bb] * DS[2][c] / 3.0;
          if (wyz == 0.0) continue;
          for (int a = 0; a < 3; ++a) {
            acc -= static_cast<long double>(qc) * DS[0][a] * wyz;
            out.x[g.index(base[0] + a, base[1] + bb, base[2] + c)] += acc;
          }
        }
      for (int c = 0; c < 4; ++c)
        for (int a = 0; a < 4; ++a) {
          long double acc = 0.0L;
          const double wzx = S0[2][c] * S0[0][a] + 0.5 * DS[2][c] * S0[0][a] + 0.5 * S0[2][c] * DS[0][a] +
                             DS[2][c] * DS[0][a] / 3.0;
          if (wzx == 0.0) continue;
          for (int bb = 0; bb < 3; ++bb) {
            acc -= static_cast<long double>(qc) * DS[1][bb] * wzx;
            out.y[g.index(base[0] + a, base[1] + bb, base[2] + c)] += acc;
          }
        }
      for (int bb = 0; bb < 4; ++bb)
        for (int a = 0; a < 4; ++a) {
          long double acc = 0.0L;
          const double wxy = S0[0][a] * S0[1][bb] + 0.5 * DS[0][a] * S0[1][bb] + 0.5 * S0[0][a] * DS[1][bb] +
                             DS[0][a] * DS[1][bb] / 3.0;
          if (wxy == 0.0) continue;
          for (int c = 0; c < 3; ++c) {
            acc -= static_cast<long double>(qc) * DS[2][c] * wxy;
            out.z[g.index(base[0] + a, base[1] + bb, base[2] + c)] += acc;
          }
        }
    }
  });
  for (std::size_t m = 0; m < j.size(); ++m) {
    long double sx = 0.0L, sy = 0.0L, sz = 0.0L;
    for (const auto& p : priv) {
      sx += p.x[m];
      sy += p.y[m];
      sz += p.z[m];
    }
    j.x[m] = static_cast<double>(sx);
    j.y[m] = static_cast<double>(sy);
    j.z[m] = static_cast<double>(sz);
  }
}

double continuity_residual(const std::vector<double>& rho0, const std::vector<double>& rho1, const StaggeredVector& j,
                           const GridGeometry& g, double dt) {
  const std::vector<double> dj = divergence_edges(j, g);
  double m = 0.0;
  for (std::size_t n = 0; n < dj.size(); ++n) m = std::max(m, std::fabs(rho1[n] - rho0[n] + dt * dj[n]));
  return m;
}

}  // namespace rvm
