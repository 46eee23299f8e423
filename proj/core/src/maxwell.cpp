#include "rvm/maxwell.hpp"

#include <fftw3.h>

#include <algorithm>
#include <bit>
#include <cmath>
#include <complex>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <iomanip>
#include <sstream>

#include "rvm/error.hpp"

namespace rvm {
namespace {

std::string fmt_g(double v) {
  std::ostringstream os;
  os << std::setprecision(6) << v;
  return os.str();
}

static_assert(std::endian::native == std::endian::little, "snapshot io assumes a little-endian host");

constexpr char kSnapshotMagic[4] = {'R', 'V', 'M', 'F'};
constexpr std::uint32_t kSnapshotVersion = 1;

void check_size(const std::vector<double>& v, const GridGeometry& g, const char* what) {
  if (v.size() != g.size())
    throw ValidationError("", std::string(what) + ": array has " + std::to_string(v.size()) + " entries, grid has " +
                                  std::to_string(g.size()));
}

// Discrete -lap phi = rho on the periodic lattice, solved with the exact
// symbol of the 7-point Laplacian (div of forward gradient).
std::vector<double> solve_poisson(const std::vector<double>& rho, const GridGeometry& g) {
  const int n = g.cells;
  const int nh = n / 2 + 1;
  const std::size_t ncomplex = static_cast<std::size_t>(n) * n * nh;
  std::vector<double> in(rho);
  std::vector<std::complex<double>> spec(ncomplex);
  auto* out = reinterpret_cast<fftw_complex*>(spec.data());
  // FFTW is row-major with the last index fastest; our x-fastest layout is (k, j, i).
  fftw_plan fwd = fftw_plan_dft_r2c_3d(n, n, n, in.data(), out, FFTW_ESTIMATE);
  fftw_execute(fwd);
  fftw_destroy_plan(fwd);

  const double h2 = g.dx() * g.dx();
  std::vector<double> s2(static_cast<std::size_t>(n));
  for (int m = 0; m < n; ++m) {
    const double s = std::sin(M_PI * m / n);
    s2[static_cast<std::size_t>(m)] = 4.0 * s * s / h2;
  }
  for (int k = 0; k < n; ++k)
    for (int j = 0; j < n; ++j)
      for (int i = 0; i < nh; ++i) {
        const std::size_t idx = static_cast<std::size_t>(i) + static_cast<std::size_t>(nh) * (j + static_cast<std::size_t>(n) * k);
        const double symbol = s2[i] + s2[j] + s2[k];
        spec[idx] = symbol > 0.0 ? spec[idx] / symbol : 0.0;
      }

  std::vector<double> phi(g.size());
  fftw_plan bwd = fftw_plan_dft_c2r_3d(n, n, n, out, phi.data(), FFTW_ESTIMATE);
  fftw_execute(bwd);
  fftw_destroy_plan(bwd);
  const double norm = 1.0 / static_cast<double>(g.size());
  for (double& v : phi) v *= norm;
  return phi;
}

// Node-centred average of edge and face fields.
Vec3 edge_at_node(const StaggeredVector& e, const GridGeometry& g, int i, int j, int k) {
  return {0.5 * (e.x[g.index(i, j, k)] + e.x[g.index(i - 1, j, k)]),
          0.5 * (e.y[g.index(i, j, k)] + e.y[g.index(i, j - 1, k)]),
          0.5 * (e.z[g.index(i, j, k)] + e.z[g.index(i, j, k - 1)])};
}

Vec3 face_at_node(const StaggeredVector& b, const GridGeometry& g, int i, int j, int k) {
  return {0.25 * (b.x[g.index(i, j, k)] + b.x[g.index(i, j - 1, k)] + b.x[g.index(i, j, k - 1)] +
                  b.x[g.index(i, j - 1, k - 1)]),
          0.25 * (b.y[g.index(i, j, k)] + b.y[g.index(i - 1, j, k)] + b.y[g.index(i, j, k - 1)] +
                  b.y[g.index(i - 1, j, k - 1)]),
          0.25 * (b.z[g.index(i, j, k)] + b.z[g.index(i - 1, j, k)] + b.z[g.index(i, j - 1, k)] +
                  b.z[g.index(i - 1, j - 1, k)])};
}

template <class T>
void put(std::ostream& os, const T& v) {
  os.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <class T>
T get(std::istream& is) {
  T v{};
  is.read(reinterpret_cast<char*>(&v), sizeof(T));
  if (!is) throw ArtifactError("snapshot truncated");
  return v;
}

}  // namespace

StaggeredVector curl_edges(const StaggeredVector& e, const GridGeometry& g) {
  const int n = g.cells;
  const double r = 1.0 / g.dx();
  StaggeredVector c(g.size());
  for (int k = 0; k < n; ++k)
    for (int j = 0; j < n; ++j)
      for (int i = 0; i < n; ++i) {
        const std::size_t id = g.index(i, j, k);
        c.x[id] = r * (e.z[g.index(i, j + 1, k)] - e.z[id] - e.y[g.index(i, j, k + 1)] + e.y[id]);
        c.y[id] = r * (e.x[g.index(i, j, k + 1)] - e.x[id] - e.z[g.index(i + 1, j, k)] + e.z[id]);
        c.z[id] = r * (e.y[g.index(i + 1, j, k)] - e.y[id] - e.x[g.index(i, j + 1, k)] + e.x[id]);
      }
  return c;
}

StaggeredVector curl_faces(const StaggeredVector& b, const GridGeometry& g) {
  const int n = g.cells;
  const double r = 1.0 / g.dx();
  StaggeredVector c(g.size());
  for (int k = 0; k < n; ++k)
    for (int j = 0; j < n; ++j)
      for (int i = 0; i < n; ++i) {
        const std::size_t id = g.index(i, j, k);
        c.x[id] = r * (b.z[id] - b.z[g.index(i, j - 1, k)] - b.y[id] + b.y[g.index(i, j, k - 1)]);
        c.y[id] = r * (b.x[id] - b.x[g.index(i, j, k - 1)] - b.z[id] + b.z[g.index(i - 1, j, k)]);
        c.z[id] = r * (b.y[id] - b.y[g.index(i - 1, j, k)] - b.x[id] + b.x[g.index(i, j - 1, k)]);
      }
  return c;
}

std::vector<double> divergence_edges(const StaggeredVector& e, const GridGeometry& g) {
  const int n = g.cells;
  const double r = 1.0 / g.dx();
  std::vector<double> d(g.size());
  for (int k = 0; k < n; ++k)
    for (int j = 0; j < n; ++j)
      for (int i = 0; i < n; ++i) {
        const std::size_t id = g.index(i, j, k);
        d[id] = r * (e.x[id] - e.x[g.index(i - 1, j, k)] + e.y[id] - e.y[g.index(i, j - 1, k)] + e.z[id] -
                     e.z[g.index(i, j, k - 1)]);
      }
  return d;
}

std::vector<double> divergence_faces(const StaggeredVector& b, const GridGeometry& g) {
  const int n = g.cells;
  const double r = 1.0 / g.dx();
  std::vector<double> d(g.size());
  for (int k = 0; k < n; ++k)
    for (int j = 0; j < n; ++j)
      for (int i = 0; i < n; ++i) {
        const std::size_t id = g.index(i, j, k);
        d[id] = r * (b.x[g.index(i + 1, j, k)] - b.x[id] + b.y[g.index(i, j + 1, k)] - b.y[id] +
                     b.z[g.index(i, j, k + 1)] - b.z[id]);
      }
  return d;
}

FieldGrid init_fields(const std::vector<double>& rho0, const StaggeredVector* vector_potential,
                      const GridGeometry& geom, double dt, double neutrality_tol, double charge_scale) {
  FieldGrid grid(geom, dt);
  check_size(rho0, geom, "init_fields rho0");
  const double cell = std::pow(geom.dx(), 3);
  double net = 0.0, total = 0.0;
  for (double r : rho0) {
    net += r;
    total += std::fabs(r);
  }
  net *= cell;
  total *= cell;
  const double scale = charge_scale > 0.0 ? charge_scale : total;
  if (std::fabs(net) > neutrality_tol * std::max(scale, 1e-300) && std::fabs(net) > 1e-300)
    throw NeutralityError(net, "initial charge is not neutral: net charge " + fmt_g(net) + " against total |charge| " + fmt_g(scale));

  if (total > 0.0) {
    const std::vector<double> phi = solve_poisson(rho0, geom);
    const int n = geom.cells;
    const double r = 1.0 / geom.dx();
    for (int k = 0; k < n; ++k)
      for (int j = 0; j < n; ++j)
        for (int i = 0; i < n; ++i) {
          const std::size_t id = geom.index(i, j, k);
          grid.E.x[id] = -r * (phi[geom.index(i + 1, j, k)] - phi[id]);
          grid.E.y[id] = -r * (phi[geom.index(i, j + 1, k)] - phi[id]);
          grid.E.z[id] = -r * (phi[geom.index(i, j, k + 1)] - phi[id]);
        }
  }
  if (vector_potential) {
    check_size(vector_potential->x, geom, "init_fields vector potential");
    grid.B = curl_edges(*vector_potential, geom);
  }
  return grid;
}

void step_fields(FieldGrid& grid, const StaggeredVector& current) {
  const GridGeometry& g = grid.geom;
  for (int c = 0; c < 3; ++c) check_size(current[c], g, "step_fields current");
  const double h = 0.5 * grid.dt;

  StaggeredVector ce = curl_edges(grid.E, g);
  for (int c = 0; c < 3; ++c) {
    auto& b = grid.B[c];
    const auto& cc = ce[c];
    for (std::size_t n = 0; n < b.size(); ++n) b[n] -= h * cc[n];
  }
  const StaggeredVector cb = curl_faces(grid.B, g);
  for (int c = 0; c < 3; ++c) {
    auto& e = grid.E[c];
    const auto& cc = cb[c];
    const auto& jj = current[c];
    for (std::size_t n = 0; n < e.size(); ++n) e[n] += grid.dt * (cc[n] - jj[n]);
  }
  ce = curl_edges(grid.E, g);
  for (int c = 0; c < 3; ++c) {
    auto& b = grid.B[c];
    const auto& cc = ce[c];
    for (std::size_t n = 0; n < b.size(); ++n) b[n] -= h * cc[n];
  }
  grid.time += grid.dt;
}

namespace {

double trilinear(const std::vector<double>& a, const GridGeometry& g, const Vec3& x, const std::array<double, 3>& off) {
  const double r = 1.0 / g.dx();
  int i0[3];
  double w[3];
  for (int d = 0; d < 3; ++d) {
    const double s = (x[d] + g.extent) * r - off[d];
    const double fl = std::floor(s);
    i0[d] = static_cast<int>(fl);
    w[d] = s - fl;
  }
  double v = 0.0;
  for (int c = 0; c < 8; ++c) {
    const int di = c & 1, dj = (c >> 1) & 1, dk = (c >> 2) & 1;
    const double wt = (di ? w[0] : 1.0 - w[0]) * (dj ? w[1] : 1.0 - w[1]) * (dk ? w[2] : 1.0 - w[2]);
    v += wt * a[g.index(i0[0] + di, i0[1] + dj, i0[2] + dk)];
  }
  return v;
}

}  // namespace

FieldSample sample_fields(const FieldGrid& grid, const Vec3& x) {
  const GridGeometry& g = grid.geom;
  if (!g.contains(x)) {
    std::ostringstream os;
    os << "sample_fields: position " << x << " outside the box of half-width " << g.extent;
    throw DomainError(os.str());
  }
  FieldSample s;
  for (int c = 0; c < 3; ++c) {
    s.E[c] = trilinear(grid.E[c], g, x, kEdgeOffset[c]);
    s.B[c] = trilinear(grid.B[c], g, x, kFaceOffset[c]);
  }
  return s;
}

double field_energy(const FieldGrid& grid) {
  const StaggeredVector ce = curl_edges(grid.E, grid.geom);
  const double q = 0.25 * grid.dt * grid.dt;
  double w = 0.0;
  for (int c = 0; c < 3; ++c)
    for (std::size_t n = 0; n < grid.E.size(); ++n)
      w += grid.E[c][n] * grid.E[c][n] + grid.B[c][n] * grid.B[c][n] - q * ce[c][n] * ce[c][n];
  return 0.5 * w * std::pow(grid.geom.dx(), 3);
}

FieldDiagnostics field_diagnostics(const FieldGrid& grid, const std::vector<double>& rho, const SupportParams& params) {
  const GridGeometry& g = grid.geom;
  const int n = g.cells;
  const double h = g.dx();
  FieldDiagnostics d;
  d.time = grid.time;
  d.energy = field_energy(grid);

  double radius = params.gamma * grid.time;
  if (radius < h) {
    d.degenerate_cone = true;
    radius = std::sqrt(3.0) * h;
  }
  d.cone_radius = radius;
  const double r2 = radius * radius * (1.0 + 1e-12);

  for (int k = 0; k < n; ++k)
    for (int j = 0; j < n; ++j)
      for (int i = 0; i < n; ++i) {
        const Vec3 e = edge_at_node(grid.E, g, i, j, k);
        const Vec3 b = face_at_node(grid.B, g, i, j, k);
        const double en = norm(e), bn = norm(b);
        d.supE = std::max(d.supE, en);
        d.supB = std::max(d.supB, bn);
        if (norm2(g.node(i, j, k)) > r2) continue;
        d.supE_cone = std::max(d.supE_cone, en);
        d.supB_cone = std::max(d.supB_cone, bn);
        // forward first differences toward neighbours that are also in the cone
        for (int dir = 0; dir < 3; ++dir) {
          const int ii = i + (dir == 0), jj = j + (dir == 1), kk = k + (dir == 2);
          if (norm2(g.node(ii, jj, kk)) > r2) continue;
          const Vec3 e2 = edge_at_node(grid.E, g, ii, jj, kk);
          const Vec3 b2 = face_at_node(grid.B, g, ii, jj, kk);
          d.supDE_cone = std::max(d.supDE_cone, max_abs(e2 - e) / h);
          d.supDB_cone = std::max(d.supDB_cone, max_abs(b2 - b) / h);
        }
      }

  const std::vector<double> de = divergence_edges(grid.E, g);
  if (!rho.empty()) {
    check_size(rho, g, "field_diagnostics rho");
    for (std::size_t m = 0; m < de.size(); ++m) d.divE_residual = std::max(d.divE_residual, std::fabs(de[m] - rho[m]));
  } else {
    for (double v : de) d.divE_residual = std::max(d.divE_residual, std::fabs(v));
  }
  for (double v : divergence_faces(grid.B, g)) d.divB_residual = std::max(d.divB_residual, std::fabs(v));
  return d;
}

std::string diagnostics_csv_header() {
  return "time,supE_cone,supB_cone,supE,supB,divE_res,divB_res,energy,supDE_cone,supDB_cone";
}

std::string to_csv_row(const FieldDiagnostics& d) {
  std::ostringstream os;
  os << std::setprecision(17) << d.time << ',' << d.supE_cone << ',' << d.supB_cone << ',' << d.supE << ','
     << d.supB << ',' << d.divE_residual << ',' << d.divB_residual << ',' << d.energy << ',' << d.supDE_cone << ','
     << d.supDB_cone;
  return os.str();
}

void write_snapshot(std::ostream& os, const FieldGrid& grid) {
  os.write(kSnapshotMagic, 4);
  put(os, kSnapshotVersion);
  put(os, static_cast<std::uint32_t>(grid.geom.cells));
  put(os, grid.geom.extent);
  put(os, grid.time);
  put(os, grid.dt);
  for (const StaggeredVector* v : {&grid.E, &grid.B})
    for (int c = 0; c < 3; ++c)
      os.write(reinterpret_cast<const char*>((*v)[c].data()), static_cast<std::streamsize>((*v)[c].size() * sizeof(double)));
  if (!os) throw ArtifactError("failed to write field snapshot");
}

void write_snapshot(const std::string& path, const FieldGrid& grid) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw ArtifactError("cannot open " + path + " for writing");
  write_snapshot(os, grid);
}

FieldGrid read_snapshot(std::istream& is) {
  char magic[4];
  is.read(magic, 4);
  if (!is || std::memcmp(magic, kSnapshotMagic, 4) != 0) throw ArtifactError("not an RVMF snapshot");
  const auto version = get<std::uint32_t>(is);
  if (version != kSnapshotVersion) throw ArtifactError("unsupported RVMF version " + std::to_string(version));
  const auto cells = get<std::uint32_t>(is);
  const auto extent = get<double>(is);
  const auto time = get<double>(is);
  const auto dt = get<double>(is);
  FieldGrid grid;
  grid.geom = GridGeometry(static_cast<int>(cells), extent);
  grid.time = time;
  grid.dt = dt;
  grid.E = StaggeredVector(grid.geom.size());
  grid.B = StaggeredVector(grid.geom.size());
  for (StaggeredVector* v : {&grid.E, &grid.B})
    for (int c = 0; c < 3; ++c) {
      is.read(reinterpret_cast<char*>((*v)[c].data()), static_cast<std::streamsize>((*v)[c].size() * sizeof(double)));
      if (!is) throw ArtifactError("snapshot truncated");
    }
  return grid;
}

FieldGrid read_snapshot(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw ArtifactError("missing snapshot " + path);
  return read_snapshot(is);
}

ScalarWave::ScalarWave(const GridGeometry& g, double dt) : geom_(g), dt_(dt) {
  if (!(dt > 0.0) || dt > g.dx() / std::sqrt(3.0) * (1.0 + 1e-12))
    throw ValidationError("[time].dt", "violates the CFL bound dx/sqrt(3)");
  prev_.assign(g.size(), 0.0);
  cur_.assign(g.size(), 0.0);
  vel0_.assign(g.size(), 0.0);
}

void ScalarWave::set_initial(const std::vector<double>& psi0, const std::vector<double>& psi1) {
  check_size(psi0, geom_, "ScalarWave psi0");
  check_size(psi1, geom_, "ScalarWave psi1");
  cur_ = psi0;
  vel0_ = psi1;
  started_ = false;
  time_ = 0.0;
}

std::vector<double> ScalarWave::laplacian(const std::vector<double>& u) const {
  const int n = geom_.cells;
  const double r = 1.0 / (geom_.dx() * geom_.dx());
  std::vector<double> l(u.size());
  for (int k = 0; k < n; ++k)
    for (int j = 0; j < n; ++j)
      for (int i = 0; i < n; ++i) {
        const std::size_t id = geom_.index(i, j, k);
        l[id] = r * (u[geom_.index(i + 1, j, k)] + u[geom_.index(i - 1, j, k)] + u[geom_.index(i, j + 1, k)] +
                     u[geom_.index(i, j - 1, k)] + u[geom_.index(i, j, k + 1)] + u[geom_.index(i, j, k - 1)] -
                     6.0 * u[id]);
      }
  return l;
}

}  // namespace rvm
