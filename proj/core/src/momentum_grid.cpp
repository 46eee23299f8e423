#include "rvm/momentum_grid.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>

#include "rvm/error.hpp"

namespace rvm {
namespace {

constexpr char kMagic[4] = {'R', 'V', 'M', 'H'};
constexpr std::uint32_t kVersion = 1;

template <class T>
void put(std::ostream& os, const T& v) {
  os.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <class T>
T get(std::istream& is) {
  T v{};
  is.read(reinterpret_cast<char*>(&v), sizeof(T));
  if (!is) throw ArtifactError("grid function truncated");
  return v;
}

}  // namespace

Lattice Lattice::symmetric(double halfwidth, double spacing) {
  if (!(spacing > 0.0) || !(halfwidth >= 0.0)) throw ValidationError("", "lattice spacing must be positive");
  const int m = static_cast<int>(std::ceil(halfwidth / spacing - 1e-9));
  return {2 * m + 1, -m * spacing, spacing};
}

MomentumGridFunction::MomentumGridFunction(const Lattice& g, int nc, GridTag t, int sp)
    : grid(g), ncomp(nc), tag(t), species(sp), data(static_cast<std::size_t>(nc) * g.size(), 0.0) {}

double MomentumGridFunction::interpolate(const Vec3& q, int c) const {
  const double r = 1.0 / grid.spacing;
  int i0[3];
  double f[3];
  for (int d = 0; d < 3; ++d) {
    const double s = (q[d] - grid.origin) * r;
    if (s < 0.0 || s > grid.n - 1) return 0.0;
    i0[d] = std::min(static_cast<int>(std::floor(s)), grid.n - 2);
    f[d] = s - i0[d];
  }
  double v = 0.0;
  for (int m = 0; m < 8; ++m) {
    const int di = m & 1, dj = (m >> 1) & 1, dk = (m >> 2) & 1;
    const double w = (di ? f[0] : 1.0 - f[0]) * (dj ? f[1] : 1.0 - f[1]) * (dk ? f[2] : 1.0 - f[2]);
    if (w != 0.0) v += w * at(i0[0] + di, i0[1] + dj, i0[2] + dk, c);
  }
  return v;
}

Vec3 MomentumGridFunction::interpolate_vec(const Vec3& q) const {
  return {interpolate(q, 0), interpolate(q, 1), interpolate(q, 2)};
}

double MomentumGridFunction::integral(int c) const {
  const std::size_t n = grid.size();
  double s = 0.0;
  for (std::size_t m = 0; m < n; ++m) s += data[static_cast<std::size_t>(c) * n + m];
  return s * grid.spacing * grid.spacing * grid.spacing;
}

double MomentumGridFunction::max_abs(int c) const {
  const std::size_t n = grid.size();
  double m = 0.0;
  const std::size_t b = c < 0 ? 0 : static_cast<std::size_t>(c) * n;
  const std::size_t e = c < 0 ? data.size() : b + n;
  for (std::size_t k = b; k < e; ++k) m = std::max(m, std::fabs(data[k]));
  return m;
}

double MomentumGridFunction::sup_norm() const {
  const std::size_t n = grid.size();
  double m = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    double s = 0.0;
    for (int c = 0; c < ncomp; ++c) s += data[static_cast<std::size_t>(c) * n + k] * data[static_cast<std::size_t>(c) * n + k];
    m = std::max(m, s);
  }
  return std::sqrt(m);
}

void write_grid(std::ostream& os, const MomentumGridFunction& f) {
  os.write(kMagic, 4);
  put(os, kVersion);
  put(os, static_cast<std::uint32_t>(f.tag));
  put(os, static_cast<std::int32_t>(f.species));
  put(os, static_cast<std::uint32_t>(f.ncomp));
  put(os, static_cast<std::uint32_t>(f.grid.n));
  put(os, f.grid.origin);
  put(os, f.grid.spacing);
  put(os, f.time);
  os.write(reinterpret_cast<const char*>(f.data.data()), static_cast<std::streamsize>(f.data.size() * sizeof(double)));
  if (!os) throw ArtifactError("failed to write grid function");
}

void write_grid(const std::string& path, const MomentumGridFunction& f) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw ArtifactError("cannot open " + path + " for writing");
  write_grid(os, f);
}

MomentumGridFunction read_grid(std::istream& is) {
  char magic[4];
  is.read(magic, 4);
  if (!is || std::memcmp(magic, kMagic, 4) != 0) throw ArtifactError("not an RVMH grid function");
  const auto version = get<std::uint32_t>(is);
  if (version != kVersion) throw ArtifactError("unsupported RVMH version " + std::to_string(version));
  MomentumGridFunction f;
  f.tag = static_cast<GridTag>(get<std::uint32_t>(is));
  f.species = get<std::int32_t>(is);
  f.ncomp = static_cast<int>(get<std::uint32_t>(is));
  f.grid.n = static_cast<int>(get<std::uint32_t>(is));
  f.grid.origin = get<double>(is);
  f.grid.spacing = get<double>(is);
  f.time = get<double>(is);
  if (f.ncomp < 1 || f.ncomp > 16 || f.grid.n < 1 || f.grid.n > 4096) throw ArtifactError("corrupt RVMH header");
  f.data.resize(static_cast<std::size_t>(f.ncomp) * f.grid.size());
  is.read(reinterpret_cast<char*>(f.data.data()), static_cast<std::streamsize>(f.data.size() * sizeof(double)));
  if (!is) throw ArtifactError("grid function truncated");
  return f;
}

MomentumGridFunction read_grid(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw ArtifactError("missing grid function " + path);
  return read_grid(is);
}

}  // namespace rvm
