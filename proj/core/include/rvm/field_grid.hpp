// Uniform periodic Cartesian grid with Yee staggering.
//
// Nodes sit at x_i = -extent + i*dx, i = 0..cells-1, dx = 2*extent/cells, so the
// origin is node cells/2. Component offsets in units of dx:
//   Ex (1/2,0,0)   Ey (0,1/2,0)   Ez (0,0,1/2)      (edges; also currents)
//   Bx (0,1/2,1/2) By (1/2,0,1/2) Bz (1/2,1/2,0)    (faces)
// Charge density lives on nodes. Storage is x-fastest: i + n*(j + n*k).
#pragma once

#include <array>
#include <cstddef>
#include <vector>

#include "rvm/vec3.hpp"

namespace rvm {

struct GridGeometry {
  int cells = 0;
  double extent = 0.0;

  GridGeometry() = default;
  GridGeometry(int cells, double extent);

  double dx() const { return 2.0 * extent / cells; }
  std::size_t size() const {
    return static_cast<std::size_t>(cells) * static_cast<std::size_t>(cells) * static_cast<std::size_t>(cells);
  }
  int wrap(int i) const {
    i %= cells;
    return i < 0 ? i + cells : i;
  }
  std::size_t index(int i, int j, int k) const {
    return static_cast<std::size_t>(wrap(i)) +
           static_cast<std::size_t>(cells) *
               (static_cast<std::size_t>(wrap(j)) + static_cast<std::size_t>(cells) * static_cast<std::size_t>(wrap(k)));
  }
  Vec3 node(int i, int j, int k) const {
    const double h = dx();
    return {-extent + i * h, -extent + j * h, -extent + k * h};
  }
  /// True when x is strictly inside the open box (-extent, extent)^3.
  bool contains(const Vec3& x) const;

  friend bool operator==(const GridGeometry&, const GridGeometry&) = default;
};

/// Three edge-centred (or face-centred) component arrays.
struct StaggeredVector {
  std::vector<double> x, y, z;

  StaggeredVector() = default;
  explicit StaggeredVector(std::size_t n) : x(n, 0.0), y(n, 0.0), z(n, 0.0) {}

  std::vector<double>& operator[](std::size_t c) { return c == 0 ? x : (c == 1 ? y : z); }
  const std::vector<double>& operator[](std::size_t c) const { return c == 0 ? x : (c == 1 ? y : z); }
  std::size_t size() const { return x.size(); }
  void fill(double v);
};

inline constexpr std::array<std::array<double, 3>, 3> kEdgeOffset{{{0.5, 0.0, 0.0}, {0.0, 0.5, 0.0}, {0.0, 0.0, 0.5}}};
inline constexpr std::array<std::array<double, 3>, 3> kFaceOffset{{{0.0, 0.5, 0.5}, {0.5, 0.0, 0.5}, {0.5, 0.5, 0.0}}};

struct FieldGrid {
  GridGeometry geom;
  double time = 0.0;
  double dt = 0.0;
  StaggeredVector E;  ///< edge-centred, integer time level
  StaggeredVector B;  ///< face-centred, synchronized to `time`

  FieldGrid() = default;
  /// Zero fields. Throws ValidationError when dt violates dt <= dx/sqrt(3).
  FieldGrid(const GridGeometry& g, double dt);
};

}  // namespace rvm
