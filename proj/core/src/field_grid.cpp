#include "rvm/field_grid.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "rvm/error.hpp"

namespace rvm {

GridGeometry::GridGeometry(int n, double ext) : cells(n), extent(ext) {
  if (n < 4 || n % 2 != 0) throw ValidationError("[domain].cells", "must be an even integer >= 4");
  if (!(ext > 0.0)) throw ValidationError("[domain].extent", "must be positive");
}

bool GridGeometry::contains(const Vec3& x) const {
  return std::fabs(x.x) < extent && std::fabs(x.y) < extent && std::fabs(x.z) < extent;
}

void StaggeredVector::fill(double v) {
  std::fill(x.begin(), x.end(), v);
  std::fill(y.begin(), y.end(), v);
  std::fill(z.begin(), z.end(), v);
}

FieldGrid::FieldGrid(const GridGeometry& g, double step) : geom(g), dt(step), E(g.size()), B(g.size()) {
  const double bound = g.dx() / std::sqrt(3.0);
  if (!(step > 0.0) || step > bound * (1.0 + 1e-12))
    throw ValidationError("[time].dt", "dt = " + std::to_string(step) + " violates the CFL bound dx/sqrt(3) = " +
                                           std::to_string(bound));
}

}  // namespace rvm
