/**
 * @file momentum_grid.hpp
 * @brief Scalar or vector samples on a uniform cubic lattice, used for momentum
 * histograms, velocity-space limits and node-centred space densities.
 */
#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "rvm/vec3.hpp"

namespace rvm {

/// Lattice nodes origin + i*spacing, i = 0..n-1, on each axis.
struct Lattice {
  int n = 0;
  double origin = 0.0;
  double spacing = 1.0;

  /// Odd node count with the origin on a node, covering [-halfwidth, halfwidth].
  static Lattice symmetric(double halfwidth, double spacing);

  std::size_t size() const { return static_cast<std::size_t>(n) * n * n; }
  std::size_t index(int i, int j, int k) const {
    return static_cast<std::size_t>(i) + static_cast<std::size_t>(n) * (static_cast<std::size_t>(j) + static_cast<std::size_t>(n) * k);
  }
  double coord(int i) const { return origin + i * spacing; }
  Vec3 node(int i, int j, int k) const { return {coord(i), coord(j), coord(k)}; }
  double last() const { return coord(n - 1); }
  bool operator==(const Lattice&) const = default;
};

enum class GridTag : std::uint32_t {
  F = 1,
  rho_inf = 2,
  j_inf = 3,
  E_inf = 4,
  B_inf = 5,
  psi = 6,
  space_rho = 7,
  space_density = 8,
  K_inf = 9,
};

struct MomentumGridFunction {
  Lattice grid;
  int ncomp = 1;
  GridTag tag = GridTag::F;
  int species = -1;  ///< -1 when not species-specific
  double time = 0.0;
  std::vector<double> data;  ///< component-major, x-fastest

  MomentumGridFunction() = default;
  MomentumGridFunction(const Lattice& g, int ncomp, GridTag tag, int species = -1);

  double& at(int i, int j, int k, int c = 0) { return data[static_cast<std::size_t>(c) * grid.size() + grid.index(i, j, k)]; }
  double at(int i, int j, int k, int c = 0) const {
    return data[static_cast<std::size_t>(c) * grid.size() + grid.index(i, j, k)];
  }
  /// Trilinear interpolation; zero outside the lattice.
  double interpolate(const Vec3& q, int c = 0) const;
  Vec3 interpolate_vec(const Vec3& q) const;
  /// sum of values times spacing^3.
  double integral(int c = 0) const;
  double max_abs(int c = -1) const;  ///< over one component, or all with c = -1
  /// max over nodes of the vector norm (ncomp == 3) or |value| (ncomp == 1)
  double sup_norm() const;
};

/// Binary "RVMH" layout: magic, version u32, tag u32, species i32, ncomp u32,
/// n u32, origin f64, spacing f64, time f64, then f64 values.
void write_grid(std::ostream& os, const MomentumGridFunction& f);
void write_grid(const std::string& path, const MomentumGridFunction& f);
MomentumGridFunction read_grid(std::istream& is);
MomentumGridFunction read_grid(const std::string& path);

}  // namespace rvm
