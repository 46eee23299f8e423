/**
 * @file asymptotics.hpp
 * @brief Limiting objects extracted from particle data: the spatial average
 * F(t, p) = int f dx and its limit, the self-similar densities
 *   rho_inf(q) = sum_a e_a D_a(v_a^{-1} q) F_inf^a(v_a^{-1} q),  j_inf = q rho_inf,
 * their derivatives, and rescaled comparisons t^3 rho(t, x) vs rho_inf(x/t).
 */
#pragma once

#include <functional>
#include <vector>

#include "rvm/kinematics.hpp"
#include "rvm/momentum_grid.hpp"

namespace rvm {

/// Nearest-node weight histogram of the momenta of one species divided by the
/// cell volume, so integral() equals the summed weight exactly. Throws
/// ValidationError when a particle falls outside the lattice.
MomentumGridFunction spatial_average(const std::vector<Vec3>& p, const std::vector<double>& weight,
                                     const std::vector<int>& species_id, int species, const Lattice& grid,
                                     double time = 0.0);

/// Discrete convolution with the product kernel (1 - (s/w)^2)^3, |s| < w,
/// normalized on the lattice so the integral is unchanged. A width at or
/// below one spacing returns the input.
MomentumGridFunction smooth(const MomentumGridFunction& f, double width);

struct CauchyReport {
  std::vector<double> times;           ///< later time of each pair
  std::vector<double> sup_difference;  ///< sup |F(t_k) - F(t_{k-1})|
  bool exact = false;                  ///< all differences identically zero
  bool decreasing = false;
};

struct LimitF {
  MomentumGridFunction F_inf;
  CauchyReport report;
};

/// F_inf = smooth(latest snapshot). Needs at least 3 snapshots on one lattice.
LimitF limit_F(const std::vector<MomentumGridFunction>& snapshots, double kernel_width);

/// Velocity lattice covering |q| <= gamma with `cells` spacings per gamma and a
/// two-node margin.
Lattice velocity_lattice(double gamma, int cells);

/// D(v^{-1} q) F_inf(v^{-1} q) for one species (zero outside |q| < 1 in relativistic mode).
MomentumGridFunction limit_density(const MomentumGridFunction& F_inf, const SpeciesSpec& s, const Lattice& vgrid);

/// Sum over species of charge * limit_density.
MomentumGridFunction limit_rho(const std::vector<MomentumGridFunction>& F_inf, const std::vector<SpeciesSpec>& species,
                               const Lattice& vgrid);

MomentumGridFunction limit_j(const MomentumGridFunction& rho_inf);

struct LimitDerivatives {
  MomentumGridFunction grad_rho;  ///< 3 components
  MomentumGridFunction grad_j;    ///< 9 components, index 3*i + k = d_k j^i
  MomentumGridFunction E_source;  ///< -d_i rho + 3 j^i + q . grad j^i
  MomentumGridFunction B_source;  ///< (curl j)^i
};

/// Second-order central differences (zero on the outermost ring).
LimitDerivatives limit_derivatives(const MomentumGridFunction& rho_inf, const MomentumGridFunction& j_inf);

struct RescaledComparison {
  double time = 0.0;
  double sup_error = 0.0;      ///< max over nodes of |t^k rho(t,x) - rho_inf(x/t)|
  double max_reference = 0.0;  ///< max over nodes of |rho_inf(x/t)|
  double relative() const { return max_reference > 0.0 ? sup_error / max_reference : sup_error; }
};

/// Compare a node function on the space lattice with t^{-power} ref(x/t).
/// Throws ValidationError when cone_speed * t spans fewer than 4 cells.
RescaledComparison rescaled_compare(const MomentumGridFunction& space, const std::function<double(const Vec3&)>& ref,
                                    double t, double cone_speed, double power = 3.0);
RescaledComparison rescaled_compare(const MomentumGridFunction& space, const MomentumGridFunction& ref, double t,
                                    double cone_speed, double power = 3.0);

}  // namespace rvm
