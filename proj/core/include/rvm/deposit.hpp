// Cloud-in-cell charge deposit and the Esirkepov charge-conserving current.
//
// With rho on nodes and j on edges the deposit satisfies
//   (rho^{n+1} - rho^n)/dt + div j^{n+1/2} = 0
// at every node to round-off, which keeps div E - rho constant under the
// leapfrog update.
#pragma once

#include <vector>

#include "rvm/field_grid.hpp"

namespace rvm {

/// Accumulate charges q_k at positions x_k into `rho` (node density, per unit volume).
/// Work is split over `workers` private arrays merged in fixed worker order.
void deposit_rho(const std::vector<Vec3>& x, const std::vector<double>& q, const GridGeometry& g,
                 std::vector<double>& rho, int workers = 1);

/// Esirkepov current for moves x_old -> x_new over dt. Each coordinate must
/// move less than one cell. Writes into `j` (overwritten).
void deposit_current(const std::vector<Vec3>& x_old, const std::vector<Vec3>& x_new, const std::vector<double>& q,
                     const GridGeometry& g, double dt, StaggeredVector& j, int workers = 1);

/// Per-step residual: max over nodes of |rho1 - rho0 + dt div j|.
double continuity_residual(const std::vector<double>& rho0, const std::vector<double>& rho1, const StaggeredVector& j,
                           const GridGeometry& g, double dt);

}  // namespace rvm
