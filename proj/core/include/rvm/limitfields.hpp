/**
 * @file limitfields.hpp
 * @brief Dirichlet problems for the self-similar limit fields on the ball |q| < gamma:
 *   L u = sum_ij (q_i q_j - delta_ij) d_ij u + 6 q . grad u + 6 u,
 *   L E_inf^i = -d_i rho_inf + 3 j_inf^i + q . grad j_inf^i,   L B_inf^i = (curl j_inf)^i,
 * with u = 0 for |q| >= gamma (zero extension). The principal part is
 * uniformly elliptic with margin 1 - gamma^2.
 */
#pragma once

#include <vector>

#include "rvm/kinematics.hpp"
#include "rvm/momentum_grid.hpp"

namespace rvm {

/// Operator variants; the reduced ones are test hooks.
enum class LVariant {
  full,
  no_zeroth_order,  ///< drop the 6u term
  principal_only,   ///< second-order part only
};

/// L applied to a radial function u(|q|) given u, u', u'' at r = |q|:
/// (r^2 - 1) u'' - 2 u'/r + 6 r u' + 6 u (with u'/r -> u''(0) at r = 0).
double apply_L_radial(double r, double u, double du, double d2u, LVariant variant = LVariant::full);

/// Lattice with spacing h covering |q| <= gamma plus one ghost ring.
Lattice elliptic_lattice(double gamma, double h);

/// Second-order central differences of L (19-point stencil) at every node
/// that is not on the outer lattice ring; zero on that ring.
MomentumGridFunction apply_L(const MomentumGridFunction& u, LVariant variant = LVariant::full);

struct SolveReport {
  int iterations = 0;
  double residual = 0.0;  ///< final relative residual
  std::vector<double> history;
  std::size_t unknowns = 0;
};

struct EllipticProblem {
  double gamma = 0.5;
  MomentumGridFunction source;  ///< scalar; its lattice is the solve lattice
  LVariant variant = LVariant::full;
  double tol = 1e-10;
  int max_iterations = 20000;
};

/// BiCGSTAB with Jacobi preconditioning on the nodes with |q| < gamma away
/// from the lattice ring; all other nodes are zero. Throws ConvergenceError
/// (carrying the residual history) at the iteration cap, ValidationError when
/// 1 - gamma^2 <= 0.01.
MomentumGridFunction solve_dirichlet(const EllipticProblem& problem, SolveReport* report = nullptr);

/// Three component solves with E_source (or any 3-component source).
MomentumGridFunction solve_components(const MomentumGridFunction& source, double gamma, GridTag tag, double tol = 1e-10,
                                      std::vector<SolveReport>* reports = nullptr);

/// E_inf from the source -d rho + 3 j + q . grad j.
MomentumGridFunction limit_E(const MomentumGridFunction& E_source, double gamma, double tol = 1e-10,
                             std::vector<SolveReport>* reports = nullptr);
/// B_inf from curl j_inf.
MomentumGridFunction limit_B(const MomentumGridFunction& B_source, double gamma, double tol = 1e-10,
                             std::vector<SolveReport>* reports = nullptr);

/// K_inf(p) = e (E_inf(v) + v x B_inf(v)) at v = v(p). DomainError when |v| >= gamma.
Vec3 K_infinity(const Vec3& p, const SpeciesSpec& s, const MomentumGridFunction& E_inf, const MomentumGridFunction& B_inf,
                double gamma);

}  // namespace rvm
