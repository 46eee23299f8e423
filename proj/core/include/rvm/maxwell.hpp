/**
 * @file maxwell.hpp
 * @brief Yee-lattice Maxwell solver with current source (c = 1):
 *   dE/dt = curl B - j,  dB/dt = -curl E,  div E = rho,  div B = 0.
 *
 * The computational box is periodic and must contain the light cone
 * |x| <= t_max + L of the initial data, so nothing ever reaches the boundary.
 */
#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "rvm/field_grid.hpp"
#include "rvm/kinematics.hpp"

namespace rvm {

struct FieldSample {
  Vec3 E;
  Vec3 B;
};

/**
 * Constraint-compatible initial fields. E0 = -grad phi with the discrete
 * Poisson problem -lap phi = rho0 solved spectrally on the periodic box (the
 * box is a zero padding of the compact support), so that the discrete
 * div E0 equals rho0 to round-off. B0 = curl A for an optional edge-centred
 * vector potential A.
 *
 * Throws NeutralityError if |sum rho0 dx^3| exceeds neutrality_tol times the
 * total absolute charge: `charge_scale` when positive (e.g. sum |e w| over
 * particles, which stays meaningful when species cancel node by node), else
 * sum |rho0| dx^3.
 */
FieldGrid init_fields(const std::vector<double>& rho0, const StaggeredVector* vector_potential,
                      const GridGeometry& geom, double dt, double neutrality_tol = 1e-9, double charge_scale = 0.0);

/// One leapfrog step: B half step, E full step with current j^{n+1/2}, B half step.
void step_fields(FieldGrid& grid, const StaggeredVector& current);

/// Trilinear interpolation of each component from its own staggered lattice.
/// Throws DomainError when x is outside the box.
FieldSample sample_fields(const FieldGrid& grid, const Vec3& x);

/// Node-centred divergence of the edge field (backward differences).
std::vector<double> divergence_edges(const StaggeredVector& e, const GridGeometry& g);
/// Cell-centred divergence of the face field (forward differences).
std::vector<double> divergence_faces(const StaggeredVector& b, const GridGeometry& g);
/// Discrete curls; curl_faces is the adjoint of curl_edges on the periodic box.
StaggeredVector curl_edges(const StaggeredVector& e, const GridGeometry& g);
StaggeredVector curl_faces(const StaggeredVector& b, const GridGeometry& g);

/// Vacuum invariant of the leapfrog scheme expressed with synchronized B:
/// 1/2 sum (|E|^2 + |B|^2 - dt^2/4 |curl E|^2) dx^3.
double field_energy(const FieldGrid& grid);

struct FieldDiagnostics {
  double time = 0.0;
  double supE_cone = 0.0;
  double supB_cone = 0.0;
  double supE = 0.0;
  double supB = 0.0;
  double divE_residual = 0.0;
  double divB_residual = 0.0;
  double energy = 0.0;
  double supDE_cone = 0.0;
  double supDB_cone = 0.0;
  double cone_radius = 0.0;
  bool degenerate_cone = false;  ///< gamma*t < dx: the cells around the origin were used
};

/// Sup norms over the cone |x| <= gamma*t (node-averaged vectors), over the full
/// grid, constraint residuals, energy, and first-difference sup norms in the cone.
FieldDiagnostics field_diagnostics(const FieldGrid& grid, const std::vector<double>& rho, const SupportParams& params);

std::string diagnostics_csv_header();
std::string to_csv_row(const FieldDiagnostics& d);

/// "RVMF" little-endian snapshot: magic, version u32, cells u32, extent f64,
/// time f64, dt f64, then Ex,Ey,Ez,Bx,By,Bz as f64 in x-fastest order.
void write_snapshot(std::ostream& os, const FieldGrid& grid);
void write_snapshot(const std::string& path, const FieldGrid& grid);
FieldGrid read_snapshot(std::istream& is);
FieldGrid read_snapshot(const std::string& path);

/// Standalone scalar leapfrog for psi_tt - lap psi = source on the node lattice;
/// used to cross-check the integral-representation wave solver.
class ScalarWave {
 public:
  ScalarWave(const GridGeometry& g, double dt);
  /// psi(0) and psi_t(0) sampled at nodes; the first step uses a Taylor start.
  void set_initial(const std::vector<double>& psi0, const std::vector<double>& psi1);
  /// Advance with source evaluated at the current time level.
  template <class Source>
  void step(Source&& source_at_nodes);
  const std::vector<double>& value() const { return cur_; }
  double time() const { return time_; }
  const GridGeometry& geometry() const { return geom_; }
  double dt() const { return dt_; }

 private:
  std::vector<double> laplacian(const std::vector<double>& u) const;
  GridGeometry geom_;
  double dt_;
  double time_ = 0.0;
  bool started_ = false;
  std::vector<double> prev_, cur_, vel0_;
};

template <class Source>
void ScalarWave::step(Source&& source_at_nodes) {
  const std::vector<double> f = source_at_nodes(time_);
  const std::vector<double> lap = laplacian(cur_);
  std::vector<double> next(cur_.size());
  if (!started_) {
    // psi(dt) = psi0 + dt psi1 + dt^2/2 (lap psi0 + f)
    for (std::size_t n = 0; n < next.size(); ++n)
      next[n] = cur_[n] + dt_ * vel0_[n] + 0.5 * dt_ * dt_ * (lap[n] + f[n]);
    started_ = true;
  } else {
    for (std::size_t n = 0; n < next.size(); ++n)
      next[n] = 2.0 * cur_[n] - prev_[n] + dt_ * dt_ * (lap[n] + f[n]);
  }
  prev_ = std::move(cur_);
  cur_ = std::move(next);
  time_ += dt_;
}

}  // namespace rvm
