/**
 * @file pic.hpp
 * @brief Particle-in-cell discretization of the coupled Vlasov-Maxwell system.
 *
 * Loop per step n -> n+1 (fields E^n, B^n synchronized at t^n):
 *   gather E^n, B^n at x^n; Boris kick p^{n-1/2} -> p^{n+1/2};
 *   drift x^{n+1} = x^n + v(p^{n+1/2}) dt; Esirkepov deposit j^{n+1/2}, rho^{n+1};
 *   advance the fields with j^{n+1/2}.
 * Diagnostics at t^n use the synchronized momentum (p^{n-1/2} + p^{n+1/2})/2.
 */
#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "rvm/characteristics.hpp"
#include "rvm/config.hpp"
#include "rvm/maxwell.hpp"
#include "rvm/momentum_grid.hpp"

namespace rvm {

struct ParticleEnsemble {
  std::vector<SpeciesSpec> species;  ///< dynamical specs (charge 0 when uncoupled)
  std::vector<double> charge;        ///< configured charge per species
  std::vector<Vec3> x;
  std::vector<Vec3> p;
  std::vector<double> weight;
  std::vector<int> species_id;
  std::vector<char> tracer;
  std::uint64_t seed = 0;

  std::size_t size() const { return x.size(); }
  std::size_t count(int species) const;
  /// Sum of weights of one species (its particle number M).
  double total_weight(int species) const;
};

/// Sample all species of a configuration (mirror_of species are parity images).
ParticleEnsemble build_ensemble(const RunConfig& cfg);

struct DiagnosticsRow {
  FieldDiagnostics field;
  double sup_rho = 0.0;
  double sup_j = 0.0;
  double sup_density = 0.0;  ///< max over species of the number density
  double max_x = 0.0;        ///< support radius of positions
  double max_Y = 0.0;        ///< support radius of translated positions X - v(P) t
  double beta = 0.0;         ///< max |P| at this time
  double continuity = 0.0;   ///< max continuity residual since the previous row, relative to max|rho|
  std::vector<double> weights;
};

struct DiagnosticsSeries {
  std::vector<DiagnosticsRow> rows;

  std::string csv_header() const;
  std::string to_csv() const;
  /// Column by name as (time, value) pairs.
  std::vector<double> column(const std::string& name) const;
  std::vector<double> times() const;
  static DiagnosticsSeries from_csv(const std::string& text);
};

struct Checkpoint {
  double time = 0.0;
  std::vector<MomentumGridFunction> F;        ///< per species
  MomentumGridFunction rho;                   ///< charge density on space nodes
  std::vector<MomentumGridFunction> density;  ///< per-species number density on space nodes
};

struct RunResult {
  RunConfig config;
  GridGeometry geometry;
  double dt = 0.0;
  DiagnosticsSeries diagnostics;
  std::vector<TracerRecord> tracers;
  std::vector<Checkpoint> checkpoints;  ///< t = 0 first, then the configured checkpoints
  FieldGrid final_fields;
  double beta = 0.0;        ///< max |p| over the whole run
  double max_speed = 0.0;   ///< max |v| over the whole run
  double max_continuity = 0.0;
  double max_divB = 0.0;
  double initial_divE_residual = 0.0;
  double max_divE_drift = 0.0;  ///< max over rows of |divE_res - initial|
  double wall_seconds = 0.0;
};

/// Node-centred deposit of per-species number density and of the charge density.
MomentumGridFunction density_on_nodes(const ParticleEnsemble& ens, const GridGeometry& g, int species, int workers,
                                      double time);

/// Run the configured simulation. When `output_dir` is non-empty the
/// artifacts (config, diagnostics CSV, tracer CSV, RVMH checkpoints, RVMF
/// snapshots) are written there.
RunResult run_coupled(const RunConfig& cfg, const std::string& output_dir = "");

}  // namespace rvm
