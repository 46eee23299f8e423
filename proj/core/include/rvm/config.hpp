/**
 * @file config.hpp
 * @brief Run configuration: a plain-text file of `[section]` headers and
 * `key = value` lines (`#` starts a comment). Unknown sections or keys are
 * rejected. Units have c = 1.
 *
 * Sections and keys:
 *   [domain]       cells (even), extent (half-width; 0 = t_max + L + pad), pad
 *   [time]         dt (0 = cfl * dx / sqrt(3)), cfl, t_max
 *   [model]        velocity = relativistic|classical, coupling = on|off
 *   [species.i]    mass, charge, total (particle number M), x_center, x_width,
 *                  p_center, p_width, count, sampling = sobol|random,
 *                  antithetic, tracers, mirror_of (index of a species whose
 *                  parity image this species is; -1 for none)
 *   [diagnostics]  every (steps), checkpoints (times), histogram_spacing,
 *                  histogram_halfwidth (0 = auto), field_snapshots = none|final|checkpoints,
 *                  cone_slack (cells)
 *   [analysis]     kernel_width (0 = 2 * histogram_spacing), velocity_cells (per
 *                  gamma), vanish_tol, vanishing_field_exponent, fit_t_min,
 *                  solver_tol
 *   [run]          seed, workers, output, neutrality_tol
 */
#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "rvm/kinematics.hpp"
#include "rvm/sampling.hpp"

namespace rvm {

struct SpeciesConfig {
  double mass = 1.0;
  double charge = 0.0;
  BumpProfile profile;
  std::size_t count = 1000;
  SamplingMethod sampling = SamplingMethod::sobol;
  bool antithetic = false;
  std::size_t tracers = 0;
  int mirror_of = -1;

  bool operator==(const SpeciesConfig&) const = default;
};

struct RunConfig {
  int cells = 32;
  double extent = 0.0;
  double pad = 2.0;

  double dt = 0.0;
  double cfl = 0.9;
  double t_max = 8.0;

  VelocityModel velocity = VelocityModel::relativistic;
  bool coupling = true;

  std::vector<SpeciesConfig> species;

  int diag_every = 1;
  std::vector<double> checkpoints;
  double histogram_spacing = 0.02;
  double histogram_halfwidth = 0.0;
  std::string field_snapshots = "final";
  double cone_slack = 1.0;

  double kernel_width = 0.0;
  int velocity_cells = 32;
  double vanish_tol = 1e-3;
  double vanishing_field_exponent = -2.5;
  double fit_t_min = 0.0;
  double solver_tol = 1e-10;

  std::uint64_t seed = 1;
  int workers = 1;
  std::string output = "run";
  double neutrality_tol = 1e-9;

  bool operator==(const RunConfig&) const = default;

  /// Largest spatial support radius L over species.
  double support_x() const;
  /// Largest momentum support radius over species (initial beta).
  double support_p() const;
  double resolved_extent() const;
  double dx() const { return 2.0 * resolved_extent() / cells; }
  double resolved_dt() const;
  double resolved_kernel_width() const { return kernel_width > 0.0 ? kernel_width : 2.0 * histogram_spacing; }
  double resolved_histogram_halfwidth() const;
  SpeciesSpec species_spec(std::size_t i) const;
  /// Profile after applying mirror_of.
  BumpProfile resolved_profile(std::size_t i) const;

  /// Throws ValidationError naming the offending key.
  void validate() const;
};

RunConfig parse_config(std::istream& is);
RunConfig parse_config_string(const std::string& text);
RunConfig load_config(const std::string& path);
std::string serialize_config(const RunConfig& c);

}  // namespace rvm
