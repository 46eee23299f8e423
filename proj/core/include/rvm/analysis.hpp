/**
 * @file analysis.hpp
 * @brief End-to-end post-processing of a run: limits F_inf, rho_inf, j_inf,
 * E_inf, B_inf, K_inf, rescaled density comparisons, decay fits, tracer
 * dyadics and the regime classification.
 */
#pragma once

#include <functional>
#include <map>
#include <string>
#include <vector>

#include "rvm/asymptotics.hpp"
#include "rvm/decay_fit.hpp"
#include "rvm/limitfields.hpp"
#include "rvm/pic.hpp"
#include "rvm/scattering.hpp"

namespace rvm {

struct AnalysisOptions {
  Thresholds thresholds;
  double kernel_width = 0.0;  ///< 0: from the run config
  int velocity_cells = 0;     ///< 0: from the run config
  double solver_tol = 0.0;    ///< 0: from the run config
  double fit_t_min = 0.0;     ///< 0: t_max / 10
  double free_transport_tol = 0.05;  ///< relative sup error of the final free-transport comparison
};

/// Options from a run config, optionally overridden by a JSON thresholds file
/// whose keys match the Thresholds / AnalysisOptions member names.
AnalysisOptions analysis_options(const RunConfig& cfg, const std::string& thresholds_path = "");

struct NamedComparison {
  std::string quantity;
  RescaledComparison cmp;
};

/// Free-transport pushforward D(v^{-1} q) F0(v^{-1} q) of species i's initial
/// momentum profile (zero outside the velocity range of the model).
std::function<double(const Vec3&)> free_transport_density(const RunConfig& cfg, std::size_t i);

struct AnalysisReport {
  std::vector<double> checkpoint_times;
  std::vector<CauchyReport> F_cauchy;
  std::vector<double> species_mass;
  std::vector<double> F_inf_mass;
  double beta = 0.0;
  double zeta = 0.0;
  double gamma = 0.0;
  double total_mass = 0.0;
  double rho_scale = 0.0;
  double field_scale = 0.0;
  double rho_inf_integral = 0.0;
  double rho_inf_sup = 0.0;
  double E_inf_sup = 0.0;
  double B_inf_sup = 0.0;
  std::vector<SolveReport> solves;
  std::vector<NamedComparison> rescaled;
  std::vector<NamedComparison> free_transport;  ///< uncoupled runs only, per species and checkpoint
  DecayFit field_fit;
  DecayFit density_fit;
  bool fits_valid = false;
  DyadicTable field_deviation;    ///< |t^2 supE(2T) - t^2 supE(T)|
  DyadicTable density_deviation;  ///< |t^3 sup rho(2T) - t^3 sup rho(T)|
  PRate p_rate;
  HConvergence h;
  bool h_valid = false;
  Regime regime = Regime::undetermined;
  double max_continuity = 0.0;
  double max_divB = 0.0;
  double max_weight_drift = 0.0;
  std::map<std::string, bool> verdicts;

  std::vector<MomentumGridFunction> F_inf;
  MomentumGridFunction rho_inf, j_inf, E_inf, B_inf;
};

AnalysisReport analyze_run(const RunResult& run, const AnalysisOptions& opt);

std::string report_json(const AnalysisReport& r, const AnalysisOptions& opt);

/// analysis.json, rescaled.csv, series.csv, dyadic.csv and the limit grids.
void write_analysis(const AnalysisReport& r, const AnalysisOptions& opt, const std::string& dir);

}  // namespace rvm
