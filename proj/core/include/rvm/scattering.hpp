/**
 * @file scattering.hpp
 * @brief Regime classification and dyadic convergence statistics of tracer
 * trajectories: limiting momenta, corrected labels
 *   label(t) = X(t) - v(P_inf) t + ln(t) A(P_inf) K_inf(P_inf)
 * and their uncorrected counterparts.
 */
#pragma once

#include <string>
#include <vector>

#include "rvm/characteristics.hpp"

namespace rvm {

enum class Regime { nonvanishing, vanishing, undetermined };
std::string to_string(Regime r);

struct Thresholds {
  double vanish_tol = 1e-3;                ///< relative to the density scale M_total / (4/3 pi zeta^3)
  double vanishing_field_exponent = -2.5;  ///< field exponent at or below this counts as vanishing
  double field_exponent = -2.0;
  double density_exponent = -3.0;
  double exponent_tol = 0.4;
  double vanishing_density_exponent = -3.4;
  double p_rate = -1.0;
  double p_rate_tol = 0.4;
  double vanishing_p_rate = -1.5;
};

/// Vanishing when sup|rho_inf| <= vanish_tol * rho_scale and the field exponent
/// is at or below the cutoff; nonvanishing when both point the other way.
Regime classify_regime(double sup_rho_inf, double rho_scale, double field_exponent, const Thresholds& th = {});

/// M_total / ((4/3) pi zeta^3).
double density_scale(double total_mass, double zeta);

struct DyadicTable {
  std::vector<double> T;      ///< lower time of each pair (T, 2T)
  std::vector<double> value;  ///< statistic for the pair
  bool strictly_decreasing = false;
  bool all_zero = false;
};

struct PRate {
  DyadicTable differences;  ///< max over tracers of |P(2T) - P(T)|
  double slope = 0.0;       ///< least-squares slope of log difference vs log T
  bool exact = false;       ///< all differences identically zero
};

/// Dyadic differences at T in `times` (each T and 2T must be recorded).
PRate p_infinity_rate(const std::vector<TracerRecord>& tracers, const std::vector<double>& times);

struct HConvergence {
  DyadicTable corrected;    ///< S(T) = max over tracers |label(2T) - label(T)|
  DyadicTable uncorrected;  ///< same without the ln t correction
  double min_AK = 0.0;      ///< min over tracers |A(P_inf) K_inf(P_inf)|
  double max_AK = 0.0;
  bool verdict = false;     ///< corrected statistic strictly decreasing over >= 3 doublings
};

/// Needs >= 3 doublings. `K_inf[a]` is the limiting force of species a (empty
/// functions mean K_inf = 0). P_inf is the 1/t Richardson extrapolation of each
/// tracer's momentum record.
HConvergence h_convergence(const std::vector<TracerRecord>& tracers, const std::vector<SpeciesSpec>& species,
                           const std::vector<ForceField>& K_inf, const std::vector<double>& times);

}  // namespace rvm
