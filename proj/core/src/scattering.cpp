#include "rvm/scattering.hpp"

#include <algorithm>
#include <cmath>

#include "rvm/decay_fit.hpp"
#include "rvm/error.hpp"

namespace rvm {

std::string to_string(Regime r) {
  switch (r) {
    case Regime::nonvanishing: return "nonvanishing";
    case Regime::vanishing: return "vanishing";
    default: return "undetermined";
  }
}

Regime classify_regime(double sup_rho_inf, double rho_scale, double field_exponent, const Thresholds& th) {
  const bool small_rho = sup_rho_inf <= th.vanish_tol * rho_scale;
  const bool fast_fields = field_exponent <= th.vanishing_field_exponent;
  if (small_rho && fast_fields) return Regime::vanishing;
  if (!small_rho && !fast_fields) return Regime::nonvanishing;
  return Regime::undetermined;
}

double density_scale(double total_mass, double zeta) {
  if (!(zeta > 0.0)) throw ValidationError("", "density_scale: zeta must be positive");
  return total_mass / (4.0 / 3.0 * M_PI * zeta * zeta * zeta);
}

namespace {

void finish(DyadicTable& t) {
  t.all_zero = std::all_of(t.value.begin(), t.value.end(), [](double v) { return v == 0.0; });
  t.strictly_decreasing = strictly_decreasing(t.value);
}

double ols_slope(const std::vector<double>& x, const std::vector<double>& y) {
  const double n = static_cast<double>(x.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t k = 0; k < x.size(); ++k) {
    sx += x[k];
    sy += y[k];
    sxx += x[k] * x[k];
    sxy += x[k] * y[k];
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

std::size_t sample_index(const TracerRecord& r, double t) {
  for (std::size_t k = 0; k < r.size(); ++k)
    if (std::fabs(r.times[k] - t) <= 1e-9 * std::max(1.0, t)) return k;
  throw ValidationError("", "tracer " + std::to_string(r.id) + " has no sample at t = " + std::to_string(t));
}

}  // namespace

PRate p_infinity_rate(const std::vector<TracerRecord>& tracers, const std::vector<double>& times) {
  PRate out;
  if (times.size() < 3) throw ValidationError("", "p_infinity_rate needs at least 3 dyadic times");
  for (std::size_t k = 0; k + 1 < times.size(); ++k) {
    double m = 0.0;
    for (const auto& r : tracers)
      m = std::max(m, norm(r.P[sample_index(r, times[k + 1])] - r.P[sample_index(r, times[k])]));
    out.differences.T.push_back(times[k]);
    out.differences.value.push_back(m);
  }
  finish(out.differences);
  out.exact = out.differences.all_zero;
  if (out.exact) {
    out.slope = -INFINITY;
    return out;
  }
  std::vector<double> lx, ly;
  for (std::size_t k = 0; k < out.differences.T.size(); ++k)
    if (out.differences.value[k] > 0.0) {
      lx.push_back(std::log(out.differences.T[k]));
      ly.push_back(std::log(out.differences.value[k]));
    }
  out.slope = lx.size() >= 2 ? ols_slope(lx, ly) : -INFINITY;
  return out;
}

HConvergence h_convergence(const std::vector<TracerRecord>& tracers, const std::vector<SpeciesSpec>& species,
                           const std::vector<ForceField>& K_inf, const std::vector<double>& times) {
  if (times.size() < 4) throw ValidationError("", "h_convergence needs at least 3 doublings");
  for (double t : times)
    if (t < 1.0) throw ValidationError("", "h_convergence: dyadic times must be >= 1");
  HConvergence out;
  out.min_AK = INFINITY;
  std::vector<std::vector<Vec3>> corr, unc;
  for (const auto& r : tracers) {
    const SpeciesSpec& s = species.at(static_cast<std::size_t>(r.species));
    const ForceField& K = K_inf.at(static_cast<std::size_t>(r.species));
    TracerRecord sub;
    for (double t : times) {
      const std::size_t k = sample_index(r, t);
      sub.times.push_back(r.times[k]);
      sub.X.push_back(r.X[k]);
    }
    const Vec3 Pinf = limiting_momentum(r).P_extrapolated;
    corr.push_back(scattering_label(sub, s, Pinf, K));
    unc.push_back(scattering_label(sub, s, Pinf, ForceField{}));
    const double ak = K ? norm(jacobian_A(Pinf, s) * K(Pinf)) : 0.0;
    out.min_AK = std::min(out.min_AK, ak);
    out.max_AK = std::max(out.max_AK, ak);
  }
  if (tracers.empty()) out.min_AK = 0.0;
  for (std::size_t k = 0; k + 1 < times.size(); ++k) {
    double sc = 0.0, su = 0.0;
    for (std::size_t m = 0; m < tracers.size(); ++m) {
      sc = std::max(sc, norm(corr[m][k + 1] - corr[m][k]));
      su = std::max(su, norm(unc[m][k + 1] - unc[m][k]));
    }
    out.corrected.T.push_back(times[k]);
    out.corrected.value.push_back(sc);
    out.uncorrected.T.push_back(times[k]);
    out.uncorrected.value.push_back(su);
  }
  finish(out.corrected);
  finish(out.uncorrected);
  out.verdict = out.corrected.all_zero || out.corrected.strictly_decreasing;
  return out;
}

}  // namespace rvm
