/**
 * @file characteristics.hpp
 * @brief Characteristic curves dX/dt = v(P), dP/dt = K(t, X, P) under a field
 * sampler, translated characteristics Y = X - v(P) t, limiting momenta and
 * modified-scattering labels.
 */
#pragma once

#include <functional>
#include <vector>

#include "rvm/kinematics.hpp"
#include "rvm/maxwell.hpp"

namespace rvm {

/// Electromagnetic field as a function of (t, x). Must be callable concurrently.
using FieldSampler = std::function<FieldSample(double t, const Vec3& x)>;

/// Sampler returning zero fields everywhere.
FieldSampler zero_fields();

struct TrajectoryState {
  Vec3 x;
  Vec3 p;
  double t = 0.0;
};

/// Boris rotation-split momentum update over dt with fields (E, B) held fixed.
/// The magnetic rotation preserves |p| exactly and the map is volume preserving.
Vec3 boris_kick(const Vec3& p, const Vec3& E, const Vec3& B, const SpeciesSpec& s, double dt);

/// Strang step: half drift, Boris kick with fields at the midpoint, half drift.
TrajectoryState push(const TrajectoryState& state, const SpeciesSpec& s, const FieldSampler& fields, double dt);

struct TracerRecord {
  int id = 0;
  int species = 0;
  std::vector<double> times;
  std::vector<Vec3> X;
  std::vector<Vec3> P;
  std::vector<Vec3> Y;
  std::vector<Vec3> label;
  Vec3 P_inf;

  std::size_t size() const { return times.size(); }
  /// Append a sample; Y is filled from its definition.
  void append(double t, const Vec3& x, const Vec3& p, const SpeciesSpec& s);
};

/// Integrate from state.t to t_end with step dt (the last step is shortened to
/// land on t_end), recording every `record_every` steps plus the endpoint.
TracerRecord integrate(const TrajectoryState& state, const SpeciesSpec& s, const FieldSampler& fields, double t_end,
                       double dt, int record_every = 1);

/// Decay envelope assumed for |P(t) - P_inf|.
enum class Envelope { inverse_t, inverse_t2 };

struct LimitingMomentum {
  Vec3 P_inf;
  /// Richardson value P(T) + (P(T) - P(T/2)) / (2^k - 1) for the envelope t^-k.
  Vec3 P_extrapolated;
  double err_bound = 0.0;
  /// False when the last two dyadic differences do not shrink (e.g. logarithmic drift).
  bool convergent = true;
  /// |P(T) - P(T/2)| and |P(T/2) - P(T/4)| when available (-1 otherwise).
  double last_difference = 0.0;
  double previous_difference = -1.0;
};

/// P_inf = P(T). err_bound extrapolates |P(T) - P(T/2)| with the given envelope:
/// c/T gives P(T) - P(T/2) = c/T, c/T^2 gives 3c/T^2. Requires a record point at
/// or before T/2 (throws ValidationError otherwise).
LimitingMomentum limiting_momentum(const TracerRecord& rec, Envelope env = Envelope::inverse_t);

/// Momentum sample of a record at the last recorded time <= t (linear search).
Vec3 momentum_at(const TracerRecord& rec, double t);
Vec3 position_at(const TracerRecord& rec, double t);

struct MomentumJacobian {
  Matrix3 dP_dp;
  double deviation_norm = 0.0;  ///< spectral norm of dP/dp - I
  double determinant = 1.0;
  double spectral_norm = 1.0;
};

/// Central finite differences of p -> P(T; tau, x, p) with step h.
MomentumJacobian jacobian_dP_dp(const Vec3& x, const Vec3& p, double tau, const SpeciesSpec& s,
                                const FieldSampler& fields, double T, double h, double dt);

/// Limiting Lorentz force p -> K_inf(p) for one species.
using ForceField = std::function<Vec3(const Vec3& p)>;

/// label(t) = X(t) - v(P_inf) t + ln(t) A(P_inf) K_inf(P_inf). With an empty
/// K_inf the correction is omitted, giving the uncorrected label X - v(P_inf) t.
/// All record times must be >= 1.
std::vector<Vec3> scattering_label(const TracerRecord& rec, const SpeciesSpec& s, const Vec3& P_inf,
                                   const ForceField& K_inf);

}  // namespace rvm
