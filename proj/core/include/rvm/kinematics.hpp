/**
 * @file kinematics.hpp
 * @brief Velocity maps, their Jacobians and the Lorentz force for a single species.
 *
 * Units have the speed of light normalized to one. In relativistic mode
 *   v(p) = p / sqrt(m^2 + |p|^2),
 * in classical mode v(p) = p / m.
 */
#pragma once

#include <string>

#include "rvm/vec3.hpp"

namespace rvm {

enum class VelocityModel { relativistic, classical };

std::string to_string(VelocityModel m);
VelocityModel velocity_model_from_string(const std::string& s);

struct SpeciesSpec {
  double mass = 1.0;
  double charge = 0.0;
  VelocityModel model = VelocityModel::relativistic;
  double support_x = 1.0;  ///< spatial support radius of the initial data
  double support_p = 0.5;  ///< momentum support radius of the initial data

  /// Throws ValidationError when mass/supports are not positive or a classical
  /// species has support_p >= 1.
  void validate() const;
};

/// Largest |q| accepted by the relativistic inverse velocity map.
inline constexpr double kMaxSpeed = 1.0 - 1e-12;

/// p0 = |p| / |v(p)|: sqrt(m^2 + |p|^2) (relativistic) or m (classical).
double momentum_energy(const Vec3& p, const SpeciesSpec& s);

Vec3 velocity(const Vec3& p, const SpeciesSpec& s);
Vec3 inverse_velocity(const Vec3& q, const SpeciesSpec& s);

/// A(p) = grad_p v(p).
Matrix3 jacobian_A(const Vec3& p, const SpeciesSpec& s);
/// B(q) = grad_q v^{-1}(q).
Matrix3 jacobian_B(const Vec3& q, const SpeciesSpec& s);
/// D(p) = 1 / |det A(p)|: m^{-2} p0^5 for relativistic (= p0^5 when m = 1), m^3 classical.
double inv_det_D(const Vec3& p, const SpeciesSpec& s);

Vec3 lorentz_force(const Vec3& E, const Vec3& B, const Vec3& p, const SpeciesSpec& s);

struct SupportParams {
  double beta = 0.0;
  double zeta = 0.0;
  double gamma = 0.5;
};

/// zeta = beta / sqrt(1 + beta^2), gamma = max(1/2, 2 beta / sqrt(1 + 4 beta^2)).
SupportParams support_params(double beta);

/// Model-aware variant: the speed bound zeta is max |v(p)| over |p| <= beta and
/// gamma = max(1/2, 2 zeta / sqrt(1 + 3 zeta^2)), which reduces to the formula
/// above for a unit-mass relativistic species.
SupportParams support_params(double beta, const SpeciesSpec& s);

}  // namespace rvm
