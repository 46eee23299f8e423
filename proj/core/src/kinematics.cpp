#include "rvm/kinematics.hpp"

#include <algorithm>
#include <cmath>

#include "rvm/error.hpp"

namespace rvm {

std::string to_string(VelocityModel m) {
  return m == VelocityModel::relativistic ? "relativistic" : "classical";
}

VelocityModel velocity_model_from_string(const std::string& s) {
  if (s == "relativistic") return VelocityModel::relativistic;
  if (s == "classical") return VelocityModel::classical;
  throw ValidationError("[model].velocity", "expected 'relativistic' or 'classical', got '" + s + "'");
}

void SpeciesSpec::validate() const {
  if (!(mass > 0.0)) throw ValidationError("mass", "must be positive");
  if (!(support_x > 0.0)) throw ValidationError("support_x", "must be positive");
  if (!(support_p > 0.0)) throw ValidationError("support_p", "must be positive");
  if (model == VelocityModel::classical && !(support_p < 1.0))
    throw ValidationError("support_p", "classical model requires support_p < 1 (c = 1)");
}

double momentum_energy(const Vec3& p, const SpeciesSpec& s) {
  if (s.model == VelocityModel::classical) return s.mass;
  return std::sqrt(s.mass * s.mass + norm2(p));
}

Vec3 velocity(const Vec3& p, const SpeciesSpec& s) { return p / momentum_energy(p, s); }

Vec3 inverse_velocity(const Vec3& q, const SpeciesSpec& s) {
  if (s.model == VelocityModel::classical) return s.mass * q;
  const double q2 = norm2(q);
  if (!(q2 < kMaxSpeed * kMaxSpeed))
    throw DomainError("inverse_velocity: |q| = " + std::to_string(std::sqrt(q2)) +
                      " is not below the speed of light");
  return (s.mass / std::sqrt(1.0 - q2)) * q;
}

Matrix3 jacobian_A(const Vec3& p, const SpeciesSpec& s) {
  if (s.model == VelocityModel::classical) return Matrix3::scaled_identity(1.0 / s.mass);
  // d/dp_j [p_i / p0] = (p0^2 delta_ij - p_i p_j) / p0^3 with p0^2 = m^2 + |p|^2
  const double p0 = momentum_energy(p, s);
  const double inv3 = 1.0 / (p0 * p0 * p0);
  const double diag = p0 * p0;
  Matrix3 A;
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j < 3; ++j) A(i, j) = inv3 * ((i == j ? diag : 0.0) - p[i] * p[j]);
  return A;
}

Matrix3 jacobian_B(const Vec3& q, const SpeciesSpec& s) {
  if (s.model == VelocityModel::classical) return Matrix3::scaled_identity(s.mass);
  const double q2 = norm2(q);
  if (!(q2 < kMaxSpeed * kMaxSpeed))
    throw DomainError("jacobian_B: |q| = " + std::to_string(std::sqrt(q2)) +
                      " is not below the speed of light");
  const double w = 1.0 - q2;
  const double scale = s.mass / (w * std::sqrt(w));
  Matrix3 B;
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j < 3; ++j) B(i, j) = scale * ((i == j ? w : 0.0) + q[i] * q[j]);
  return B;
}

double inv_det_D(const Vec3& p, const SpeciesSpec& s) {
  if (s.model == VelocityModel::classical) return s.mass * s.mass * s.mass;
  // det A = m^2 / p0^5
  const double p0 = momentum_energy(p, s);
  const double p0sq = p0 * p0;
  return p0sq * p0sq * p0 / (s.mass * s.mass);
}

Vec3 lorentz_force(const Vec3& E, const Vec3& B, const Vec3& p, const SpeciesSpec& s) {
  if (s.charge == 0.0) return {};
  return s.charge * (E + cross(velocity(p, s), B));
}

namespace {
double gamma_from_zeta(double zeta) {
  return std::max(0.5, 2.0 * zeta / std::sqrt(1.0 + 3.0 * zeta * zeta));
}
}  // namespace

SupportParams support_params(double beta) {
  if (!(beta >= 0.0)) throw DomainError("support_params: beta must be nonnegative");
  SupportParams sp;
  sp.beta = beta;
  sp.zeta = beta / std::sqrt(1.0 + beta * beta);
  sp.gamma = std::max(0.5, 2.0 * beta / std::sqrt(1.0 + 4.0 * beta * beta));
  return sp;
}

SupportParams support_params(double beta, const SpeciesSpec& s) {
  if (!(beta >= 0.0)) throw DomainError("support_params: beta must be nonnegative");
  SupportParams sp;
  sp.beta = beta;
  sp.zeta = s.model == VelocityModel::classical ? beta / s.mass
                                                : beta / std::sqrt(s.mass * s.mass + beta * beta);
  if (!(sp.zeta < 1.0))
    throw DomainError("support_params: speed bound " + std::to_string(sp.zeta) + " is not below c");
  sp.gamma = gamma_from_zeta(sp.zeta);
  return sp;
}

}  // namespace rvm
