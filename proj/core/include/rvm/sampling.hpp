// Initial phase-space data and macro-particle sampling.
//
// Each species starts from a product C^2 bump
//   f0(x, p) = M * prod_i b((x_i - cx_i)/hx)/(hx Z) * prod_i b((p_i - cp_i)/hp)/(hp Z),
// b(s) = (1 - s^2)^3 on |s| < 1, Z = int b = 32/35, so int int f0 = M.
#pragma once

#include <cstdint>
#include <vector>

#include "rvm/kinematics.hpp"

namespace rvm {

inline constexpr double kBumpIntegral = 32.0 / 35.0;

/// (1 - s^2)^3 for |s| < 1, else 0.
double bump(double s);
double bump_derivative(double s);
/// Normalized cumulative distribution of b on [-1, 1].
double bump_cdf(double s);
double bump_inverse_cdf(double u);

struct BumpProfile {
  Vec3 center_x;
  double width_x = 1.0;
  Vec3 center_p;
  double width_p = 0.5;
  double mass = 1.0;  ///< total particle number M of the species

  double density_x(const Vec3& x) const;  ///< normalized to 1
  double density_p(const Vec3& p) const;  ///< normalized to 1
  double f0(const Vec3& x, const Vec3& p) const { return mass * density_x(x) * density_p(p); }
  /// F0(p) = int f0 dx.
  double F0(const Vec3& p) const { return mass * density_p(p); }
  double support_x() const;  ///< max |x| on the support
  double support_p() const;  ///< max |p| on the support
  /// Parity image (x, p) -> (-x, -p).
  BumpProfile mirrored() const;
  bool operator==(const BumpProfile&) const = default;
};

enum class SamplingMethod { sobol, random };

struct Particle {
  Vec3 x;
  Vec3 p;
  double weight = 0.0;
  int species = 0;
  bool tracer = false;
};

struct SamplingOptions {
  std::size_t count = 1000;
  SamplingMethod method = SamplingMethod::sobol;
  /// Emit points in pairs symmetric about the profile centre.
  bool antithetic = false;
  std::size_t tracers = 0;
  std::uint64_t seed = 1;
};

/// Equal-weight sample M/N of a bump profile. Momentum uses the first three
/// quasi-random coordinates, position the last three. N = 1 returns the centre.
std::vector<Particle> sample_particles(const BumpProfile& profile, int species, const SamplingOptions& opt);

/// Parity image of a sampled species relabelled as `species`.
std::vector<Particle> mirror_particles(const std::vector<Particle>& src, int species);

}  // namespace rvm
