#include "rvm/characteristics.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <string>

#include "rvm/error.hpp"

namespace rvm {

FieldSampler zero_fields() {
  return [](double, const Vec3&) { return FieldSample{}; };
}

Vec3 boris_kick(const Vec3& p, const Vec3& E, const Vec3& B, const SpeciesSpec& s, double dt) {
  if (s.charge == 0.0) return p;
  const double h = 0.5 * s.charge * dt;
  const Vec3 pm = p + h * E;
  const Vec3 t = (h / momentum_energy(pm, s)) * B;
  const Vec3 sv = (2.0 / (1.0 + norm2(t))) * t;
  const Vec3 pp = pm + cross(pm, t);
  const Vec3 pplus = pm + cross(pp, sv);
  return pplus + h * E;
}

TrajectoryState push(const TrajectoryState& st, const SpeciesSpec& s, const FieldSampler& fields, double dt) {
  const Vec3 xh = st.x + (0.5 * dt) * velocity(st.p, s);
  Vec3 p = st.p;
  if (s.charge != 0.0) {
    const FieldSample f = fields(st.t + 0.5 * dt, xh);
    p = boris_kick(st.p, f.E, f.B, s, dt);
  }
  return {xh + (0.5 * dt) * velocity(p, s), p, st.t + dt};
}

void TracerRecord::append(double t, const Vec3& x, const Vec3& p, const SpeciesSpec& s) {
  times.push_back(t);
  X.push_back(x);
  P.push_back(p);
  Y.push_back(x - t * velocity(p, s));
}

TracerRecord integrate(const TrajectoryState& state, const SpeciesSpec& s, const FieldSampler& fields, double t_end,
                       double dt, int record_every) {
  if (!(dt > 0.0)) throw ValidationError("dt", "must be positive");
  if (t_end < state.t) throw ValidationError("t_end", "must not precede the initial time");
  if (record_every < 1) record_every = 1;
  TracerRecord rec;
  rec.append(state.t, state.x, state.p, s);
  TrajectoryState st = state;
  long step = 0;
  const double tol = 1e-12 * std::max(1.0, std::fabs(t_end));
  while (st.t < t_end - tol) {
    const double h = std::min(dt, t_end - st.t);
    st = push(st, s, fields, h);
    ++step;
    const bool last = st.t >= t_end - tol;
    if (last) st.t = t_end;
    if (last || step % record_every == 0) rec.append(st.t, st.x, st.p, s);
  }
  rec.P_inf = rec.P.back();
  return rec;
}

namespace {

std::size_t index_at(const TracerRecord& rec, double t) {
  if (rec.times.empty() || t < rec.times.front() - 1e-12 * std::max(1.0, std::fabs(t)))
    throw ValidationError("", "record does not reach back to t = " + std::to_string(t));
  std::size_t k = 0;
  const double tol = 1e-9 * std::max(1.0, std::fabs(t));
  while (k + 1 < rec.times.size() && rec.times[k + 1] <= t + tol) ++k;
  return k;
}

}  // namespace

Vec3 momentum_at(const TracerRecord& rec, double t) { return rec.P[index_at(rec, t)]; }
Vec3 position_at(const TracerRecord& rec, double t) { return rec.X[index_at(rec, t)]; }

LimitingMomentum limiting_momentum(const TracerRecord& rec, Envelope env) {
  if (rec.size() < 2) throw ValidationError("", "limiting_momentum: record has fewer than two points");
  const double T = rec.times.back();
  const double t0 = rec.times.front();
  if (!(T > 0.0) || T / 2 < t0 - 1e-12 * T)
    throw ValidationError("", "limiting_momentum: record must extend from T/2 to T (fewer than 2 dyadic checkpoints)");
  LimitingMomentum out;
  out.P_inf = rec.P.back();
  const Vec3 step = rec.P.back() - momentum_at(rec, T / 2);
  out.P_extrapolated = out.P_inf + (env == Envelope::inverse_t ? step : step / 3.0);
  out.last_difference = norm(step);
  out.err_bound = env == Envelope::inverse_t ? out.last_difference : out.last_difference / 3.0;
  if (T / 4 >= t0 - 1e-12 * T) {
    out.previous_difference = norm(momentum_at(rec, T / 2) - momentum_at(rec, T / 4));
    // a convergent envelope at least shrinks the dyadic increments by a fixed factor
    if (out.previous_difference > 0.0 && out.last_difference > 0.9 * out.previous_difference) out.convergent = false;
  }
  return out;
}

MomentumJacobian jacobian_dP_dp(const Vec3& x, const Vec3& p, double tau, const SpeciesSpec& s,
                                const FieldSampler& fields, double T, double h, double dt) {
  if (!(h > 0.0)) throw ValidationError("h", "must be positive");
  MomentumJacobian out;
  for (int j = 0; j < 3; ++j) {
    Vec3 dp;
    dp[j] = h;
    const Vec3 Pp = integrate({x, p + dp, tau}, s, fields, T, dt, 1 << 30).P.back();
    const Vec3 Pm = integrate({x, p - dp, tau}, s, fields, T, dt, 1 << 30).P.back();
    const Vec3 col = (Pp - Pm) / (2.0 * h);
    for (int i = 0; i < 3; ++i) out.dP_dp(i, j) = col[i];
  }
  Eigen::Matrix3d M;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) M(i, j) = out.dP_dp(i, j);
  out.determinant = M.determinant();
  Eigen::JacobiSVD<Eigen::Matrix3d> svd(M);
  out.spectral_norm = svd.singularValues()(0);
  Eigen::JacobiSVD<Eigen::Matrix3d> svd_dev(M - Eigen::Matrix3d::Identity());
  out.deviation_norm = svd_dev.singularValues()(0);
  return out;
}

std::vector<Vec3> scattering_label(const TracerRecord& rec, const SpeciesSpec& s, const Vec3& P_inf,
                                   const ForceField& K_inf) {
  const Vec3 v = velocity(P_inf, s);
  Vec3 drift;
  if (K_inf) drift = jacobian_A(P_inf, s) * K_inf(P_inf);
  std::vector<Vec3> out;
  out.reserve(rec.size());
  for (std::size_t k = 0; k < rec.size(); ++k) {
    const double t = rec.times[k];
    if (t < 1.0) throw DomainError("scattering_label: sample time " + std::to_string(t) + " < 1");
    out.push_back(rec.X[k] - t * v + std::log(t) * drift);
  }
  return out;
}

}  // namespace rvm
