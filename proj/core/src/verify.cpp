#include "rvm/verify.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <iomanip>
#include <random>
#include <sstream>

#include "rvm/characteristics.hpp"
#include "rvm/error.hpp"
#include "rvm/kinematics.hpp"
#include "rvm/limitfields.hpp"
#include "rvm/waveoracle.hpp"

namespace rvm {

Suite suite_from_string(const std::string& s) {
  if (s == "fast") return Suite::fast;
  if (s == "full") return Suite::full;
  throw ValidationError("--suite", "unknown suite '" + s + "' (expected fast or full)");
}

bool VerifyReport::pass() const {
  return std::all_of(checks.begin(), checks.end(), [](const CheckResult& c) { return c.pass; });
}

std::string VerifyReport::text() const {
  std::ostringstream os;
  for (const auto& c : checks)
    os << (c.pass ? "PASS " : "FAIL ") << c.name << " (" << std::fixed << std::setprecision(2) << c.seconds << " s) "
       << c.detail << '\n';
  os << (pass() ? "verify: all checks passed" : "verify: FAILED") << " in " << std::fixed << std::setprecision(1)
     << seconds << " s\n";
  if (!warning.empty()) os << "warning: " << warning << '\n';
  return os.str();
}

namespace {

using Clock = std::chrono::steady_clock;

double since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

std::string fmt(double v) {
  std::ostringstream os;
  os << std::setprecision(4) << v;
  return os.str();
}

std::vector<double> orders(const std::vector<double>& err) {
  std::vector<double> o;
  for (std::size_t k = 0; k + 1 < err.size(); ++k) o.push_back(std::log2(err[k] / err[k + 1]));
  return o;
}

std::string list(const std::vector<double>& v) {
  std::string s = "[";
  for (std::size_t k = 0; k < v.size(); ++k) s += (k ? ", " : "") + fmt(v[k]);
  return s + "]";
}

Vec3 random_ball(std::mt19937_64& rng, double radius) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (;;) {
    const Vec3 v{u(rng), u(rng), u(rng)};
    if (norm2(v) <= 1.0) return radius * v;
  }
}

}  // namespace

CheckResult check_kinematics_identities(int samples, unsigned seed) {
  const auto t0 = Clock::now();
  CheckResult r;
  r.name = "kinematics_identities";
  std::mt19937_64 rng(seed);
  const SpeciesSpec specs[] = {{1.0, 1.0, VelocityModel::relativistic, 1.0, 0.5},
                               {2.5, -1.0, VelocityModel::relativistic},
                               {1.0, 1.0, VelocityModel::classical},
                               {0.4, 1.0, VelocityModel::classical}};
  double worst_BA = 0.0, worst_det = 0.0;
  for (const auto& s : specs)
    for (int k = 0; k < samples; ++k) {
      const Vec3 p = random_ball(rng, 5.0 * s.mass);
      const Matrix3 A = jacobian_A(p, s);
      const Matrix3 BA = jacobian_B(velocity(p, s), s) * A;
      worst_BA = std::max(worst_BA, max_abs_entry(BA - Matrix3::identity()));
      worst_det = std::max(worst_det, std::fabs(std::fabs(A.determinant()) * inv_det_D(p, s) - 1.0));
    }
  r.pass = worst_BA <= 1e-10 && worst_det <= 1e-10;
  r.detail = "max|B(v(p))A(p) - I| = " + fmt(worst_BA) + ", max||det A| D - 1| = " + fmt(worst_det);
  r.seconds = since(t0);
  return r;
}

CheckResult check_gs_sweep(int draws, unsigned seed) {
  const auto t0 = Clock::now();
  CheckResult r;
  r.name = "gs_reduction";
  double worst = 0.0;
  {
    const double s = 1.3;
    const GSCheck c = gs_reduction_check([](double, double) { return 1.0; }, [](double) { return 1.0; }, {0.4, 0.2, -0.1}, s);
    const double vol = 4.0 / 3.0 * M_PI * s * s * s;
    worst = std::max({worst, std::fabs(c.lhs - vol) / vol, std::fabs(c.rhs - vol) / vol});
  }
  {
    const GSCheck c = gs_reduction_check([](double, double l) { return l * l; }, [](double) { return 1.0; }, {0.7, 0.0, 0.3}, 1.1);
    worst = std::max(worst, c.relative);
  }
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int k = 0; k < draws; ++k) {
    const double a = 0.2 + u(rng), b = u(rng), c = 0.5 + 2.0 * u(rng), d = 1.5 + u(rng), w = 0.5 + u(rng);
    auto Phi = [=](double tau, double lam) { return std::exp(-a * tau) * (1.0 + b * lam * lam) + 0.3 * std::cos(w * lam); };
    auto Psi = [=](double r) { return d + std::cos(c * r); };
    Vec3 y = random_ball(rng, 1.5);
    if (norm(y) < 0.2) y = y + Vec3{0.3, 0.0, 0.0};
    const double s = 0.5 + 1.5 * u(rng);
    worst = std::max(worst, gs_reduction_check(Phi, Psi, y, s).relative);
  }
  r.pass = worst <= 1e-5;
  r.detail = "max relative disagreement " + fmt(worst) + " over " + std::to_string(draws + 2) + " cases";
  r.seconds = since(t0);
  return r;
}

CheckResult check_self_similar(bool corrupt_L, int points, unsigned seed) {
  const auto t0 = Clock::now();
  CheckResult r;
  r.name = "self_similar_residual";
  const double gamma = 0.75, t = 4.0;
  auto radial = [gamma](const Vec3& q, LVariant variant) {
    const double rr = norm(q), a = gamma * gamma - rr * rr;
    if (a <= 0.0) return 0.0;
    return apply_L_radial(rr, a * a * a, -6.0 * rr * a * a, -6.0 * a * a + 24.0 * rr * rr * a, variant);
  };
  auto psi = [gamma](const Vec3& q) {
    const double a = gamma * gamma - norm2(q);
    return a > 0.0 ? a * a * a : 0.0;
  };
  const LVariant used = corrupt_L ? LVariant::no_zeroth_order : LVariant::full;
  auto L_used = [&](const Vec3& q) { return radial(q, used); };
  auto L_bad = [&](const Vec3& q) { return radial(q, LVariant::no_zeroth_order); };

  std::mt19937_64 rng(seed);
  std::vector<Vec3> xs;
  for (int k = 0; k < points; ++k) xs.push_back(random_ball(rng, 0.5 * gamma * t));
  double scale = 0.0;
  for (const auto& x : xs) scale = std::max(scale, std::fabs(radial(x / t, LVariant::full)) / std::pow(t, 4));

  const std::vector<double> steps{0.2, 0.1, 0.05, 0.025};
  std::vector<double> err, neg;
  for (double h : steps) {
    double e = 0.0, n = 0.0;
    for (const auto& x : xs) {
      e = std::max(e, std::fabs(self_similar_residual(psi, L_used, t, x, h, gamma)));
      n = std::max(n, std::fabs(self_similar_residual(psi, L_bad, t, x, h, gamma)));
    }
    err.push_back(e / scale);
    neg.push_back(n / scale);
  }
  const std::vector<double> ord = orders(err);
  const double min_order = *std::min_element(ord.begin(), ord.end());
  const bool control_flat = neg.back() > 0.1 && neg.back() > 0.5 * neg.front();
  r.pass = min_order >= 1.8 && control_flat;
  r.detail = "relative residuals " + list(err) + ", orders " + list(ord) + ", negative control " + list(neg);
  r.seconds = since(t0);
  return r;
}

CheckResult check_elliptic_convergence(const std::vector<int>& cells, double gamma) {
  const auto t0 = Clock::now();
  CheckResult r;
  r.name = "elliptic_manufactured";
  std::vector<double> err;
  double zero_sup = 0.0;
  for (int n : cells) {
    const double h = gamma / n;
    EllipticProblem pb;
    pb.gamma = gamma;
    pb.source = MomentumGridFunction(elliptic_lattice(gamma, h), 1, GridTag::psi);
    const Lattice& g = pb.source.grid;
    for (int k = 0; k < g.n; ++k)
      for (int j = 0; j < g.n; ++j)
        for (int i = 0; i < g.n; ++i) {
          const Vec3 q = g.node(i, j, k);
          const double rr = norm(q), a = gamma * gamma - rr * rr;
          pb.source.data[g.index(i, j, k)] = apply_L_radial(rr, a * a, -4.0 * rr * a, -4.0 * a + 8.0 * rr * rr);
        }
    const MomentumGridFunction u = solve_dirichlet(pb);
    double e = 0.0;
    for (int k = 0; k < g.n; ++k)
      for (int j = 0; j < g.n; ++j)
        for (int i = 0; i < g.n; ++i) {
          const Vec3 q = g.node(i, j, k);
          if (norm(q) >= gamma) continue;
          const double a = gamma * gamma - norm2(q);
          e = std::max(e, std::fabs(u.data[g.index(i, j, k)] - a * a));
        }
    err.push_back(e);
    if (n == cells.front()) {
      EllipticProblem z = pb;
      std::fill(z.source.data.begin(), z.source.data.end(), 0.0);
      zero_sup = solve_dirichlet(z).max_abs();
    }
  }
  const std::vector<double> ord = orders(err);
  const double min_order = ord.empty() ? 0.0 : *std::min_element(ord.begin(), ord.end());
  r.pass = min_order >= 1.8 && zero_sup == 0.0;
  r.detail = "max errors " + list(err) + ", orders " + list(ord) + ", zero-source sup " + fmt(zero_sup);
  r.seconds = since(t0);
  return r;
}

CheckResult check_lwave(bool full) {
  const auto t0 = Clock::now();
  CheckResult r;
  r.name = "lwave";
  LWaveOptions opt;
  if (!full) {
    opt.cells = 16;
    opt.times = {2.0, 4.0, 8.0};
    opt.samples = 12;
  }
  const LWaveReport rep = lwave_check(opt);
  LWaveOptions zero = opt;
  zero.amplitude = 0.0;
  zero.times = {opt.times.front()};
  const LWaveReport zrep = lwave_check(zero);
  const bool zero_ok = zrep.times.front().sup_err == 0.0 && zrep.times.front().sup_ref == 0.0;
  std::vector<double> errs;
  for (const auto& t : rep.times) errs.push_back(t.sup_err);
  r.pass = rep.pass && zero_ok;
  r.detail = "sup errors " + list(errs) + ", doubling ratios " + list(rep.doubling_ratios) +
             (zero_ok ? ", zero source gives zero" : ", zero source NOT zero");
  r.seconds = since(t0);
  return r;
}

CheckResult check_pusher_order() {
  const auto t0 = Clock::now();
  CheckResult r;
  r.name = "pusher_order";
  const SpeciesSpec s{1.0, 1.0, VelocityModel::relativistic};
  const FieldSampler fields = [](double t, const Vec3& x) {
    FieldSample f;
    f.E = {0.2 * std::cos(x.y), 0.1 * std::sin(x.x + 0.3 * t), 0.05};
    f.B = {0.1, 0.3 * std::cos(x.z), 0.2 * std::sin(x.x)};
    return f;
  };
  const TrajectoryState start{{0.1, 0.2, 0.3}, {0.3, -0.2, 0.1}, 0.0};
  const double T = 4.0;
  auto run = [&](double dt) {
    TrajectoryState st = start;
    const int n = static_cast<int>(std::lround(T / dt));
    for (int k = 0; k < n; ++k) st = push(st, s, fields, dt);
    return st;
  };
  const TrajectoryState ref = run(0.1 / 128);
  std::vector<double> err;
  for (double dt : {0.1, 0.05, 0.025, 0.0125}) {
    const TrajectoryState st = run(dt);
    err.push_back(norm(st.x - ref.x) + norm(st.p - ref.p));
  }
  const std::vector<double> ord = orders(err);
  r.pass = *std::min_element(ord.begin(), ord.end()) >= 1.8;
  r.detail = "errors " + list(err) + ", orders " + list(ord);
  r.seconds = since(t0);
  return r;
}

VerifyReport run_verify(const VerifyOptions& opt) {
  const auto t0 = Clock::now();
  const bool full = opt.suite == Suite::full;
  VerifyReport rep;
  auto guarded = [&](const std::string& name, auto&& fn) {
    const auto c0 = Clock::now();
    try {
      rep.checks.push_back(fn());
    } catch (const std::exception& e) {
      rep.checks.push_back({name, false, std::string("error: ") + e.what(), since(c0)});
    }
  };
  guarded("kinematics_identities", [] { return check_kinematics_identities(); });
  guarded("gs_reduction", [] { return check_gs_sweep(); });
  guarded("self_similar_residual", [&] { return check_self_similar(opt.corrupt_L); });
  guarded("elliptic_manufactured", [&] {
    return check_elliptic_convergence(full ? std::vector<int>{16, 32, 64} : std::vector<int>{8, 16, 32});
  });
  guarded("lwave", [&] { return check_lwave(full); });
  guarded("pusher_order", [] { return check_pusher_order(); });
  rep.seconds = since(t0);
  if (rep.seconds > 60.0 * opt.budget_minutes) {
    rep.over_budget = true;
    rep.warning = "suite took " + fmt(rep.seconds / 60.0) + " min, above the budget of " + fmt(opt.budget_minutes) + " min";
  }
  return rep;
}

}  // namespace rvm
