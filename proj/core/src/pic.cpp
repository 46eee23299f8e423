#include "rvm/pic.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <iomanip>
#include <sstream>

#include "rvm/artifacts.hpp"
#include "rvm/asymptotics.hpp"
#include "rvm/deposit.hpp"
#include "rvm/error.hpp"
#include "rvm/parallel.hpp"

namespace rvm {

std::size_t ParticleEnsemble::count(int s) const {
  return static_cast<std::size_t>(std::count(species_id.begin(), species_id.end(), s));
}

double ParticleEnsemble::total_weight(int s) const {
  double w = 0.0;
  for (std::size_t k = 0; k < size(); ++k)
    if (species_id[k] == s) w += weight[k];
  return w;
}

ParticleEnsemble build_ensemble(const RunConfig& cfg) {
  ParticleEnsemble ens;
  ens.seed = cfg.seed;
  std::vector<std::vector<Particle>> sampled(cfg.species.size());
  for (std::size_t a = 0; a < cfg.species.size(); ++a) {
    const SpeciesConfig& s = cfg.species[a];
    ens.species.push_back(cfg.species_spec(a));
    ens.charge.push_back(s.charge);
    if (s.mirror_of >= 0) {
      sampled[a] = mirror_particles(sampled[static_cast<std::size_t>(s.mirror_of)], static_cast<int>(a));
      const double w = s.profile.mass / static_cast<double>(sampled[a].size());
      for (std::size_t k = 0; k < sampled[a].size(); ++k) {
        sampled[a][k].weight = w;
        sampled[a][k].tracer = k < s.tracers;
      }
    } else {
      SamplingOptions opt;
      opt.count = s.count;
      opt.method = s.sampling;
      opt.antithetic = s.antithetic;
      opt.tracers = s.tracers;
      opt.seed = cfg.seed;
      sampled[a] = sample_particles(s.profile, static_cast<int>(a), opt);
    }
  }
  for (const auto& list : sampled)
    for (const Particle& q : list) {
      ens.x.push_back(q.x);
      ens.p.push_back(q.p);
      ens.weight.push_back(q.weight);
      ens.species_id.push_back(q.species);
      ens.tracer.push_back(q.tracer ? 1 : 0);
    }
  return ens;
}

namespace {

const char* kExtraColumns[] = {"sup_rho", "sup_j", "sup_density", "max_x", "max_Y", "beta", "continuity",
                               "cone_radius"};

double row_value(const DiagnosticsRow& r, const std::string& name) {
  const FieldDiagnostics& f = r.field;
  if (name == "time") return f.time;
  if (name == "supE_cone") return f.supE_cone;
  if (name == "supB_cone") return f.supB_cone;
  if (name == "supE") return f.supE;
  if (name == "supB") return f.supB;
  if (name == "divE_res") return f.divE_residual;
  if (name == "divB_res") return f.divB_residual;
  if (name == "energy") return f.energy;
  if (name == "supDE_cone") return f.supDE_cone;
  if (name == "supDB_cone") return f.supDB_cone;
  if (name == "sup_rho") return r.sup_rho;
  if (name == "sup_j") return r.sup_j;
  if (name == "sup_density") return r.sup_density;
  if (name == "max_x") return r.max_x;
  if (name == "max_Y") return r.max_Y;
  if (name == "beta") return r.beta;
  if (name == "continuity") return r.continuity;
  if (name == "cone_radius") return f.cone_radius;
  if (name.rfind("weight_", 0) == 0) {
    const auto a = static_cast<std::size_t>(std::stoul(name.substr(7)));
    if (a < r.weights.size()) return r.weights[a];
  }
  throw ValidationError("", "unknown diagnostics column '" + name + "'");
}

}  // namespace

std::string DiagnosticsSeries::csv_header() const {
  std::string h = diagnostics_csv_header();
  for (const char* c : kExtraColumns) h += std::string(",") + c;
  const std::size_t ns = rows.empty() ? 0 : rows.front().weights.size();
  for (std::size_t a = 0; a < ns; ++a) h += ",weight_" + std::to_string(a);
  return h;
}

std::string DiagnosticsSeries::to_csv() const {
  std::ostringstream os;
  os << csv_header() << '\n' << std::setprecision(17);
  for (const auto& r : rows) {
    os << to_csv_row(r.field);
    for (const char* c : kExtraColumns) os << ',' << row_value(r, c);
    for (double w : r.weights) os << ',' << w;
    os << '\n';
  }
  return os.str();
}

std::vector<double> DiagnosticsSeries::column(const std::string& name) const {
  std::vector<double> v;
  v.reserve(rows.size());
  for (const auto& r : rows) v.push_back(row_value(r, name));
  return v;
}

std::vector<double> DiagnosticsSeries::times() const { return column("time"); }

DiagnosticsSeries DiagnosticsSeries::from_csv(const std::string& text) {
  std::istringstream is(text);
  std::string line;
  if (!std::getline(is, line)) throw ArtifactError("diagnostics CSV is empty");
  std::vector<std::string> cols;
  {
    std::stringstream ss(line);
    std::string c;
    while (std::getline(ss, c, ',')) cols.push_back(c);
  }
  DiagnosticsSeries s;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    std::stringstream ss(line);
    std::string cell;
    std::vector<double> v;
    while (std::getline(ss, cell, ',')) v.push_back(std::stod(cell));
    if (v.size() != cols.size()) throw ArtifactError("diagnostics CSV row has " + std::to_string(v.size()) + " cells");
    DiagnosticsRow r;
    for (std::size_t k = 0; k < cols.size(); ++k) {
      const std::string& c = cols[k];
      FieldDiagnostics& f = r.field;
      if (c == "time") f.time = v[k];
      else if (c == "supE_cone") f.supE_cone = v[k];
      else if (c == "supB_cone") f.supB_cone = v[k];
      else if (c == "supE") f.supE = v[k];
      else if (c == "supB") f.supB = v[k];
      else if (c == "divE_res") f.divE_residual = v[k];
      else if (c == "divB_res") f.divB_residual = v[k];
      else if (c == "energy") f.energy = v[k];
      else if (c == "supDE_cone") f.supDE_cone = v[k];
      else if (c == "supDB_cone") f.supDB_cone = v[k];
      else if (c == "sup_rho") r.sup_rho = v[k];
      else if (c == "sup_j") r.sup_j = v[k];
      else if (c == "sup_density") r.sup_density = v[k];
      else if (c == "max_x") r.max_x = v[k];
      else if (c == "max_Y") r.max_Y = v[k];
      else if (c == "beta") r.beta = v[k];
      else if (c == "continuity") r.continuity = v[k];
      else if (c == "cone_radius") f.cone_radius = v[k];
      else if (c.rfind("weight_", 0) == 0) r.weights.push_back(v[k]);
      else throw ArtifactError("diagnostics CSV has unknown column '" + c + "'");
    }
    s.rows.push_back(std::move(r));
  }
  return s;
}

MomentumGridFunction density_on_nodes(const ParticleEnsemble& ens, const GridGeometry& g, int species, int workers,
                                      double time) {
  std::vector<Vec3> x;
  std::vector<double> w;
  for (std::size_t k = 0; k < ens.size(); ++k) {
    if (species >= 0 && ens.species_id[k] != species) continue;
    x.push_back(ens.x[k]);
    w.push_back(species >= 0 ? ens.weight[k] : ens.weight[k] * ens.charge[static_cast<std::size_t>(ens.species_id[k])]);
  }
  MomentumGridFunction f(Lattice{g.cells, -g.extent, g.dx()}, 1, species >= 0 ? GridTag::space_density : GridTag::space_rho,
                         species);
  f.time = time;
  deposit_rho(x, w, g, f.data, workers);
  return f;
}

RunResult run_coupled(const RunConfig& cfg, const std::string& output_dir) {
  cfg.validate();
  const auto wall0 = std::chrono::steady_clock::now();
  const int workers = workers_from_env(cfg.workers);
  RunResult res;
  res.config = cfg;
  res.geometry = GridGeometry(cfg.cells, cfg.resolved_extent());
  const GridGeometry& g = res.geometry;
  const double dt = cfg.resolved_dt();
  res.dt = dt;
  const long nsteps = std::lround(cfg.t_max / dt);
  const std::size_t nspecies = cfg.species.size();

  ParticleEnsemble ens = build_ensemble(cfg);
  const std::size_t np = ens.size();
  const double L = cfg.support_x();
  const double slack = cfg.cone_slack * g.dx();

  // dynamical charge per particle (zero when uncoupled)
  std::vector<double> qw(np);
  for (std::size_t k = 0; k < np; ++k)
    qw[k] = ens.species[static_cast<std::size_t>(ens.species_id[k])].charge * ens.weight[k];

  double charge_scale = 0.0;
  for (double q : qw) charge_scale += std::fabs(q);

  std::vector<double> rho;
  deposit_rho(ens.x, qw, g, rho, workers);
  res.final_fields =
      cfg.coupling ? init_fields(rho, nullptr, g, dt, cfg.neutrality_tol, charge_scale) : FieldGrid(g, dt);
  FieldGrid& fields = res.final_fields;

  std::vector<long> checkpoint_steps;
  for (double t : cfg.checkpoints) checkpoint_steps.push_back(std::lround(t / dt));

  std::vector<Vec3> p_prev = ens.p, p_new(np), x_new(np);
  auto kick_all = [&](const std::vector<Vec3>& pin, std::vector<Vec3>& pout, double h) {
    parallel_chunks(np, workers, [&](std::size_t b, std::size_t e, int) {
      for (std::size_t k = b; k < e; ++k) {
        const SpeciesSpec& s = ens.species[static_cast<std::size_t>(ens.species_id[k])];
        if (s.charge == 0.0) {
          pout[k] = pin[k];
          continue;
        }
        const FieldSample f = sample_fields(fields, ens.x[k]);
        pout[k] = boris_kick(pin[k], f.E, f.B, s, h);
      }
    });
  };
  if (cfg.coupling) kick_all(ens.p, p_prev, -0.5 * dt);  // p^{-1/2}

  std::vector<std::size_t> tracer_index;
  for (std::size_t k = 0; k < np; ++k)
    if (ens.tracer[k]) {
      tracer_index.push_back(k);
      TracerRecord rec;
      rec.id = static_cast<int>(res.tracers.size());
      rec.species = ens.species_id[k];
      res.tracers.push_back(rec);
    }

  const Lattice hist = Lattice::symmetric(cfg.resolved_histogram_halfwidth(), cfg.histogram_spacing);
  StaggeredVector j(g.size());
  std::vector<double> rho_new;
  double continuity_since_row = 0.0;
  double initial_divE = -1.0;
  double zeta_run = 0.0;
  std::vector<Vec3> P(np);

  for (long n = 0;; ++n) {
    const double t = static_cast<double>(n) * dt;
    fields.time = t;
    if (cfg.coupling)
      kick_all(p_prev, p_new, dt);
    else
      p_new = p_prev;
    for (std::size_t k = 0; k < np; ++k) P[k] = 0.5 * (p_prev[k] + p_new[k]);

    const bool is_checkpoint = std::find(checkpoint_steps.begin(), checkpoint_steps.end(), n) != checkpoint_steps.end();
    const bool last = n == nsteps;
    if (n % cfg.diag_every == 0 || is_checkpoint || last) {
      DiagnosticsRow row;
      double beta = 0.0, max_x = 0.0, max_Y = 0.0;
      for (std::size_t k = 0; k < np; ++k) {
        const SpeciesSpec& s = ens.species[static_cast<std::size_t>(ens.species_id[k])];
        beta = std::max(beta, norm(P[k]));
        max_x = std::max(max_x, norm(ens.x[k]));
        max_Y = std::max(max_Y, norm(ens.x[k] - t * velocity(P[k], s)));
      }
      // cone |x| <= gamma t with the widest gamma over species
      SupportParams sp;
      for (std::size_t a = 0; a < nspecies; ++a) {
        const SupportParams s = support_params(beta, ens.species[a]);
        if (s.gamma >= sp.gamma) sp = s;
      }
      if (!cfg.coupling) rho = density_on_nodes(ens, g, -1, workers, t).data;
      // uncoupled fields stay zero and answer to zero charge
      row.field = cfg.coupling ? field_diagnostics(fields, rho, sp)
                               : field_diagnostics(fields, std::vector<double>(rho.size(), 0.0), sp);
      if (initial_divE < 0.0) initial_divE = row.field.divE_residual;
      res.max_divE_drift = std::max(res.max_divE_drift, std::fabs(row.field.divE_residual - initial_divE));
      res.max_divB = std::max(res.max_divB, row.field.divB_residual);
      for (double v : rho) row.sup_rho = std::max(row.sup_rho, std::fabs(v));
      for (std::size_t m = 0; m < j.size(); ++m)
        row.sup_j = std::max(row.sup_j, std::sqrt(j.x[m] * j.x[m] + j.y[m] * j.y[m] + j.z[m] * j.z[m]));
      row.max_x = max_x;
      row.max_Y = max_Y;
      row.beta = beta;
      row.continuity = continuity_since_row;
      continuity_since_row = 0.0;
      for (std::size_t a = 0; a < nspecies; ++a) {
        row.weights.push_back(ens.total_weight(static_cast<int>(a)));
      }
      if (is_checkpoint || n == 0) {
        Checkpoint cp;
        cp.time = t;
        for (std::size_t a = 0; a < nspecies; ++a) {
          cp.F.push_back(spatial_average(P, ens.weight, ens.species_id, static_cast<int>(a), hist, t));
          cp.density.push_back(density_on_nodes(ens, g, static_cast<int>(a), workers, t));
          row.sup_density = std::max(row.sup_density, cp.density.back().max_abs());
        }
        cp.rho = MomentumGridFunction(Lattice{g.cells, -g.extent, g.dx()}, 1, GridTag::space_rho, -1);
        cp.rho.time = t;
        cp.rho.data = rho;
        res.checkpoints.push_back(std::move(cp));
        if (!output_dir.empty() && cfg.field_snapshots == "checkpoints") {
          ensure_directory(output_dir);
          write_snapshot(RunLayout{output_dir}.fields(res.checkpoints.size() - 1), fields);
        }
      }
      res.diagnostics.rows.push_back(std::move(row));
      for (std::size_t m = 0; m < tracer_index.size(); ++m) {
        const std::size_t k = tracer_index[m];
        res.tracers[m].append(t, ens.x[k], P[k], ens.species[static_cast<std::size_t>(ens.species_id[k])]);
      }
    }
    if (last) break;

    double vmax = 0.0;
    for (std::size_t k = 0; k < np; ++k) {
      const Vec3 v = velocity(p_new[k], ens.species[static_cast<std::size_t>(ens.species_id[k])]);
      vmax = std::max(vmax, norm(v));
      x_new[k] = ens.x[k] + dt * v;
      res.beta = std::max(res.beta, norm(p_new[k]));
    }
    zeta_run = std::max(zeta_run, vmax);
    const double t1 = t + dt;
    const double bound = zeta_run * t1 + L + slack;
    for (std::size_t k = 0; k < np; ++k)
      if (norm(x_new[k]) > bound) {
        std::ostringstream os;
        os << "particle " << k << " at |x| = " << norm(x_new[k]) << " left the support cone zeta*t + L = " << bound
           << " at t = " << t1;
        throw ConeEscapeError(os.str());
      }
    if (cfg.coupling) {
      deposit_current(ens.x, x_new, qw, g, dt, j, workers);
      deposit_rho(x_new, qw, g, rho_new, workers);
      double rmax = 0.0;
      for (double v : rho_new) rmax = std::max(rmax, std::fabs(v));
      const double cres = continuity_residual(rho, rho_new, j, g, dt) / std::max(rmax, 1e-300);
      continuity_since_row = std::max(continuity_since_row, cres);
      res.max_continuity = std::max(res.max_continuity, cres);
      rho.swap(rho_new);
      fields.time = t;
      step_fields(fields, j);
    }
    ens.x.swap(x_new);
    p_prev.swap(p_new);
  }
  fields.time = static_cast<double>(nsteps) * dt;
  res.max_speed = zeta_run;
  res.initial_divE_residual = initial_divE;
  for (auto& rec : res.tracers) {
    rec.P_inf = rec.P.back();
    const SpeciesSpec& s = ens.species[static_cast<std::size_t>(rec.species)];
    const Vec3 v = velocity(rec.P_inf, s);
    rec.label.clear();
    for (std::size_t k = 0; k < rec.size(); ++k) rec.label.push_back(rec.X[k] - rec.times[k] * v);
  }
  res.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - wall0).count();
  if (!output_dir.empty()) write_run(res, output_dir);
  return res;
}

}  // namespace rvm
