#include "rvm/analysis.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <sstream>

#include "rvm/artifacts.hpp"
#include "rvm/error.hpp"

namespace rvm {

using nlohmann::json;

std::function<double(const Vec3&)> free_transport_density(const RunConfig& cfg, std::size_t i) {
  const SpeciesSpec s = cfg.species_spec(i);
  const BumpProfile prof = cfg.resolved_profile(i);
  return [s, prof](const Vec3& q) {
    if (s.model == VelocityModel::relativistic && !(norm(q) < 1.0)) return 0.0;
    const Vec3 p = inverse_velocity(q, s);
    return inv_det_D(p, s) * prof.F0(p);
  };
}

AnalysisOptions analysis_options(const RunConfig& cfg, const std::string& thresholds_path) {
  AnalysisOptions o;
  o.kernel_width = cfg.resolved_kernel_width();
  o.velocity_cells = cfg.velocity_cells;
  o.solver_tol = cfg.solver_tol;
  o.fit_t_min = cfg.fit_t_min;
  o.thresholds.vanish_tol = cfg.vanish_tol;
  o.thresholds.vanishing_field_exponent = cfg.vanishing_field_exponent;
  if (thresholds_path.empty()) return o;
  json j;
  try {
    j = json::parse(read_text(thresholds_path));
  } catch (const json::exception& e) {
    throw ArtifactError("corrupt thresholds file " + thresholds_path + ": " + e.what());
  }
  Thresholds& t = o.thresholds;
  const std::map<std::string, double*> keys{{"vanish_tol", &t.vanish_tol},
                                            {"vanishing_field_exponent", &t.vanishing_field_exponent},
                                            {"field_exponent", &t.field_exponent},
                                            {"density_exponent", &t.density_exponent},
                                            {"exponent_tol", &t.exponent_tol},
                                            {"vanishing_density_exponent", &t.vanishing_density_exponent},
                                            {"p_rate", &t.p_rate},
                                            {"p_rate_tol", &t.p_rate_tol},
                                            {"free_transport_tol", &o.free_transport_tol},
                                            {"vanishing_p_rate", &t.vanishing_p_rate},
                                            {"kernel_width", &o.kernel_width},
                                            {"solver_tol", &o.solver_tol},
                                            {"fit_t_min", &o.fit_t_min}};
  for (auto it = j.begin(); it != j.end(); ++it) {
    if (it.key() == "velocity_cells") {
      o.velocity_cells = it.value().get<int>();
      continue;
    }
    const auto k = keys.find(it.key());
    if (k == keys.end()) throw ValidationError(it.key(), "unknown threshold key");
    *k->second = it.value().get<double>();
  }
  return o;
}

namespace {

DyadicTable deviation_table(const DiagnosticsSeries& d, const std::string& col, double power,
                            const std::vector<double>& times) {
  DyadicTable tab;
  const std::vector<double> t = d.times(), v = d.column(col);
  auto at = [&](double T) {
    for (std::size_t k = 0; k < t.size(); ++k)
      if (std::fabs(t[k] - T) <= 1e-9 * std::max(1.0, T)) return std::pow(t[k], power) * v[k];
    throw ValidationError("", "diagnostics lack a row at t = " + std::to_string(T));
  };
  for (std::size_t k = 0; k + 1 < times.size(); ++k) {
    tab.T.push_back(times[k]);
    tab.value.push_back(std::fabs(at(times[k + 1]) - at(times[k])));
  }
  tab.strictly_decreasing = strictly_decreasing(tab.value);
  tab.all_zero = std::all_of(tab.value.begin(), tab.value.end(), [](double x) { return x == 0.0; });
  return tab;
}

json table_json(const DyadicTable& t) {
  return {{"T", t.T}, {"value", t.value}, {"strictly_decreasing", t.strictly_decreasing}, {"all_zero", t.all_zero}};
}

json fit_json(const DecayFit& f) {
  return {{"quantity", f.quantity},       {"window", {f.t1, f.t2}},     {"exponent", f.exponent},
          {"residual", f.residual},       {"samples", f.samples},       {"exact_zero", f.exact_zero}};
}

}  // namespace

AnalysisReport analyze_run(const RunResult& run, const AnalysisOptions& opt) {
  const RunConfig& cfg = run.config;
  AnalysisReport r;
  const std::size_t ns = cfg.species.size();
  if (run.checkpoints.size() < 3)
    throw ValidationError("[diagnostics].checkpoints", "analysis needs at least two checkpoints after t = 0");

  // physical species (configured charges even for uncoupled runs)
  std::vector<SpeciesSpec> species;
  for (std::size_t a = 0; a < ns; ++a) {
    SpeciesSpec s = cfg.species_spec(a);
    s.charge = cfg.species[a].charge;
    species.push_back(s);
  }
  r.beta = std::max(run.beta, cfg.support_p());
  for (std::size_t a = 0; a < ns; ++a) {
    const SupportParams sp = support_params(r.beta, species[a]);
    r.zeta = std::max(r.zeta, sp.zeta);
    r.gamma = std::max(r.gamma, sp.gamma);
  }

  for (const auto& cp : run.checkpoints) r.checkpoint_times.push_back(cp.time);
  const double kw = opt.kernel_width > 0.0 ? opt.kernel_width : cfg.resolved_kernel_width();
  for (std::size_t a = 0; a < ns; ++a) {
    std::vector<MomentumGridFunction> seq;
    for (const auto& cp : run.checkpoints) seq.push_back(cp.F[a]);
    LimitF lf = limit_F(seq, kw);
    r.F_cauchy.push_back(lf.report);
    r.species_mass.push_back(cfg.species[a].profile.mass);
    r.F_inf_mass.push_back(lf.F_inf.integral());
    r.total_mass += cfg.species[a].profile.mass;
    r.F_inf.push_back(std::move(lf.F_inf));
  }

  const int vcells = opt.velocity_cells > 0 ? opt.velocity_cells : cfg.velocity_cells;
  const double tol = opt.solver_tol > 0.0 ? opt.solver_tol : cfg.solver_tol;
  const Lattice vgrid = velocity_lattice(r.gamma, vcells);
  r.rho_inf = limit_rho(r.F_inf, species, vgrid);
  r.j_inf = limit_j(r.rho_inf);
  r.rho_inf_integral = r.rho_inf.integral();
  r.rho_inf_sup = r.rho_inf.max_abs();
  const LimitDerivatives der = limit_derivatives(r.rho_inf, r.j_inf);
  r.E_inf = limit_E(der.E_source, r.gamma, tol, &r.solves);
  r.B_inf = limit_B(der.B_source, r.gamma, tol, &r.solves);
  r.E_inf_sup = r.E_inf.sup_norm();
  r.B_inf_sup = r.B_inf.sup_norm();
  r.rho_scale = density_scale(r.total_mass, r.zeta);
  r.field_scale = r.rho_scale * r.zeta;

  // rescaled comparisons at checkpoints whose cone spans enough cells
  std::vector<MomentumGridFunction> dens;
  for (std::size_t a = 0; a < ns; ++a) dens.push_back(limit_density(r.F_inf[a], species[a], vgrid));
  for (const auto& cp : run.checkpoints) {
    if (!(cp.time > 0.0) || r.zeta * cp.time < 4.0 * run.geometry.dx()) continue;
    r.rescaled.push_back({"rho", rescaled_compare(cp.rho, r.rho_inf, cp.time, r.zeta)});
    for (std::size_t a = 0; a < ns; ++a)
      r.rescaled.push_back({"density_s" + std::to_string(a), rescaled_compare(cp.density[a], dens[a], cp.time, r.zeta)});
  }
  if (!cfg.coupling) {
    for (std::size_t a = 0; a < ns; ++a) {
      const auto ref = free_transport_density(cfg, a);
      const double z = support_params(cfg.resolved_profile(a).support_p(), species[a]).zeta;
      for (const auto& cp : run.checkpoints) {
        if (!(cp.time > 0.0) || z * cp.time < 4.0 * run.geometry.dx()) continue;
        r.free_transport.push_back({"free_s" + std::to_string(a), rescaled_compare(cp.density[a], ref, cp.time, z)});
      }
    }
  }

  // decay fits over the last decade
  const std::vector<double> t = run.diagnostics.times();
  const double t_end = t.empty() ? 0.0 : t.back();
  const double t1 = opt.fit_t_min > 0.0 ? opt.fit_t_min : t_end / 10.0;
  if (t_end >= 10.0 * t1 * (1.0 - 1e-9) && t1 > 0.0) {
    try {
      r.field_fit = decay_fit(t, run.diagnostics.column("supE_cone"), t1, t_end, false, "supE_cone");
      r.density_fit = decay_fit(t, run.diagnostics.column("sup_rho"), t1, t_end, false, "sup_rho");
      r.fits_valid = true;
    } catch (const ValidationError&) {
      r.fits_valid = false;
    }
  }

  // dyadic tables use the checkpoints inside the fit window
  std::vector<double> dyadic;
  for (double c : r.checkpoint_times)
    if (c >= std::max(1.0, t1 * (1.0 - 1e-9))) dyadic.push_back(c);
  if (dyadic.size() >= 2) {
    r.field_deviation = deviation_table(run.diagnostics, "supE_cone", 2.0, dyadic);
    r.density_deviation = deviation_table(run.diagnostics, "sup_rho", 3.0, dyadic);
  }
  if (!run.tracers.empty() && dyadic.size() >= 3) r.p_rate = p_infinity_rate(run.tracers, dyadic);
  if (!run.tracers.empty() && dyadic.size() >= 4) {
    std::vector<ForceField> K;
    for (std::size_t a = 0; a < ns; ++a) {
      const SpeciesSpec s = species[a];
      const double g = r.gamma;
      const MomentumGridFunction* E = &r.E_inf;
      const MomentumGridFunction* B = &r.B_inf;
      K.push_back([s, g, E, B](const Vec3& p) { return K_infinity(p, s, *E, *B, g); });
    }
    r.h = h_convergence(run.tracers, species, K, dyadic);
    r.h_valid = true;
  }

  const double exponent = r.fits_valid ? r.field_fit.exponent : -2.0;
  r.regime = classify_regime(r.rho_inf_sup, r.rho_scale, exponent, opt.thresholds);

  r.max_continuity = run.max_continuity;
  r.max_divB = run.max_divB;
  for (const auto& row : run.diagnostics.rows)
    for (std::size_t a = 0; a < row.weights.size() && a < ns; ++a)
      r.max_weight_drift = std::max(r.max_weight_drift, std::fabs(row.weights[a] - run.diagnostics.rows.front().weights[a]));

  const Thresholds& th = opt.thresholds;
  bool F_exact = true;
  for (const auto& c : r.F_cauchy) F_exact = F_exact && c.exact;
  r.verdicts["F_convergence_exact"] = F_exact;
  r.verdicts["rho_inf_mass"] = std::fabs(r.rho_inf_integral) <= 1e-3 * r.total_mass;
  r.verdicts["field_exponent"] = r.fits_valid && std::fabs(r.field_fit.exponent - th.field_exponent) <= th.exponent_tol;
  r.verdicts["density_exponent"] =
      r.fits_valid && std::fabs(r.density_fit.exponent - th.density_exponent) <= th.exponent_tol;
  r.verdicts["field_deviation_decreasing"] = r.field_deviation.strictly_decreasing;
  r.verdicts["density_deviation_decreasing"] = r.density_deviation.strictly_decreasing;
  r.verdicts["p_rate"] = r.p_rate.exact || std::fabs(r.p_rate.slope - th.p_rate) <= th.p_rate_tol;
  r.verdicts["h_convergence"] = r.h_valid && r.h.verdict;
  r.verdicts["vanishing"] = r.regime == Regime::vanishing;
  if (r.regime == Regime::vanishing) {
    const double ftol = (opt.solver_tol > 0.0 ? opt.solver_tol : cfg.solver_tol) * std::max(r.field_scale, 1.0);
    r.verdicts["vanishing_fields"] = r.E_inf_sup <= ftol && r.B_inf_sup <= ftol;
    r.verdicts["vanishing_density_exponent"] =
        r.fits_valid && r.density_fit.exponent <= th.vanishing_density_exponent;
    r.verdicts["vanishing_p_rate"] = r.p_rate.exact || r.p_rate.slope <= th.vanishing_p_rate;
    r.verdicts["uncorrected_labels_converge"] =
        r.h_valid && (r.h.uncorrected.all_zero || r.h.uncorrected.strictly_decreasing);
  }
  if (!cfg.coupling) {
    // final checkpoint of every species
    bool ok = !r.free_transport.empty();
    for (std::size_t i = 0; i < r.free_transport.size(); ++i) {
      const bool last = i + 1 == r.free_transport.size() || r.free_transport[i + 1].quantity != r.free_transport[i].quantity;
      if (last) ok = ok && r.free_transport[i].cmp.relative() <= opt.free_transport_tol;
    }
    r.verdicts["free_transport"] = ok;
  }
  return r;
}

std::string report_json(const AnalysisReport& r, const AnalysisOptions& opt) {
  json j;
  j["regime"] = to_string(r.regime);
  j["checkpoint_times"] = r.checkpoint_times;
  j["beta"] = r.beta;
  j["zeta"] = r.zeta;
  j["gamma"] = r.gamma;
  j["cone_constant"] = 1.0;
  j["total_mass"] = r.total_mass;
  j["species_mass"] = r.species_mass;
  j["F_inf_mass"] = r.F_inf_mass;
  json fc = json::array();
  for (const auto& c : r.F_cauchy)
    fc.push_back({{"times", c.times}, {"sup_difference", c.sup_difference}, {"exact", c.exact}, {"decreasing", c.decreasing}});
  j["F_cauchy"] = fc;
  j["rho_inf"] = {{"integral", r.rho_inf_integral}, {"sup", r.rho_inf_sup}, {"scale", r.rho_scale}};
  j["E_inf_sup"] = r.E_inf_sup;
  j["B_inf_sup"] = r.B_inf_sup;
  j["field_scale"] = r.field_scale;
  json solves = json::array();
  for (const auto& s : r.solves) solves.push_back({{"iterations", s.iterations}, {"residual", s.residual}});
  j["solves"] = solves;
  json resc = json::array();
  for (const auto& c : r.rescaled)
    resc.push_back({{"quantity", c.quantity}, {"t", c.cmp.time}, {"sup_error", c.cmp.sup_error},
                    {"max_reference", c.cmp.max_reference}, {"relative", c.cmp.relative()}});
  j["rescaled"] = resc;
  if (!r.free_transport.empty()) {
    json ft = json::array();
    for (const auto& c : r.free_transport)
      ft.push_back({{"quantity", c.quantity}, {"t", c.cmp.time}, {"sup_error", c.cmp.sup_error},
                    {"max_reference", c.cmp.max_reference}, {"relative", c.cmp.relative()}});
    j["free_transport"] = ft;
    j["free_transport_tol"] = opt.free_transport_tol;
  }
  if (r.fits_valid) j["fits"] = {fit_json(r.field_fit), fit_json(r.density_fit)};
  j["field_deviation"] = table_json(r.field_deviation);
  j["density_deviation"] = table_json(r.density_deviation);
  j["p_rate"] = {{"table", table_json(r.p_rate.differences)}, {"slope", std::isfinite(r.p_rate.slope) ? json(r.p_rate.slope) : json("-inf")},
                 {"exact", r.p_rate.exact}};
  if (r.h_valid)
    j["h_convergence"] = {{"corrected", table_json(r.h.corrected)}, {"uncorrected", table_json(r.h.uncorrected)},
                          {"min_AK", r.h.min_AK}, {"max_AK", r.h.max_AK}, {"verdict", r.h.verdict}};
  j["conservation"] = {{"max_continuity", r.max_continuity}, {"max_divB", r.max_divB},
                       {"max_weight_drift", r.max_weight_drift}};
  const Thresholds& th = opt.thresholds;
  j["thresholds"] = {{"vanish_tol", th.vanish_tol},
                     {"vanishing_field_exponent", th.vanishing_field_exponent},
                     {"field_exponent", th.field_exponent},
                     {"density_exponent", th.density_exponent},
                     {"exponent_tol", th.exponent_tol},
                     {"vanishing_density_exponent", th.vanishing_density_exponent},
                     {"p_rate", th.p_rate},
                     {"p_rate_tol", th.p_rate_tol},
                     {"vanishing_p_rate", th.vanishing_p_rate}};
  j["verdicts"] = r.verdicts;
  return j.dump(2) + "\n";
}

void write_analysis(const AnalysisReport& r, const AnalysisOptions& opt, const std::string& dir) {
  ensure_directory(dir);
  const RunLayout lay{dir};
  write_text(lay.path("analysis.json"), report_json(r, opt));
  std::ostringstream rs;
  rs << "quantity,t,sup_error,max_reference,relative\n" << std::setprecision(17);
  for (const auto* list : {&r.rescaled, &r.free_transport})
    for (const auto& c : *list)
      rs << c.quantity << ',' << c.cmp.time << ',' << c.cmp.sup_error << ',' << c.cmp.max_reference << ','
         << c.cmp.relative() << '\n';
  write_text(lay.path("rescaled.csv"), rs.str());
  std::ostringstream dy;
  dy << "T,field_deviation,density_deviation,p_difference,S_corrected,S_uncorrected\n" << std::setprecision(17);
  for (std::size_t k = 0; k < r.field_deviation.T.size(); ++k) {
    dy << r.field_deviation.T[k] << ',' << r.field_deviation.value[k] << ',' << r.density_deviation.value[k] << ',';
    dy << (k < r.p_rate.differences.value.size() ? r.p_rate.differences.value[k] : NAN) << ',';
    dy << (r.h_valid && k < r.h.corrected.value.size() ? r.h.corrected.value[k] : NAN) << ',';
    dy << (r.h_valid && k < r.h.uncorrected.value.size() ? r.h.uncorrected.value[k] : NAN) << '\n';
  }
  write_text(lay.path("dyadic.csv"), dy.str());
  write_grid(lay.path("rho_inf.rvmh"), r.rho_inf);
  write_grid(lay.path("j_inf.rvmh"), r.j_inf);
  write_grid(lay.path("E_inf.rvmh"), r.E_inf);
  write_grid(lay.path("B_inf.rvmh"), r.B_inf);
  for (std::size_t a = 0; a < r.F_inf.size(); ++a) write_grid(lay.path("F_inf_s" + std::to_string(a) + ".rvmh"), r.F_inf[a]);
}

}  // namespace rvm
