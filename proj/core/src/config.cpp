#include "rvm/config.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

#include "rvm/error.hpp"

namespace rvm {
namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string fmt(const Vec3& v) { return fmt(v.x) + ", " + fmt(v.y) + ", " + fmt(v.z); }

std::string fmt(const std::vector<double>& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? ", " : "") + fmt(v[i]);
  return s;
}

std::string key_path(const std::string& section, const std::string& key) { return "[" + section + "]." + key; }

double to_double(const std::string& v, const std::string& where) {
  try {
    std::size_t pos = 0;
    const double d = std::stod(v, &pos);
    if (trim(v.substr(pos)).empty() && std::isfinite(d)) return d;
  } catch (const std::exception&) {
  }
  throw ValidationError(where, "expected a number, got '" + v + "'");
}

long long to_integer(const std::string& v, const std::string& where) {
  try {
    std::size_t pos = 0;
    const long long n = std::stoll(v, &pos);
    if (trim(v.substr(pos)).empty()) return n;
  } catch (const std::exception&) {
  }
  throw ValidationError(where, "expected an integer, got '" + v + "'");
}

bool to_bool(const std::string& v, const std::string& where) {
  if (v == "true" || v == "on" || v == "yes" || v == "1") return true;
  if (v == "false" || v == "off" || v == "no" || v == "0") return false;
  throw ValidationError(where, "expected a boolean, got '" + v + "'");
}

std::vector<double> to_list(const std::string& v, const std::string& where) {
  std::vector<double> out;
  if (trim(v).empty()) return out;
  std::stringstream ss(v);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(to_double(trim(item), where));
  return out;
}

Vec3 to_vec3(const std::string& v, const std::string& where) {
  const auto l = to_list(v, where);
  if (l.size() != 3) throw ValidationError(where, "expected three comma-separated numbers");
  return {l[0], l[1], l[2]};
}

SamplingMethod to_sampling(const std::string& v, const std::string& where) {
  if (v == "sobol") return SamplingMethod::sobol;
  if (v == "random") return SamplingMethod::random;
  throw ValidationError(where, "expected 'sobol' or 'random', got '" + v + "'");
}

void set_species(SpeciesConfig& s, const std::string& key, const std::string& v, const std::string& where) {
  if (key == "mass") s.mass = to_double(v, where);
  else if (key == "charge") s.charge = to_double(v, where);
  else if (key == "total") s.profile.mass = to_double(v, where);
  else if (key == "x_center") s.profile.center_x = to_vec3(v, where);
  else if (key == "x_width") s.profile.width_x = to_double(v, where);
  else if (key == "p_center") s.profile.center_p = to_vec3(v, where);
  else if (key == "p_width") s.profile.width_p = to_double(v, where);
  else if (key == "count") {
    const long long n = to_integer(v, where);
    if (n < 1) throw ValidationError(where, "must be at least 1");
    s.count = static_cast<std::size_t>(n);
  } else if (key == "sampling") s.sampling = to_sampling(v, where);
  else if (key == "antithetic") s.antithetic = to_bool(v, where);
  else if (key == "tracers") {
    const long long n = to_integer(v, where);
    if (n < 0) throw ValidationError(where, "must be nonnegative");
    s.tracers = static_cast<std::size_t>(n);
  } else if (key == "mirror_of") s.mirror_of = static_cast<int>(to_integer(v, where));
  else throw ValidationError(where, "unknown key");
}

void set_key(RunConfig& c, const std::string& section, const std::string& key, const std::string& v) {
  const std::string where = key_path(section, key);
  if (section == "domain") {
    if (key == "cells") c.cells = static_cast<int>(to_integer(v, where));
    else if (key == "extent") c.extent = to_double(v, where);
    else if (key == "pad") c.pad = to_double(v, where);
    else throw ValidationError(where, "unknown key");
  } else if (section == "time") {
    if (key == "dt") c.dt = to_double(v, where);
    else if (key == "cfl") c.cfl = to_double(v, where);
    else if (key == "t_max") c.t_max = to_double(v, where);
    else throw ValidationError(where, "unknown key");
  } else if (section == "model") {
    if (key == "velocity") c.velocity = velocity_model_from_string(v);
    else if (key == "coupling") c.coupling = to_bool(v, where);
    else throw ValidationError(where, "unknown key");
  } else if (section == "diagnostics") {
    if (key == "every") c.diag_every = static_cast<int>(to_integer(v, where));
    else if (key == "checkpoints") c.checkpoints = to_list(v, where);
    else if (key == "histogram_spacing") c.histogram_spacing = to_double(v, where);
    else if (key == "histogram_halfwidth") c.histogram_halfwidth = to_double(v, where);
    else if (key == "field_snapshots") c.field_snapshots = v;
    else if (key == "cone_slack") c.cone_slack = to_double(v, where);
    else throw ValidationError(where, "unknown key");
  } else if (section == "analysis") {
    if (key == "kernel_width") c.kernel_width = to_double(v, where);
    else if (key == "velocity_cells") c.velocity_cells = static_cast<int>(to_integer(v, where));
    else if (key == "vanish_tol") c.vanish_tol = to_double(v, where);
    else if (key == "vanishing_field_exponent") c.vanishing_field_exponent = to_double(v, where);
    else if (key == "fit_t_min") c.fit_t_min = to_double(v, where);
    else if (key == "solver_tol") c.solver_tol = to_double(v, where);
    else throw ValidationError(where, "unknown key");
  } else if (section == "run") {
    if (key == "seed") c.seed = static_cast<std::uint64_t>(to_integer(v, where));
    else if (key == "workers") c.workers = static_cast<int>(to_integer(v, where));
    else if (key == "output") c.output = v;
    else if (key == "neutrality_tol") c.neutrality_tol = to_double(v, where);
    else throw ValidationError(where, "unknown key");
  } else {
    throw ValidationError("[" + section + "]", "unknown section");
  }
}

}  // namespace

double RunConfig::support_x() const {
  double L = 0.0;
  for (std::size_t i = 0; i < species.size(); ++i) L = std::max(L, resolved_profile(i).support_x());
  return L;
}

double RunConfig::support_p() const {
  double b = 0.0;
  for (std::size_t i = 0; i < species.size(); ++i) b = std::max(b, resolved_profile(i).support_p());
  return b;
}

double RunConfig::resolved_extent() const { return extent > 0.0 ? extent : t_max + support_x() + pad; }

double RunConfig::resolved_dt() const {
  if (dt > 0.0) return dt;
  const double h = dx() / std::sqrt(3.0);
  // snap so that t_max, and where possible every checkpoint, is a whole number of steps
  const double target = cfl * h;
  const long first = std::max(1L, static_cast<long>(std::ceil(t_max / target - 1e-9)));
  auto lands = [&](long n) {
    for (double c : checkpoints) {
      const double k = c * n / t_max;
      if (std::fabs(k - std::round(k)) > 1e-9 * std::max(1.0, k)) return false;
    }
    return true;
  };
  for (long n = first; n < 4 * first + 64; ++n)
    if (lands(n)) return t_max / n;
  return t_max / first;
}

double RunConfig::resolved_histogram_halfwidth() const {
  if (histogram_halfwidth > 0.0) return histogram_halfwidth;
  return 1.5 * support_p() + 4.0 * histogram_spacing;
}

SpeciesSpec RunConfig::species_spec(std::size_t i) const {
  const SpeciesConfig& s = species.at(i);
  SpeciesSpec spec;
  spec.mass = s.mass;
  spec.charge = coupling ? s.charge : 0.0;
  spec.model = velocity;
  const BumpProfile prof = resolved_profile(i);
  spec.support_x = prof.support_x();
  spec.support_p = prof.support_p();
  return spec;
}

BumpProfile RunConfig::resolved_profile(std::size_t i) const {
  const SpeciesConfig& s = species.at(i);
  if (s.mirror_of < 0) return s.profile;
  if (static_cast<std::size_t>(s.mirror_of) >= i)
    throw ValidationError("[species." + std::to_string(i) + "].mirror_of", "must name an earlier species");
  BumpProfile p = resolved_profile(static_cast<std::size_t>(s.mirror_of)).mirrored();
  p.mass = s.profile.mass;
  return p;
}

void RunConfig::validate() const {
  if (cells < 4 || cells % 2 != 0) throw ValidationError("[domain].cells", "must be an even integer >= 4");
  if (!(pad >= 0.0)) throw ValidationError("[domain].pad", "must be nonnegative");
  if (!(t_max > 0.0)) throw ValidationError("[time].t_max", "must be positive");
  if (!(cfl > 0.0 && cfl <= 1.0)) throw ValidationError("[time].cfl", "must lie in (0, 1]");
  if (species.empty()) throw ValidationError("[species.0]", "at least one species is required");

  double net = 0.0, total = 0.0;
  for (std::size_t i = 0; i < species.size(); ++i) {
    const std::string sec = "[species." + std::to_string(i) + "].";
    const SpeciesConfig& s = species[i];
    if (!(s.mass > 0.0)) throw ValidationError(sec + "mass", "must be positive");
    if (!(s.profile.mass >= 0.0)) throw ValidationError(sec + "total", "must be nonnegative");
    if (!(s.profile.width_x > 0.0)) throw ValidationError(sec + "x_width", "must be positive");
    if (!(s.profile.width_p > 0.0)) throw ValidationError(sec + "p_width", "must be positive");
    if (s.mirror_of >= static_cast<int>(i)) throw ValidationError(sec + "mirror_of", "must name an earlier species");
    if (s.mirror_of >= 0 && species[static_cast<std::size_t>(s.mirror_of)].count != s.count)
      throw ValidationError(sec + "count", "a mirrored species must have the same count as its source");
    const BumpProfile prof = resolved_profile(i);
    if (velocity == VelocityModel::classical && !(prof.support_p() < 1.0))
      throw ValidationError(sec + "p_width", "classical model requires momentum support < 1, got " +
                                                 std::to_string(prof.support_p()));
    const SupportParams sp = support_params(prof.support_p(), species_spec(i));
    if (!(1.0 - sp.gamma * sp.gamma > 0.01))
      throw ValidationError(sec + "p_width", "ellipticity margin 1 - gamma^2 = " +
                                                 std::to_string(1.0 - sp.gamma * sp.gamma) + " is below 0.01");
    net += s.charge * s.profile.mass;
    total += std::fabs(s.charge) * s.profile.mass;
  }
  if (coupling && std::fabs(net) > neutrality_tol * std::max(total, 1e-300) && std::fabs(net) > 0.0)
    throw ValidationError("[species].charge", "initial data is not neutral: sum e*M = " + std::to_string(net));

  const double ext = resolved_extent();
  if (!(ext > 0.0)) throw ValidationError("[domain].extent", "must be positive");
  const double h = 2.0 * ext / cells;
  const double bound = h / std::sqrt(3.0);
  const double step = resolved_dt();
  if (!(step > 0.0) || step > bound * (1.0 + 1e-12))
    throw ValidationError("[time].dt", "dt = " + fmt(step) + " violates the CFL bound dx/sqrt(3) = " + fmt(bound));
  if (ext < t_max + support_x())
    throw ValidationError("[domain].extent", "box half-width " + fmt(ext) + " does not contain the light cone t_max + L = " +
                                                 fmt(t_max + support_x()));

  if (diag_every < 1) throw ValidationError("[diagnostics].every", "must be at least 1");
  double prev = 0.0;
  for (double t : checkpoints) {
    if (!(t > prev) || t > t_max * (1.0 + 1e-12))
      throw ValidationError("[diagnostics].checkpoints", "must be increasing times in (0, t_max]");
    prev = t;
  }
  if (!(histogram_spacing > 0.0)) throw ValidationError("[diagnostics].histogram_spacing", "must be positive");
  if (field_snapshots != "none" && field_snapshots != "final" && field_snapshots != "checkpoints")
    throw ValidationError("[diagnostics].field_snapshots", "expected none, final or checkpoints");
  if (!(cone_slack >= 0.0)) throw ValidationError("[diagnostics].cone_slack", "must be nonnegative");
  if (velocity_cells < 4) throw ValidationError("[analysis].velocity_cells", "must be at least 4");
  if (!(vanish_tol > 0.0)) throw ValidationError("[analysis].vanish_tol", "must be positive");
  if (!(solver_tol > 0.0)) throw ValidationError("[analysis].solver_tol", "must be positive");
  if (workers < 1) throw ValidationError("[run].workers", "must be at least 1");
}

RunConfig parse_config(std::istream& is) {
  RunConfig c;
  std::string line, section;
  int lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') throw ValidationError("", "line " + std::to_string(lineno) + ": malformed section header");
      section = trim(line.substr(1, line.size() - 2));
      if (section.rfind("species.", 0) == 0) {
        const long long idx = to_integer(section.substr(8), "[" + section + "]");
        if (idx < 0 || idx > 64) throw ValidationError("[" + section + "]", "species index out of range");
        if (c.species.size() <= static_cast<std::size_t>(idx)) c.species.resize(static_cast<std::size_t>(idx) + 1);
      } else if (section != "domain" && section != "time" && section != "model" && section != "diagnostics" &&
                 section != "analysis" && section != "run") {
        throw ValidationError("[" + section + "]", "unknown section");
      }
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ValidationError("", "line " + std::to_string(lineno) + ": expected key = value");
    if (section.empty()) throw ValidationError("", "line " + std::to_string(lineno) + ": key outside any section");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (section.rfind("species.", 0) == 0) {
      const auto idx = static_cast<std::size_t>(std::stoll(section.substr(8)));
      set_species(c.species[idx], key, value, key_path(section, key));
    } else {
      set_key(c, section, key, value);
    }
  }
  return c;
}

RunConfig parse_config_string(const std::string& text) {
  std::istringstream is(text);
  return parse_config(is);
}

RunConfig load_config(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw ArtifactError("cannot open config " + path);
  return parse_config(is);
}

std::string serialize_config(const RunConfig& c) {
  std::ostringstream os;
  os << "[domain]\ncells = " << c.cells << "\nextent = " << fmt(c.extent) << "\npad = " << fmt(c.pad) << "\n\n";
  os << "[time]\ndt = " << fmt(c.dt) << "\ncfl = " << fmt(c.cfl) << "\nt_max = " << fmt(c.t_max) << "\n\n";
  os << "[model]\nvelocity = " << to_string(c.velocity) << "\ncoupling = " << (c.coupling ? "on" : "off") << "\n\n";
  for (std::size_t i = 0; i < c.species.size(); ++i) {
    const SpeciesConfig& s = c.species[i];
    os << "[species." << i << "]\n"
       << "mass = " << fmt(s.mass) << "\ncharge = " << fmt(s.charge) << "\ntotal = " << fmt(s.profile.mass)
       << "\nx_center = " << fmt(s.profile.center_x) << "\nx_width = " << fmt(s.profile.width_x)
       << "\np_center = " << fmt(s.profile.center_p) << "\np_width = " << fmt(s.profile.width_p)
       << "\ncount = " << s.count << "\nsampling = " << (s.sampling == SamplingMethod::sobol ? "sobol" : "random")
       << "\nantithetic = " << (s.antithetic ? "true" : "false") << "\ntracers = " << s.tracers
       << "\nmirror_of = " << s.mirror_of << "\n\n";
  }
  os << "[diagnostics]\nevery = " << c.diag_every << "\ncheckpoints = " << fmt(c.checkpoints)
     << "\nhistogram_spacing = " << fmt(c.histogram_spacing) << "\nhistogram_halfwidth = " << fmt(c.histogram_halfwidth)
     << "\nfield_snapshots = " << c.field_snapshots << "\ncone_slack = " << fmt(c.cone_slack) << "\n\n";
  os << "[analysis]\nkernel_width = " << fmt(c.kernel_width) << "\nvelocity_cells = " << c.velocity_cells
     << "\nvanish_tol = " << fmt(c.vanish_tol) << "\nvanishing_field_exponent = " << fmt(c.vanishing_field_exponent)
     << "\nfit_t_min = " << fmt(c.fit_t_min) << "\nsolver_tol = " << fmt(c.solver_tol) << "\n\n";
  os << "[run]\nseed = " << c.seed << "\nworkers = " << c.workers << "\noutput = " << c.output
     << "\nneutrality_tol = " << fmt(c.neutrality_tol) << "\n";
  return os.str();
}

}  // namespace rvm
