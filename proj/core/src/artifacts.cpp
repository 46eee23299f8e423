#include "rvm/artifacts.hpp"

#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <iomanip>
#include <map>
#include <sstream>

#include "rvm/error.hpp"

namespace rvm {

namespace fs = std::filesystem;
using nlohmann::json;

std::string RunLayout::path(const std::string& name) const { return (fs::path(dir) / name).string(); }
std::string RunLayout::F(int species, std::size_t k) const {
  return path("F_s" + std::to_string(species) + "_c" + std::to_string(k) + ".rvmh");
}
std::string RunLayout::rho(std::size_t k) const { return path("rho_c" + std::to_string(k) + ".rvmh"); }
std::string RunLayout::density(int species, std::size_t k) const {
  return path("n_s" + std::to_string(species) + "_c" + std::to_string(k) + ".rvmh");
}
std::string RunLayout::fields(std::size_t k) const { return path("fields_c" + std::to_string(k) + ".rvmf"); }

std::string read_text(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw ArtifactError("missing artifact " + path);
  std::ostringstream os;
  os << is.rdbuf();
  return os.str();
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream os(path);
  if (!os) throw ArtifactError("cannot open " + path + " for writing");
  os << text;
  if (!os) throw ArtifactError("failed writing " + path);
}

void ensure_directory(const std::string& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw ArtifactError("cannot create directory " + dir + ": " + ec.message());
}

std::string tracer_csv(const std::vector<TracerRecord>& tracers) {
  std::ostringstream os;
  os << "id,species,t,X1,X2,X3,P1,P2,P3,Y1,Y2,Y3,label1,label2,label3\n" << std::setprecision(17);
  for (const auto& r : tracers)
    for (std::size_t k = 0; k < r.size(); ++k) {
      const Vec3 lab = k < r.label.size() ? r.label[k] : r.Y[k];
      os << r.id << ',' << r.species << ',' << r.times[k];
      for (const Vec3* v : {&r.X[k], &r.P[k], &r.Y[k], &lab}) os << ',' << v->x << ',' << v->y << ',' << v->z;
      os << '\n';
    }
  return os.str();
}

std::vector<TracerRecord> parse_tracer_csv(const std::string& text) {
  std::istringstream is(text);
  std::string line;
  if (!std::getline(is, line) || line.rfind("id,species,t", 0) != 0) throw ArtifactError("tracer CSV has no header");
  std::map<int, TracerRecord> recs;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    std::stringstream ss(line);
    std::string cell;
    std::vector<double> v;
    while (std::getline(ss, cell, ',')) v.push_back(std::stod(cell));
    if (v.size() != 15) throw ArtifactError("tracer CSV row has " + std::to_string(v.size()) + " cells");
    TracerRecord& r = recs[static_cast<int>(v[0])];
    r.id = static_cast<int>(v[0]);
    r.species = static_cast<int>(v[1]);
    r.times.push_back(v[2]);
    r.X.push_back({v[3], v[4], v[5]});
    r.P.push_back({v[6], v[7], v[8]});
    r.Y.push_back({v[9], v[10], v[11]});
    r.label.push_back({v[12], v[13], v[14]});
  }
  std::vector<TracerRecord> out;
  for (auto& [id, r] : recs) {
    r.P_inf = r.P.back();
    out.push_back(std::move(r));
  }
  return out;
}

void write_run(const RunResult& run, const std::string& dir) {
  ensure_directory(dir);
  const RunLayout lay{dir};
  write_text(lay.config(), serialize_config(run.config));
  write_text(lay.diagnostics(), run.diagnostics.to_csv());
  write_text(lay.tracers(), tracer_csv(run.tracers));
  json m;
  m["cells"] = run.geometry.cells;
  m["extent"] = run.geometry.extent;
  m["dt"] = run.dt;
  m["species"] = run.config.species.size();
  std::vector<double> times;
  for (std::size_t k = 0; k < run.checkpoints.size(); ++k) {
    const Checkpoint& cp = run.checkpoints[k];
    times.push_back(cp.time);
    for (std::size_t a = 0; a < cp.F.size(); ++a) {
      write_grid(lay.F(static_cast<int>(a), k), cp.F[a]);
      write_grid(lay.density(static_cast<int>(a), k), cp.density[a]);
    }
    write_grid(lay.rho(k), cp.rho);
  }
  m["checkpoint_times"] = times;
  m["beta"] = run.beta;
  m["max_speed"] = run.max_speed;
  m["max_continuity"] = run.max_continuity;
  m["max_divB"] = run.max_divB;
  m["initial_divE_residual"] = run.initial_divE_residual;
  m["max_divE_drift"] = run.max_divE_drift;
  m["wall_seconds"] = run.wall_seconds;
  m["cone_constant"] = 1.0;
  write_text(lay.manifest(), m.dump(2) + "\n");
  if (run.config.field_snapshots != "none") write_snapshot(lay.fields_final(), run.final_fields);
}

RunResult read_run(const std::string& dir) {
  const RunLayout lay{dir};
  if (!fs::is_directory(dir)) throw ArtifactError("run directory " + dir + " does not exist");
  RunResult run;
  run.config = parse_config_string(read_text(lay.config()));
  json m;
  try {
    m = json::parse(read_text(lay.manifest()));
    run.geometry = GridGeometry(m.at("cells").get<int>(), m.at("extent").get<double>());
    run.dt = m.at("dt").get<double>();
    run.beta = m.at("beta").get<double>();
    run.max_speed = m.at("max_speed").get<double>();
    run.max_continuity = m.at("max_continuity").get<double>();
    run.max_divB = m.at("max_divB").get<double>();
    run.initial_divE_residual = m.at("initial_divE_residual").get<double>();
    run.max_divE_drift = m.at("max_divE_drift").get<double>();
    run.wall_seconds = m.at("wall_seconds").get<double>();
  } catch (const json::exception& e) {
    throw ArtifactError("corrupt manifest " + lay.manifest() + ": " + e.what());
  }
  run.diagnostics = DiagnosticsSeries::from_csv(read_text(lay.diagnostics()));
  run.tracers = parse_tracer_csv(read_text(lay.tracers()));
  const auto times = m.at("checkpoint_times").get<std::vector<double>>();
  const std::size_t ns = run.config.species.size();
  for (std::size_t k = 0; k < times.size(); ++k) {
    Checkpoint cp;
    cp.time = times[k];
    for (std::size_t a = 0; a < ns; ++a) {
      cp.F.push_back(read_grid(lay.F(static_cast<int>(a), k)));
      cp.density.push_back(read_grid(lay.density(static_cast<int>(a), k)));
    }
    cp.rho = read_grid(lay.rho(k));
    run.checkpoints.push_back(std::move(cp));
  }
  return run;
}

}  // namespace rvm
