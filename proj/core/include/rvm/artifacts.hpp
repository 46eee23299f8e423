// On-disk layout of a run directory and text/JSON helpers.
//
//   config.txt              serialized RunConfig
//   manifest.json           geometry, dt, checkpoint times, run summary
//   diagnostics.csv         one row per diagnostic step
//   tracers.csv             id, species, t, X(3), P(3), Y(3), label(3)
//   F_s<a>_c<k>.rvmh        momentum histogram of species a at checkpoint k
//   rho_c<k>.rvmh           charge density on space nodes at checkpoint k
//   n_s<a>_c<k>.rvmh        number density of species a at checkpoint k
//   fields_final.rvmf       final field snapshot (and fields_c<k>.rvmf)
#pragma once

#include <string>
#include <vector>

#include "rvm/characteristics.hpp"
#include "rvm/pic.hpp"

namespace rvm {

struct RunLayout {
  std::string dir;

  std::string path(const std::string& name) const;
  std::string config() const { return path("config.txt"); }
  std::string manifest() const { return path("manifest.json"); }
  std::string diagnostics() const { return path("diagnostics.csv"); }
  std::string tracers() const { return path("tracers.csv"); }
  std::string F(int species, std::size_t checkpoint) const;
  std::string rho(std::size_t checkpoint) const;
  std::string density(int species, std::size_t checkpoint) const;
  std::string fields_final() const { return path("fields_final.rvmf"); }
  std::string fields(std::size_t checkpoint) const;
};

std::string read_text(const std::string& path);
void write_text(const std::string& path, const std::string& text);
void ensure_directory(const std::string& dir);

std::string tracer_csv(const std::vector<TracerRecord>& tracers);
std::vector<TracerRecord> parse_tracer_csv(const std::string& text);

/// Persist all artifacts of a run.
void write_run(const RunResult& run, const std::string& dir);

/// Load a run directory. Field snapshots are not loaded. Missing or corrupt
/// files raise ArtifactError naming the file.
RunResult read_run(const std::string& dir);

}  // namespace rvm
