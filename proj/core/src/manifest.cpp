#include "fsbe/manifest.hpp"

#include <chrono>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <sstream>

#include "fsbe/errors.hpp"
#include "fsbe/version.hpp"

namespace fsbe {

std::uint64_t fnv1a64(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string utc_timestamp() {
  const auto now = std::chrono::system_clock::now();
  const std::time_t t = std::chrono::system_clock::to_time_t(now);
  std::tm tm{};
  gmtime_r(&t, &tm);
  std::ostringstream out;
  out << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
  return out.str();
}

RunManifest RunManifest::begin(const std::string& experiment,
                               const nlohmann::json& resolved_config,
                               std::uint64_t master_seed) {
  RunManifest m;
  m.experiment = experiment;
  m.resolved_config = resolved_config;
  m.master_seed = master_seed;
  m.code_version = version_string;
  m.started_at = utc_timestamp();
  std::ostringstream hash;
  hash << "fnv1a64:" << std::hex << std::setfill('0') << std::setw(16)
       << fnv1a64(resolved_config.dump());
  m.config_hash = hash.str();
  return m;
}

nlohmann::json RunManifest::to_json() const {
  return {{"schema", "fsbe.manifest.v1"},
          {"experiment", experiment},
          {"config_hash", config_hash},
          {"master_seed", master_seed},
          {"code_version", code_version},
          {"started_at", started_at},
          {"finished_at", finished_at},
          {"outputs", outputs},
          {"resolved_config", resolved_config}};
}

void RunManifest::finish(const std::string& dir) {
  finished_at = utc_timestamp();
  outputs.push_back("manifest.json");
  std::ofstream out(std::filesystem::path(dir) / "manifest.json");
  if (!out) throw std::runtime_error("cannot write manifest.json in " + dir);
  out << to_json().dump(2) << "\n";
}

void write_output(RunManifest& manifest, const std::string& dir, const std::string& name,
                  const std::string& text) {
  std::filesystem::create_directories(dir);
  std::ofstream out(std::filesystem::path(dir) / name, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write output file " + name + " in " + dir);
  out << text;
  manifest.outputs.push_back(name);
}

}  // namespace fsbe
