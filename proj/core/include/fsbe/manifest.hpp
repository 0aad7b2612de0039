#pragma once

// Run manifests: the config hash, seed, code version and output inventory
// that make a run reproducible. Two manifests that agree outside their
// timestamps came from the same resolved configuration and seed, and the
// outputs they list are byte-identical (given the same build).

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

namespace fsbe {

std::uint64_t fnv1a64(std::string_view bytes);

struct RunManifest {
  std::string experiment;
  std::string config_hash;  // "fnv1a64:<hex>" over the canonical resolved config
  std::uint64_t master_seed = 0;
  std::string code_version;
  std::string started_at, finished_at;  // UTC, ISO 8601
  std::vector<std::string> outputs;     // file names relative to the run directory
  nlohmann::json resolved_config;

  static RunManifest begin(const std::string& experiment, const nlohmann::json& resolved_config,
                           std::uint64_t master_seed);
  nlohmann::json to_json() const;
  // Stamps finished_at and writes manifest.json into dir (also listing itself).
  void finish(const std::string& dir);
};

// Writes text to dir/name and records the name in the manifest.
void write_output(RunManifest& manifest, const std::string& dir, const std::string& name,
                  const std::string& text);

std::string utc_timestamp();

}  // namespace fsbe
