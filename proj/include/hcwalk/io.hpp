#pragma once

#include <cstdint>
#include <string>

#include <json.hpp>

#include "hcwalk/environment.hpp"
#include "hcwalk/errors.hpp"

namespace hcwalk::io {

inline constexpr const char* kToolVersion = "hcwalk 1.0.0";

// Round-trip-safe decimal rendering (17 significant digits).
std::string format_double(double v);

// Deterministic timestamp: SOURCE_DATE_EPOCH when set, otherwise the Unix
// epoch, so identical commands produce bit-identical artifacts.
std::string reproducible_timestamp();

struct RunManifest {
  std::string command;
  std::string config_digest;  // hex digest of the canonical config string
  uint64_t master_seed = 0;
  std::string tool_version = kToolVersion;
  std::string timestamp;

  static RunManifest make(std::string command, const std::string& config,
                          uint64_t master_seed);

  nlohmann::json to_json() const;
  // "# key: value" lines for the top of a CSV artifact.
  std::string csv_comment() const;
};

uint64_t string_digest(const std::string& s);  // FNV-1a

nlohmann::json env_to_json(const EnvironmentSpec& spec);
// Throws Error{ConfigError} naming the offending field path.
EnvironmentSpec env_from_json(const nlohmann::json& j);

std::string read_file(const std::string& path);    // Error{IoError}
void write_file(const std::string& path, const std::string& content);

}  // namespace hcwalk::io
