#include "hcwalk/io.hpp"

#include <cstdio>
#include <cstdlib>
#include <ctime>
#include <fstream>
#include <sstream>

namespace hcwalk::io {

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string reproducible_timestamp() {
  int64_t epoch = 0;
  if (const char* sde = std::getenv("SOURCE_DATE_EPOCH"))
    epoch = std::strtoll(sde, nullptr, 10);
  const std::time_t t = static_cast<std::time_t>(epoch);
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

uint64_t string_digest(const std::string& s) {
  uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

RunManifest RunManifest::make(std::string command, const std::string& config,
                              uint64_t master_seed) {
  RunManifest m;
  m.command = std::move(command);
  m.config_digest = to_hex(string_digest(config));
  m.master_seed = master_seed;
  m.timestamp = reproducible_timestamp();
  return m;
}

nlohmann::json RunManifest::to_json() const {
  return nlohmann::json{{"command", command},
                        {"config_digest", config_digest},
                        {"master_seed", master_seed},
                        {"tool_version", tool_version},
                        {"timestamp", timestamp}};
}

std::string RunManifest::csv_comment() const {
  std::ostringstream out;
  out << "# command: " << command << "\n"
      << "# config_digest: " << config_digest << "\n"
      << "# master_seed: " << master_seed << "\n"
      << "# tool_version: " << tool_version << "\n"
      << "# timestamp: " << timestamp << "\n";
  return out.str();
}

nlohmann::json env_to_json(const EnvironmentSpec& spec) {
  nlohmann::json j;
  j["regime"] = to_string(spec.regime);
  j["seed"] = spec.seed;
  if (spec.regime != Regime::Rademacher) {
    j["Q"] = spec.period;
    j["f"] = spec.f_table;
  }
  if (spec.regime == Regime::Perturbed) {
    j["c"] = spec.c;
    j["beta"] = spec.beta;
  }
  return j;
}

EnvironmentSpec env_from_json(const nlohmann::json& j) {
  const auto need = [&](const char* field) -> const nlohmann::json& {
    if (!j.contains(field))
      throw Error(ErrorCode::ConfigError,
                  std::string("missing field: ") + field);
    return j.at(field);
  };
  EnvironmentSpec spec;
  try {
    spec.regime = regime_from_string(need("regime").get<std::string>());
    if (j.contains("seed")) spec.seed = j.at("seed").get<uint64_t>();
    if (spec.regime != Regime::Rademacher) {
      spec.period = need("Q").get<int64_t>();
      spec.f_table = need("f").get<std::vector<int>>();
    }
    if (spec.regime == Regime::Perturbed) {
      spec.c = need("c").get<double>();
      spec.beta = need("beta").get<double>();
    }
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::ConfigError,
                std::string("malformed environment config: ") + e.what());
  }
  validate(spec);
  return spec;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::IoError, "cannot open for reading: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  if (in.bad()) throw Error(ErrorCode::IoError, "read failure: " + path);
  return ss.str();
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::IoError, "cannot open for writing: " + path);
  out << content;
  out.flush();
  if (!out) throw Error(ErrorCode::IoError, "write failure: " + path);
}

}  // namespace hcwalk::io
