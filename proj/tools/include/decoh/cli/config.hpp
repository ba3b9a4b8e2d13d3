#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

namespace decoh::cli {

using json = nlohmann::json;

/// Malformed or inconsistent configuration (exit code 2).
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct AnalysisSpec {
  std::string kind;  // schmidt_track | desep | zwanzig_channel | maverick
  json options = json::object();
};

struct OutputSpec {
  std::string path;  // empty: standard output
  std::string format = "csv";
};

struct RunConfig {
  std::string scenario;
  json params = json::object();
  std::optional<double> t_max;
  std::optional<double> dt;
  std::vector<AnalysisSpec> analyses;
  OutputSpec output;
  std::uint64_t hash = 0;  // FNV-1a over the canonical dump of the document
};

/// Schema check and conversion. Throws ConfigError naming the offending key.
RunConfig parse_config(const json& doc);

/// Reads and parses a config file.
RunConfig load_config(const std::string& path);

std::uint64_t fnv1a64(const std::string& bytes);

/// Throws ConfigError if `obj` is not an object or holds a key outside `allowed`.
void require_keys(const json& obj, const std::vector<std::string>& allowed, const std::string& where);

double number_or(const json& obj, const std::string& key, double fallback, const std::string& where);
std::size_t count_or(const json& obj, const std::string& key, std::size_t fallback, const std::string& where);
std::string string_or(const json& obj, const std::string& key, const std::string& fallback,
                      const std::string& where);

}  // namespace decoh::cli
