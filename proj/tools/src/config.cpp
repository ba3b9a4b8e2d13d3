#include "decoh/cli/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

namespace decoh::cli {

namespace {

const std::vector<std::string> kAnalysisKinds{"desep", "maverick", "schmidt_track", "zwanzig_channel"};

AnalysisSpec parse_analysis(const json& item, std::size_t index) {
  const std::string where = "analyses[" + std::to_string(index) + "]";
  AnalysisSpec spec;
  if (item.is_string()) {
    spec.kind = item.get<std::string>();
  } else if (item.is_object()) {
    if (!item.contains("kind") || !item["kind"].is_string())
      throw ConfigError(where + ": missing string field 'kind'");
    spec.kind = item["kind"].get<std::string>();
    spec.options = item;
    spec.options.erase("kind");
  } else {
    throw ConfigError(where + ": expected a string or an object");
  }
  if (std::find(kAnalysisKinds.begin(), kAnalysisKinds.end(), spec.kind) == kAnalysisKinds.end())
    throw ConfigError(where + ": unknown analysis '" + spec.kind + "'");
  return spec;
}

}  // namespace

std::uint64_t fnv1a64(const std::string& bytes) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  return h;
}

void require_keys(const json& obj, const std::vector<std::string>& allowed, const std::string& where) {
  if (!obj.is_object()) throw ConfigError(where + ": expected an object");
  for (const auto& [key, value] : obj.items()) {
    (void)value;
    if (std::find(allowed.begin(), allowed.end(), key) == allowed.end())
      throw ConfigError(where + ": unknown key '" + key + "'");
  }
}

double number_or(const json& obj, const std::string& key, double fallback, const std::string& where) {
  if (!obj.contains(key)) return fallback;
  const json& v = obj[key];
  if (!v.is_number()) throw ConfigError(where + "." + key + ": expected a number");
  const double x = v.get<double>();
  if (!std::isfinite(x)) throw ConfigError(where + "." + key + ": not finite");
  return x;
}

std::size_t count_or(const json& obj, const std::string& key, std::size_t fallback, const std::string& where) {
  if (!obj.contains(key)) return fallback;
  const json& v = obj[key];
  if (!v.is_number_unsigned()) throw ConfigError(where + "." + key + ": expected a non-negative integer");
  return v.get<std::size_t>();
}

std::string string_or(const json& obj, const std::string& key, const std::string& fallback,
                      const std::string& where) {
  if (!obj.contains(key)) return fallback;
  if (!obj[key].is_string()) throw ConfigError(where + "." + key + ": expected a string");
  return obj[key].get<std::string>();
}

RunConfig parse_config(const json& doc) {
  require_keys(doc, {"scenario", "evolution", "analyses", "output"}, "config");
  RunConfig cfg;
  cfg.hash = fnv1a64(doc.dump());

  if (!doc.contains("scenario")) throw ConfigError("config: missing 'scenario'");
  const json& sc = doc["scenario"];
  require_keys(sc, {"name", "params"}, "scenario");
  cfg.scenario = string_or(sc, "name", "", "scenario");
  if (cfg.scenario.empty()) throw ConfigError("scenario: missing 'name'");
  if (sc.contains("params")) {
    if (!sc["params"].is_object()) throw ConfigError("scenario.params: expected an object");
    cfg.params = sc["params"];
  }

  if (doc.contains("evolution")) {
    const json& ev = doc["evolution"];
    require_keys(ev, {"t_max", "dt"}, "evolution");
    if (ev.contains("t_max")) cfg.t_max = number_or(ev, "t_max", 0.0, "evolution");
    if (ev.contains("dt")) cfg.dt = number_or(ev, "dt", 0.0, "evolution");
  }

  if (!doc.contains("analyses") || !doc["analyses"].is_array() || doc["analyses"].empty())
    throw ConfigError("config: 'analyses' must be a non-empty array");
  std::set<std::string> seen;
  for (std::size_t i = 0; i < doc["analyses"].size(); ++i) {
    AnalysisSpec spec = parse_analysis(doc["analyses"][i], i);
    if (!seen.insert(spec.kind).second)
      throw ConfigError("analyses: '" + spec.kind + "' listed more than once");
    cfg.analyses.push_back(std::move(spec));
  }

  if (doc.contains("output")) {
    const json& out = doc["output"];
    require_keys(out, {"path", "format"}, "output");
    cfg.output.path = string_or(out, "path", "", "output");
    cfg.output.format = string_or(out, "format", "csv", "output");
    if (cfg.output.format != "csv" && cfg.output.format != "json")
      throw ConfigError("output.format: expected 'csv' or 'json'");
  }
  return cfg;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  json doc;
  try {
    doc = json::parse(buf.str());
  } catch (const json::parse_error& e) {
    throw ConfigError(path + ": " + e.what());
  }
  return parse_config(doc);
}

}  // namespace decoh::cli
