#pragma once

#include <optional>
#include <string>
#include <vector>

#include "decoh/cli/config.hpp"
#include "decoh/deseparation.hpp"
#include "decoh/models.hpp"

namespace decoh::cli {

struct ParamDoc {
  std::string name;
  std::string type;
  std::string fallback;
  std::string doc;
};

struct ScenarioInfo {
  std::string name;
  std::string summary;
  std::vector<ParamDoc> params;
  std::vector<std::string> analyses;
};

/// Every preset the tool knows, sorted by name.
const std::vector<ScenarioInfo>& scenario_catalog();

/// A built scenario. Dynamical presets carry psi0 and an evolution config;
/// maverick carries only its parameters.
struct Scenario {
  std::string name;
  std::optional<models::ScenarioPreset> preset;
  std::optional<OscillatorExchangeModel> oscillator;
  std::vector<CandidateState> candidates;
  double maverick_p = 0.5;
  double maverick_delta = 0.25;
  std::vector<std::size_t> maverick_n;
};

/// Builds the scenario and applies the evolution overrides. Throws ConfigError.
Scenario build_scenario(const RunConfig& cfg);

}  // namespace decoh::cli
