#include "decoh/cli/scenarios.hpp"

#include <cmath>

#include "decoh/errors.hpp"
#include "decoh/linalg.hpp"
#include "decoh/operators.hpp"

namespace decoh::cli {

namespace {

Complex parse_complex(const json& v, const std::string& where) {
  if (v.is_number()) return v.get<double>();
  if (v.is_array() && v.size() == 2 && v[0].is_number() && v[1].is_number())
    return {v[0].get<double>(), v[1].get<double>()};
  throw ConfigError(where + ": expected a number or [re, im]");
}

ComplexMatrix pauli(char c) {
  switch (c) {
    case 'i': return ops::identity(2);
    case 'x': return ops::sigma_x();
    case 'y': return ops::sigma_y();
    case 'z': return ops::sigma_z();
    default: throw ConfigError(std::string("two_qubit.interaction: unknown Pauli '") + c + "'");
  }
}

models::ScenarioPreset two_qubit(const json& p) {
  const std::string where = "scenario.params";
  require_keys(p, {"interaction", "coupling", "theta"}, where);
  const std::string inter = string_or(p, "interaction", "xx", where);
  if (inter.size() != 2) throw ConfigError(where + ".interaction: expected two letters from i, x, y, z");
  const double g = number_or(p, "coupling", 0.5, where);
  const double th = number_or(p, "theta", 0.0, where);
  EvolutionConfig cfg;
  cfg.hamiltonian = g * tensor_product(pauli(inter[0]), pauli(inter[1]));
  cfg.t_max = 1.0;
  cfg.dt = 1e-3;
  return {"two_qubit", BipartiteState(2, 2, {std::cos(th), 0.0, 0.0, std::sin(th)}), std::move(cfg)};
}

models::ScenarioPreset von_neumann(const json& p) {
  const std::string where = "scenario.params";
  require_keys(p, {"c", "n_env", "coupling"}, where);
  ComplexVector c{0.6, 0.8};
  if (p.contains("c")) {
    if (!p["c"].is_array() || p["c"].size() != 2) throw ConfigError(where + ".c: expected two amplitudes");
    c = {parse_complex(p["c"][0], where + ".c[0]"), parse_complex(p["c"][1], where + ".c[1]")};
  }
  return models::von_neumann_measurement(c, count_or(p, "n_env", 3, where), number_or(p, "coupling", 1.0, where));
}

models::ScenarioPreset bell(const json& p) {
  require_keys(p, {"scale"}, "scenario.params");
  const double scale = number_or(p, "scale", 1.0, "scenario.params");
  return models::bell_preset(scale * models::bell_default_perturbation());
}

void oscillator(const json& p, Scenario& out) {
  const std::string where = "scenario.params";
  require_keys(p, {"levels", "coupling", "leakage_tolerance", "candidates"}, where);
  OscillatorExchangeModel m;
  m.levels = count_or(p, "levels", 10, where);
  m.coupling = number_or(p, "coupling", 0.1, where);
  m.leakage_tolerance = number_or(p, "leakage_tolerance", 1e-6, where);
  if (m.levels < 2) throw ConfigError(where + ".levels: need at least 2");

  json cands = p.contains("candidates") ? p["candidates"]
                                        : json::parse(R"([{"kind":"coherent","alpha":1.0},{"kind":"fock","n":1}])");
  if (!cands.is_array() || cands.empty()) throw ConfigError(where + ".candidates: expected a non-empty array");
  for (std::size_t i = 0; i < cands.size(); ++i) {
    const std::string w = where + ".candidates[" + std::to_string(i) + "]";
    const json& c = cands[i];
    const std::string kind = string_or(c, "kind", "", w);
    if (kind == "coherent") {
      require_keys(c, {"kind", "alpha"}, w);
      if (!c.contains("alpha")) throw ConfigError(w + ": missing 'alpha'");
      out.candidates.push_back(coherent_state(parse_complex(c["alpha"], w + ".alpha"), m.levels));
    } else if (kind == "fock") {
      require_keys(c, {"kind", "n"}, w);
      out.candidates.push_back(fock_state(count_or(c, "n", 0, w), m.levels));
    } else {
      throw ConfigError(w + ".kind: expected 'coherent' or 'fock'");
    }
  }

  EvolutionConfig cfg;
  cfg.hamiltonian = m.hamiltonian();
  cfg.t_max = 10.0;
  cfg.dt = 0.05;
  out.preset = models::ScenarioPreset{
      "oscillator_exchange", BipartiteState::product(out.candidates.front().amplitudes, m.environment_state()),
      std::move(cfg)};
  out.oscillator = m;
}

void maverick(const json& p, Scenario& out) {
  const std::string where = "scenario.params";
  require_keys(p, {"p", "delta", "n"}, where);
  out.maverick_p = number_or(p, "p", 0.5, where);
  out.maverick_delta = number_or(p, "delta", 0.25, where);
  out.maverick_n = {10, 20, 40, 80};
  if (p.contains("n")) {
    if (!p["n"].is_array() || p["n"].empty()) throw ConfigError(where + ".n: expected a non-empty array");
    out.maverick_n.clear();
    for (const auto& v : p["n"]) {
      if (!v.is_number_unsigned()) throw ConfigError(where + ".n: expected non-negative integers");
      out.maverick_n.push_back(v.get<std::size_t>());
    }
  }
  // Range errors surface here rather than halfway through a run.
  for (std::size_t n : out.maverick_n) models::maverick_norm_binomial(out.maverick_p, n, out.maverick_delta);
}

}  // namespace

const std::vector<ScenarioInfo>& scenario_catalog() {
  static const std::vector<ScenarioInfo> catalog{
      {"bell",
       "Singlet (|01> - |10>)/sqrt(2) under a fixed generic two-qubit perturbation; degenerate at t = 0.",
       {{"scale", "number", "1", "multiplies the default perturbing Hamiltonian"}},
       {"schmidt_track", "zwanzig_channel"}},
      {"maverick",
       "Norm of measurement branches whose outcome frequency deviates from the Born weight.",
       {{"p", "number", "0.5", "outcome-1 weight, 0 < p < 1"},
        {"delta", "number", "0.25", "deviation threshold, |k/n - p| > delta"},
        {"n", "array of integers", "[10, 20, 40, 80]", "series lengths"}},
       {"maverick"}},
      {"oscillator_exchange",
       "Two truncated oscillators coupled by g (a^dagger b + a b^dagger), environment in the vacuum.",
       {{"levels", "integer", "10", "Fock levels per oscillator"},
        {"coupling", "number", "0.1", "g"},
        {"leakage_tolerance", "number", "1e-6", "largest accepted truncation leakage per candidate"},
        {"candidates", "array", "[coherent alpha=1, fock n=1]",
         "system states: {\"kind\": \"coherent\", \"alpha\": a | [re, im]} or {\"kind\": \"fock\", \"n\": k}; "
         "the first one seeds the dynamical analyses"}},
       {"desep", "schmidt_track", "zwanzig_channel"}},
      {"two_qubit",
       "cos(theta)|00> + sin(theta)|11> under g sigma_p (x) sigma_q.",
       {{"interaction", "string", "xx", "two Pauli letters from i, x, y, z"},
        {"coupling", "number", "0.5", "g"},
        {"theta", "number", "0", "initial mixing angle"}},
       {"desep", "schmidt_track", "zwanzig_channel"}},
      {"von_neumann_measurement",
       "System qubit read out by n_env environment qubits, H = g sum_k |1><1| (x) sigma_x^(k).",
       {{"c", "array of 2 amplitudes", "[0.6, 0.8]", "system amplitudes, each a number or [re, im]"},
        {"n_env", "integer", "3", "environment qubits, 2^(n_env+1) <= 4096"},
        {"coupling", "number", "1", "g; the default run ends at t = pi / (2 g)"}},
       {"desep", "schmidt_track", "zwanzig_channel"}},
  };
  return catalog;
}

Scenario build_scenario(const RunConfig& cfg) {
  Scenario s;
  s.name = cfg.scenario;
  try {
    if (cfg.scenario == "bell") s.preset = bell(cfg.params);
    else if (cfg.scenario == "two_qubit") s.preset = two_qubit(cfg.params);
    else if (cfg.scenario == "von_neumann_measurement") s.preset = von_neumann(cfg.params);
    else if (cfg.scenario == "oscillator_exchange") oscillator(cfg.params, s);
    else if (cfg.scenario == "maverick") maverick(cfg.params, s);
    else throw ConfigError("scenario.name: unknown scenario '" + cfg.scenario + "' (see `decoh list`)");
  } catch (const InvalidArgument& e) {
    throw ConfigError(std::string("scenario.params: ") + e.what());
  } catch (const DimensionError& e) {
    throw ConfigError(std::string("scenario.params: ") + e.what());
  }

  if (s.preset) {
    auto& ev = s.preset->config;
    if (cfg.t_max) ev.t_max = *cfg.t_max;
    if (cfg.dt) ev.dt = *cfg.dt;
    try {
      ev.validate(s.preset->psi0.dims());
    } catch (const Error& e) {
      throw ConfigError(std::string("evolution: ") + e.what());
    }
  } else if (cfg.t_max || cfg.dt) {
    throw ConfigError("evolution: scenario '" + cfg.scenario + "' has no dynamics");
  }

  const auto& info = scenario_catalog();
  for (const auto& entry : info) {
    if (entry.name != s.name) continue;
    for (const auto& a : cfg.analyses)
      if (std::find(entry.analyses.begin(), entry.analyses.end(), a.kind) == entry.analyses.end())
        throw ConfigError("analyses: '" + a.kind + "' does not apply to scenario '" + s.name + "'");
  }
  return s;
}

}  // namespace decoh::cli
