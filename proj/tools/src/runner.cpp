#include "decoh/cli/runner.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iomanip>
#include <ostream>
#include <sstream>

#include "decoh/deseparation.hpp"
#include "decoh/dynamics.hpp"
#include "decoh/errors.hpp"
#include "decoh/models.hpp"
#include "decoh/zwanzig.hpp"

namespace decoh::cli {

namespace {

/// Shortest %g rendering that reads back to the same double.
std::string format_short(double x) {
  if (x == std::floor(x) && std::abs(x) < 1e15) return std::to_string(static_cast<long long>(x));
  char buf[32];
  for (int p = 1; p <= 17; ++p) {
    std::snprintf(buf, sizeof buf, "%.*g", p, x);
    if (std::strtod(buf, nullptr) == x) break;
  }
  return buf;
}

std::string hex64(std::uint64_t h) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

std::vector<std::pair<std::string, double>> tolerance_fields(const ToleranceConfig& t) {
  return {{"hermitian", t.hermitian},
          {"density_hermitian", t.density_hermitian},
          {"state_norm", t.state_norm},
          {"trace", t.trace},
          {"negative_eigenvalue", t.negative_eigenvalue},
          {"orthonormal", t.orthonormal},
          {"eig_residual", t.eig_residual},
          {"svd_reconstruction", t.svd_reconstruction},
          {"degeneracy", t.degeneracy},
          {"phase_pivot", t.phase_pivot},
          {"entropy_cutoff", t.entropy_cutoff},
          {"norm_drift", t.norm_drift},
          {"interchange_overlap", t.interchange_overlap},
          {"truncation_leakage", t.truncation_leakage},
          {"max_dimension", static_cast<double>(t.max_dimension)},
          {"jacobi_max_sweeps", static_cast<double>(t.jacobi_max_sweeps)}};
}

const models::ScenarioPreset& dynamics_of(const Scenario& s, const std::string& kind) {
  if (!s.preset) throw ConfigError("analyses: '" + kind + "' needs a dynamical scenario");
  return *s.preset;
}

Table schmidt_track_table(const Scenario& s) {
  const auto& preset = dynamics_of(s, "schmidt_track");
  const SchmidtTrajectory tr = track_schmidt(preset.psi0, preset.config);
  Table t;
  t.columns.push_back("t");
  const std::size_t k = tr.coeff_tracks.front().size();
  for (std::size_t i = 0; i < k; ++i) t.columns.push_back("sqrt_p_" + std::to_string(i + 1));
  t.columns.push_back("min_gap");
  for (std::size_t n = 0; n < tr.times.size(); ++n) {
    std::vector<Cell> row{tr.times[n]};
    for (double c : tr.coeff_tracks[n]) row.emplace_back(c);
    row.emplace_back(tr.gaps[n]);
    t.rows.push_back(std::move(row));
  }
  t.meta = {{"min_gap", format_short(tr.min_gap)}, {"interchanges", std::to_string(tr.interchanges.size())}};
  return t;
}

Table zwanzig_table(const Scenario& s, const json& opts) {
  const auto& preset = dynamics_of(s, "zwanzig_channel");
  const std::string where = "analyses.zwanzig_channel";
  require_keys(opts, {"dt_project", "projector"}, where);
  const double dt_project = number_or(opts, "dt_project", preset.config.dt, where);
  const std::string name = string_or(opts, "projector", "separating", where);
  std::optional<ZwanzigProjector> p;
  if (name == "separating") p = ZwanzigProjector::separating();
  else if (name == "trace_a") p = ZwanzigProjector::subsystem_trace(Subsystem::A);
  else if (name == "trace_b") p = ZwanzigProjector::subsystem_trace(Subsystem::B);
  else throw ConfigError(where + ".projector: expected separating, trace_a or trace_b");

  const ChannelRun run = channel_run(preset.psi0, preset.config, *p, dt_project);
  Table t;
  t.columns = {"t", "s_exact", "s_projected"};
  for (std::size_t n = 0; n < run.times.size(); ++n)
    t.rows.push_back({run.times[n], run.s_exact[n], run.s_projected[n]});
  t.meta = {{"projector", name}, {"dt_project", format_short(dt_project)}};
  return t;
}

Table desep_table(const Scenario& s, const json& opts) {
  const std::string where = "analyses.desep";
  Table t;
  if (s.oscillator) {
    require_keys(opts, {}, where);
    t.columns = {"candidate", "a_param", "b_param", "mean_occupation", "leakage"};
    for (const auto& e : robustness_scan(*s.oscillator, s.candidates))
      t.rows.push_back({e.label, e.a_param, e.b_param, e.mean_occupation, e.leakage});
    t.meta = {{"levels", std::to_string(s.oscillator->levels)},
              {"coupling", format_short(s.oscillator->coupling)}};
    return t;
  }
  const auto& preset = dynamics_of(s, "desep");
  require_keys(opts, {"window"}, where);
  TimeWindow w;
  if (opts.contains("window")) {
    const json& v = opts["window"];
    if (!v.is_array() || v.size() != 2 || !v[0].is_number() || !v[1].is_number())
      throw ConfigError(where + ".window: expected [t_min, t_max]");
    w = {v[0].get<double>(), v[1].get<double>()};
  }
  const DeseparationReport r = fit_small_time(preset.psi0, preset.config, w);
  t.columns = {"a_param", "b_param", "fitted_a", "relative_error", "linear_coefficient", "t_min", "t_max", "samples"};
  t.rows.push_back({r.a_param, r.b_param, r.fitted_a, r.relative_error, r.linear_coefficient, r.fit_window.t_min,
                    r.fit_window.t_max, static_cast<std::int64_t>(r.samples)});
  return t;
}

Table maverick_table(const Scenario& s, const json& opts) {
  require_keys(opts, {}, "analyses.maverick");
  Table t;
  t.columns = {"n", "maverick_norm"};
  for (std::size_t n : s.maverick_n)
    t.rows.push_back({static_cast<std::int64_t>(n), models::maverick_norm(s.maverick_p, n, s.maverick_delta)});
  t.meta = {{"p", format_short(s.maverick_p)}, {"delta", format_short(s.maverick_delta)}};
  return t;
}

std::string cell_text(const Cell& c) {
  if (const auto* d = std::get_if<double>(&c)) return format_double(*d);
  if (const auto* i = std::get_if<std::int64_t>(&c)) return std::to_string(*i);
  return std::get<std::string>(c);
}

json cell_json(const Cell& c) {
  if (const auto* d = std::get_if<double>(&c)) return *d;
  if (const auto* i = std::get_if<std::int64_t>(&c)) return *i;
  return std::get<std::string>(c);
}

/// Builds every output in memory; nothing touches the disk until all succeed.
std::vector<std::pair<std::string, std::string>> render_all(const RunConfig& cfg) {
  const Scenario scenario = build_scenario(cfg);
  std::vector<std::pair<std::string, std::string>> files;
  for (const auto& spec : cfg.analyses) {
    Table t = run_analysis(scenario, spec);
    files.emplace_back(output_path(cfg, spec.kind),
                       cfg.output.format == "json" ? render_json(cfg, t) : render_csv(cfg, t));
  }
  return files;
}

void write_all(const std::vector<std::pair<std::string, std::string>>& files) {
  namespace fs = std::filesystem;
  std::vector<fs::path> staged;
  auto discard = [&] {
    std::error_code ec;
    for (const auto& p : staged) fs::remove(p, ec);
  };
  for (const auto& [path, content] : files) {
    const fs::path tmp = fs::path(path).concat(".partial");
    std::ofstream out(tmp, std::ios::binary);
    if (out) staged.push_back(tmp);
    out << content;
    out.close();
    if (!out) {
      discard();
      throw ConfigError("output.path: cannot write '" + path + "'");
    }
  }
  for (std::size_t i = 0; i < files.size(); ++i) {
    std::error_code ec;
    fs::rename(staged[i], files[i].first, ec);
    if (ec) {
      discard();
      throw ConfigError("output.path: cannot write '" + files[i].first + "': " + ec.message());
    }
  }
}

}  // namespace

int guarded(std::ostream& err, const std::function<int()>& body) {
  try {
    return body();
  } catch (const ConfigError& e) {
    err << "decoh: config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const json::exception& e) {
    err << "decoh: config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const InvalidArgument& e) {
    err << "decoh: config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const DimensionError& e) {
    err << "decoh: config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const InvariantViolation& e) {
    err << "decoh: numerical failure: invariant '" << e.invariant() << "' violated: " << e.what() << '\n';
    return kExitNumerical;
  } catch (const DegenerateSpectrum& e) {
    err << "decoh: numerical failure: invariant 'nondegenerate_spectrum' violated: " << e.what() << '\n';
    return kExitNumerical;
  } catch (const ConvergenceError& e) {
    err << "decoh: numerical failure: invariant 'solver_convergence' violated: " << e.what() << '\n';
    return kExitNumerical;
  } catch (const Error& e) {
    err << "decoh: numerical failure: " << e.what() << '\n';
    return kExitNumerical;
  }
}


std::string format_double(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

Table run_analysis(const Scenario& scenario, const AnalysisSpec& spec) {
  Table t;
  if (spec.kind == "schmidt_track") {
    require_keys(spec.options, {}, "analyses.schmidt_track");
    t = schmidt_track_table(scenario);
  } else if (spec.kind == "zwanzig_channel") {
    t = zwanzig_table(scenario, spec.options);
  } else if (spec.kind == "desep") {
    t = desep_table(scenario, spec.options);
  } else if (spec.kind == "maverick") {
    t = maverick_table(scenario, spec.options);
  } else {
    throw ConfigError("analyses: unknown analysis '" + spec.kind + "'");
  }
  t.analysis = spec.kind;
  return t;
}

std::vector<std::pair<std::string, std::string>> header_entries(const RunConfig& cfg, const Table& t) {
  std::vector<std::pair<std::string, std::string>> h{{"tool", std::string("decoh ") + kToolVersion},
                                                     {"config_hash", "fnv1a64:" + hex64(cfg.hash)},
                                                     {"scenario", cfg.scenario},
                                                     {"analysis", t.analysis}};
  std::string tol;
  for (const auto& [name, value] : tolerance_fields(default_tolerances())) {
    if (!tol.empty()) tol += ' ';
    tol += name + "=" + format_short(value);
  }
  h.emplace_back("tolerances", tol);
  for (const auto& m : t.meta) h.push_back(m);
  return h;
}

std::string render_csv(const RunConfig& cfg, const Table& t) {
  std::string out;
  for (const auto& [k, v] : header_entries(cfg, t)) out += "# " + k + ": " + v + "\n";
  for (std::size_t i = 0; i < t.columns.size(); ++i) out += (i ? "," : "") + t.columns[i];
  out += '\n';
  for (const auto& row : t.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) out += (i ? "," : "") + cell_text(row[i]);
    out += '\n';
  }
  return out;
}

std::string render_json(const RunConfig& cfg, const Table& t) {
  json meta = json::object();
  for (const auto& [k, v] : header_entries(cfg, t)) meta[k] = v;
  json tol = json::object();
  for (const auto& [name, value] : tolerance_fields(default_tolerances())) {
    if (value == std::floor(value)) tol[name] = static_cast<std::int64_t>(value);
    else tol[name] = value;
  }
  meta["tolerances"] = tol;
  json rows = json::array();
  for (const auto& row : t.rows) {
    json r = json::array();
    for (const auto& c : row) r.push_back(cell_json(c));
    rows.push_back(std::move(r));
  }
  json doc{{"meta", meta}, {"columns", t.columns}, {"rows", rows}};
  return doc.dump(2) + "\n";
}

std::string output_path(const RunConfig& cfg, const std::string& kind) {
  if (cfg.output.path.empty() || cfg.analyses.size() == 1) return cfg.output.path;
  const std::filesystem::path p(cfg.output.path);
  std::filesystem::path out = p.parent_path() / p.stem();
  out += "." + kind;
  out += p.extension();
  return out.string();
}

int command_run(const std::string& config_path, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const RunConfig cfg = load_config(config_path);
    const auto files = render_all(cfg);
    if (cfg.output.path.empty()) {
      for (std::size_t i = 0; i < files.size(); ++i) out << (i ? "\n" : "") << files[i].second;
    } else {
      write_all(files);
      for (const auto& f : files) err << "decoh: wrote " << f.first << '\n';
    }
    return kExitOk;
  });
}

int command_validate(const std::string& config_path, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const RunConfig cfg = load_config(config_path);
    const Scenario s = build_scenario(cfg);
    out << "ok: scenario " << s.name << ", " << cfg.analyses.size() << " analys"
        << (cfg.analyses.size() == 1 ? "is" : "es") << ", config_hash fnv1a64:" << hex64(cfg.hash) << '\n';
    return kExitOk;
  });
}

int command_list(bool as_json, std::ostream& out) {
  const auto& catalog = scenario_catalog();
  if (as_json) {
    json doc = json::array();
    for (const auto& s : catalog) {
      json params = json::array();
      for (const auto& p : s.params)
        params.push_back({{"name", p.name}, {"type", p.type}, {"default", p.fallback}, {"doc", p.doc}});
      doc.push_back({{"name", s.name}, {"summary", s.summary}, {"params", params}, {"analyses", s.analyses}});
    }
    out << doc.dump(2) << '\n';
    return kExitOk;
  }
  for (const auto& s : catalog) {
    out << s.name << "\n  " << s.summary << "\n  analyses:";
    for (const auto& a : s.analyses) out << ' ' << a;
    out << '\n';
    for (const auto& p : s.params)
      out << "  " << std::left << std::setw(18) << p.name << ' ' << p.type << " (default " << p.fallback << ")  "
          << p.doc << '\n';
    out << '\n';
  }
  return kExitOk;
}

}  // namespace decoh::cli
