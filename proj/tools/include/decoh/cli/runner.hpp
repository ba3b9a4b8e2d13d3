#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "decoh/cli/config.hpp"
#include "decoh/cli/scenarios.hpp"

namespace decoh::cli {

inline constexpr const char* kToolVersion = DECOH_VERSION;

using Cell = std::variant<double, std::int64_t, std::string>;

struct Table {
  std::string analysis;
  std::vector<std::pair<std::string, std::string>> meta;  // extra header entries
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;
};

/// Runs one analysis. Library errors propagate unchanged.
Table run_analysis(const Scenario& scenario, const AnalysisSpec& spec);

/// Header block shared by both formats: version, config hash, tolerances.
std::vector<std::pair<std::string, std::string>> header_entries(const RunConfig& cfg, const Table& t);

std::string render_csv(const RunConfig& cfg, const Table& t);
std::string render_json(const RunConfig& cfg, const Table& t);

/// %.17g
std::string format_double(double x);

/// The configured path for a single analysis, otherwise `<stem>.<kind><ext>`.
std::string output_path(const RunConfig& cfg, const std::string& kind);

/// Runs `body`, mapping exceptions to exit codes and a one-line message on
/// `err`: configuration problems give 2, numerical failures 3 with the broken
/// invariant named.
int guarded(std::ostream& err, const std::function<int()>& body);

int command_run(const std::string& config_path, std::ostream& out, std::ostream& err);
int command_validate(const std::string& config_path, std::ostream& out, std::ostream& err);
int command_list(bool as_json, std::ostream& out);

inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitNumerical = 3;

}  // namespace decoh::cli
