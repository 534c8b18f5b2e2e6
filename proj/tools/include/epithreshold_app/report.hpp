// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

namespace epithreshold::app {

inline constexpr int kSchemaVersion = 1;

/// The JSON document every subcommand prints and writes to <out>/report.json.
/// Optional members serialize as null.
struct RunReport {
  std::string command;
  std::optional<std::string> scenario_hash;
  std::optional<double> lambda1;
  std::optional<std::string> classification;
  std::optional<double> averaged_r0;
  std::optional<std::string> averaged_classification;
  std::optional<double> d_star;
  std::optional<double> s_infinity;
  std::optional<double> s_infinity_averaged;
  std::optional<double> epsilon_empirical;
  std::optional<std::string> trace_path;
  std::vector<std::string> field_paths;
  std::optional<nlohmann::ordered_json> timings;
  nlohmann::ordered_json details = nlohmann::ordered_json::object();

  nlohmann::ordered_json to_json() const;
  /// UTF-8, two-space indent, newline-terminated.
  std::string dump() const;
};

/// Finite doubles as numbers, everything else as null.
nlohmann::ordered_json number_or_null(double v);

}  // namespace epithreshold::app
