// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>

#include "epithreshold/scenario.hpp"

namespace epithreshold {

/// Scenario files are TOML-style:
///
///   [domain]
///   lengths = [1.0]            # one per axis
///   cells = [256]
///
///   [coefficients]
///   alpha = { kind = "gauss_bump", base = 0.5, amp = 1.2, center = 0.5, width = 0.1 }
///   mu = 1.0                   # a bare number is a constant
///   d_s = { kind = "constant", value = 0.5 }
///   d_i = 0.5                  # d_s_y / d_i_y override the y axis in 2D
///
///   [initial]
///   s0 = 1.0
///   i0 = { kind = "cosine", base = 1e-2, amp = 1e-2, freq = 1 }
///
///   [numerics]                 # optional: dt, t_max, tol_i, tol_s, eig_tol,
///   t_max = 1e4                # eig_max_iter, critical_tol, trace_stride
///
/// Table coefficients: { kind = "table", path = "alpha.csv" }, path relative
/// to the scenario file. Unknown sections and keys are rejected.
ScenarioSpec parse_scenario_text(const std::string& text, const std::string& base_dir = ".");
ScenarioSpec parse_scenario_file(const std::string& path);

/// Canonical text form; parse_scenario_text(serialize_scenario(s)) == s.
std::string serialize_scenario(const ScenarioSpec& spec);

/// 64-bit FNV-1a of the canonical text, as 16 hex digits.
std::string scenario_hash(const ScenarioSpec& spec);

struct LoadedScenario {
  ScenarioSpec spec;
  Scenario scenario;
  std::string hash;
};

/// Parse, apply an optional cells-per-axis override, and sample onto the grid.
LoadedScenario load_scenario(const std::string& path, int grid_n = 0);

}  // namespace epithreshold
