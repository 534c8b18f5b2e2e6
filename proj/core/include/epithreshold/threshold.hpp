// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <optional>
#include <string>
#include <vector>

#include "epithreshold/scenario.hpp"
#include "epithreshold/spectral.hpp"

namespace epithreshold {

enum class Classification { Propagates, FadesOff, Critical };

std::string classification_name(Classification c);

struct ThresholdReport {
  double lambda1 = 0.0;
  Classification classification = Classification::Critical;
  double averaged_r0 = 0.0;
  Classification averaged_classification = Classification::Critical;
  std::optional<double> d_star;
  double tolerance = 0.0;
  double eigen_residual = 0.0;
};

/// 1e-8 max(1, ||alpha mean(S0) - mu||_inf), unless numerics.critical_tol is set.
double default_critical_tolerance(const Scenario& scenario);

struct DStarRequest {
  double d_lo = 1e-2;
  double d_hi = 1e2;
  double rel_tol = 1e-12;
};

/// lambda1 of -div(A_I grad) - (alpha mean(S0) - mu) with the scenario's own
/// A_I. Propagates iff lambda1 < -tol, FadesOff iff lambda1 > tol. The
/// averaged model propagates iff mean(alpha) mean(S0) / mean(mu) > 1.
///
/// Raises a numerical error if lambda1 exceeds mean(mu) - mean(alpha) mean(S0)
/// (the constant test function bound), which would make the diffusive and
/// averaged classifications inconsistent.
ThresholdReport classify(const Scenario& scenario, std::optional<double> tol = std::nullopt,
                         std::optional<DStarRequest> d_star = std::nullopt);

/// A named pass/fail assertion attached to an analysis report.
struct Check {
  std::string name;
  bool passed = true;
  std::string detail;
};

bool all_passed(const std::vector<Check>& checks);

struct ComparisonRow {
  double scale = 0.0;
  double s_infinity_pde = 0.0;
  double s_infinity_averaged = 0.0;
  double gap = 0.0;   // s_infinity_pde - s_infinity_averaged
  double loss = 0.0;  // mean(S0) - s_infinity_pde
  bool converged = true;
};

struct ComparisonReport {
  std::vector<ComparisonRow> rows;  // decreasing scale
  double epsilon_empirical = 0.0;   // min loss over rows
  ThresholdReport threshold;
  double propagation_floor = 0.0;   // |lambda1| / max(alpha)
  bool homogeneous = false;
  std::vector<Check> checks;
};

struct RunSettings {
  double dt = 0.0;  // 0: scenario default
  std::optional<double> t_max;
  /// Richardson levels in dt for S_inf: 1 is a plain run, 2 uses
  /// 2 S(dt/2) - S(dt), 3 uses (8 S(dt/4) - 6 S(dt/2) + S(dt)) / 3. The
  /// stepper's time error is a smooth series in dt, so each level removes
  /// one order.
  int richardson_levels = 1;
};

std::vector<double> default_scales();  // 1e-2, 1e-3, ..., 1e-6

/// Relative slack on the propagation floor |lambda1| / max(alpha).
inline constexpr double kFloorSlack = 0.2;
/// Tolerance for S_inf(PDE) >= S_inf(averaged) and for the constant-I0 equality.
inline constexpr double kComparisonSlack = 1e-6;

/// Runs the PDE with I0 replaced by s I0 for every scale and records the
/// susceptible loss. When the scenario propagates, checks that the smallest
/// loss stays above (1 - kFloorSlack) |lambda1| / max(alpha); when it fades
/// off, checks that losses shrink with the scale.
ComparisonReport propagation_probe(const Scenario& scenario, std::vector<double> scales,
                                   const RunSettings& settings = {});

/// PDE S_inf against the final size of the averaged ODE with I0 mean s mean(I0).
/// For homogeneous coefficients asserts S_inf(PDE) >= S_inf(averaged), strictly
/// when I0 is not constant and to kComparisonSlack when it is.
ComparisonReport compare_models(const Scenario& scenario, std::vector<double> scales,
                                RunSettings settings = {.richardson_levels = 3});

enum class SweepAxis { DI, MuShift, AlphaScale, S0Scale };

std::string sweep_axis_name(SweepAxis axis);
SweepAxis parse_sweep_axis(const std::string& name);

struct SweepRow {
  double sample = 0.0;
  double lambda1 = 0.0;
};

struct SweepReport {
  SweepAxis axis = SweepAxis::DI;
  std::vector<SweepRow> rows;
  // d_I axis only: the large- and small-diffusivity limits.
  std::optional<double> limit_large_d;
  std::optional<double> limit_small_d;
  std::vector<Check> checks;
};

/// lambda1 along one parameter axis. Samples are d_I values, additive shifts
/// of mu, or factors on alpha / S0. Checks the expected direction:
/// nondecreasing in d_I (strict when the potential is not constant),
/// increasing in mu, decreasing in alpha and in S0.
SweepReport monotonicity_sweep(const Scenario& scenario, SweepAxis axis,
                               std::vector<double> samples);

}  // namespace epithreshold
