// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <optional>

#include "epithreshold/coefficient.hpp"
#include "epithreshold/field.hpp"
#include "epithreshold/grid.hpp"

namespace epithreshold {

/// Diffusivity coefficients; `y` overrides the second axis in 2D.
struct DiffusionCoefficients {
  CoefficientSpec x = ConstantCoefficient{1.0};
  std::optional<CoefficientSpec> y;
  bool operator==(const DiffusionCoefficients&) const = default;
};

/// Solver settings. Zero for dt / critical_tol means "derive the default".
struct Numerics {
  double dt = 0.0;
  double t_max = 1e4;
  double tol_i = 1e-10;
  double tol_s = 1e-12;
  double eig_tol = 1e-10;
  int eig_max_iter = 10'000;
  double critical_tol = 0.0;
  int trace_stride = 10;
  bool operator==(const Numerics&) const = default;
};

/// The model instance as written in a scenario file.
struct ScenarioSpec {
  DomainSpec domain;
  CoefficientSpec alpha = ConstantCoefficient{1.0};
  CoefficientSpec mu = ConstantCoefficient{1.0};
  DiffusionCoefficients d_s;
  DiffusionCoefficients d_i;
  CoefficientSpec s0 = ConstantCoefficient{1.0};
  CoefficientSpec i0 = ConstantCoefficient{0.0};
  Numerics numerics;
  bool operator==(const ScenarioSpec&) const = default;
};

/// A ScenarioSpec sampled onto its grid; all positivity checks done.
struct Scenario {
  Grid grid;
  ScalarField alpha;
  ScalarField mu;
  DiffusionSpec d_s;
  DiffusionSpec d_i;
  ScalarField s0;
  ScalarField i0;
  Numerics numerics;

  static Scenario realize(const ScenarioSpec& spec);

  /// Copy with I0 multiplied by `scale`.
  Scenario with_i0_scaled(double scale) const;
  /// Copy with A_I = d Id.
  Scenario with_d_i(double d) const;

  /// alpha * mean(S0) - mu, the potential of the threshold operator.
  ScalarField threshold_potential() const;

  /// alpha, mu and S0 constant, A_S and A_I constant isotropic.
  bool is_homogeneous() const;

  /// Default time step 1e-3 / max(alpha S0), unless numerics.dt is set.
  double default_dt() const;
};

}  // namespace epithreshold
