// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cmath>
#include <numbers>
#include <random>

#include "epithreshold/scenario.hpp"

namespace epithreshold::test {

inline ScenarioSpec constant_spec(double alpha, double mu, double s0, double i0, int cells = 64,
                                  double d = 0.5) {
  ScenarioSpec spec;
  spec.domain = {{1.0}, {cells}};
  spec.alpha = ConstantCoefficient{alpha};
  spec.mu = ConstantCoefficient{mu};
  spec.d_s.x = ConstantCoefficient{d};
  spec.d_i.x = ConstantCoefficient{d};
  spec.s0 = ConstantCoefficient{s0};
  spec.i0 = ConstantCoefficient{i0};
  return spec;
}

/// mu = 1, S0 = 1, alpha = 0.5 + 1.2 exp(-(x - 1/2)^2 / (2 * 0.01)) on (0,1):
/// averaged R0 ~ 0.80 < 1 < max alpha S0 / mu = 1.7.
inline ScenarioSpec bump_spec(int cells = 256, double d_i = 1.0) {
  ScenarioSpec spec = constant_spec(1.0, 1.0, 1.0, 0.0, cells, 1.0);
  spec.alpha = GaussBumpCoefficient{0.5, 1.2, {0.5, 0.0}, 0.1};
  spec.d_i.x = ConstantCoefficient{d_i};
  spec.i0 = CosineCoefficient{1.0, 1.0, 1.0, 0.0};
  return spec;
}

/// I0 = 1e-2 (1 + cos 2 pi x), alpha = 2, mu = 1, S0 = 1.
inline ScenarioSpec cosine_seed_spec(int cells, double d) {
  ScenarioSpec spec = constant_spec(2.0, 1.0, 1.0, 0.0, cells, d);
  spec.i0 = CosineCoefficient{1e-2, 1e-2, 1.0, 0.0};
  return spec;
}

/// Random smooth positive field: base + sum of a few cosine modes.
inline ScalarField random_field(const Grid& grid, std::mt19937_64& rng, double base,
                                double spread) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  const double a1 = u(rng), a2 = u(rng), a3 = u(rng), p1 = u(rng), p2 = u(rng);
  const double lx = grid.length(0), ly = grid.length(1);
  return ScalarField::from_function(grid, [=](double x, double y) {
    const double two_pi = 2.0 * std::numbers::pi;
    const double w = a1 * std::cos(two_pi * x / lx + p1) + a2 * std::cos(std::numbers::pi * 3 * x / lx) +
                     a3 * std::cos(two_pi * y / ly + p2);
    return base + spread * w / 3.0;
  });
}

}  // namespace epithreshold::test
