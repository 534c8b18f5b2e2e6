// SPDX-License-Identifier: Apache-2.0
#include "epithreshold/scenario.hpp"

#include <algorithm>

namespace epithreshold {

namespace {

DiffusionSpec sample_diffusion(const DiffusionCoefficients& c, const Grid& grid,
                               const std::string& name) {
  ScalarField ax = sample_field(c.x, grid, Positivity::Strict, name);
  if (grid.dim() == 2 && c.y) {
    return DiffusionSpec(ax, sample_field(*c.y, grid, Positivity::Strict, name + "_y"));
  }
  return DiffusionSpec(ax);
}

}  // namespace

Scenario Scenario::realize(const ScenarioSpec& spec) {
  const Grid grid = Grid::build(spec.domain);
  return Scenario{
      grid,
      sample_field(spec.alpha, grid, Positivity::Strict, "alpha"),
      sample_field(spec.mu, grid, Positivity::Strict, "mu"),
      sample_diffusion(spec.d_s, grid, "d_s"),
      sample_diffusion(spec.d_i, grid, "d_i"),
      sample_field(spec.s0, grid, Positivity::Strict, "s0"),
      sample_field(spec.i0, grid, Positivity::NonNegative, "i0"),
      spec.numerics,
  };
}

Scenario Scenario::with_i0_scaled(double scale) const {
  Scenario out = *this;
  out.i0 *= scale;
  return out;
}

Scenario Scenario::with_d_i(double d) const {
  Scenario out = *this;
  out.d_i = DiffusionSpec::constant(grid, d);
  return out;
}

ScalarField Scenario::threshold_potential() const {
  return mean(s0) * alpha - mu;
}

bool Scenario::is_homogeneous() const {
  return is_constant(alpha) && is_constant(mu) && is_constant(s0) &&
         d_s.is_constant_isotropic() && d_i.is_constant_isotropic();
}

double Scenario::default_dt() const {
  if (numerics.dt > 0.0) return numerics.dt;
  return 1e-3 / max_value(hadamard(alpha, s0));
}

}  // namespace epithreshold
