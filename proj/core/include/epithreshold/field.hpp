// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <array>
#include <functional>
#include <span>
#include <vector>

#include "epithreshold/grid.hpp"

namespace epithreshold {

/// One real value per grid cell.
class ScalarField {
 public:
  ScalarField(Grid grid, double value);
  ScalarField(Grid grid, std::vector<double> values);

  /// Point samples of `fn(x, y)` at cell centers (y = 0 in 1D).
  static ScalarField from_function(const Grid& grid,
                                   const std::function<double(double, double)>& fn);

  const Grid& grid() const noexcept { return grid_; }
  std::size_t size() const noexcept { return values_.size(); }

  double operator[](std::size_t i) const { return values_[i]; }
  double& operator[](std::size_t i) { return values_[i]; }

  std::span<const double> values() const noexcept { return values_; }
  std::span<double> values() noexcept { return values_; }

  bool operator==(const ScalarField&) const = default;

  ScalarField& operator+=(const ScalarField& other);
  ScalarField& operator-=(const ScalarField& other);
  ScalarField& operator*=(double factor);
  ScalarField& operator+=(double shift);

 private:
  Grid grid_;
  std::vector<double> values_;
};

ScalarField operator+(ScalarField lhs, const ScalarField& rhs);
ScalarField operator-(ScalarField lhs, const ScalarField& rhs);
ScalarField operator*(double factor, ScalarField field);
ScalarField operator+(ScalarField field, double shift);
/// Pointwise product.
ScalarField hadamard(ScalarField lhs, const ScalarField& rhs);

/// Midpoint-rule spatial average.
double mean(const ScalarField& field);
double integrate(const ScalarField& field);
double linf_norm(const ScalarField& field);
double min_value(const ScalarField& field);
double max_value(const ScalarField& field);
/// Cell-volume weighted inner product.
double inner(const ScalarField& lhs, const ScalarField& rhs);
bool is_constant(const ScalarField& field);

void require_same_grid(const Grid& lhs, const Grid& rhs, const char* where);

/// Default ellipticity floor for diffusivities.
inline constexpr double kEllipticityFloor = 1e-12;

/// Axis-aligned diagonal diffusion tensor: one diffusivity field per axis.
class DiffusionSpec {
 public:
  /// Isotropic: the same field on every axis.
  explicit DiffusionSpec(const ScalarField& isotropic, double floor = kEllipticityFloor);
  DiffusionSpec(const ScalarField& axx, const ScalarField& ayy,
                double floor = kEllipticityFloor);

  static DiffusionSpec constant(const Grid& grid, double d);

  const Grid& grid() const noexcept { return axes_[0].grid(); }
  const ScalarField& axis(int a) const { return axes_.at(a); }

  /// True when every axis carries the same spatially constant value.
  bool is_constant_isotropic() const;

 private:
  std::array<ScalarField, 2> axes_;
};

}  // namespace epithreshold
