// SPDX-License-Identifier: Apache-2.0
#include "epithreshold/field.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "epithreshold/error.hpp"

namespace epithreshold {

namespace {

void require_finite(std::span<const double> values) {
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (!std::isfinite(values[i])) {
      throw_invalid_config("field value at cell " + std::to_string(i) + " is not finite");
    }
  }
}

}  // namespace

void require_same_grid(const Grid& lhs, const Grid& rhs, const char* where) {
  if (!(lhs == rhs)) {
    throw_invalid_config(std::string(where) + ": grid mismatch");
  }
}

ScalarField::ScalarField(Grid grid, double value)
    : grid_(grid), values_(grid.size(), value) {
  require_finite(values_);
}

ScalarField::ScalarField(Grid grid, std::vector<double> values)
    : grid_(grid), values_(std::move(values)) {
  if (values_.size() != grid_.size()) {
    throw_invalid_config("field has " + std::to_string(values_.size()) +
                         " values for a grid of " + std::to_string(grid_.size()) + " cells");
  }
  require_finite(values_);
}

ScalarField ScalarField::from_function(const Grid& grid,
                                       const std::function<double(double, double)>& fn) {
  std::vector<double> values(grid.size());
  for (std::size_t k = 0; k < values.size(); ++k) {
    const auto c = grid.center_of(k);
    values[k] = fn(c[0], c[1]);
  }
  return ScalarField(grid, std::move(values));
}

ScalarField& ScalarField::operator+=(const ScalarField& other) {
  require_same_grid(grid_, other.grid_, "field addition");
  for (std::size_t i = 0; i < values_.size(); ++i) values_[i] += other.values_[i];
  return *this;
}

ScalarField& ScalarField::operator-=(const ScalarField& other) {
  require_same_grid(grid_, other.grid_, "field subtraction");
  for (std::size_t i = 0; i < values_.size(); ++i) values_[i] -= other.values_[i];
  return *this;
}

ScalarField& ScalarField::operator*=(double factor) {
  for (double& v : values_) v *= factor;
  return *this;
}

ScalarField& ScalarField::operator+=(double shift) {
  for (double& v : values_) v += shift;
  return *this;
}

ScalarField operator+(ScalarField lhs, const ScalarField& rhs) { return lhs += rhs; }
ScalarField operator-(ScalarField lhs, const ScalarField& rhs) { return lhs -= rhs; }
ScalarField operator*(double factor, ScalarField field) { return field *= factor; }
ScalarField operator+(ScalarField field, double shift) { return field += shift; }

ScalarField hadamard(ScalarField lhs, const ScalarField& rhs) {
  require_same_grid(lhs.grid(), rhs.grid(), "pointwise product");
  for (std::size_t i = 0; i < lhs.size(); ++i) lhs[i] *= rhs[i];
  return lhs;
}

double mean(const ScalarField& field) {
  const auto v = field.values();
  // Neumaier-compensated sum; a constant field returns its value exactly.
  double sum = 0.0, carry = 0.0;
  bool constant = true;
  for (double x : v) {
    constant = constant && x == v[0];
    const double t = sum + x;
    carry += std::abs(sum) >= std::abs(x) ? (sum - t) + x : (x - t) + sum;
    sum = t;
  }
  if (constant) return v[0];
  return (sum + carry) / static_cast<double>(v.size());
}

double integrate(const ScalarField& field) { return mean(field) * field.grid().volume(); }

double linf_norm(const ScalarField& field) {
  double m = 0.0;
  for (double v : field.values()) m = std::max(m, std::abs(v));
  return m;
}

double min_value(const ScalarField& field) {
  const auto v = field.values();
  return *std::min_element(v.begin(), v.end());
}

double max_value(const ScalarField& field) {
  const auto v = field.values();
  return *std::max_element(v.begin(), v.end());
}

double inner(const ScalarField& lhs, const ScalarField& rhs) {
  require_same_grid(lhs.grid(), rhs.grid(), "inner product");
  double acc = 0.0;
  for (std::size_t i = 0; i < lhs.size(); ++i) acc += lhs[i] * rhs[i];
  return acc * lhs.grid().cell_volume();
}

bool is_constant(const ScalarField& field) { return min_value(field) == max_value(field); }

DiffusionSpec::DiffusionSpec(const ScalarField& isotropic, double floor)
    : DiffusionSpec(isotropic, isotropic, floor) {}

DiffusionSpec::DiffusionSpec(const ScalarField& axx, const ScalarField& ayy, double floor)
    : axes_{axx, ayy} {
  require_same_grid(axx.grid(), ayy.grid(), "diffusion tensor");
  for (int a = 0; a < 2; ++a) {
    if (min_value(axes_[a]) < floor) {
      throw_invalid_config("diffusivity below the ellipticity floor on axis " +
                           std::to_string(a));
    }
  }
}

DiffusionSpec DiffusionSpec::constant(const Grid& grid, double d) {
  return DiffusionSpec(ScalarField(grid, d));
}

bool DiffusionSpec::is_constant_isotropic() const {
  if (!is_constant(axes_[0])) return false;
  if (grid().dim() == 1) return true;
  return is_constant(axes_[1]) && axes_[0][0] == axes_[1][0];
}

}  // namespace epithreshold
