// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <array>
#include <string>
#include <variant>
#include <vector>

#include "epithreshold/field.hpp"

namespace epithreshold {

struct ConstantCoefficient {
  double value = 0.0;
  bool operator==(const ConstantCoefficient&) const = default;
};

/// base + amp * cos(2 pi freq x / Lx) * cos(2 pi freq_y y / Ly)
struct CosineCoefficient {
  double base = 0.0;
  double amp = 0.0;
  double freq = 1.0;
  double freq_y = 0.0;
  bool operator==(const CosineCoefficient&) const = default;
};

/// base + amp * exp(-|x - center|^2 / (2 width^2))
struct GaussBumpCoefficient {
  double base = 0.0;
  double amp = 0.0;
  std::array<double, 2> center{0.0, 0.0};
  double width = 1.0;
  bool operator==(const GaussBumpCoefficient&) const = default;
};

/// Tabulated cell-center values on a table grid of its own resolution.
struct TableCoefficient {
  std::string path;
  int dim = 1;
  std::vector<double> xs;  // distinct x centers, ascending
  std::vector<double> ys;  // distinct y centers (2D only)
  std::vector<double> values;  // row-major by y then x
  bool operator==(const TableCoefficient&) const = default;
};

using CoefficientSpec =
    std::variant<ConstantCoefficient, CosineCoefficient, GaussBumpCoefficient, TableCoefficient>;

enum class Positivity {
  None,
  Strict,       // alpha, mu, S0, diffusivities
  NonNegative,  // I0
};

/// Cell-center samples of an analytic family, or piecewise-constant lookup
/// for a table. `name` is used in error messages.
ScalarField sample_field(const CoefficientSpec& spec, const Grid& grid,
                         Positivity positivity = Positivity::None,
                         const std::string& name = "field");

std::string kind_name(const CoefficientSpec& spec);

/// Reads the table CSV format: header `x,value` (1D) or `x,y,value` (2D).
TableCoefficient read_table_csv(const std::string& path);

/// Writes a field in the same CSV format, 17 significant digits.
void write_field_csv(const std::string& path, const ScalarField& field);
std::string field_csv(const ScalarField& field);

}  // namespace epithreshold
