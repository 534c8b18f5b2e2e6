// SPDX-License-Identifier: Apache-2.0
#include "epithreshold/grid.hpp"

#include <cmath>
#include <string>

#include "epithreshold/error.hpp"

namespace epithreshold {

Grid Grid::build(const DomainSpec& spec) {
  const auto dim = spec.lengths.size();
  if (dim != 1 && dim != 2) {
    throw_invalid_config("domain: dimension must be 1 or 2, got " + std::to_string(dim));
  }
  if (spec.cells.size() != dim) {
    throw_invalid_config("domain: `cells` must list one count per axis");
  }
  std::array<double, 2> lengths{1.0, 1.0};
  std::array<int, 2> cells{1, 1};
  for (std::size_t axis = 0; axis < dim; ++axis) {
    const double len = spec.lengths[axis];
    if (!(len > 0.0) || !std::isfinite(len)) {
      throw_invalid_config("domain: length along axis " + std::to_string(axis) +
                           " must be positive");
    }
    if (spec.cells[axis] < 2) {
      throw_invalid_config("domain: need at least 2 cells along axis " + std::to_string(axis));
    }
    lengths[axis] = len;
    cells[axis] = spec.cells[axis];
  }
  return Grid(static_cast<int>(dim), lengths, cells);
}

std::array<double, 2> Grid::center_of(std::size_t flat) const {
  const int i = static_cast<int>(flat % static_cast<std::size_t>(cells_[0]));
  const int j = static_cast<int>(flat / static_cast<std::size_t>(cells_[0]));
  return {center(0, i), dim_ == 2 ? center(1, j) : 0.0};
}

DomainSpec Grid::spec() const {
  DomainSpec out;
  for (int axis = 0; axis < dim_; ++axis) {
    out.lengths.push_back(lengths_[axis]);
    out.cells.push_back(cells_[axis]);
  }
  return out;
}

}  // namespace epithreshold
