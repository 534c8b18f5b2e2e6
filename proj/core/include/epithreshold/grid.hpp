// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <array>
#include <cstddef>
#include <vector>

namespace epithreshold {

/// Interval or rectangle description, before validation.
struct DomainSpec {
  std::vector<double> lengths;
  std::vector<int> cells;

  bool operator==(const DomainSpec&) const = default;
};

/// Uniform cell-centered grid on (0,Lx) or (0,Lx)x(0,Ly).
///
/// Cells are numbered row-major by y then x: flat = j*nx + i.
/// Boundary faces carry no flux, which is how the zero-flux (conormal
/// Neumann) condition enters every operator built on this grid.
class Grid {
 public:
  static Grid build(const DomainSpec& spec);

  int dim() const noexcept { return dim_; }
  double length(int axis) const { return lengths_.at(axis); }
  int cells(int axis) const { return cells_.at(axis); }
  double spacing(int axis) const { return lengths_.at(axis) / cells_.at(axis); }

  int nx() const noexcept { return cells_[0]; }
  int ny() const noexcept { return cells_[1]; }

  std::size_t size() const noexcept {
    return static_cast<std::size_t>(cells_[0]) * static_cast<std::size_t>(cells_[1]);
  }
  double cell_volume() const noexcept { return spacing(0) * spacing(1); }
  double volume() const noexcept { return lengths_[0] * lengths_[1]; }

  /// Center coordinate of cell `index` along `axis`: (index + 1/2) h.
  double center(int axis, int index) const { return (index + 0.5) * spacing(axis); }
  std::array<double, 2> center_of(std::size_t flat) const;

  std::size_t flat(int i, int j) const noexcept {
    return static_cast<std::size_t>(j) * static_cast<std::size_t>(cells_[0]) +
           static_cast<std::size_t>(i);
  }

  DomainSpec spec() const;

  bool operator==(const Grid&) const = default;

 private:
  Grid(int dim, std::array<double, 2> lengths, std::array<int, 2> cells)
      : dim_(dim), lengths_(lengths), cells_(cells) {}

  int dim_;
  // A 1D grid is stored as Lx x 1 with a single row so that the flat
  // layout, volume and cell_volume formulas are shared with 2D.
  std::array<double, 2> lengths_;
  std::array<int, 2> cells_;
};

}  // namespace epithreshold
