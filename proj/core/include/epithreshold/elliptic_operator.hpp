// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <span>
#include <vector>

#include "epithreshold/field.hpp"
#include "epithreshold/grid.hpp"

namespace epithreshold {

/// Symmetric matrix with the 3/5-point Cartesian face structure:
///   (M x)_i = diag_i x_i - sum_{faces f=(i,j)} t_f x_j.
///
/// x-faces join (i,j)-(i+1,j) and are stored at j*(nx-1)+i; y-faces join
/// (i,j)-(i,j+1) and are stored at j*nx+i.
class FaceMatrix {
 public:
  FaceMatrix(Grid grid, std::vector<double> diag, std::vector<double> tx,
             std::vector<double> ty);

  const Grid& grid() const noexcept { return grid_; }
  std::size_t size() const noexcept { return diag_.size(); }

  std::span<const double> diag() const noexcept { return diag_; }
  std::span<const double> tx() const noexcept { return tx_; }
  std::span<const double> ty() const noexcept { return ty_; }

  void apply(std::span<const double> x, std::span<double> y) const;

  /// Entry (row, col); zero off the stencil. Intended for tests and small n.
  double entry(std::size_t row, std::size_t col) const;

  /// max_i sum_j |M_ij|
  double max_abs_row_sum() const;

  /// c * Id + s * M + diag(extra)
  FaceMatrix affine(double c, double s, std::span<const double> extra) const;

  /// sum over faces of t_f (x_j - x_i)^2
  double face_energy(std::span<const double> x) const;

 private:
  Grid grid_;
  std::vector<double> diag_;
  std::vector<double> tx_;
  std::vector<double> ty_;
};

/// Discrete  phi -> -div(A grad phi) - V phi  with zero-flux boundaries.
class EllipticOperator {
 public:
  static EllipticOperator assemble(const DiffusionSpec& diffusion, const ScalarField& potential);

  const Grid& grid() const noexcept { return matrix_.grid(); }
  const FaceMatrix& matrix() const noexcept { return matrix_; }
  const ScalarField& potential() const noexcept { return potential_; }

  ScalarField apply(const ScalarField& field) const;

  /// The V = 0 part: diffusion only.
  const FaceMatrix& diffusion_matrix() const noexcept { return diffusion_; }

 private:
  EllipticOperator(FaceMatrix diffusion, FaceMatrix matrix, ScalarField potential)
      : diffusion_(std::move(diffusion)),
        matrix_(std::move(matrix)),
        potential_(std::move(potential)) {}

  FaceMatrix diffusion_;
  FaceMatrix matrix_;
  ScalarField potential_;
};

/// Face transmissibility harmonic_mean(a, b) / h^2.
double transmissibility(double a, double b, double h);

}  // namespace epithreshold
