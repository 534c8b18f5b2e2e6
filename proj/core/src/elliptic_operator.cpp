// SPDX-License-Identifier: Apache-2.0
#include "epithreshold/elliptic_operator.hpp"

#include <algorithm>
#include <cmath>

#include "epithreshold/error.hpp"

namespace epithreshold {

FaceMatrix::FaceMatrix(Grid grid, std::vector<double> diag, std::vector<double> tx,
                       std::vector<double> ty)
    : grid_(grid), diag_(std::move(diag)), tx_(std::move(tx)), ty_(std::move(ty)) {
  const auto nx = static_cast<std::size_t>(grid_.nx());
  const auto ny = static_cast<std::size_t>(grid_.ny());
  if (diag_.size() != nx * ny || tx_.size() != (nx - 1) * ny || ty_.size() != nx * (ny - 1)) {
    throw_invalid_config("face matrix: array sizes do not match the grid");
  }
}

void FaceMatrix::apply(std::span<const double> x, std::span<double> y) const {
  const int nx = grid_.nx();
  const int ny = grid_.ny();
  for (std::size_t k = 0; k < diag_.size(); ++k) y[k] = diag_[k] * x[k];
  for (int j = 0; j < ny; ++j) {
    for (int i = 0; i + 1 < nx; ++i) {
      const double t = tx_[static_cast<std::size_t>(j) * (nx - 1) + i];
      const std::size_t a = grid_.flat(i, j);
      y[a] -= t * x[a + 1];
      y[a + 1] -= t * x[a];
    }
  }
  for (int j = 0; j + 1 < ny; ++j) {
    for (int i = 0; i < nx; ++i) {
      const std::size_t a = grid_.flat(i, j);
      const double t = ty_[a];
      const std::size_t b = a + static_cast<std::size_t>(nx);
      y[a] -= t * x[b];
      y[b] -= t * x[a];
    }
  }
}

double FaceMatrix::entry(std::size_t row, std::size_t col) const {
  if (row == col) return diag_[row];
  const auto nx = static_cast<std::size_t>(grid_.nx());
  const std::size_t lo = std::min(row, col);
  const std::size_t hi = std::max(row, col);
  const std::size_t i = lo % nx;
  const std::size_t j = lo / nx;
  if (hi == lo + 1 && i + 1 < nx) return -tx_[j * (nx - 1) + i];
  if (hi == lo + nx) return -ty_[lo];
  return 0.0;
}

double FaceMatrix::max_abs_row_sum() const {
  std::vector<double> rows(diag_.size());
  for (std::size_t k = 0; k < rows.size(); ++k) rows[k] = std::abs(diag_[k]);
  const int nx = grid_.nx();
  for (int j = 0; j < grid_.ny(); ++j) {
    for (int i = 0; i + 1 < nx; ++i) {
      const double t = std::abs(tx_[static_cast<std::size_t>(j) * (nx - 1) + i]);
      rows[grid_.flat(i, j)] += t;
      rows[grid_.flat(i + 1, j)] += t;
    }
  }
  for (std::size_t a = 0; a < ty_.size(); ++a) {
    rows[a] += std::abs(ty_[a]);
    rows[a + static_cast<std::size_t>(nx)] += std::abs(ty_[a]);
  }
  return *std::max_element(rows.begin(), rows.end());
}

FaceMatrix FaceMatrix::affine(double c, double s, std::span<const double> extra) const {
  std::vector<double> diag(diag_.size());
  for (std::size_t k = 0; k < diag.size(); ++k) {
    diag[k] = c + s * diag_[k] + (extra.empty() ? 0.0 : extra[k]);
  }
  std::vector<double> tx(tx_), ty(ty_);
  for (double& t : tx) t *= s;
  for (double& t : ty) t *= s;
  return FaceMatrix(grid_, std::move(diag), std::move(tx), std::move(ty));
}

double FaceMatrix::face_energy(std::span<const double> x) const {
  const int nx = grid_.nx();
  double acc = 0.0;
  for (int j = 0; j < grid_.ny(); ++j) {
    for (int i = 0; i + 1 < nx; ++i) {
      const std::size_t a = grid_.flat(i, j);
      const double diff = x[a + 1] - x[a];
      acc += tx_[static_cast<std::size_t>(j) * (nx - 1) + i] * diff * diff;
    }
  }
  for (std::size_t a = 0; a < ty_.size(); ++a) {
    const double diff = x[a + static_cast<std::size_t>(nx)] - x[a];
    acc += ty_[a] * diff * diff;
  }
  return acc;
}

double transmissibility(double a, double b, double h) {
  return (2.0 * a * b / (a + b)) / (h * h);
}

EllipticOperator EllipticOperator::assemble(const DiffusionSpec& diffusion,
                                            const ScalarField& potential) {
  const Grid& grid = diffusion.grid();
  require_same_grid(grid, potential.grid(), "operator assembly");
  const int nx = grid.nx();
  const int ny = grid.ny();
  std::vector<double> diag(grid.size(), 0.0);
  std::vector<double> tx(static_cast<std::size_t>(nx - 1) * ny);
  std::vector<double> ty(static_cast<std::size_t>(nx) * (ny - 1));

  const ScalarField& ax = diffusion.axis(0);
  const double hx = grid.spacing(0);
  for (int j = 0; j < ny; ++j) {
    for (int i = 0; i + 1 < nx; ++i) {
      const std::size_t a = grid.flat(i, j);
      const double t = transmissibility(ax[a], ax[a + 1], hx);
      tx[static_cast<std::size_t>(j) * (nx - 1) + i] = t;
      diag[a] += t;
      diag[a + 1] += t;
    }
  }
  if (grid.dim() == 2) {
    const ScalarField& ay = diffusion.axis(1);
    const double hy = grid.spacing(1);
    for (int j = 0; j + 1 < ny; ++j) {
      for (int i = 0; i < nx; ++i) {
        const std::size_t a = grid.flat(i, j);
        const std::size_t b = grid.flat(i, j + 1);
        const double t = transmissibility(ay[a], ay[b], hy);
        ty[a] = t;
        diag[a] += t;
        diag[b] += t;
      }
    }
  }
  FaceMatrix diffusion_part(grid, std::move(diag), std::move(tx), std::move(ty));
  ScalarField minus_v = -1.0 * potential;
  FaceMatrix full = diffusion_part.affine(0.0, 1.0, minus_v.values());
  return EllipticOperator(std::move(diffusion_part), std::move(full), potential);
}

ScalarField EllipticOperator::apply(const ScalarField& field) const {
  require_same_grid(grid(), field.grid(), "operator apply");
  // Flux form, so constants map to exactly zero when V = 0.
  const Grid& g = grid();
  const int nx = g.nx();
  const auto tx = diffusion_.tx();
  const auto ty = diffusion_.ty();
  ScalarField out(g, 0.0);
  for (std::size_t k = 0; k < g.size(); ++k) out[k] = -potential_[k] * field[k];
  for (int j = 0; j < g.ny(); ++j) {
    for (int i = 0; i + 1 < nx; ++i) {
      const std::size_t a = g.flat(i, j);
      const double flux = tx[static_cast<std::size_t>(j) * (nx - 1) + i] * (field[a] - field[a + 1]);
      out[a] += flux;
      out[a + 1] -= flux;
    }
  }
  for (std::size_t a = 0; a < ty.size(); ++a) {
    const std::size_t b = a + static_cast<std::size_t>(nx);
    const double flux = ty[a] * (field[a] - field[b]);
    out[a] += flux;
    out[b] -= flux;
  }
  return out;
}

}  // namespace epithreshold
