// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <span>

#include "epithreshold/elliptic_operator.hpp"

namespace epithreshold {

struct SolveStats {
  int iterations = 0;
  double relative_residual = 0.0;
};

struct SolveOptions {
  double rel_tol = 1e-12;
  int max_iter = 20'000;
};

/// Solves M x = rhs for a symmetric positive definite face matrix.
///
/// 1D grids use tridiagonal elimination. 2D grids use conjugate gradients
/// preconditioned by symmetric Gauss-Seidel, starting from the incoming `x`.
/// Throws a numerical error when the iteration does not reach rel_tol.
SolveStats solve_spd(const FaceMatrix& matrix, std::span<const double> rhs, std::span<double> x,
                     const SolveOptions& options = {});

/// Thomas algorithm for a 1D face matrix (ny == 1).
void solve_tridiagonal(const FaceMatrix& matrix, std::span<const double> rhs,
                       std::span<double> x);

}  // namespace epithreshold
