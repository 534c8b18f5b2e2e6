// SPDX-License-Identifier: Apache-2.0
#include "epithreshold/linear_solve.hpp"

#include <cmath>
#include <string>
#include <vector>

#include "epithreshold/error.hpp"

namespace epithreshold {

namespace {

double dot(std::span<const double> a, std::span<const double> b) {
  double acc = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) acc += a[i] * b[i];
  return acc;
}

// z = (D + L)^{-1} D (D + U)^{-1} r  applied as a forward then a backward
// Gauss-Seidel sweep over the lexicographic ordering.
void symmetric_gauss_seidel(const FaceMatrix& m, std::span<const double> r, std::span<double> z) {
  const Grid& g = m.grid();
  const int nx = g.nx();
  const int ny = g.ny();
  const auto diag = m.diag();
  const auto tx = m.tx();
  const auto ty = m.ty();
  const auto xface = [&](int i, int j) { return tx[static_cast<std::size_t>(j) * (nx - 1) + i]; };

  for (int j = 0; j < ny; ++j) {
    for (int i = 0; i < nx; ++i) {
      const std::size_t k = g.flat(i, j);
      double acc = r[k];
      if (i > 0) acc += xface(i - 1, j) * z[k - 1];
      if (j > 0) acc += ty[k - static_cast<std::size_t>(nx)] * z[k - static_cast<std::size_t>(nx)];
      z[k] = acc / diag[k];
    }
  }
  for (std::size_t k = 0; k < z.size(); ++k) z[k] *= diag[k];
  for (int j = ny - 1; j >= 0; --j) {
    for (int i = nx - 1; i >= 0; --i) {
      const std::size_t k = g.flat(i, j);
      double acc = z[k];
      if (i + 1 < nx) acc += xface(i, j) * z[k + 1];
      if (j + 1 < ny) acc += ty[k] * z[k + static_cast<std::size_t>(nx)];
      z[k] = acc / diag[k];
    }
  }
}

}  // namespace

void solve_tridiagonal(const FaceMatrix& matrix, std::span<const double> rhs,
                       std::span<double> x) {
  const std::size_t n = matrix.size();
  const auto diag = matrix.diag();
  const auto t = matrix.tx();
  // Sub/super diagonals are -t.
  std::vector<double> c(n), d(n);
  double denom = diag[0];
  if (!(denom > 0.0)) throw_numerical("tridiagonal solve: non-positive pivot");
  c[0] = n > 1 ? -t[0] / denom : 0.0;
  d[0] = rhs[0] / denom;
  for (std::size_t i = 1; i < n; ++i) {
    denom = diag[i] + t[i - 1] * c[i - 1];
    if (!(denom > 0.0)) throw_numerical("tridiagonal solve: non-positive pivot");
    c[i] = i + 1 < n ? -t[i] / denom : 0.0;
    d[i] = (rhs[i] + t[i - 1] * d[i - 1]) / denom;
  }
  x[n - 1] = d[n - 1];
  for (std::size_t i = n - 1; i-- > 0;) x[i] = d[i] - c[i] * x[i + 1];
}

SolveStats solve_spd(const FaceMatrix& matrix, std::span<const double> rhs, std::span<double> x,
                     const SolveOptions& options) {
  if (matrix.grid().ny() == 1) {
    solve_tridiagonal(matrix, rhs, x);
    return {};
  }

  const std::size_t n = matrix.size();
  std::vector<double> r(n), z(n), p(n), q(n);
  matrix.apply(x, q);
  for (std::size_t i = 0; i < n; ++i) r[i] = rhs[i] - q[i];
  const double rhs_norm = std::sqrt(dot(rhs, rhs));
  if (rhs_norm == 0.0) {
    for (double& v : x) v = 0.0;
    return {};
  }
  double res = std::sqrt(dot(r, r)) / rhs_norm;
  if (res <= options.rel_tol) return {0, res};

  symmetric_gauss_seidel(matrix, r, z);
  p = z;
  double rz = dot(r, z);
  for (int it = 1; it <= options.max_iter; ++it) {
    matrix.apply(p, q);
    const double pq = dot(p, q);
    if (!(pq > 0.0)) throw_numerical("conjugate gradients: matrix is not positive definite");
    const double step = rz / pq;
    for (std::size_t i = 0; i < n; ++i) {
      x[i] += step * p[i];
      r[i] -= step * q[i];
    }
    res = std::sqrt(dot(r, r)) / rhs_norm;
    if (res <= options.rel_tol) return {it, res};
    symmetric_gauss_seidel(matrix, r, z);
    const double rz_next = dot(r, z);
    const double beta = rz_next / rz;
    rz = rz_next;
    for (std::size_t i = 0; i < n; ++i) p[i] = z[i] + beta * p[i];
  }
  throw_numerical("conjugate gradients: no convergence in " + std::to_string(options.max_iter) +
                  " iterations (relative residual " + std::to_string(res) + ")");
}

}  // namespace epithreshold
