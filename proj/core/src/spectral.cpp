// SPDX-License-Identifier: Apache-2.0
#include "epithreshold/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "epithreshold/error.hpp"
#include "epithreshold/linear_solve.hpp"

namespace epithreshold {

namespace {

// Scale so that mean(phi^2) = 1, i.e. integrate(phi^2) = |Omega|.
void normalize(ScalarField& phi) {
  double acc = 0.0;
  for (double v : phi.values()) acc += v * v;
  const double rms = std::sqrt(acc / static_cast<double>(phi.size()));
  if (!(rms > 0.0)) throw_numerical("eigen iteration collapsed to the zero vector");
  phi *= 1.0 / rms;
}

}  // namespace

double rayleigh_quotient(const EllipticOperator& op, const ScalarField& psi) {
  require_same_grid(op.grid(), psi.grid(), "Rayleigh quotient");
  double mass = 0.0;
  double potential = 0.0;
  const ScalarField& v = op.potential();
  for (std::size_t i = 0; i < psi.size(); ++i) {
    mass += psi[i] * psi[i];
    potential += v[i] * psi[i] * psi[i];
  }
  if (mass == 0.0) throw_numerical("Rayleigh quotient of the zero field");
  return (op.diffusion_matrix().face_energy(psi.values()) - potential) / mass;
}

double rayleigh_quotient(const DiffusionSpec& diffusion, const ScalarField& potential,
                         const ScalarField& psi) {
  return rayleigh_quotient(EllipticOperator::assemble(diffusion, potential), psi);
}

EigenResult principal_eigenpair(const EllipticOperator& op, const EigenOptions& options) {
  if (!(options.tol > 0.0)) throw_invalid_config("eigen tolerance must be positive");
  const Grid& grid = op.grid();
  const double sigma = max_value(op.potential()) + 1.0;
  const FaceMatrix shifted = op.matrix().affine(sigma, 1.0, {});
  const double op_norm = op.matrix().max_abs_row_sum();
  const bool iterative = grid.ny() > 1;
  const SolveOptions inner{1e-12, 20'000};
  const double floor_factor =
      iterative ? 1e-11 : 4.0 * std::numeric_limits<double>::epsilon();

  ScalarField phi(grid, 1.0);
  ScalarField next(grid, 0.0);
  ScalarField image(grid, 0.0);
  double lambda = rayleigh_quotient(op, phi);
  double residual = std::numeric_limits<double>::infinity();
  for (int it = 1; it <= options.max_iter; ++it) {
    // Warm start for the iterative solver: the exact answer if phi were an
    // eigenvector with eigenvalue lambda.
    const double guess = 1.0 / std::max(lambda + sigma, 1e-300);
    for (std::size_t k = 0; k < phi.size(); ++k) next[k] = phi[k] * guess;
    solve_spd(shifted, phi.values(), next.values(), inner);
    normalize(next);
    if (next[0] < 0.0) next *= -1.0;
    std::swap(phi, next);

    lambda = rayleigh_quotient(op, phi);
    image = op.apply(phi);
    residual = 0.0;
    for (std::size_t k = 0; k < phi.size(); ++k) {
      residual = std::max(residual, std::abs(image[k] - lambda * phi[k]));
    }
    const double target =
        std::max(options.tol * (1.0 + std::abs(lambda)), floor_factor * op_norm * linf_norm(phi));
    if (residual <= target) {
      if (!(min_value(phi) > 0.0)) {
        throw_numerical("principal eigenvector is not strictly positive (min " +
                        std::to_string(min_value(phi)) + ")");
      }
      return EigenResult{lambda, std::move(phi), residual, it};
    }
  }
  throw_numerical("inverse power iteration did not converge in " +
                  std::to_string(options.max_iter) + " iterations (residual " +
                  std::to_string(residual) + ")");
}

NeumannGap neumann_gap(const Grid& grid, double diffusivity) {
  double longest = grid.length(0);
  if (grid.dim() == 2) longest = std::max(longest, grid.length(1));
  const double rho = (std::numbers::pi / longest) * (std::numbers::pi / longest);
  return {rho, diffusivity * rho};
}

double lambda1_of_d_i(const Scenario& scenario, double d_i, const EigenOptions& options) {
  if (!(d_i > 0.0)) throw_invalid_config("d_I must be positive");
  const auto op = EllipticOperator::assemble(DiffusionSpec::constant(scenario.grid, d_i),
                                             scenario.threshold_potential());
  return principal_eigenpair(op, options).lambda1;
}

CriticalDiffusivity critical_diffusivity(const Scenario& scenario, double d_lo, double d_hi,
                                         double rel_tol, const EigenOptions& options) {
  if (!(d_lo > 0.0) || !(d_hi > d_lo)) throw_invalid_config("need 0 < d_lo < d_hi");
  const double s0_mean = mean(scenario.s0);
  const double averaged_r0 = mean(scenario.alpha) * s0_mean / mean(scenario.mu);
  double local_max = 0.0;
  for (std::size_t i = 0; i < scenario.grid.size(); ++i) {
    local_max = std::max(local_max, scenario.alpha[i] * s0_mean / scenario.mu[i]);
  }
  if (!(averaged_r0 < 1.0 && 1.0 < local_max)) {
    throw_condition_not_met(
        "critical diffusivity needs mean(alpha) mean(S0) / mean(mu) < 1 < max(alpha mean(S0) / "
        "mu); got " +
        std::to_string(averaged_r0) + " and " + std::to_string(local_max));
  }

  CriticalDiffusivity out;
  const auto lambda_at = [&](double d) {
    ++out.evaluations;
    return lambda1_of_d_i(scenario, d, options);
  };
  constexpr double kMinD = 1e-6;
  constexpr double kMaxD = 1e6;
  double lo = std::max(d_lo, kMinD);
  double hi = std::min(d_hi, kMaxD);
  double f_lo = lambda_at(lo);
  while (f_lo >= 0.0 && lo > kMinD) {
    hi = lo;
    lo = std::max(lo / 10.0, kMinD);
    f_lo = lambda_at(lo);
  }
  double f_hi = lambda_at(hi);
  while (f_hi <= 0.0 && hi < kMaxD) {
    lo = hi;
    f_lo = f_hi;
    hi = std::min(hi * 10.0, kMaxD);
    f_hi = lambda_at(hi);
  }
  if (!(f_lo < 0.0 && f_hi > 0.0)) {
    throw_condition_not_met("lambda1(d_I) has no sign change on [1e-6, 1e6]");
  }

  double mid = std::sqrt(lo * hi);
  double f_mid = lambda_at(mid);
  while ((hi - lo) > rel_tol * mid && f_mid != 0.0) {
    if (f_mid < 0.0) {
      lo = mid;
    } else {
      hi = mid;
    }
    const double next = std::sqrt(lo * hi);
    if (next <= lo || next >= hi) break;
    mid = next;
    f_mid = lambda_at(mid);
  }
  out.d_star = mid;
  out.lambda1_at_d_star = f_mid;
  out.bracket_lo = lo;
  out.bracket_hi = hi;
  return out;
}

}  // namespace epithreshold
