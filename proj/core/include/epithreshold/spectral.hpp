// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "epithreshold/elliptic_operator.hpp"
#include "epithreshold/scenario.hpp"

namespace epithreshold {

struct EigenOptions {
  double tol = 1e-10;
  int max_iter = 10'000;
};

/// Principal eigenpair: lambda1 is the bottom of the spectrum, phi > 0 with
/// integrate(phi^2) = |Omega|.
struct EigenResult {
  double lambda1 = 0.0;
  ScalarField phi;
  double residual = 0.0;
  int iterations = 0;
};

/// Inverse power iteration on op + sigma Id, sigma = max(V) + 1.
///
/// Stops once linf(op phi - lambda phi) <= tol (1 + |lambda|). When that
/// target sits below the roundoff floor of op (very stiff operators) the
/// floor 4 eps ||op||_inf ||phi||_inf is used instead (1e-11 in place of
/// 4 eps in 2D, where the inner solves are iterative). lambda is the
/// face-difference Rayleigh quotient of the iterate.
EigenResult principal_eigenpair(const EllipticOperator& op, const EigenOptions& options = {});

/// [sum_f t_f (psi_j - psi_i)^2 - sum_i V_i psi_i^2] / sum_i psi_i^2
double rayleigh_quotient(const EllipticOperator& op, const ScalarField& psi);
double rayleigh_quotient(const DiffusionSpec& diffusion, const ScalarField& potential,
                         const ScalarField& psi);

/// First non-zero Neumann eigenvalue of -Laplace on the box, min_axis (pi/L)^2,
/// and its product with a diffusivity.
struct NeumannGap {
  double rho1 = 0.0;
  double scaled = 0.0;
};
NeumannGap neumann_gap(const Grid& grid, double diffusivity = 1.0);

/// lambda1 of -d_I Laplace - (alpha mean(S0) - mu).
double lambda1_of_d_i(const Scenario& scenario, double d_i, const EigenOptions& options = {});

struct CriticalDiffusivity {
  double d_star = 0.0;
  double lambda1_at_d_star = 0.0;
  double bracket_lo = 0.0;
  double bracket_hi = 0.0;
  int evaluations = 0;
};

/// d* with lambda1(d*) = 0, by bisection in log d on the strictly increasing
/// map d -> lambda1(d). The bracket [d_lo, d_hi] is widened by decades up to
/// [1e-6, 1e6]. Requires mean(alpha) mean(S0) / mean(mu) < 1 <
/// max(alpha mean(S0) / mu); raises ConditionNotMet otherwise.
CriticalDiffusivity critical_diffusivity(const Scenario& scenario, double d_lo = 1e-2,
                                         double d_hi = 1e2, double rel_tol = 1e-12,
                                         const EigenOptions& options = {});

}  // namespace epithreshold
