// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>
#include <vector>

#include "epithreshold/scenario.hpp"

namespace epithreshold {

struct OdeParams {
  double alpha = 1.0;
  double mu = 1.0;

  /// Throws InvalidConfig unless both rates are positive and finite.
  void validate() const;
};

struct AveragedModel {
  OdeParams params;
  double s0 = 1.0;
  double i0 = 0.0;
};

/// (mean alpha, mean mu, mean S0, mean I0)
AveragedModel averaged_params(const Scenario& scenario);

struct OdeSample {
  double t;
  double s;
  double i;
};

struct OdeRun {
  std::vector<OdeSample> trajectory;
  double s_infinity = 0.0;
  /// max_t |E(t) - E(0)| / |E(0)| for E = (alpha/mu)(S + I) - ln S
  double conserved_drift = 0.0;
  bool reached_t_max = false;
};

/// (alpha/mu) S - ln S + (alpha/mu) I, constant along exact trajectories.
double conserved_quantity(const OdeParams& params, double s, double i);

/// Classical RK4 with a fixed step on S' = -a S I, I' = a S I - mu I. Stops
/// when I < 1e-14 or t >= t_max. Every `sample_stride`-th step is kept.
OdeRun simulate_sir(const OdeParams& params, double s0, double i0, double dt, double t_max,
                    int sample_stride = 100);

/// Root S_inf <= min(S0, mu/alpha) of
///   (alpha/mu) S_inf - ln S_inf = (alpha/mu) S0 - ln S0 + (alpha/mu) I0,
/// by bisection on the decreasing branch of x -> (alpha/mu) x - ln x.
double final_size(const OdeParams& params, double s0, double i0);

double basic_reproduction_number(const OdeParams& params, double s0);

/// CSV `t,S,I`.
std::string ode_trajectory_csv(const OdeRun& run);

}  // namespace epithreshold
