// SPDX-License-Identifier: Apache-2.0
#include "epithreshold/sir_ode.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "epithreshold/error.hpp"

namespace epithreshold {

void OdeParams::validate() const {
  if (!(alpha > 0.0) || !std::isfinite(alpha)) throw_invalid_config("alpha must be positive");
  if (!(mu > 0.0) || !std::isfinite(mu)) throw_invalid_config("mu must be positive");
}

AveragedModel averaged_params(const Scenario& scenario) {
  return {{mean(scenario.alpha), mean(scenario.mu)}, mean(scenario.s0), mean(scenario.i0)};
}

double conserved_quantity(const OdeParams& params, double s, double i) {
  const double ratio = params.alpha / params.mu;
  return ratio * s - std::log(s) + ratio * i;
}

OdeRun simulate_sir(const OdeParams& params, double s0, double i0, double dt, double t_max,
                    int sample_stride) {
  params.validate();
  if (!(s0 > 0.0) || !(i0 >= 0.0)) throw_invalid_config("need S0 > 0 and I0 >= 0");
  if (!(dt > 0.0) || !(t_max > 0.0)) throw_invalid_config("need dt > 0 and t_max > 0");
  sample_stride = std::max(sample_stride, 1);

  const double a = params.alpha;
  const double m = params.mu;
  const auto rhs = [a, m](double s, double i) {
    const double infection = a * s * i;
    return std::pair{-infection, infection - m * i};
  };

  OdeRun run;
  const double e0 = conserved_quantity(params, s0, i0);
  double s = s0;
  double i = i0;
  double t = 0.0;
  long step = 0;
  run.trajectory.push_back({t, s, i});
  while (i >= 1e-14 && t < t_max) {
    const auto [k1s, k1i] = rhs(s, i);
    const auto [k2s, k2i] = rhs(s + 0.5 * dt * k1s, i + 0.5 * dt * k1i);
    const auto [k3s, k3i] = rhs(s + 0.5 * dt * k2s, i + 0.5 * dt * k2i);
    const auto [k4s, k4i] = rhs(s + dt * k3s, i + dt * k3i);
    s += dt / 6.0 * (k1s + 2.0 * k2s + 2.0 * k3s + k4s);
    i += dt / 6.0 * (k1i + 2.0 * k2i + 2.0 * k3i + k4i);
    ++step;
    t = static_cast<double>(step) * dt;
    run.conserved_drift = std::max(
        run.conserved_drift, std::abs(conserved_quantity(params, s, i) - e0) / std::abs(e0));
    if (step % sample_stride == 0) run.trajectory.push_back({t, s, i});
  }
  if (run.trajectory.back().t != t) run.trajectory.push_back({t, s, i});
  run.s_infinity = s;
  run.reached_t_max = i >= 1e-14;
  return run;
}

double final_size(const OdeParams& params, double s0, double i0) {
  params.validate();
  if (!(s0 > 0.0) || !(i0 >= 0.0)) throw_invalid_config("need S0 > 0 and I0 >= 0");
  const double ratio = params.alpha / params.mu;
  const auto f = [ratio](double x) { return ratio * x - std::log(x); };
  const double target = f(s0) + ratio * i0;

  // f is strictly decreasing on (0, mu/alpha].
  double hi = std::min(s0, 1.0 / ratio);
  if (f(hi) >= target) return hi;
  double lo = hi;
  do {
    lo *= 0.5;
  } while (f(lo) <= target);

  const double tol = 1e-14 * std::max(1.0, s0);
  while (hi - lo > tol) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    if (f(mid) > target) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

double basic_reproduction_number(const OdeParams& params, double s0) {
  return params.alpha * s0 / params.mu;
}

std::string ode_trajectory_csv(const OdeRun& run) {
  std::string out = "t,S,I\n";
  char buf[96];
  for (const auto& p : run.trajectory) {
    std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g\n", p.t, p.s, p.i);
    out += buf;
  }
  return out;
}

}  // namespace epithreshold
