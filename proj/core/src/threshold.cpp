// SPDX-License-Identifier: Apache-2.0
#include "epithreshold/threshold.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "epithreshold/error.hpp"
#include "epithreshold/parallel.hpp"
#include "epithreshold/sir_ode.hpp"
#include "epithreshold/sir_pde.hpp"

namespace epithreshold {

namespace {

std::string num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

EigenOptions eigen_options(const Scenario& scenario) {
  return {scenario.numerics.eig_tol, scenario.numerics.eig_max_iter};
}

struct PdeOutcome {
  double s_infinity;
  bool converged;
};

PdeOutcome pde_final_size(const Scenario& scenario, const RunSettings& settings) {
  const double dt = settings.dt > 0.0 ? settings.dt : scenario.default_dt();
  ExtinctionOptions opts;
  opts.dt = dt;
  opts.t_max = settings.t_max;
  opts.trace_stride = 1'000'000;
  if (settings.richardson_levels < 1 || settings.richardson_levels > 3) {
    throw_invalid_config("richardson_levels must be 1, 2 or 3");
  }
  std::vector<double> s;
  bool converged = true;
  for (int level = 0; level < settings.richardson_levels; ++level) {
    opts.dt = dt / static_cast<double>(1 << level);
    const auto run = run_to_extinction(scenario, opts);
    s.push_back(run.s_infinity);
    converged = converged && run.reason == Termination::Converged;
  }
  switch (s.size()) {
    case 1:
      return {s[0], converged};
    case 2:
      return {2.0 * s[1] - s[0], converged};
    default:
      return {(8.0 * s[2] - 6.0 * s[1] + s[0]) / 3.0, converged};
  }
}

void sort_decreasing(std::vector<double>& scales) {
  if (scales.empty()) throw_invalid_config("need at least one I0 scale");
  for (double s : scales) {
    if (!(s >= 0.0) || !std::isfinite(s)) throw_invalid_config("I0 scales must be non-negative");
  }
  std::sort(scales.begin(), scales.end(), std::greater<>());
}

Check timeout_check(const std::vector<ComparisonRow>& rows) {
  Check c{"all runs converged", true, ""};
  for (const auto& r : rows) {
    if (!r.converged) {
      c.passed = false;
      c.detail += "scale " + num(r.scale) + " hit t_max; ";
    }
  }
  return c;
}

}  // namespace

std::string classification_name(Classification c) {
  switch (c) {
    case Classification::Propagates:
      return "Propagates";
    case Classification::FadesOff:
      return "FadesOff";
    case Classification::Critical:
      return "Critical";
  }
  return "Critical";
}

double default_critical_tolerance(const Scenario& scenario) {
  if (scenario.numerics.critical_tol > 0.0) return scenario.numerics.critical_tol;
  return 1e-8 * std::max(1.0, linf_norm(scenario.threshold_potential()));
}

ThresholdReport classify(const Scenario& scenario, std::optional<double> tol,
                         std::optional<DStarRequest> d_star) {
  const ScalarField potential = scenario.threshold_potential();
  const auto op = EllipticOperator::assemble(scenario.d_i, potential);
  const EigenResult eig = principal_eigenpair(op, eigen_options(scenario));

  ThresholdReport report;
  report.lambda1 = eig.lambda1;
  report.eigen_residual = eig.residual;
  report.tolerance = tol.value_or(default_critical_tolerance(scenario));
  if (eig.lambda1 < -report.tolerance) {
    report.classification = Classification::Propagates;
  } else if (eig.lambda1 > report.tolerance) {
    report.classification = Classification::FadesOff;
  } else {
    report.classification = Classification::Critical;
  }

  const AveragedModel avg = averaged_params(scenario);
  report.averaged_r0 = basic_reproduction_number(avg.params, avg.s0);
  if (report.averaged_r0 > 1.0) {
    report.averaged_classification = Classification::Propagates;
  } else if (report.averaged_r0 < 1.0) {
    report.averaged_classification = Classification::FadesOff;
  } else {
    report.averaged_classification = Classification::Critical;
  }

  // Constant test function in the Rayleigh formula.
  const double upper = -mean(potential);
  if (eig.lambda1 > upper + report.tolerance) {
    throw_numerical("lambda1 = " + num(eig.lambda1) + " exceeds the Rayleigh bound " +
                    num(upper));
  }

  if (d_star) {
    report.d_star = critical_diffusivity(scenario, d_star->d_lo, d_star->d_hi, d_star->rel_tol,
                                         eigen_options(scenario))
                        .d_star;
  }
  return report;
}

bool all_passed(const std::vector<Check>& checks) {
  return std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.passed; });
}

std::vector<double> default_scales() { return {1e-2, 1e-3, 1e-4, 1e-5, 1e-6}; }

ComparisonReport propagation_probe(const Scenario& scenario, std::vector<double> scales,
                                   const RunSettings& settings) {
  sort_decreasing(scales);
  ComparisonReport report;
  report.threshold = classify(scenario);
  report.homogeneous = scenario.is_homogeneous();
  report.propagation_floor = std::abs(report.threshold.lambda1) / max_value(scenario.alpha);

  const AveragedModel avg = averaged_params(scenario);
  report.rows = parallel_map<ComparisonRow>(scales.size(), [&](std::size_t k) {
    const double s = scales[k];
    const PdeOutcome pde = pde_final_size(scenario.with_i0_scaled(s), settings);
    const double s_avg = final_size(avg.params, avg.s0, s * avg.i0);
    return ComparisonRow{s, pde.s_infinity, s_avg, pde.s_infinity - s_avg,
                         avg.s0 - pde.s_infinity, pde.converged};
  });

  report.epsilon_empirical = report.rows.front().loss;
  Check bounds{"loss within [0, mean(S0)]", true, ""};
  for (const auto& r : report.rows) {
    report.epsilon_empirical = std::min(report.epsilon_empirical, r.loss);
    const double slack = 1e-12 * std::max(1.0, avg.s0);
    if (r.loss < -slack || r.loss > avg.s0 + slack) {
      bounds.passed = false;
      bounds.detail += "scale " + num(r.scale) + " loss " + num(r.loss) + "; ";
    }
  }
  report.checks.push_back(bounds);
  report.checks.push_back(timeout_check(report.rows));

  if (report.threshold.classification == Classification::Propagates) {
    const double floor = (1.0 - kFloorSlack) * report.propagation_floor;
    report.checks.push_back({"loss above propagation floor", report.epsilon_empirical >= floor,
                             "min loss " + num(report.epsilon_empirical) + " vs " +
                                 num(floor) + " = 0.8 |lambda1|/max(alpha)"});
  } else if (report.threshold.classification == Classification::FadesOff) {
    Check fade{"loss shrinks with the seed", true, ""};
    for (std::size_t k = 1; k < report.rows.size(); ++k) {
      if (!(report.rows[k].loss <= report.rows[k - 1].loss)) {
        fade.passed = false;
        fade.detail += "scale " + num(report.rows[k].scale) + " loss " +
                       num(report.rows[k].loss) + " > previous; ";
      }
    }
    report.checks.push_back(fade);
  }
  return report;
}

ComparisonReport compare_models(const Scenario& scenario, std::vector<double> scales,
                                RunSettings settings) {
  sort_decreasing(scales);
  ComparisonReport report;
  report.threshold = classify(scenario);
  report.propagation_floor = std::abs(report.threshold.lambda1) / max_value(scenario.alpha);
  report.homogeneous = scenario.is_homogeneous();

  const AveragedModel avg = averaged_params(scenario);
  report.rows = parallel_map<ComparisonRow>(scales.size(), [&](std::size_t k) {
    const double s = scales[k];
    const PdeOutcome pde = pde_final_size(scenario.with_i0_scaled(s), settings);
    const double s_avg = final_size(avg.params, avg.s0, s * avg.i0);
    return ComparisonRow{s, pde.s_infinity, s_avg, pde.s_infinity - s_avg,
                         avg.s0 - pde.s_infinity, pde.converged};
  });
  report.epsilon_empirical = report.rows.front().loss;
  for (const auto& r : report.rows) {
    report.epsilon_empirical = std::min(report.epsilon_empirical, r.loss);
  }
  report.checks.push_back(timeout_check(report.rows));

  Check finite{"gaps finite", true, ""};
  for (const auto& r : report.rows) finite.passed = finite.passed && std::isfinite(r.gap);
  report.checks.push_back(finite);

  if (!report.homogeneous) return report;

  const bool constant_i0 = is_constant(scenario.i0);
  Check order{"S_inf(PDE) >= S_inf(averaged)", true, ""};
  Check shape{constant_i0 ? "equal final states for constant I0" : "strict gap for non-constant I0",
              true, ""};
  for (const auto& r : report.rows) {
    if (r.gap < -kComparisonSlack) {
      order.passed = false;
      order.detail += "scale " + num(r.scale) + " gap " + num(r.gap) + "; ";
    }
    const bool ok = constant_i0 ? std::abs(r.gap) <= kComparisonSlack : r.gap > 0.0;
    if (!ok) {
      shape.passed = false;
      shape.detail += "scale " + num(r.scale) + " gap " + num(r.gap) + "; ";
    }
  }
  report.checks.push_back(order);
  report.checks.push_back(shape);

  // Strong mixing: both diffusion rates dominate the reaction scale.
  const double rho = neumann_gap(scenario.grid).rho1;
  const double mixing = std::min(scenario.d_s.axis(0)[0], scenario.d_i.axis(0)[0]) * rho;
  if (mixing >= 10.0 * max_value(hadamard(scenario.alpha, scenario.s0))) {
    Check shrink{"gap shrinks as the seed shrinks", true, ""};
    for (std::size_t k = 1; k < report.rows.size(); ++k) {
      if (!(std::abs(report.rows[k].gap) <= std::abs(report.rows[k - 1].gap))) {
        shrink.passed = false;
        shrink.detail += "scale " + num(report.rows[k].scale) + "; ";
      }
    }
    report.checks.push_back(shrink);
  }
  return report;
}

std::string sweep_axis_name(SweepAxis axis) {
  switch (axis) {
    case SweepAxis::DI:
      return "d_I";
    case SweepAxis::MuShift:
      return "mu_shift";
    case SweepAxis::AlphaScale:
      return "alpha_scale";
    case SweepAxis::S0Scale:
      return "s0_scale";
  }
  return "d_I";
}

SweepAxis parse_sweep_axis(const std::string& name) {
  for (auto axis : {SweepAxis::DI, SweepAxis::MuShift, SweepAxis::AlphaScale, SweepAxis::S0Scale}) {
    if (sweep_axis_name(axis) == name) return axis;
  }
  throw_invalid_config("unknown sweep axis '" + name +
                       "' (expected d_I, mu_shift, alpha_scale or s0_scale)");
}

SweepReport monotonicity_sweep(const Scenario& scenario, SweepAxis axis,
                               std::vector<double> samples) {
  if (samples.size() < 3) throw_invalid_config("a sweep needs at least 3 samples");
  if (!std::is_sorted(samples.begin(), samples.end()) ||
      std::adjacent_find(samples.begin(), samples.end()) != samples.end()) {
    throw_invalid_config("sweep samples must be strictly increasing");
  }
  const EigenOptions opts = eigen_options(scenario);

  const auto lambda_at = [&](double sample) {
    Scenario s = scenario;
    switch (axis) {
      case SweepAxis::DI:
        return lambda1_of_d_i(scenario, sample, opts);
      case SweepAxis::MuShift:
        s.mu += sample;
        break;
      case SweepAxis::AlphaScale:
        s.alpha *= sample;
        break;
      case SweepAxis::S0Scale:
        s.s0 *= sample;
        break;
    }
    return principal_eigenpair(EllipticOperator::assemble(s.d_i, s.threshold_potential()), opts)
        .lambda1;
  };

  SweepReport report;
  report.axis = axis;
  const auto values =
      parallel_map<double>(samples.size(), [&](std::size_t k) { return lambda_at(samples[k]); });
  for (std::size_t k = 0; k < samples.size(); ++k) report.rows.push_back({samples[k], values[k]});

  const ScalarField potential = scenario.threshold_potential();
  const bool strict = axis != SweepAxis::DI || !is_constant(potential);
  const double sign = (axis == SweepAxis::DI || axis == SweepAxis::MuShift) ? 1.0 : -1.0;
  double worst = 0.0;
  for (const auto& r : report.rows) worst = std::max(worst, std::abs(r.lambda1));
  const double noise = 10.0 * opts.tol * (1.0 + worst);

  Check direction{std::string(sign > 0 ? "increasing" : "decreasing") + " in " +
                      sweep_axis_name(axis) + (strict ? " (strict)" : " (non-strict)"),
                  true, ""};
  for (std::size_t k = 1; k < report.rows.size(); ++k) {
    const double step = sign * (report.rows[k].lambda1 - report.rows[k - 1].lambda1);
    const bool ok = strict ? step > 0.0 : step >= -noise;
    if (!ok) {
      direction.passed = false;
      direction.detail += "between samples " + num(report.rows[k - 1].sample) + " and " +
                          num(report.rows[k].sample) + "; ";
    }
  }
  report.checks.push_back(direction);

  if (axis == SweepAxis::DI) {
    report.limit_large_d = -mean(potential);
    report.limit_small_d = -max_value(potential);
    Check bracket{"between the small- and large-diffusivity limits", true, ""};
    for (const auto& r : report.rows) {
      if (r.lambda1 < *report.limit_small_d - noise || r.lambda1 > *report.limit_large_d + noise) {
        bracket.passed = false;
        bracket.detail += "sample " + num(r.sample) + "; ";
      }
    }
    report.checks.push_back(bracket);
  }
  return report;
}

}  // namespace epithreshold
