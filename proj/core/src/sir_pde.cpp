// SPDX-License-Identifier: Apache-2.0
#include "epithreshold/sir_pde.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

#include "epithreshold/error.hpp"
#include "epithreshold/linear_solve.hpp"

namespace epithreshold {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

FaceMatrix diffusion_of(const DiffusionSpec& spec) {
  return EllipticOperator::assemble(spec, ScalarField(spec.grid(), 0.0)).diffusion_matrix();
}

// Relative slack for invariants that hold exactly in exact arithmetic.
constexpr double kRoundoff = 1e-13;

}  // namespace

std::string Trace::csv() const {
  std::string out =
      "t,mean_S,mean_I,max_I,min_S,flatness,energy,dissipation_cum,grad_energy_S,"
      "grad_energy_I\n";
  char buf[512];
  for (const auto& r : rows) {
    std::snprintf(buf, sizeof buf,
                  "%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g\n", r.t, r.mean_s,
                  r.mean_i, r.max_i, r.min_s, r.flatness, r.energy, r.dissipation_cum,
                  r.grad_energy_s, r.grad_energy_i);
    out += buf;
  }
  return out;
}

SirStepper::SirStepper(const Scenario& scenario, double dt)
    : alpha_(scenario.alpha),
      dt_(dt),
      diffusion_s_(diffusion_of(scenario.d_s)),
      infected_system_([&] {
        if (!(dt > 0.0)) throw_invalid_config("time step must be positive");
        const ScalarField reaction = dt * scenario.mu;
        return diffusion_of(scenario.d_i).affine(1.0, dt, reaction.values());
      }()) {}

PdeState SirStepper::step(const PdeState& state) const {
  const std::size_t n = state.s.size();
  ScalarField loss = dt_ * hadamard(alpha_, state.i);
  const FaceMatrix susceptible_system = diffusion_s_.affine(1.0, dt_, loss.values());

  PdeState next = state;
  next.t = state.t + dt_;
  solve_spd(susceptible_system, state.s.values(), next.s.values());

  ScalarField rhs = state.i;
  for (std::size_t k = 0; k < n; ++k) rhs[k] += dt_ * alpha_[k] * next.s[k] * state.i[k];
  solve_spd(infected_system_, rhs.values(), next.i.values());
  return next;
}

PdeState step(const PdeState& state, const Scenario& scenario, double dt) {
  return SirStepper(scenario, dt).step(state);
}

double energy_functional(const PdeState& state, double alpha, double mu) {
  const double ratio = alpha / mu;
  double acc = 0.0;
  for (double s : state.s.values()) {
    if (!(s > 0.0)) throw_numerical("energy functional needs S > 0 everywhere");
    acc += ratio * s - std::log(s);
  }
  return acc / static_cast<double>(state.s.size()) + ratio * mean(state.i);
}

double dissipation_increment(const FaceMatrix& diffusion_s, const ScalarField& s_new, double dt) {
  const Grid& g = s_new.grid();
  const int nx = g.nx();
  const auto tx = diffusion_s.tx();
  const auto ty = diffusion_s.ty();
  double acc = 0.0;
  for (int j = 0; j < g.ny(); ++j) {
    for (int i = 0; i + 1 < nx; ++i) {
      const std::size_t a = g.flat(i, j);
      const double diff = s_new[a + 1] - s_new[a];
      const double face = 0.5 * (s_new[a + 1] + s_new[a]);
      acc += tx[static_cast<std::size_t>(j) * (nx - 1) + i] * diff * diff / (face * face);
    }
  }
  for (std::size_t a = 0; a < ty.size(); ++a) {
    const std::size_t b = a + static_cast<std::size_t>(nx);
    const double diff = s_new[b] - s_new[a];
    const double face = 0.5 * (s_new[b] + s_new[a]);
    acc += ty[a] * diff * diff / (face * face);
  }
  return dt * acc * g.cell_volume() / g.volume();
}

double dissipation_increment(const PdeState& /*state_old*/, const PdeState& state_new, double d_s,
                             double dt) {
  const Grid& g = state_new.s.grid();
  return dissipation_increment(diffusion_of(DiffusionSpec::constant(g, d_s)), state_new.s, dt);
}

double gradient_energy(const ScalarField& field) {
  const Grid& g = field.grid();
  const int nx = g.nx();
  const double hx = g.spacing(0);
  double acc = 0.0;
  for (int j = 0; j < g.ny(); ++j) {
    for (int i = 0; i + 1 < nx; ++i) {
      const std::size_t a = g.flat(i, j);
      const double slope = (field[a + 1] - field[a]) / hx;
      acc += slope * slope;
    }
  }
  if (g.dim() == 2) {
    const double hy = g.spacing(1);
    for (int j = 0; j + 1 < g.ny(); ++j) {
      for (int i = 0; i < nx; ++i) {
        const std::size_t a = g.flat(i, j);
        const double slope = (field[a + static_cast<std::size_t>(nx)] - field[a]) / hy;
        acc += slope * slope;
      }
    }
  }
  return 0.5 * acc * g.cell_volume();
}

double estimate_decay_rate(const Trace& trace, std::size_t window) {
  if (window < 2 || trace.rows.size() < window) {
    throw_condition_not_met("decay rate: need at least " + std::to_string(std::max<std::size_t>(window, 2)) +
                            " trace rows");
  }
  const auto first = trace.rows.end() - static_cast<std::ptrdiff_t>(window);
  double st = 0.0, sy = 0.0, stt = 0.0, sty = 0.0;
  for (auto it = first; it != trace.rows.end(); ++it) {
    const double m = it->grad_energy_s + it->grad_energy_i;
    if (!(m > 0.0)) throw_condition_not_met("decay rate: gradient energy is not positive");
    const double y = std::log(m);
    st += it->t;
    sy += y;
    stt += it->t * it->t;
    sty += it->t * y;
  }
  const double n = static_cast<double>(window);
  const double denom = n * stt - st * st;
  if (!(denom > 0.0)) throw_condition_not_met("decay rate: trace times are degenerate");
  return -(n * sty - st * sy) / denom;
}

PdeRunner::PdeRunner(const Scenario& scenario, double dt, int trace_stride)
    : scenario_(scenario),
      stepper_(scenario_, dt),
      stride_(std::max(trace_stride, 1)),
      homogeneous_rates_(is_constant(scenario.alpha) && is_constant(scenario.mu)),
      state_(PdeState::initial(scenario)),
      eta_(min_value(scenario.s0)),
      i0_norm_(linf_norm(scenario.i0)),
      s0_norm_(linf_norm(scenario.s0)),
      mass_(integrate(scenario.s0) + integrate(scenario.i0)) {
  if (i0_norm_ > 0.0) harnack_ = 1.0;
  mass_rate_ = mean(hadamard(hadamard(scenario.alpha, scenario.s0), scenario.i0));
  record();
}

TraceRow PdeRunner::row() const {
  const double min_s = min_value(state_.s);
  return TraceRow{
      state_.t,
      mean(state_.s),
      mean(state_.i),
      max_value(state_.i),
      min_s,
      max_value(state_.s) - min_s,
      homogeneous_rates_ ? energy_functional(state_, scenario_.alpha[0], scenario_.mu[0]) : kNaN,
      dissipation_,
      gradient_energy(state_.s),
      gradient_energy(state_.i),
  };
}

void PdeRunner::record() {
  if (!trace_.rows.empty() && trace_.rows.back().t == state_.t) return;
  trace_.rows.push_back(row());
}

void PdeRunner::advance() {
  PdeState next = stepper_.step(state_);
  ++steps_;
  next.t = static_cast<double>(steps_) * stepper_.dt();
  // The S-solve conserves the diffusive part exactly, so
  // (mean S^n - mean S^{n+1}) / dt = mean(alpha S^{n+1} I^n). Evaluating the
  // right side avoids the eps/dt cancellation floor of the difference.
  mass_rate_ = mean(hadamard(hadamard(scenario_.alpha, next.s), state_.i));
  state_ = std::move(next);

  dissipation_ += dissipation_increment(stepper_.diffusion_s(), state_.s, stepper_.dt());

  const double min_s = min_value(state_.s);
  const double min_i = min_value(state_.i);
  const double mass = integrate(state_.s) + integrate(state_.i);
  ++log_.steps;
  if (!(min_s > 0.0) || !(min_i >= 0.0)) ++log_.positivity_violations;
  if (mass > mass_ * (1.0 + kRoundoff)) {
    ++log_.mass_increase_violations;
    log_.worst_mass_increase = std::max(log_.worst_mass_increase, mass - mass_);
  }
  if (linf_norm(state_.s) > s0_norm_ * (1.0 + kRoundoff)) ++log_.max_principle_violations;
  mass_ = mass;
  eta_ = std::min(eta_, min_s);
  if (i0_norm_ > 0.0) harnack_ = std::max(harnack_, linf_norm(state_.i) / i0_norm_);

  if (steps_ % stride_ == 0) record();
}

void PdeRunner::advance_to(double t_end) {
  const auto target = static_cast<long>(std::llround(t_end / stepper_.dt()));
  while (steps_ < target) advance();
  record();
}

ExtinctionResult run_to_extinction(const Scenario& scenario, const ExtinctionOptions& options) {
  const Numerics& num = scenario.numerics;
  const double dt = options.dt > 0.0 ? options.dt : scenario.default_dt();
  const double t_max = options.t_max.value_or(num.t_max);
  const double tol_i = options.tol_i.value_or(num.tol_i);
  const double tol_s = options.tol_s.value_or(num.tol_s);
  if (!(t_max > 0.0) || !(tol_i > 0.0) || !(tol_s > 0.0)) {
    throw_invalid_config("t_max and tolerances must be positive");
  }

  PdeRunner runner(scenario, dt, options.trace_stride.value_or(num.trace_stride));
  const double i_threshold = tol_i * std::max(1.0, linf_norm(scenario.i0));
  const auto converged = [&] {
    return linf_norm(runner.state().i) < i_threshold && runner.mass_rate() < tol_s;
  };
  const auto max_steps = static_cast<long>(std::ceil(t_max / dt));

  Termination reason = Termination::Converged;
  while (!converged()) {
    if (runner.steps() >= max_steps) {
      reason = Termination::TMax;
      break;
    }
    runner.advance();
  }
  runner.record();

  const PdeState& final_state = runner.state();
  return ExtinctionResult{
      mean(final_state.s),
      max_value(final_state.s) - min_value(final_state.s),
      runner.trace(),
      reason,
      final_state,
      runner.invariants(),
      runner.eta_empirical(),
      runner.harnack_ratio(),
      runner.dissipation(),
      runner.steps(),
      dt,
  };
}

std::string termination_name(Termination reason) {
  return reason == Termination::Converged ? "converged" : "t_max";
}

}  // namespace epithreshold
