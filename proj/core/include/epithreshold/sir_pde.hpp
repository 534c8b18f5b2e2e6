// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <optional>
#include <string>
#include <vector>

#include "epithreshold/elliptic_operator.hpp"
#include "epithreshold/scenario.hpp"

namespace epithreshold {

struct PdeState {
  double t = 0.0;
  ScalarField s;
  ScalarField i;

  static PdeState initial(const Scenario& scenario) { return {0.0, scenario.s0, scenario.i0}; }
};

struct TraceRow {
  double t;
  double mean_s;
  double mean_i;
  double max_i;
  double min_s;
  double flatness;
  double energy;  // NaN unless alpha and mu are constant
  double dissipation_cum;
  double grad_energy_s;
  double grad_energy_i;
};

struct Trace {
  std::vector<TraceRow> rows;

  /// Columns t,mean_S,mean_I,max_I,min_S,flatness,energy,dissipation_cum,
  /// grad_energy_S,grad_energy_I; 17 significant digits.
  std::string csv() const;
};

/// Semi-implicit positivity-preserving update:
///   (Id + dt L_S + dt diag(alpha I^n)) S^{n+1} = S^n
///   (Id + dt L_I + dt diag(mu)) I^{n+1} = I^n + dt alpha S^{n+1} I^n
/// Both matrices are M-matrices.
class SirStepper {
 public:
  SirStepper(const Scenario& scenario, double dt);

  double dt() const noexcept { return dt_; }
  const FaceMatrix& diffusion_s() const noexcept { return diffusion_s_; }

  PdeState step(const PdeState& state) const;

 private:
  ScalarField alpha_;
  double dt_;
  FaceMatrix diffusion_s_;
  FaceMatrix infected_system_;
};

PdeState step(const PdeState& state, const Scenario& scenario, double dt);

/// Mean of f(S) + (alpha/mu) mean(I), f(x) = (alpha/mu) x - ln x.
double energy_functional(const PdeState& state, double alpha, double mu);

/// dt * (1/|Omega|) * sum_faces a_f ((S_j - S_i)/h)^2 / Sbar_f^2 * volume,
/// Sbar_f the arithmetic face mean, evaluated on `s_new`.
double dissipation_increment(const FaceMatrix& diffusion_s, const ScalarField& s_new, double dt);
double dissipation_increment(const PdeState& state_old, const PdeState& state_new, double d_s,
                             double dt);

/// 1/2 sum_faces ((v_j - v_i)/h)^2 * volume
double gradient_energy(const ScalarField& field);

/// Decay rate of m_S + m_I: minus the least-squares slope of its logarithm
/// over the trailing `window` rows.
double estimate_decay_rate(const Trace& trace, std::size_t window);

/// Counts of per-step structural invariant failures.
struct InvariantLog {
  long steps = 0;
  long positivity_violations = 0;
  long mass_increase_violations = 0;
  long max_principle_violations = 0;
  double worst_mass_increase = 0.0;

  bool ok() const {
    return positivity_violations == 0 && mass_increase_violations == 0 &&
           max_principle_violations == 0;
  }
};

/// Owns a time-stepping run: current state, trace, invariant log and
/// running diagnostics.
class PdeRunner {
 public:
  PdeRunner(const Scenario& scenario, double dt, int trace_stride = 10);

  const PdeState& state() const noexcept { return state_; }
  const Trace& trace() const noexcept { return trace_; }
  const InvariantLog& invariants() const noexcept { return log_; }
  long steps() const noexcept { return steps_; }
  double dissipation() const noexcept { return dissipation_; }
  /// min over the run of min(S)
  double eta_empirical() const noexcept { return eta_; }
  /// max over the run of linf(I(t)) / linf(I0); zero when I0 = 0
  double harnack_ratio() const noexcept { return harnack_; }
  /// |mean S^{n+1} - mean S^n| / dt of the latest step, evaluated as
  /// mean(alpha S^{n+1} I^n), which the scheme makes identical.
  double mass_rate() const noexcept { return mass_rate_; }

  void advance();
  void advance_to(double t_end);
  /// Appends a trace row for the current state unless one exists already.
  void record();

 private:
  TraceRow row() const;

  Scenario scenario_;
  SirStepper stepper_;
  int stride_;
  bool homogeneous_rates_;
  PdeState state_;
  Trace trace_;
  InvariantLog log_;
  long steps_ = 0;
  double dissipation_ = 0.0;
  double eta_;
  double harnack_ = 0.0;
  double i0_norm_;
  double s0_norm_;
  double mass_;
  double mass_rate_ = 0.0;
};

struct ExtinctionOptions {
  double dt = 0.0;  // 0: scenario default
  std::optional<double> t_max;
  std::optional<double> tol_i;
  std::optional<double> tol_s;
  std::optional<int> trace_stride;
};

enum class Termination { Converged, TMax };

struct ExtinctionResult {
  double s_infinity = 0.0;
  double terminal_flatness = 0.0;
  Trace trace;
  Termination reason = Termination::Converged;
  PdeState final_state;
  InvariantLog invariants;
  double eta_empirical = 0.0;
  double harnack_ratio = 0.0;
  double dissipation = 0.0;
  long steps = 0;
  double dt = 0.0;
};

/// Steps until linf(I) < tol_I max(1, linf(I0)) and |d mean(S)/dt| < tol_S,
/// or t_max. s_infinity = mean(S) at termination.
ExtinctionResult run_to_extinction(const Scenario& scenario, const ExtinctionOptions& options = {});

std::string termination_name(Termination reason);

}  // namespace epithreshold
