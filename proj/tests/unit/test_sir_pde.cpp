// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <cmath>
#include <numbers>
#include <sstream>

#include "epithreshold/error.hpp"
#include "epithreshold/spectral.hpp"
#include "epithreshold/sir_ode.hpp"
#include "epithreshold/sir_pde.hpp"
#include "support/fixtures.hpp"

using namespace epithreshold;

namespace {

constexpr double kPi = std::numbers::pi;

Trace synthetic_trace(const std::function<double(double)>& m, int rows) {
  Trace trace;
  for (int k = 0; k < rows; ++k) {
    const double t = 0.1 * k;
    trace.rows.push_back({t, 1.0, 0.0, 0.0, 1.0, 0.0, NAN, 0.0, m(t), 0.0});
  }
  return trace;
}

}  // namespace

TEST_CASE("no infection: pure diffusion conserves susceptible mass") {
  auto spec = test::constant_spec(2.0, 1.0, 1.0, 0.0, 128, 0.3);
  spec.s0 = CosineCoefficient{1.0, 0.4, 2.0, 0.0};
  const auto sc = Scenario::realize(spec);
  PdeState state = PdeState::initial(sc);
  const SirStepper stepper(sc, 1e-2);
  for (int n = 0; n < 50; ++n) {
    const auto next = stepper.step(state);
    CHECK(linf_norm(next.i) == 0.0);
    CHECK(std::abs(mean(next.s) - mean(state.s)) <= 4e-16);
    CHECK(linf_norm(next.s) <= linf_norm(state.s));
    state = next;
  }
  CHECK(state.t == doctest::Approx(0.5));
}

TEST_CASE("constant fields reproduce one semi-implicit ODE step") {
  const double alpha = 2.0, mu = 1.0, s = 0.9, i = 0.05, dt = 0.01;
  const auto sc = Scenario::realize(test::constant_spec(alpha, mu, s, i, 32));
  const auto next = step(PdeState::initial(sc), sc, dt);
  const double s1 = s / (1.0 + dt * alpha * i);
  const double i1 = (i + dt * alpha * s1 * i) / (1.0 + dt * mu);
  for (std::size_t k = 0; k < sc.grid.size(); ++k) {
    CHECK(next.s[k] == doctest::Approx(s1).epsilon(1e-15));
    CHECK(next.i[k] == doctest::Approx(i1).epsilon(1e-15));
  }
}

TEST_CASE("discrete mass balance, positivity and the maximum principle") {
  std::mt19937_64 rng(42);
  for (const auto& domain : {DomainSpec{{1.0}, {64}}, DomainSpec{{1.0, 0.5}, {16, 8}}}) {
    auto spec = test::constant_spec(3.0, 0.7, 1.0, 0.0);
    spec.domain = domain;
    const Grid g = Grid::build(domain);
    auto sc = Scenario::realize(spec);
    sc.alpha = test::random_field(g, rng, 3.0, 2.0);
    sc.mu = test::random_field(g, rng, 0.7, 0.5);
    sc.s0 = test::random_field(g, rng, 1.0, 0.8);
    sc.i0 = test::random_field(g, rng, 0.05, 0.1);
    for (auto& v : sc.i0.values()) v = std::max(v, 0.0);
    sc.d_s = DiffusionSpec(test::random_field(g, rng, 0.05, 0.04));
    sc.d_i = DiffusionSpec(test::random_field(g, rng, 0.2, 0.1));
    const double dt = 0.02;
    // Exact up to rounding with direct 1D solves; up to the CG tolerance in 2D.
    const double balance_tol = g.dim() == 1 ? 1e-14 : 1e-12;
    const SirStepper stepper(sc, dt);
    PdeState state = PdeState::initial(sc);
    for (int n = 0; n < 200; ++n) {
      const auto next = stepper.step(state);
      const double before = integrate(state.s + state.i);
      const double after = integrate(next.s + next.i);
      const double loss = dt * integrate(hadamard(sc.mu, next.i));
      CHECK(std::abs(after - (before - loss)) <= balance_tol * before);
      CHECK(after < before);
      CHECK(min_value(next.s) > 0.0);
      CHECK(min_value(next.i) >= 0.0);
      CHECK(max_value(next.s) <= max_value(sc.s0));
      state = next;
    }
  }
}

TEST_CASE("energy functional examples") {
  const Grid g = Grid::build({{1.0}, {8}});
  CHECK(energy_functional({0.0, ScalarField(g, 1.0), ScalarField(g, 0.0)}, 1.0, 1.0) == 1.0);
  const double alpha = 2.5, mu = 0.5;
  const double e = energy_functional({0.0, ScalarField(g, mu / alpha), ScalarField(g, 0.0)}, alpha, mu);
  CHECK(e == doctest::Approx(1.0 - std::log(mu / alpha)));
  // The minimum of f sits at mu/alpha.
  for (double s : {0.1, 0.19, 0.21, 1.0}) {
    CHECK(energy_functional({0.0, ScalarField(g, s), ScalarField(g, 0.0)}, alpha, mu) > e);
  }
  CHECK_THROWS_AS(energy_functional({0.0, ScalarField(g, 0.0), ScalarField(g, 0.0)}, 1.0, 1.0),
                  Error);
  // Constant in time along the ODE.
  const OdeParams p{2.0, 1.0};
  const auto run = simulate_sir(p, 1.0, 1e-2, 1e-3, 30.0, 100);
  const double e0 = energy_functional({0.0, ScalarField(g, 1.0), ScalarField(g, 1e-2)}, 2.0, 1.0);
  for (const auto& sample : run.trajectory) {
    const double et = energy_functional({sample.t, ScalarField(g, sample.s), ScalarField(g, sample.i)}, 2.0, 1.0);
    CHECK(std::abs(et - e0) <= 1e-10 * std::abs(e0));
  }
}

TEST_CASE("dissipation increment") {
  const Grid g = Grid::build({{1.0}, {64}});
  const PdeState flat{0.0, ScalarField(g, 0.4), ScalarField(g, 0.0)};
  CHECK(dissipation_increment(flat, flat, 0.5, 0.01) == 0.0);
  std::mt19937_64 rng(8);
  for (int k = 0; k < 20; ++k) {
    const PdeState s{0.0, test::random_field(g, rng, 1.0, 0.9), ScalarField(g, 0.0)};
    CHECK(dissipation_increment(flat, s, 0.5, 0.01) >= 0.0);
  }
  // Smooth S: matches dt d mean(|S'|^2 / S^2) for S = 2 + cos(pi x).
  const Grid fine = Grid::build({{1.0}, {2048}});
  const PdeState s{0.0, ScalarField::from_function(fine, [](double x, double) { return 2.0 + std::cos(kPi * x); }),
                   ScalarField(fine, 0.0)};
  // Integral of pi^2 sin^2 / (2 + cos)^2 over (0,1) = pi^2 (2 / sqrt 3 - 1).
  const double exact = 0.01 * 0.5 * kPi * kPi * (2.0 / std::sqrt(3.0) - 1.0);
  CHECK(dissipation_increment(s, s, 0.5, 0.01) == doctest::Approx(exact).epsilon(1e-5));
}

TEST_CASE("gradient energy") {
  const Grid g = Grid::build({{1.0}, {32}});
  CHECK(gradient_energy(ScalarField(g, 3.0)) == 0.0);
  double previous_error = INFINITY;
  for (int cells : {64, 128, 256, 512}) {
    const Grid h = Grid::build({{1.0}, {cells}});
    const auto f = ScalarField::from_function(h, [](double x, double) { return std::cos(kPi * x); });
    const double err = std::abs(gradient_energy(f) - kPi * kPi / 4.0);
    CHECK(err < previous_error / 3.5);
    previous_error = err;
  }
  CHECK(previous_error < 1e-4);
  // 2D: 1/2 integral of |grad cos(pi x) cos(pi y)|^2 over the unit square = pi^2 / 4.
  const Grid sq = Grid::build({{1.0, 1.0}, {256, 256}});
  const auto f2 = ScalarField::from_function(sq, [](double x, double y) {
    return std::cos(kPi * x) * std::cos(kPi * y);
  });
  CHECK(gradient_energy(f2) == doctest::Approx(kPi * kPi / 4.0).epsilon(1e-4));
}

TEST_CASE("decay-rate estimates") {
  CHECK(estimate_decay_rate(synthetic_trace([](double t) { return std::exp(-3.0 * t); }, 40), 20) ==
        doctest::Approx(3.0).epsilon(1e-6));
  CHECK(estimate_decay_rate(synthetic_trace([](double) { return 0.25; }, 40), 20) ==
        doctest::Approx(0.0).scale(1.0).epsilon(1e-12));
  CHECK_THROWS_AS(estimate_decay_rate(synthetic_trace([](double) { return 1.0; }, 3), 10), Error);
  CHECK_THROWS_AS(estimate_decay_rate(synthetic_trace([](double) { return 0.0; }, 30), 10), Error);
}

TEST_CASE("pure diffusion of S decays at twice the Neumann gap") {
  // I0 = 0 switches the reaction off; alpha only enters through alpha I.
  auto spec = test::constant_spec(1.0, 1.0, 1.0, 0.0, 256, 0.1);
  spec.s0 = CosineCoefficient{1.0, 0.1, 0.5, 0.0};  // cos(pi x)
  const auto sc = Scenario::realize(spec);
  PdeRunner runner(sc, 1e-4, 50);
  runner.advance_to(2.0);
  const double expected = 2.0 * neumann_gap(sc.grid, 0.1).scaled / 1.0;
  CHECK(estimate_decay_rate(runner.trace(), 100) == doctest::Approx(expected).epsilon(1e-3));
}

TEST_CASE("run to extinction: no infection terminates immediately") {
  auto spec = test::constant_spec(2.0, 1.0, 1.0, 0.0, 32);
  spec.s0 = CosineCoefficient{1.0, 0.3, 1.0, 0.0};
  const auto sc = Scenario::realize(spec);
  const auto res = run_to_extinction(sc);
  CHECK(res.steps == 0);
  CHECK(res.s_infinity == mean(sc.s0));
  CHECK(res.reason == Termination::Converged);
}

TEST_CASE("run to extinction: constant data follow the ODE final size") {
  const auto sc = Scenario::realize(test::constant_spec(2.0, 1.0, 1.0, 1e-3, 16));
  const auto res = run_to_extinction(sc);
  CHECK(res.reason == Termination::Converged);
  CHECK(res.invariants.ok());
  CHECK(std::abs(res.s_infinity - final_size({2.0, 1.0}, 1.0, 1e-3)) < 1e-4);
  CHECK(res.terminal_flatness < 1e-12);
  CHECK(res.eta_empirical == doctest::Approx(res.s_infinity).epsilon(1e-6));
  CHECK(res.harnack_ratio >= 1.0);
  CHECK(termination_name(res.reason) == "converged");
}

TEST_CASE("run to extinction: a non-constant seed ends above the averaged final size") {
  const auto cosine = Scenario::realize(test::cosine_seed_spec(64, 0.5));
  const auto flat = Scenario::realize(test::constant_spec(2.0, 1.0, 1.0, 1e-2, 64, 0.5));
  const double averaged = final_size({2.0, 1.0}, 1.0, 1e-2);
  const auto a = run_to_extinction(cosine, {.dt = 5e-4});
  const auto b = run_to_extinction(flat, {.dt = 5e-4});
  CHECK(a.s_infinity > averaged);
  // Same dt, same mean seed: the time-discretization error cancels and the
  // heterogeneity effect remains.
  CHECK(a.s_infinity - b.s_infinity > 1e-8);
  CHECK(a.invariants.ok());

  // The trace keeps mass and mean_S non-increasing.
  const auto& rows = a.trace.rows;
  for (std::size_t k = 1; k < rows.size(); ++k) {
    CHECK(rows[k].mean_s + rows[k].mean_i <= rows[k - 1].mean_s + rows[k - 1].mean_i);
    CHECK(rows[k].mean_s <= rows[k - 1].mean_s);
  }
}

TEST_CASE("t_max termination is flagged") {
  const auto sc = Scenario::realize(test::constant_spec(2.0, 1.0, 1.0, 1e-3, 16));
  const auto res = run_to_extinction(sc, {.dt = 1e-2, .t_max = 1.0});
  CHECK(res.reason == Termination::TMax);
  CHECK(termination_name(res.reason) == "t_max");
  CHECK(res.final_state.t == doctest::Approx(1.0));
}

TEST_CASE("trace CSV layout") {
  const auto sc = Scenario::realize(test::constant_spec(2.0, 1.0, 1.0, 1e-3, 16));
  PdeRunner runner(sc, 1e-2, 1);
  runner.advance();
  const auto csv = runner.trace().csv();
  std::istringstream in(csv);
  std::string header;
  std::getline(in, header);
  CHECK(header ==
        "t,mean_S,mean_I,max_I,min_S,flatness,energy,dissipation_cum,grad_energy_S,grad_energy_I");
  std::string line;
  int rows = 0;
  while (std::getline(in, line)) ++rows;
  CHECK(rows == 2);
  CHECK_THROWS_AS(SirStepper(sc, 0.0), Error);
}
