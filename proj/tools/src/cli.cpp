// SPDX-License-Identifier: Apache-2.0
#include "epithreshold_app/cli.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>

#include "epithreshold/coefficient.hpp"
#include "epithreshold/error.hpp"
#include "epithreshold/scenario_io.hpp"
#include "epithreshold/sir_ode.hpp"
#include "epithreshold/sir_pde.hpp"
#include "epithreshold/spectral.hpp"
#include "epithreshold/threshold.hpp"
#include "epithreshold_app/report.hpp"

namespace epithreshold::app {

namespace {

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;

struct Options {
  std::string scenario;
  std::string out;
  std::optional<double> dt;
  std::optional<double> tmax;
  int grid_n = 0;
  std::optional<double> tol;
  std::string scales;
  double d_lo = 1e-2;
  double d_hi = 1e2;
  std::optional<double> alpha;
  std::optional<double> mu;
  std::optional<double> s0;
  std::optional<double> i0;
  std::string axis = "d_I";
  std::string samples;
  bool timings = false;
};

std::vector<double> parse_list(const std::string& text, const char* flag) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      out.push_back(std::stod(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw_invalid_config(std::string(flag) + ": '" + item + "' is not a number");
    }
  }
  if (out.empty()) throw_invalid_config(std::string(flag) + " needs at least one value");
  return out;
}

std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

class Session {
 public:
  explicit Session(const Options& o) : opts_(o), start_(std::chrono::steady_clock::now()) {
    if (!opts_.out.empty()) fs::create_directories(opts_.out);
  }

  bool writes_files() const { return !opts_.out.empty(); }

  // Writes `contents` to <out>/<name> and returns the recorded path, or
  // nullopt when no output directory was given.
  std::optional<std::string> write(const std::string& name, const std::string& contents) const {
    if (!writes_files()) return std::nullopt;
    const std::string path = (fs::path(opts_.out) / name).string();
    std::ofstream f(path, std::ios::binary);
    if (!f) throw_invalid_config("cannot write '" + path + "'");
    f << contents;
    return path;
  }

  LoadedScenario load() const {
    if (opts_.scenario.empty()) throw_invalid_config("--scenario is required");
    LoadedScenario loaded = load_scenario(opts_.scenario, opts_.grid_n);
    if (opts_.dt) loaded.scenario.numerics.dt = *opts_.dt;
    if (opts_.tmax) loaded.scenario.numerics.t_max = *opts_.tmax;
    return loaded;
  }

  int finish(RunReport& report, std::ostream& out, int code) const {
    if (opts_.timings) {
      const double seconds =
          std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
      report.timings = json{{"wall_seconds", seconds}};
    }
    const std::string text = report.dump();
    write("report.json", text);
    out << text;
    return code;
  }

 private:
  const Options& opts_;
  std::chrono::steady_clock::time_point start_;
};

json checks_json(const std::vector<Check>& checks) {
  json arr = json::array();
  for (const auto& c : checks) arr.push_back({{"name", c.name}, {"passed", c.passed}, {"detail", c.detail}});
  return arr;
}

json threshold_json(const ThresholdReport& t) {
  return {{"lambda1", number_or_null(t.lambda1)},
          {"classification", classification_name(t.classification)},
          {"tolerance", t.tolerance},
          {"eigen_residual", t.eigen_residual}};
}

void fill_threshold(RunReport& r, const ThresholdReport& t) {
  r.lambda1 = t.lambda1;
  r.classification = classification_name(t.classification);
  r.averaged_r0 = t.averaged_r0;
  r.averaged_classification = classification_name(t.averaged_classification);
  r.d_star = t.d_star;
}

std::string comparison_csv(const ComparisonReport& c) {
  std::string out = "scale,s_infinity_pde,s_infinity_averaged,gap,loss,converged\n";
  for (const auto& r : c.rows) {
    out += fmt17(r.scale) + "," + fmt17(r.s_infinity_pde) + "," + fmt17(r.s_infinity_averaged) +
           "," + fmt17(r.gap) + "," + fmt17(r.loss) + "," + (r.converged ? "1" : "0") + "\n";
  }
  return out;
}

json comparison_rows(const ComparisonReport& c) {
  json rows = json::array();
  for (const auto& r : c.rows) {
    rows.push_back({{"scale", r.scale},
                    {"s_infinity_pde", number_or_null(r.s_infinity_pde)},
                    {"s_infinity_averaged", number_or_null(r.s_infinity_averaged)},
                    {"gap", number_or_null(r.gap)},
                    {"loss", number_or_null(r.loss)},
                    {"converged", r.converged}});
  }
  return rows;
}

OdeParams ode_params_from(const Options& o, const Session& session, double& s0, double& i0,
                          std::optional<std::string>& hash) {
  if (!o.scenario.empty()) {
    const auto loaded = session.load();
    const auto avg = averaged_params(loaded.scenario);
    hash = loaded.hash;
    s0 = o.s0.value_or(avg.s0);
    i0 = o.i0.value_or(avg.i0);
    return {o.alpha.value_or(avg.params.alpha), o.mu.value_or(avg.params.mu)};
  }
  if (!o.alpha || !o.mu || !o.s0 || !o.i0) {
    throw_invalid_config("need --scenario or all of --alpha --mu --s0 --i0");
  }
  s0 = *o.s0;
  i0 = *o.i0;
  OdeParams p{*o.alpha, *o.mu};
  p.validate();
  if (!(s0 > 0.0) || !(i0 >= 0.0)) throw_invalid_config("need --s0 > 0 and --i0 >= 0");
  return p;
}

int cmd_eigen(const Options& o, std::ostream& out) {
  Session session(o);
  const auto loaded = session.load();
  const Scenario& sc = loaded.scenario;
  const auto op = EllipticOperator::assemble(sc.d_i, sc.threshold_potential());
  const EigenResult eig =
      principal_eigenpair(op, {o.tol.value_or(sc.numerics.eig_tol), sc.numerics.eig_max_iter});

  RunReport r;
  r.command = "eigen";
  r.scenario_hash = loaded.hash;
  r.lambda1 = eig.lambda1;
  if (auto p = session.write("phi.csv", field_csv(eig.phi))) r.field_paths.push_back(*p);
  r.details = {{"residual", eig.residual},
               {"iterations", eig.iterations},
               {"min_phi", min_value(eig.phi)},
               {"neumann_gap", neumann_gap(sc.grid).rho1}};
  return session.finish(r, out, kExitOk);
}

int cmd_simulate(const Options& o, std::ostream& out) {
  Session session(o);
  const auto loaded = session.load();
  const Scenario& sc = loaded.scenario;
  const ExtinctionResult res = run_to_extinction(sc);
  const AveragedModel avg = averaged_params(sc);

  RunReport r;
  r.command = "simulate";
  r.scenario_hash = loaded.hash;
  r.s_infinity = res.s_infinity;
  r.s_infinity_averaged = final_size(avg.params, avg.s0, avg.i0);
  r.trace_path = session.write("trace.csv", res.trace.csv());
  if (auto p = session.write("S_final.csv", field_csv(res.final_state.s))) r.field_paths.push_back(*p);
  if (auto p = session.write("I_final.csv", field_csv(res.final_state.i))) r.field_paths.push_back(*p);
  const InvariantLog& inv = res.invariants;
  r.details = {{"termination", termination_name(res.reason)},
               {"t_final", res.final_state.t},
               {"steps", res.steps},
               {"dt", res.dt},
               {"terminal_flatness", res.terminal_flatness},
               {"eta_empirical", res.eta_empirical},
               {"harnack_ratio", res.harnack_ratio},
               {"dissipation", res.dissipation},
               {"invariants",
                {{"ok", inv.ok()},
                 {"positivity_violations", inv.positivity_violations},
                 {"mass_increase_violations", inv.mass_increase_violations},
                 {"max_principle_violations", inv.max_principle_violations}}}};
  const bool ok = res.reason == Termination::Converged && inv.ok();
  return session.finish(r, out, ok ? kExitOk : kExitNumerical);
}

int cmd_ode(const Options& o, std::ostream& out) {
  Session session(o);
  double s0 = 0.0, i0 = 0.0;
  std::optional<std::string> hash;
  const OdeParams p = ode_params_from(o, session, s0, i0, hash);
  const double dt = o.dt.value_or(1e-3 / p.mu);
  const double t_max = o.tmax.value_or(1e4);
  const OdeRun run = simulate_sir(p, s0, i0, dt, t_max);

  RunReport r;
  r.command = "ode";
  r.scenario_hash = hash;
  r.s_infinity = run.s_infinity;
  r.s_infinity_averaged = final_size(p, s0, i0);
  r.trace_path = session.write("ode.csv", ode_trajectory_csv(run));
  r.details = {{"alpha", p.alpha},
               {"mu", p.mu},
               {"s0", s0},
               {"i0", i0},
               {"dt", dt},
               {"r0", basic_reproduction_number(p, s0)},
               {"conserved_drift", run.conserved_drift},
               {"reached_t_max", run.reached_t_max}};
  return session.finish(r, out, run.reached_t_max ? kExitNumerical : kExitOk);
}

int cmd_final_size(const Options& o, std::ostream& out) {
  Session session(o);
  double s0 = 0.0, i0 = 0.0;
  std::optional<std::string> hash;
  const OdeParams p = ode_params_from(o, session, s0, i0, hash);
  RunReport r;
  r.command = "final-size";
  r.scenario_hash = hash;
  r.s_infinity = final_size(p, s0, i0);
  r.averaged_r0 = basic_reproduction_number(p, s0);
  r.details = {{"alpha", p.alpha}, {"mu", p.mu}, {"s0", s0}, {"i0", i0}};
  return session.finish(r, out, kExitOk);
}

int cmd_threshold(const Options& o, std::ostream& out, bool with_d_star) {
  Session session(o);
  const auto loaded = session.load();
  std::optional<DStarRequest> request;
  if (with_d_star) request = DStarRequest{o.d_lo, o.d_hi, 1e-12};
  const ThresholdReport t = classify(loaded.scenario, o.tol, request);

  RunReport r;
  r.command = with_d_star ? "dstar" : "threshold";
  r.scenario_hash = loaded.hash;
  fill_threshold(r, t);
  r.details = {{"tolerance", t.tolerance}, {"eigen_residual", t.eigen_residual}};
  if (t.d_star) {
    const Scenario& sc = loaded.scenario;
    const EigenOptions eo{sc.numerics.eig_tol, sc.numerics.eig_max_iter};
    const double below = lambda1_of_d_i(sc, *t.d_star / 4.0, eo);
    const double above = lambda1_of_d_i(sc, *t.d_star * 4.0, eo);
    r.details["lambda1_at_d_star_over_4"] = below;
    r.details["lambda1_at_4_d_star"] = above;
    r.details["sign_check"] = below < 0.0 && above > 0.0;
  }
  return session.finish(r, out, kExitOk);
}

int cmd_comparison(const Options& o, std::ostream& out, bool probe) {
  Session session(o);
  const auto loaded = session.load();
  const std::vector<double> scales =
      o.scales.empty() ? default_scales() : parse_list(o.scales, "--scales");
  RunSettings settings;
  settings.dt = loaded.scenario.numerics.dt;
  settings.t_max = loaded.scenario.numerics.t_max;
  settings.richardson_levels = probe ? 1 : 3;
  const ComparisonReport c = probe ? propagation_probe(loaded.scenario, scales, settings)
                                   : compare_models(loaded.scenario, scales, settings);

  RunReport r;
  r.command = probe ? "probe" : "compare";
  r.scenario_hash = loaded.hash;
  fill_threshold(r, c.threshold);
  r.s_infinity = c.rows.back().s_infinity_pde;
  r.s_infinity_averaged = c.rows.back().s_infinity_averaged;
  r.epsilon_empirical = c.epsilon_empirical;
  r.trace_path = session.write(probe ? "probe.csv" : "compare.csv", comparison_csv(c));
  r.details = {{"propagation_floor", c.propagation_floor},
               {"homogeneous", c.homogeneous},
               {"richardson_levels", settings.richardson_levels},
               {"rows", comparison_rows(c)},
               {"checks", checks_json(c.checks)}};
  return session.finish(r, out, all_passed(c.checks) ? kExitOk : kExitNumerical);
}

int cmd_sweep(const Options& o, std::ostream& out) {
  Session session(o);
  const auto loaded = session.load();
  const SweepAxis axis = parse_sweep_axis(o.axis);
  std::vector<double> samples;
  if (o.samples.empty()) {
    if (axis != SweepAxis::DI) throw_invalid_config("--samples is required for this axis");
    for (int k = 0; k <= 12; ++k) samples.push_back(std::pow(10.0, -3.0 + 0.5 * k));
  } else {
    samples = parse_list(o.samples, "--samples");
  }
  const SweepReport s = monotonicity_sweep(loaded.scenario, axis, samples);

  std::string csv = "sample,lambda1\n";
  json rows = json::array();
  for (const auto& row : s.rows) {
    csv += fmt17(row.sample) + "," + fmt17(row.lambda1) + "\n";
    rows.push_back({{"sample", row.sample}, {"lambda1", number_or_null(row.lambda1)}});
  }
  RunReport r;
  r.command = "sweep";
  r.scenario_hash = loaded.hash;
  r.trace_path = session.write("sweep.csv", csv);
  r.details = {{"axis", sweep_axis_name(axis)},
               {"rows", rows},
               {"limit_large_d", s.limit_large_d ? number_or_null(*s.limit_large_d) : json(nullptr)},
               {"limit_small_d", s.limit_small_d ? number_or_null(*s.limit_small_d) : json(nullptr)},
               {"checks", checks_json(s.checks)}};
  return session.finish(r, out, all_passed(s.checks) ? kExitOk : kExitNumerical);
}

}  // namespace

int run_cli(const std::vector<std::string>& argv, std::ostream& out, std::ostream& err) {
  Options o;
  CLI::App app{"Threshold analysis for the heterogeneous diffusive SIR model", "epithreshold"};
  app.require_subcommand(1);

  const auto scenario_opts = [&](CLI::App* sub) {
    sub->add_option("--scenario", o.scenario, "Scenario file")->required();
    sub->add_option("--out", o.out, "Output directory for report.json and CSVs");
    sub->add_option("--grid-n", o.grid_n, "Override the cell count on every axis");
    sub->add_flag("--timings", o.timings, "Record wall-clock timings in the report");
  };
  const auto run_opts = [&](CLI::App* sub) {
    sub->add_option("--dt", o.dt, "Time step");
    sub->add_option("--tmax", o.tmax, "Final time limit");
  };
  const auto ode_opts = [&](CLI::App* sub) {
    sub->add_option("--scenario", o.scenario, "Scenario file (averaged parameters)");
    sub->add_option("--out", o.out, "Output directory");
    sub->add_option("--alpha", o.alpha, "Contamination rate");
    sub->add_option("--mu", o.mu, "Recovery rate");
    sub->add_option("--s0", o.s0, "Initial susceptible density");
    sub->add_option("--i0", o.i0, "Initial infectious density");
    sub->add_flag("--timings", o.timings, "Record wall-clock timings in the report");
  };

  auto* eigen = app.add_subcommand("eigen", "Principal eigenpair of the threshold operator");
  scenario_opts(eigen);
  eigen->add_option("--tol", o.tol, "Eigen residual tolerance");

  auto* simulate = app.add_subcommand("simulate", "Run the PDE to extinction");
  scenario_opts(simulate);
  run_opts(simulate);

  auto* ode = app.add_subcommand("ode", "Integrate the (averaged) ODE model");
  ode_opts(ode);
  run_opts(ode);

  auto* fsize = app.add_subcommand("final-size", "Solve the final-size equation");
  ode_opts(fsize);

  auto* threshold = app.add_subcommand("threshold", "Classify by the sign of lambda1");
  scenario_opts(threshold);
  threshold->add_option("--tol", o.tol, "Half-width of the Critical band");

  auto* dstar = app.add_subcommand("dstar", "Critical infectious diffusivity");
  scenario_opts(dstar);
  dstar->add_option("--tol", o.tol, "Half-width of the Critical band");
  dstar->add_option("--d-lo", o.d_lo, "Lower end of the initial bracket");
  dstar->add_option("--d-hi", o.d_hi, "Upper end of the initial bracket");

  auto* compare = app.add_subcommand("compare", "Diffusive vs averaged final states");
  scenario_opts(compare);
  run_opts(compare);
  compare->add_option("--scales", o.scales, "Comma-separated I0 scales");

  auto* probe = app.add_subcommand("probe", "Susceptible loss under shrinking seeds");
  scenario_opts(probe);
  run_opts(probe);
  probe->add_option("--scales", o.scales, "Comma-separated I0 scales");

  auto* sweep = app.add_subcommand("sweep", "lambda1 along a parameter axis");
  scenario_opts(sweep);
  sweep->add_option("--axis", o.axis, "d_I, mu_shift, alpha_scale or s0_scale");
  sweep->add_option("--samples", o.samples, "Comma-separated sample values");

  std::vector<std::string> args(argv.begin() + (argv.empty() ? 0 : 1), argv.end());
  std::reverse(args.begin(), args.end());
  try {
    app.parse(args);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kExitInvalidConfig;
  }

  try {
    if (*eigen) return cmd_eigen(o, out);
    if (*simulate) return cmd_simulate(o, out);
    if (*ode) return cmd_ode(o, out);
    if (*fsize) return cmd_final_size(o, out);
    if (*threshold) return cmd_threshold(o, out, false);
    if (*dstar) return cmd_threshold(o, out, true);
    if (*compare) return cmd_comparison(o, out, false);
    if (*probe) return cmd_comparison(o, out, true);
    if (*sweep) return cmd_sweep(o, out);
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    switch (e.kind()) {
      case ErrorKind::InvalidConfig:
        return kExitInvalidConfig;
      case ErrorKind::Numerical:
        return kExitNumerical;
      case ErrorKind::ConditionNotMet:
        return kExitConditionNotMet;
    }
  } catch (const fs::filesystem_error& e) {
    err << "error: " << e.what() << "\n";
    return kExitInvalidConfig;
  }
  return kExitInvalidConfig;
}

}  // namespace epithreshold::app
