// Command-line front end: single-stage subcommands plus the full `run` pipeline.

#include <CLI11.hpp>

#include <cmath>
#include <cstdio>
#include <iostream>
#include <optional>

#include "wallflux/bounds.hpp"
#include "wallflux/errors.hpp"
#include "wallflux/field.hpp"
#include "wallflux/io.hpp"
#include "wallflux/kernels.hpp"
#include "wallflux/montecarlo.hpp"
#include "wallflux/renewal.hpp"
#include "wallflux/scenario.hpp"
#include "wallflux/spectral.hpp"

using namespace wallflux;

namespace {

constexpr int kExitValidation = 2;
constexpr int kExitNumeric = 3;
constexpr int kExitStatistical = 4;

void emit(const io::Table& t, const std::string& path) {
  if (path.empty() || path == "-")
    io::write(std::cout, t);
  else
    io::write(std::filesystem::path(path), t);
}

Kernel kernel_named(const std::string& name) {
  if (name == "gas") return Kernel::gas();
  if (name == "monokinetic") return Kernel::monokinetic();
  throw ValidationError("kernel", "expected gas or monokinetic");
}

struct DataOptions {
  InitialDataSpec spec;
  CLI::Option* amplitude = nullptr;
  void attach(CLI::App* app) {
    app->add_option("--data", spec.variant,
                    "equilibrium | bounded_bump | concentrated_box | grey_bump | gas_table | grey_table")
        ->capture_default_str();
    amplitude = app->add_option("--amplitude", spec.amplitude, "defaults to 1 for grey data");
    app->add_option("--radius", spec.radius)->capture_default_str();
    app->add_option("--multiple", spec.multiple)->capture_default_str();
    app->add_option("--epsilon", spec.epsilon)->capture_default_str();
    app->add_option("--inner", spec.inner)->capture_default_str();
    app->add_option("--outer", spec.outer)->capture_default_str();
    app->add_option("--table", spec.table, "table file for the *_table variants");
  }
  RadialInitialData build() const {
    const bool grey = spec.variant == "grey_bump" || spec.variant == "grey_table";
    InitialDataSpec s = spec;
    if (grey && amplitude->count() == 0) s.amplitude = 1.0;
    return scenario::build_initial_data(s, grey ? ProblemKind::Radiative : ProblemKind::Gas);
  }
};

RenewalSolution solve_for(const RadialInitialData& data, double horizon, double dt) {
  if (!(dt > 0.0)) throw ValidationError("dt", "must be positive");
  if (!(horizon > dt)) throw ValidationError("horizon", "must exceed dt");
  SolveOptions so;
  so.source_breakpoints = sources::source_breakpoints(data);
  if (is_gas(data)) so.bound_constant = profile_sup(data);
  return renewal::solve(is_gas(data) ? Kernel::gas() : Kernel::monokinetic(), sources::make_source(data), horizon, dt,
                        so);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Wall flux of free transport in the unit ball: renewal solver, spectra, bounds and particle checks"};
  app.require_subcommand(1);
  std::string out;

  // kernel
  auto* kernel_cmd = app.add_subcommand("kernel", "Tabulate a wall-to-wall kernel and its cumulative distribution");
  std::string kernel_name = "gas";
  double k_max = 10.0, k_step = 0.05;
  kernel_cmd->add_option("--kernel", kernel_name, "gas | monokinetic")->capture_default_str();
  kernel_cmd->add_option("--max", k_max)->capture_default_str();
  kernel_cmd->add_option("--step", k_step)->capture_default_str();
  kernel_cmd->add_option("-o,--output", out, "output file (stdout when omitted)");

  // solve
  auto* solve_cmd = app.add_subcommand("solve", "Solve the renewal equation for the wall flux");
  DataOptions solve_data;
  solve_data.attach(solve_cmd);
  double horizon = 40.0, dt = 1e-2;
  solve_cmd->add_option("--horizon", horizon)->capture_default_str();
  solve_cmd->add_option("--dt", dt)->capture_default_str();
  solve_cmd->add_option("-o,--output", out);

  // spectrum
  auto* spectrum_cmd = app.add_subcommand("spectrum", "Zeros of 1 - L[K] for the monokinetic kernel");
  double depth = 3.0;
  spectrum_cmd->add_option("--depth", depth, "strip depth")->capture_default_str();
  spectrum_cmd->add_option("-o,--output", out);

  // field
  auto* field_cmd = app.add_subcommand("field", "Weighted L^p distance to equilibrium along a solution");
  DataOptions field_data;
  field_data.attach(field_cmd);
  std::vector<double> exponents{1.0};
  int samples = 40;
  field_cmd->add_option("--horizon", horizon)->capture_default_str();
  field_cmd->add_option("--dt", dt)->capture_default_str();
  field_cmd->add_option("-p,--exponent", exponents)->capture_default_str();
  field_cmd->add_option("--samples", samples, "log-spaced times in [1, horizon]")->capture_default_str();
  field_cmd->add_option("-o,--output", out);

  // bounds
  auto* bounds_cmd = app.add_subcommand("bounds", "Lower-bound envelopes from concentrated data");
  LowerBoundScenario sc;
  std::string envelope_kind = "lp";
  std::string coupling = "auto";
  double t_min = 1e2, t_max = 1e6;
  int points = 41;
  bounds_cmd->add_option("--epsilon", sc.epsilon)->capture_default_str();
  bounds_cmd->add_option("--T", sc.T)->capture_default_str();
  bounds_cmd->add_option("--R", sc.R)->capture_default_str();
  bounds_cmd->add_option("-p", sc.p)->capture_default_str();
  bounds_cmd->add_option("--envelope", envelope_kind, "entropy | lp")->capture_default_str();
  bounds_cmd->add_option("--coupling", coupling, "auto | fixed | inverse_time")->capture_default_str();
  bounds_cmd->add_option("--t-min", t_min)->capture_default_str();
  bounds_cmd->add_option("--t-max", t_max)->capture_default_str();
  bounds_cmd->add_option("--points", points)->capture_default_str();
  bounds_cmd->add_option("-o,--output", out);

  // mc
  auto* mc_cmd = app.add_subcommand("mc", "Particle estimate of the wall flux");
  DataOptions mc_data;
  mc_data.attach(mc_cmd);
  std::size_t particles = 100000;
  std::uint64_t seed = 1;
  EvolveOptions eo;
  std::string intervals_out;
  mc_cmd->add_option("-n,--particles", particles)->capture_default_str();
  mc_cmd->add_option("--seed", seed)->capture_default_str();
  mc_cmd->add_option("--horizon", eo.horizon)->capture_default_str();
  mc_cmd->add_option("--bin-width", eo.bin_width)->capture_default_str();
  mc_cmd->add_option("--threads", eo.threads, "0 uses every hardware thread")->capture_default_str();
  mc_cmd->add_option("-o,--output", out);
  mc_cmd->add_option("--intervals", intervals_out, "also write the reemission interval histogram here");

  // run
  auto* run_cmd = app.add_subcommand("run", "Full pipeline from a scenario file");
  std::string config_path;
  std::string output_dir;
  run_cmd->add_option("config", config_path, "scenario JSON file")->required();
  run_cmd->add_option("--output-dir", output_dir, "overrides output_dir of the scenario");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitValidation;
  }

  try {
    if (*kernel_cmd) {
      const Kernel k = kernel_named(kernel_name);
      if (!(k_step > 0.0) || !(k_max > 0.0)) throw ValidationError("step", "step and max must be positive");
      io::Table t;
      t.header = {"tau", "density", "cumulative"};
      t.columns.assign(3, {});
      const auto n = static_cast<int>(std::floor(k_max / k_step + 1e-9));
      for (int i = 0; i <= n; ++i) {
        const double tau = i * k_step;
        t.columns[0].push_back(tau);
        t.columns[1].push_back(kernels::eval(k, tau));
        t.columns[2].push_back(kernels::cumulative(k, tau));
      }
      t.add_footer("kernel", std::string(to_string(k.variant())));
      t.add_footer("mean", kernels::moment(k, 1));
      emit(t, out);
    } else if (*solve_cmd) {
      emit(renewal::to_table(solve_for(solve_data.build(), horizon, dt)), out);
    } else if (*spectrum_cmd) {
      emit(spectral::zero_table(spectral::spectral_abscissa(depth)), out);
    } else if (*field_cmd) {
      const auto data = field_data.build();
      const auto sol = solve_for(data, horizon, dt);
      if (samples < 2) throw ValidationError("samples", "need at least 2");
      std::vector<double> times;
      for (int i = 0; i < samples; ++i) times.push_back(std::pow(sol.horizon(), static_cast<double>(i) / (samples - 1)));
      std::vector<std::vector<double>> errors;
      for (double p : exponents) {
        std::vector<double> e;
        for (double t : times) e.push_back(field::lp_error(sol, data, t, p).value);
        errors.push_back(std::move(e));
      }
      emit(field::error_curve_table(times, exponents, errors), out);
    } else if (*bounds_cmd) {
      sc.validate();
      EnvelopeKind kind;
      if (envelope_kind == "entropy")
        kind = EnvelopeKind::LogEntropy;
      else if (envelope_kind == "lp")
        kind = EnvelopeKind::AlgebraicLp;
      else
        throw ValidationError("envelope", "expected entropy or lp");
      bounds::EnvelopeOptions eopt;
      if (coupling == "fixed")
        eopt.coupling = EpsilonCoupling::Fixed;
      else if (coupling == "inverse_time")
        eopt.coupling = EpsilonCoupling::InverseTime;
      else if (coupling != "auto")
        throw ValidationError("coupling", "expected auto, fixed or inverse_time");
      if (!(t_max > t_min) || !(t_min > 0.0) || points < 2) throw ValidationError("t-min", "need 0 < t-min < t-max");
      std::vector<double> times;
      for (int i = 0; i < points; ++i)
        times.push_back(t_min * std::pow(t_max / t_min, static_cast<double>(i) / (points - 1)));
      emit(bounds::envelope_table(kind, sc, times, eopt), out);
    } else if (*mc_cmd) {
      const auto tally = montecarlo::evolve(montecarlo::sample_initial(mc_data.build(), particles, seed), eo);
      emit(montecarlo::to_table(tally), out);
      if (!intervals_out.empty()) emit(montecarlo::interval_table(tally), intervals_out);
    } else if (*run_cmd) {
      auto config = scenario::load(config_path);
      if (!output_dir.empty()) config.output_dir = output_dir;
      const auto report = scenario::run(config);
      for (const auto& v : report.verdicts)
        std::printf("%-4s %-40s %.10g  [%g, %g]\n", v.pass ? "PASS" : "FAIL", v.name.c_str(), v.value, v.lower, v.upper);
      std::printf("summary: %s\n", (config.output_dir / "summary.json").string().c_str());
    }
  } catch (const ValidationError& e) {
    std::fprintf(stderr, "validation error: %s\n", e.what());
    return kExitValidation;
  } catch (const Error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    switch (e.category()) {
      case ErrorCategory::Validation: return kExitValidation;
      case ErrorCategory::Numeric: return kExitNumeric;
      case ErrorCategory::Statistical: return kExitStatistical;
    }
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitNumeric;
  }
  return 0;
}
