#pragma once

// Scenario files and the end-to-end pipeline behind `wallflux run`.

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "wallflux/bounds.hpp"
#include "wallflux/radiative_units.hpp"
#include "wallflux/sources.hpp"

namespace wallflux {

enum class ProblemKind { Gas, Radiative, Bounds };

struct InitialDataSpec {
  /// equilibrium | bounded_bump | concentrated_box | grey_bump | gas_table | grey_table
  std::string variant = "bounded_bump";
  double amplitude = 2.0;
  double radius = 0.6;
  double multiple = 1.0;  ///< equilibrium: f_in = multiple * M
  double epsilon = 0.2;
  double inner = 0.2;
  double outer = 0.5;
  std::string table;  ///< path for the table variants, relative to the scenario file
};

struct FitWindow {
  double t0 = 0.0;
  double t1 = 0.0;
};

struct MonteCarloConfig {
  bool enabled = false;
  std::size_t particle_count = 100000;
  std::uint64_t seed = 1;
  double bin_width = 0.5;
  double horizon = 40.0;
  int threads = 0;
};

struct BoundsConfig {
  LowerBoundScenario scenario;
  std::vector<double> chain_times{0.5, 1.0, 2.0, 5.0, 10.0};
  double envelope_t_min = 1e2;
  double envelope_t_max = 1e6;
  int envelope_points = 41;
  std::vector<double> exponents{1.5, 2.0, 4.0};
};

struct ScenarioConfig {
  std::string name = "scenario";
  ProblemKind problem = ProblemKind::Gas;
  InitialDataSpec initial_data;
  double horizon = 210.0;
  double dt = 1e-2;
  std::vector<double> norms{1.0, 6.0};
  FitWindow fit_window{20.0, 200.0};
  int error_samples = 80;  ///< log-spaced sample times for the error curves
  double strip_depth = 3.0;
  MonteCarloConfig monte_carlo;
  BoundsConfig bounds;
  PhysicalConstants constants;
  std::filesystem::path output_dir = "out";
};

namespace scenario {

/// Validates and converts a parsed document; errors carry the offending field path.
ScenarioConfig from_json(const nlohmann::json& doc);
/// Reads a JSON scenario file. Relative table paths resolve against its directory, output_dir against the cwd.
ScenarioConfig load(const std::filesystem::path& path);

RadialInitialData build_initial_data(const InitialDataSpec& spec, ProblemKind problem);

struct Verdict {
  std::string name;
  double value = 0.0;
  double lower = 0.0;
  double upper = 0.0;
  bool pass = false;
};

struct Report {
  nlohmann::json summary;
  std::vector<Verdict> verdicts;
  std::vector<std::filesystem::path> files;
  bool all_pass() const;
};

/// Runs the pipeline of the configured problem, writes every export and summary.json.
Report run(const ScenarioConfig& config);

}  // namespace scenario
}  // namespace wallflux
