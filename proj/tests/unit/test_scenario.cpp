#include <doctest.h>

#include <fstream>
#include <json.hpp>
#include <sstream>

#include "wallflux/errors.hpp"
#include "wallflux/fit.hpp"
#include "wallflux/io.hpp"
#include "wallflux/scenario.hpp"

using namespace wallflux;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

fs::path scratch(const std::string& name) {
  const auto dir = fs::temp_directory_path() / ("wallflux-test-" + name);
  fs::remove_all(dir);
  return dir;
}

json small_gas() {
  return json::parse(R"({
    "name": "small-gas", "problem": "gas",
    "initial_data": {"variant": "bounded_bump"},
    "horizon": 30.0, "dt": 0.02, "norms": [2.0],
    "fit_window": {"t0": 5.0, "t1": 25.0}, "error_samples": 40,
    "monte_carlo": {"enabled": true, "particle_count": 5000, "seed": 3, "bin_width": 1.0, "horizon": 10.0}
  })");
}

std::string path_of(const json& doc) {
  try {
    scenario::from_json(doc);
  } catch (const ValidationError& e) {
    return e.path();
  }
  return "";
}

}  // namespace

TEST_CASE("config validation reports the offending field") {
  auto doc = small_gas();
  CHECK(path_of(doc).empty());

  auto no_dt = doc;
  no_dt.erase("dt");
  CHECK(path_of(no_dt) == "dt");

  auto bad = doc;
  bad["dt"] = -1.0;
  CHECK(path_of(bad) == "dt");

  bad = doc;
  bad["colour"] = 1;
  CHECK(path_of(bad) == "colour");

  bad = doc;
  bad["initial_data"]["variant"] = "grey_bump";
  CHECK(path_of(bad) == "initial_data.variant");

  bad = doc;
  bad["initial_data"]["inner"] = 0.7;
  CHECK(path_of(bad) == "initial_data.inner");

  bad = doc;
  bad["problem"] = "plasma";
  CHECK(path_of(bad) == "problem");

  // Bounds problems need neither dt nor horizon.
  CHECK(path_of(json::parse(R"({"name": "b", "problem": "bounds"})")).empty());
}

TEST_CASE("initial data construction") {
  InitialDataSpec s;
  s.variant = "equilibrium";
  s.multiple = 2.5;
  CHECK(total_mass(scenario::build_initial_data(s, ProblemKind::Gas)) == doctest::Approx(2.5 * 4.0 * 3.141592653589793 / 3.0));
  s.variant = "grey_bump";
  CHECK_FALSE(is_gas(scenario::build_initial_data(s, ProblemKind::Radiative)));
  s.variant = "nonsense";
  CHECK_THROWS_AS(scenario::build_initial_data(s, ProblemKind::Gas), ValidationError);
}

TEST_CASE("gas pipeline is reproducible byte for byte") {
  auto c1 = scenario::from_json(small_gas());
  c1.output_dir = scratch("gas-a");
  auto c2 = c1;
  c2.output_dir = scratch("gas-b");
  const auto r1 = scenario::run(c1);
  const auto r2 = scenario::run(c2);
  REQUIRE(r1.files.size() == r2.files.size());
  for (std::size_t i = 0; i < r1.files.size(); ++i) {
    CHECK(r1.files[i].filename() == r2.files[i].filename());
    CHECK(slurp(r1.files[i]) == slurp(r2.files[i]));
  }
  const auto summary = json::parse(slurp(c1.output_dir / "summary.json"));
  CHECK(summary["problem"] == "gas");
  CHECK(summary["verdicts"].size() == r1.verdicts.size());
  bool saw_mass = false;
  for (const auto& v : r1.verdicts) {
    if (v.name == "mass_conservation_relative_error") {
      saw_mass = true;
      CHECK(v.pass);
    }
  }
  CHECK(saw_mass);
  fs::remove_all(c1.output_dir);
  fs::remove_all(c2.output_dir);
}

TEST_CASE("radiative and bounds pipelines") {
  auto rad = scenario::from_json(json::parse(R"({
    "name": "small-grey", "problem": "radiative", "horizon": 25.0, "dt": 0.005,
    "fit_window": {"t0": 4.0, "t1": 20.0}, "strip_depth": 2.0
  })"));
  rad.output_dir = scratch("grey");
  const auto r = scenario::run(rad);
  for (const auto& v : r.verdicts) {
    if (v.name.find("alpha") != std::string::npos || v.name.find("theta") != std::string::npos) CHECK_MESSAGE(v.pass, v.name);
  }
  fs::remove_all(rad.output_dir);

  auto b = scenario::from_json(json::parse(R"({"name": "b", "problem": "bounds",
    "bounds": {"chain_times": [1.0, 10.0], "envelope_points": 9}})"));
  b.output_dir = scratch("bounds");
  const auto rb = scenario::run(b);
  CHECK(rb.all_pass());
  fs::remove_all(b.output_dir);
}

TEST_CASE("table export format") {
  io::Table t;
  t.header = {"a", "b"};
  t.columns = {{0.1, 2.0}, {1e-300, -3.5}};
  t.add_footer("note", "x");
  t.add_footer("n", 2.0);
  std::ostringstream s;
  io::write(s, t);
  const std::string out = s.str();
  CHECK(out.find("a") == 0);
  CHECK(out.find("0.1") != std::string::npos);
  CHECK(out.find("1e-300") != std::string::npos);
  CHECK(out.find("# note=x") != std::string::npos);
  // Shortest round trip.
  for (double x : {0.1, 1.0 / 3.0, 6.02214076e23, -2.5e-9}) CHECK(std::stod(io::format_number(x)) == x);
}

TEST_CASE("least squares helpers") {
  const std::vector<double> x{0, 1, 2, 3}, y{1, 3, 5, 7};
  const auto l = fit::least_squares(x, y);
  CHECK(l.slope == doctest::Approx(2.0));
  CHECK(l.intercept == doctest::Approx(1.0));
  CHECK(l.rms_residual < 1e-12);
  CHECK(fit::window_indices(x, 0.5, 2.5) == std::vector<std::size_t>{1, 2});
  const std::vector<double> wave{0, 2, 1, 3, 0};
  CHECK(fit::local_maxima(wave) == std::vector<std::size_t>{1, 3});
}
