#include <doctest.h>

#include <cmath>
#include <limits>
#include <sstream>

#include "wallflux/errors.hpp"
#include "wallflux/io.hpp"
#include "wallflux/kernels.hpp"
#include "wallflux/renewal.hpp"

using namespace wallflux;
using doctest::Approx;

namespace {

const double kInvSqrt2Pi = 1.0 / std::sqrt(2.0 * 3.141592653589793);

double max_abs_diff(const std::vector<double>& v, double c) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x - c));
  return m;
}

// Source for which mu(t) = e^{-t} solves the monokinetic equation:
// S = e^{-t} - e^{-t} (1/2) ((m - 1) e^m + 1), m = min(t, 2).
double manufactured_source(double t) {
  const double m = std::min(t, 2.0);
  return std::exp(-t) * (1.0 - 0.5 * ((m - 1.0) * std::exp(m) + 1.0));
}

double manufactured_error(double dt) {
  const auto sol = renewal::solve(Kernel::monokinetic(), manufactured_source, 6.0, dt);
  double e = 0.0;
  for (std::size_t i = 0; i < sol.size(); ++i) e = std::max(e, std::abs(sol.values[i] - std::exp(-sol.time(i))));
  return e;
}

}  // namespace

TEST_CASE("no memory term gives back the source") {
  auto s = [](double t) { return std::sin(t) + 2.0; };
  const auto sol = renewal::solve([](double) { return 0.0; }, s, 5.0, 0.01);
  for (std::size_t i = 0; i < sol.size(); ++i) CHECK(sol.values[i] == s(sol.time(i)));
  CHECK(std::isnan(sol.mu_infinity));
}

TEST_CASE("equilibrium is a fixed point of the gas equation") {
  const RadialInitialData eq = EquilibriumMultiple{1.0};
  const auto sol = renewal::solve(Kernel::gas(), sources::make_source(eq), 10.0, 1e-3);
  CHECK(max_abs_diff(sol.values, kInvSqrt2Pi) < 1e-6);
  CHECK(sol.values[0] == sources::gas_source(eq, 0.0));
  CHECK(sol.mu_infinity == Approx(kInvSqrt2Pi).epsilon(1e-9));
}

TEST_CASE("monokinetic constant solution") {
  auto s = [](double t) { return 1.0 - kernels::cumulative(Kernel::monokinetic(), t); };
  const auto sol = renewal::solve(Kernel::monokinetic(), s, 20.0, 1e-2);
  CHECK(max_abs_diff(sol.values, 1.0) < 1e-8);
}

TEST_CASE("second order convergence on a nonconstant solution") {
  const double e1 = manufactured_error(0.02), e2 = manufactured_error(0.01), e3 = manufactured_error(0.005);
  CHECK(e1 / e2 >= 3.5);
  CHECK(e1 / e2 <= 4.5);
  CHECK(e2 / e3 >= 3.5);
  CHECK(e2 / e3 <= 4.5);
}

TEST_CASE("plain trapezoid loses an order at the kernel jump") {
  // K jumps from 1 to 0 at tau = 2; sampling it at the nodes is only first order.
  SolveOptions o;
  o.scheme = MarchScheme::PlainTrapezoid;
  auto err = [&](double dt) {
    const auto sol = renewal::solve(Kernel::monokinetic(), manufactured_source, 6.0, dt, o);
    double e = 0.0;
    for (std::size_t i = 0; i < sol.size(); ++i) e = std::max(e, std::abs(sol.values[i] - std::exp(-sol.time(i))));
    return e;
  };
  const double r = err(0.01) / err(0.005);
  CHECK(r > 1.5);
  CHECK(r < 3.0);
}

TEST_CASE("nonnegativity and causality") {
  const RadialInitialData bump = presets::bounded_bump();
  const auto s = sources::make_source(bump);
  const auto full = renewal::solve(Kernel::gas(), s, 20.0, 0.01);
  bool nonneg = true;
  for (double v : full.values) nonneg = nonneg && v >= 0.0;
  CHECK(nonneg);
  // Changing the source after t = 5 leaves the solution on [0, 5] unchanged bit for bit.
  auto cut = [&](double t) { return t <= 5.0 ? s(t) : 0.0; };
  const auto trunc = renewal::solve(Kernel::gas(), cut, 20.0, 0.01);
  bool same = true;
  for (std::size_t i = 0; i <= 500; ++i) same = same && trunc.values[i] == full.values[i];
  CHECK(same);
}

TEST_CASE("limit values and mass conservation") {
  for (RadialInitialData d : {RadialInitialData{EquilibriumMultiple{1.0}}, RadialInitialData{presets::bounded_bump()},
                              RadialInitialData{ConcentratedBox{0.2}}}) {
    const auto sol = renewal::solve(Kernel::gas(), sources::make_source(d), 10.0, 0.01,
                                    {MarchScheme::ProductIntegration, sources::source_breakpoints(d), {}, 200.0, 0.0});
    CHECK(renewal::mass_conservation_check(sol, d) < 1e-6);
  }
  const auto box = renewal::solve(Kernel::gas(), sources::make_source(ConcentratedBox{0.2}), 10.0, 0.01,
                                  {MarchScheme::ProductIntegration, sources::source_breakpoints(ConcentratedBox{0.2})});
  const double ball = 4.0 * 3.141592653589793 / 3.0;
  CHECK(std::sqrt(2.0 * 3.141592653589793) * box.mu_infinity * ball == Approx(ball * ball).epsilon(1e-6));

  // Compactly supported radiative source: limit = integral / (4/3).
  auto s = [](double t) { return t < 2.0 ? 0.3 * t * (2.0 - t) : 0.0; };  // integral 0.4
  CHECK(renewal::limit_value(Kernel::monokinetic(), s) == Approx(0.3).epsilon(1e-12));
  CHECK_THROWS_AS(renewal::limit_value(Kernel::monokinetic(), s, {}, -1.0), Error);
}

TEST_CASE("radiative solution settles by t = 40") {
  const RadialInitialData g = presets::grey_bump();
  const auto sol = renewal::solve(Kernel::monokinetic(), sources::make_source(g), 40.0, 0.01,
                                  {MarchScheme::ProductIntegration, sources::source_breakpoints(g)});
  CHECK(std::abs(sol.values.back() - sol.mu_infinity) / sol.mu_infinity < 1e-2);
  CHECK(std::abs(sol.mu_infinity_discrete - sol.mu_infinity) / sol.mu_infinity < 1e-4);
}

TEST_CASE("Feller conditions") {
  const RadialInitialData bump = presets::bounded_bump();
  CHECK(renewal::feller_conditions(Kernel::gas(), sources::make_source(bump), sources::source_breakpoints(bump)).all_pass());
  const RadialInitialData g = presets::grey_bump();
  CHECK(renewal::feller_conditions(Kernel::monokinetic(), sources::make_source(g), sources::source_breakpoints(g)).all_pass());
  const auto slow = renewal::feller_conditions(Kernel::gas(), [](double t) { return 1.0 / (t + 1.0); });
  CHECK_FALSE(slow.source_little_o);
  CHECK_FALSE(slow.all_pass());
  CHECK_FALSE(slow.moment_finite[3] == false);
}

TEST_CASE("errors and export") {
  auto bad = [](double t) { return t > 0.5 ? std::numeric_limits<double>::quiet_NaN() : 1.0; };
  try {
    renewal::solve(Kernel::monokinetic(), bad, 1.0, 0.1);
    CHECK(false);
  } catch (const NonFiniteValue& e) {
    CHECK(e.node() == 6);
  }
  CHECK_THROWS_AS(renewal::solve(Kernel::monokinetic(), bad, 1.0, 0.0), DomainError);

  const auto sol = renewal::solve(Kernel::monokinetic(), [](double) { return 1.0; }, 1.0, 0.5);
  CHECK_THROWS_AS(sol.at(1.5), DomainError);
  std::ostringstream out;
  io::write(out, renewal::to_table(sol));
  const auto text = out.str();
  CHECK(text.rfind("t,mu,S\n", 0) == 0);
  CHECK(text.find("# mu_infinity=") != std::string::npos);
  CHECK(text.find("# residual_max=") != std::string::npos);
}
