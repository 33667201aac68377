#include <doctest.h>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>

#include "wallflux/errors.hpp"
#include "wallflux/montecarlo.hpp"
#include "wallflux/renewal.hpp"

using namespace wallflux;
using doctest::Approx;

namespace {

RenewalSolution solve_for(const RadialInitialData& d, const Kernel& k, double horizon, double dt) {
  SolveOptions o;
  o.source_breakpoints = sources::source_breakpoints(d);
  return renewal::solve(k, sources::make_source(d), horizon, dt, o);
}

}  // namespace

TEST_CASE("splitmix64 reference stream") {
  SplitMix64 g(0);
  CHECK(g() == 0xe220a8397b1dcdafULL);
  CHECK(g() == 0x6e789e6aa1b965f4ULL);
  SplitMix64 h(1);
  double lo = 1.0, hi = 0.0;
  for (int i = 0; i < 100000; ++i) {
    const double u = h.uniform();
    lo = std::min(lo, u);
    hi = std::max(hi, u);
  }
  CHECK(lo >= 0.0);
  CHECK(hi < 1.0);
  CHECK(stream_seed(5, 0) != stream_seed(5, 1));
  CHECK(stream_seed(5, 0) != stream_seed(6, 0));
  CHECK(stream_seed(5, 7) == stream_seed(5, 7));
}

TEST_CASE("diffuse reemission law") {
  const Vec3 inward{0.0, 0.6, -0.8};
  SplitMix64 rng(11);
  const int n = 200000;
  double cos_sum = 0.0, speed_sum = 0.0;
  bool all_inward = true;
  for (int i = 0; i < n; ++i) {
    const Vec3 v = montecarlo::diffuse_resample(rng, inward, false);
    const double s = geometry::norm(v);
    const double c = geometry::dot(v, inward) / s;
    all_inward = all_inward && c >= 0.0;
    cos_sum += c;
    speed_sum += s;
  }
  CHECK(all_inward);
  // Cosine law: E[cos] = 2/3, standard deviation sqrt(1/2 - 4/9).
  CHECK(std::abs(cos_sum / n - 2.0 / 3.0) < 5.0 * std::sqrt(0.5 - 4.0 / 9.0) / std::sqrt(n));
  // Speed density r^3 e^{-r^2/2} / 2, with E[r^2] = 4.
  const double mean = boost::math::quadrature::gauss_kronrod<double, 61>::integrate(
      [](double r) { return 0.5 * r * r * r * r * std::exp(-0.5 * r * r); }, 0.0, 40.0, 15, 1e-13);
  CHECK(std::abs(speed_sum / n - mean) < 5.0 * std::sqrt(4.0 - mean * mean) / std::sqrt(n));

  for (int i = 0; i < 1000; ++i)
    CHECK(geometry::norm(montecarlo::diffuse_resample(rng, inward, true)) == Approx(1.0).epsilon(1e-14));
}

TEST_CASE("initial ensembles") {
  const RadialInitialData bump = presets::bounded_bump();
  const auto e = montecarlo::sample_initial(bump, 20000, 4);
  CHECK(e.total_weight() == Approx(total_mass(bump)).epsilon(1e-12));
  double r2 = 0.0;
  bool inside = true;
  for (const auto& x : e.positions) {
    inside = inside && geometry::norm(x) < 0.6;
    r2 += geometry::dot(x, x);
  }
  CHECK(inside);
  // Spatial profile (1 - |x|^2/a^2)^4 on the ball of radius a; E|x|^2 by quadrature.
  auto q = [](int k) {
    return boost::math::quadrature::gauss_kronrod<double, 61>::integrate(
        [k](double s) { return std::pow(s, 2 + k) * std::pow(1.0 - s * s, 4); }, 0.0, 1.0, 10, 1e-14);
  };
  CHECK(std::abs(r2 / 20000 - 0.36 * q(2) / q(0)) < 0.01);

  const RadialInitialData grey = presets::grey_bump();
  const auto g = montecarlo::sample_initial(grey, 2000, 4);
  CHECK(g.radiative);
  for (std::size_t i = 0; i < g.size(); ++i) {
    const double q2 = geometry::dot(g.positions[i], g.positions[i]);
    CHECK(q2 > 0.2);
    CHECK(q2 < 0.5);
    CHECK(geometry::norm(g.velocities[i]) == Approx(1.0));
  }
  CHECK_THROWS_AS(montecarlo::sample_initial(bump, 0, 1), EmptyEnsemble);
}

TEST_CASE("evolution is deterministic and independent of threads") {
  const RadialInitialData bump = presets::bounded_bump();
  const auto e = montecarlo::sample_initial(bump, 4000, 9);
  EvolveOptions o;
  o.horizon = 10.0;
  o.threads = 1;
  const auto a = montecarlo::evolve(e, o);
  o.threads = 3;
  const auto b = montecarlo::evolve(e, o);
  CHECK(a.counts == b.counts);
  CHECK(a.standard_error == b.standard_error);
  CHECK(a.interval_density == b.interval_density);
  CHECK(a.total_weight == Approx(total_mass(bump)));
  // Density plus overflow accounts for every interval.
  double s = a.interval_overflow;
  for (double d : a.interval_density) s += d * a.interval_bin;
  CHECK(s == Approx(1.0).epsilon(1e-12));
}

TEST_CASE("particle flux agrees with the renewal solution") {
  SUBCASE("gas") {
    const RadialInitialData bump = presets::bounded_bump();
    EvolveOptions o;
    o.horizon = 10.0;
    const auto tally = montecarlo::evolve(montecarlo::sample_initial(bump, 60000, 21), o);
    const auto sol = solve_for(bump, Kernel::gas(), 10.0, 0.01);
    const auto flux = montecarlo::compare_flux(tally, sol);
    CHECK(flux.estimate.size() == 20);
    CHECK(flux.fraction_within >= 0.9);
    const auto hist = montecarlo::compare_intervals(tally, Kernel::gas());
    CHECK(hist.fraction_within >= 0.9);
  }
  SUBCASE("grey") {
    const RadialInitialData grey = presets::grey_bump();
    EvolveOptions o;
    o.horizon = 10.0;
    const auto tally = montecarlo::evolve(montecarlo::sample_initial(grey, 60000, 22), o);
    CHECK(tally.intensity_factor == Approx(1.0 / 3.141592653589793));
    const auto sol = solve_for(grey, Kernel::monokinetic(), 10.0, 0.005);
    CHECK(montecarlo::compare_flux(tally, sol).fraction_within >= 0.9);
    const auto hist = montecarlo::compare_intervals(tally, Kernel::monokinetic());
    CHECK(hist.fraction_within >= 0.9);
    CHECK(tally.interval_overflow == 0.0);
  }
}

TEST_CASE("tables and argument checks") {
  const RadialInitialData eq = EquilibriumMultiple{1.0};
  const auto e = montecarlo::sample_initial(eq, 500, 1);
  EvolveOptions o;
  o.horizon = 2.0;
  const auto t = montecarlo::evolve(e, o);
  const auto tab = montecarlo::to_table(t);
  CHECK(tab.header == std::vector<std::string>{"bin_center", "flux_estimate", "stderr"});
  CHECK(tab.columns[0].size() == 4);
  o.bin_width = 0.0;
  CHECK_THROWS_AS(montecarlo::evolve(e, o), DomainError);
}
