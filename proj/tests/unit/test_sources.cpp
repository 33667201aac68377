#include <doctest.h>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <filesystem>
#include <fstream>

#include "wallflux/errors.hpp"
#include "wallflux/kernels.hpp"
#include "wallflux/sources.hpp"

using namespace wallflux;
using doctest::Approx;
using boost::math::quadrature::gauss_kronrod;

namespace {

const double kPiD = 3.141592653589793;
const double kInvSqrt2Pi = 1.0 / std::sqrt(2.0 * kPiD);

template <class F>
double gk(F f, double a, double b) {
  return gauss_kronrod<double, 61>::integrate(f, a, b, 20, 1e-14);
}

// Outgoing flux of the box data: the y-integral is done by hand, only the speed integral numerically.
double box_flux(double eps, double t) {
  auto f = [&](double r) {
    const double ylo = (1.0 + t * t * r * r - eps * eps) / (2.0 * t * r);
    if (ylo >= 1.0) return 0.0;
    return r * r * r * 0.5 * (1.0 - std::max(ylo, 0.0) * std::max(ylo, 0.0));
  };
  const double a = std::max(0.0, (1.0 - eps) / t), b = std::min(eps, (1.0 + eps) / t);
  if (a >= b) return 0.0;
  return 2.0 * kPiD * std::pow(eps, -6) * gk(f, a, b);
}

// 4 pi rho^2 * 4 pi r^2 f over the ball and the speed axis.
double mass_by_quadrature(const BoundedRadial& d) {
  auto inner = [&](double rho) {
    return gk([&](double r) { return d.profile(rho, r) * r * r; }, 0.0, 12.0) * rho * rho;
  };
  return 16.0 * kPiD * kPiD * gk(inner, 0.0, 1.0);
}

}  // namespace

TEST_CASE("equilibrium source is the survival of the kernel") {
  const RadialInitialData eq = EquilibriumMultiple{1.0};
  CHECK(sources::gas_source(eq, 0.0) == Approx(kInvSqrt2Pi).epsilon(1e-12));
  for (double t : {0.1, 0.5, 1.0, 2.0, 5.0, 20.0}) {
    const double expected = (1.0 - kernels::cumulative(Kernel::gas(), t)) * kInvSqrt2Pi;
    CHECK(std::abs(sources::gas_source(eq, t) - expected) < 1e-8);
  }
}

TEST_CASE("bounded data obey the t^-4 source bound") {
  const auto bump = presets::bounded_bump(2.0, 0.6);
  const RadialInitialData d = bump;
  const double sup = profile_sup(d);
  for (double t : {1.0, 2.0, 4.0, 10.0, 40.0}) CHECK(std::pow(t, 4) * sources::gas_source(d, t) <= 4.0 * kPiD * sup * 1.000001);
}

TEST_CASE("monotone dominance") {
  const RadialInitialData lo = presets::bounded_bump(1.0, 0.6), hi = presets::bounded_bump(2.0, 0.6);
  for (double t : {0.0, 0.3, 1.0, 3.0}) CHECK(sources::gas_source(lo, t) <= sources::gas_source(hi, t));
}

TEST_CASE("concentrated box source") {
  for (double eps : {0.1, 0.2, 0.4})
    for (double t : {0.5, 1.0 / eps, 5.0, 8.0, 20.0}) {
      const double a = sources::gas_source(ConcentratedBox{eps}, t), b = box_flux(eps, t);
      CHECK(std::abs(a - b) <= 1e-9 * std::max(1.0, std::abs(b)));
    }
  CHECK(sources::gas_source(ConcentratedBox{0.2}, 1.0) == 0.0);
}

TEST_CASE("radiative source") {
  const auto g = presets::grey_bump(0.2, 0.5, 1.0);
  CHECK(sources::radiative_source(g, 0.0) == 0.0);
  CHECK(sources::radiative_source(g, 2.5) == 0.0);
  CHECK(sources::radiative_source(g, 1.8) == 0.0);
  for (double t : {0.3, 0.7, 1.0, 1.3}) {
    const double q = 0.5 * gk([&](double s) { return g.profile(1.0 + t * t - t * s) * s; }, t, 2.0);
    CHECK(sources::radiative_source(g, t) == Approx(q).epsilon(1e-10));
  }
}

TEST_CASE("source integral") {
  const RadialInitialData eq = EquilibriumMultiple{1.0};
  const auto si = sources::source_integral(sources::make_source(eq), 200.0, sources::source_breakpoints(eq), 1.0);
  // Fubini: the integral of the survival function is the mean of the kernel.
  const double mean = 4.0 / 3.0 * 0.5 * std::sqrt(kPiD / 2.0);
  CHECK(si.value == Approx(kInvSqrt2Pi * mean).epsilon(1e-8));
  CHECK(si.error_bar > 0.0);

  const RadialInitialData grey = presets::grey_bump();
  const auto rs = sources::source_integral(sources::make_source(grey), 2.0, sources::source_breakpoints(grey));
  CHECK(rs.tail == Approx(0.0));
}

TEST_CASE("total mass") {
  CHECK(total_mass(EquilibriumMultiple{1.0}) == Approx(4.0 * kPiD / 3.0).epsilon(1e-12));
  CHECK(total_mass(ConcentratedBox{0.2}) == Approx(std::pow(4.0 * kPiD / 3.0, 2)).epsilon(1e-14));
  const auto bump = presets::bounded_bump(2.0, 0.6);
  CHECK(total_mass(bump) == Approx(mass_by_quadrature(bump)).epsilon(1e-10));
  const auto g = presets::grey_bump(0.2, 0.5, 1.0);
  const double grey = 16.0 * kPiD * kPiD * gk([&](double r) { return r * r * g.profile(r * r); }, 0.0, 1.0);
  CHECK(total_mass(g) == Approx(grey).epsilon(1e-10));
}

TEST_CASE("preset validation") {
  CHECK_THROWS_AS(presets::checked_bounded([](double, double r) { return 3.0 * MaxwellianWeight::at(r); }, 2.0),
                  ValidationError);
  CHECK_THROWS_AS(presets::bounded_bump(-1.0), ValidationError);
  CHECK_THROWS_AS(presets::grey_bump(0.5, 0.2), ValidationError);
}

TEST_CASE("tabulated profiles") {
  const auto dir = std::filesystem::temp_directory_path() / "wallflux_tables";
  std::filesystem::create_directories(dir);
  const auto bump = presets::bounded_bump(2.0, 0.6);
  {
    std::ofstream out(dir / "gas.txt");
    out << "rho speed value\n";
    for (int i = 0; i <= 60; ++i)
      for (int j = 0; j <= 120; ++j) {
        const double rho = i / 60.0, r = 8.0 * j / 120.0;
        out << rho << ' ' << r << ' ' << bump.profile(rho, r) << '\n';
      }
  }
  const auto table = tables::load_gas_table(dir / "gas.txt");
  CHECK(total_mass(table) == Approx(total_mass(bump)).epsilon(2e-3));
  CHECK(table.bound_constant >= 0.0);

  const auto g = presets::grey_bump();
  {
    std::ofstream out(dir / "grey.txt");
    out << "rho_squared value\n";
    for (int i = 0; i <= 400; ++i) out << i / 400.0 << ' ' << g.profile(i / 400.0) << '\n';
  }
  const auto gt = tables::load_grey_table(dir / "grey.txt");
  CHECK(sources::radiative_source(gt, 0.8) == Approx(sources::radiative_source(g, 0.8)).epsilon(1e-3));

  {
    std::ofstream out(dir / "bad.txt");
    out << "rho speed value\n0 0 1\n0 1\n";
  }
  CHECK_THROWS_AS(tables::load_gas_table(dir / "bad.txt"), ValidationError);
  std::filesystem::remove_all(dir);
}
