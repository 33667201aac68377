#include <doctest.h>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>

#include "wallflux/errors.hpp"
#include "wallflux/radiative_units.hpp"

using namespace wallflux;
using doctest::Approx;

namespace {
const double kPiD = 3.141592653589793;
}

TEST_CASE("Stefan-Boltzmann constant") {
  CHECK(radiative::stefan_boltzmann() == Approx(2.0 * std::pow(kPiD, 5) / 15.0).epsilon(1e-15));
  // CODATA: 5.670374419e-8 W m^-2 K^-4.
  CHECK(radiative::stefan_boltzmann(PhysicalConstants::si()) == Approx(5.670374419e-8).epsilon(1e-9));
  CHECK(radiative::stefan_boltzmann_by_quadrature() == Approx(radiative::stefan_boltzmann()).epsilon(1e-12));
  CHECK(radiative::stefan_boltzmann_by_quadrature(PhysicalConstants::si()) ==
        Approx(radiative::stefan_boltzmann(PhysicalConstants::si())).epsilon(1e-12));
}

TEST_CASE("Planck intensity") {
  // Frequency integral of B_nu is sigma theta^4 / pi.
  for (double theta : {0.5, 1.0, 3.0}) {
    const double total = boost::math::quadrature::gauss_kronrod<double, 61>::integrate(
        [&](double nu) { return radiative::planck(nu, theta); }, 0.0, 80.0 * theta, 20, 1e-13);
    CHECK(total == Approx(radiative::stefan_boltzmann() * std::pow(theta, 4) / kPiD).epsilon(1e-10));
  }
  // Rayleigh-Jeans side: 2 nu^2 k theta / c^2, continuous across the series switch.
  CHECK(radiative::planck(1e-9, 2.0) == Approx(2.0 * 1e-18 * 2.0).epsilon(1e-9));
  const double x = 1e-4;
  CHECK(radiative::planck(x * (1.0 - 1e-9), 1.0) == Approx(radiative::planck(x * (1.0 + 1e-9), 1.0)).epsilon(1e-8));
  CHECK_THROWS_AS(radiative::planck(0.0, 1.0), DomainError);
  CHECK(radiative::planck(1e4, 1.0) == 0.0);
  CHECK_THROWS_AS(radiative::planck(1.0, 0.0), DomainError);
}

TEST_CASE("temperatures") {
  for (double theta : {0.2, 1.0, 7.0}) {
    const double f = radiative::stefan_boltzmann() * std::pow(theta, 4) / kPiD;
    CHECK(radiative::temperature_from_flux(f) == Approx(theta).epsilon(1e-14));
  }
  // Total over the unit ball and all directions balanced by 4 sigma |Omega| theta^4.
  const double omega = 4.0 * kPiD / 3.0;
  const double theta = 1.7;
  const double total = 4.0 * radiative::stefan_boltzmann() * omega * std::pow(theta, 4);
  CHECK(radiative::equilibrium_temperature(total) == Approx(theta).epsilon(1e-14));
  const auto si = PhysicalConstants::si();
  CHECK(radiative::temperature_from_flux(radiative::stefan_boltzmann(si) * std::pow(300.0, 4) / kPiD, si) ==
        Approx(300.0).epsilon(1e-13));
  CHECK_THROWS_AS(radiative::temperature_from_flux(-1.0), DomainError);
}

TEST_CASE("constants validation") {
  CHECK_NOTHROW(PhysicalConstants::si().validate());
  CHECK_THROWS_AS((PhysicalConstants{0.0, 1.0, 1.0}.validate()), ValidationError);
  CHECK_THROWS_AS((PhysicalConstants{1.0, NAN, 1.0}.validate()), ValidationError);
}
