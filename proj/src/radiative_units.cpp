#include "wallflux/radiative_units.hpp"

#include <cmath>
#include <string>

#include "wallflux/errors.hpp"
#include "wallflux/quadrature.hpp"
#include "wallflux/sources.hpp"

namespace wallflux {

void PhysicalConstants::validate() const {
  auto check = [](double v, const char* name) {
    if (!(std::isfinite(v) && v > 0.0))
      throw ValidationError(name, std::string("physical constant must be finite and positive"));
  };
  check(h, "constants.h");
  check(k, "constants.k");
  check(c, "constants.c");
}

namespace radiative {

double planck(double nu, double theta, const PhysicalConstants& consts) {
  if (!(nu > 0.0) || !(theta > 0.0)) throw DomainError("planck: frequency and temperature must be positive");
  const double x = consts.h * nu / (consts.k * theta);
  const double pre = 2.0 * consts.h * nu * nu * nu / (consts.c * consts.c);
  if (x < 1e-4) {
    // 1/(e^x - 1) = 1/x - 1/2 + x/12 - x^3/720
    return pre * (1.0 / x - 0.5 + x / 12.0 - x * x * x / 720.0);
  }
  return pre / std::expm1(x);
}

double stefan_boltzmann(const PhysicalConstants& consts) {
  const double k2 = consts.k * consts.k;
  return 2.0 * std::pow(kPi, 5) * k2 * k2 / (15.0 * consts.c * consts.c * consts.h * consts.h * consts.h);
}

double stefan_boltzmann_by_quadrature(const PhysicalConstants& consts) {
  auto f = [](double x) { return x < 1e-8 ? x * x : x * x * x / std::expm1(x); };
  // Unit panels to 60, then the tail (x^3 + 3x^2 + 6x + 6) e^{-x} of the leading exponential.
  const auto& gl = quad::gauss_legendre(32);
  double s = 0.0;
  for (int i = 0; i < 60; ++i) s += gl.integrate(f, i, i + 1.0);
  const double b = 60.0;
  s += (b * b * b + 3.0 * b * b + 6.0 * b + 6.0) * std::exp(-b);
  const double k2 = consts.k * consts.k;
  return 2.0 * kPi * k2 * k2 / (consts.c * consts.c * consts.h * consts.h * consts.h) * s;
}

double temperature_from_flux(double f, const PhysicalConstants& consts) {
  if (!(f >= 0.0)) throw DomainError("temperature_from_flux: flux must be nonnegative");
  return std::pow(kPi * f / stefan_boltzmann(consts), 0.25);
}

double equilibrium_temperature(double total_intensity, const PhysicalConstants& consts) {
  if (!(total_intensity >= 0.0)) throw DomainError("equilibrium_temperature: intensity must be nonnegative");
  return std::pow(total_intensity / (4.0 * stefan_boltzmann(consts) * kBallVolume), 0.25);
}

}  // namespace radiative
}  // namespace wallflux
