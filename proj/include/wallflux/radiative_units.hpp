#pragma once

// Physical radiative quantities attached to the dimensionless grey solution.

namespace wallflux {

struct PhysicalConstants {
  double h = 1.0;  ///< Planck constant
  double k = 1.0;  ///< Boltzmann constant
  double c = 1.0;  ///< speed of light

  static PhysicalConstants dimensionless() { return {}; }
  /// CODATA 2018 exact SI values.
  static PhysicalConstants si() { return {6.62607015e-34, 1.380649e-23, 299792458.0}; }
  /// Throws ValidationError unless every constant is finite and positive.
  void validate() const;
};

namespace radiative {

/// Black-body spectral intensity 2 h nu^3 / c^2 / (e^{h nu / k theta} - 1).
double planck(double nu, double theta, const PhysicalConstants& consts = {});

/// 2 pi^5 k^4 / (15 c^2 h^3).
double stefan_boltzmann(const PhysicalConstants& consts = {});

/// Same constant as 2 pi k^4 / (c^2 h^3) times a quadrature of x^3 / (e^x - 1).
double stefan_boltzmann_by_quadrature(const PhysicalConstants& consts = {});

/// Temperature of a black body whose frequency-integrated intensity is f: (pi f / sigma)^{1/4}.
double temperature_from_flux(double f, const PhysicalConstants& consts = {});

/// Equilibrium temperature from the total initial intensity over the ball and the sphere of directions.
double equilibrium_temperature(double total_intensity, const PhysicalConstants& consts = {});

}  // namespace radiative
}  // namespace wallflux
