#pragma once

// Radial initial data and the renewal source terms they generate.

#include <filesystem>
#include <functional>
#include <span>
#include <string>
#include <variant>
#include <vector>

namespace wallflux {

inline constexpr double kPi = 3.14159265358979323846;
/// |B(0,1)| in three dimensions; also |Omega| for the unit ball vessel.
inline constexpr double kBallVolume = 4.0 * kPi / 3.0;

/// Wall Maxwellian M = M_(1,0,1): theta_w = 1, unit density, no drift.
struct MaxwellianWeight {
  static double at(double speed);  // (2 pi)^{-3/2} e^{-|v|^2/2}
  static double half_space_flux();  // <M>_+ = (2 pi)^{-1/2}
};

/// f_in = c M.
struct EquilibriumMultiple {
  double c = 1.0;
};

/// f_in(rho, speed) given by a profile bounded by C M(speed).
/// Breakpoints mark where the profile (or a derivative) is not smooth; quadratures split there.
struct BoundedRadial {
  std::function<double(double, double)> profile;
  double bound_constant = 1.0;
  std::vector<double> rho_breakpoints;
  std::vector<double> speed_breakpoints;
  std::string label = "bounded";
};

/// f_in = eps^{-6} 1_{|x| <= eps} 1_{|v| <= eps}.
struct ConcentratedBox {
  double epsilon = 0.2;
};

/// Grey radiative data u_in as a function of the squared radius |x|^2 in [0, 1].
struct RadialShellGrey {
  std::function<double(double)> profile;
  std::vector<double> breakpoints;  // in rho^2
  double sup = 1.0;
  std::string label = "grey";
};

using RadialInitialData = std::variant<EquilibriumMultiple, BoundedRadial, ConcentratedBox, RadialShellGrey>;

using SourceFunction = std::function<double(double)>;

bool is_gas(const RadialInitialData& data);

/// f_in(rho, speed) for the gas variants.
double density(const RadialInitialData& data, double rho, double speed);

/// sup over x of f_in(|x|, .), i.e. the constant C_Phi in the t^{-4} source bound.
double profile_sup(const RadialInitialData& data);

/// Total mass: the double integral of f_in over Omega x R^3 (gas) or of u_in over Omega x S^2 (grey).
double total_mass(const RadialInitialData& data);

namespace presets {

/// f_in = amplitude * M(v) * b(|x|/radius), b(s) = (1 - s^2)^4 on s < 1. Bounded by amplitude * M.
BoundedRadial bounded_bump(double amplitude = 2.0, double radius = 0.6);

/// u_in(q) = amplitude * ((q - inner)(outer - q))^4 / peak on inner < q < outer, q = |x|^2.
RadialShellGrey grey_bump(double inner = 0.2, double outer = 0.5, double amplitude = 1.0);

/// Builds a BoundedRadial and checks 0 <= profile <= C M on a validation grid.
BoundedRadial checked_bounded(std::function<double(double, double)> profile, double bound_constant,
                              std::vector<double> rho_breakpoints = {}, std::vector<double> speed_breakpoints = {},
                              std::string label = "bounded");

}  // namespace presets

namespace sources {

/// Speed-axis truncation of the gas quadratures.
inline constexpr double kSpeedCutoff = 12.0;

/// Outgoing wall flux of free-streaming initial data: S(t).
double gas_source(const RadialInitialData& f_in, double t);

/// Radiative source (1/2) int_t^2 u_in(1 + t^2 - t s) s ds.
double radiative_source(const RadialShellGrey& u_in, double t);

/// S(t) as a callable bound to the data (gas or grey according to the variant).
SourceFunction make_source(const RadialInitialData& data);

/// Natural nonsmooth points of S(t) for the given data.
std::vector<double> source_breakpoints(const RadialInitialData& data);

struct SourceIntegral {
  double value = 0.0;       ///< quadrature on [0, horizon] plus tail estimate
  double quadrature = 0.0;  ///< integral over [0, horizon]
  double tail = 0.0;        ///< extrapolated integral beyond the horizon (a t^-4 + b t^-5 fit)
  double error_bar = 0.0;   ///< 4 pi C_Phi / (3 horizon^3) when a bound constant is known
  double horizon = 0.0;
};

/// Integral of S over [0, inf): composite quadrature on [0, horizon] plus a power-law tail.
/// `bound_constant` (C_Phi) is only used for the reported error bar; pass 0 to skip it.
SourceIntegral source_integral(const SourceFunction& source, double horizon,
                               std::span<const double> breakpoints = {}, double bound_constant = 0.0);

/// Tail integral beyond `t1` of a t^-4 + b t^-5 fitted through (t0, s0), (t1, s1), t0 < t1.
double power_tail(double t0, double s0, double t1, double s1);

}  // namespace sources

namespace tables {

/// Three-column table "rho speed value" on a rectangular grid (rho-major, sorted).
/// Monotone cubic interpolation along each axis, clamped to [0, C M(speed)] with C the
/// largest node ratio value / M; zero beyond the last tabulated speed.
BoundedRadial load_gas_table(const std::filesystem::path& path);

/// Two-column table "rho_squared value", sorted, monotone cubic interpolation clamped at 0.
RadialShellGrey load_grey_table(const std::filesystem::path& path);

}  // namespace tables
}  // namespace wallflux
