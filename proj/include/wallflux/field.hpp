#pragma once

// Phase-space reconstruction from the wall flux and distances to equilibrium.
//
// The M-weighted unknown g = f/M is transported along backward characteristics:
//   g(t, x, v) = sqrt(2 pi) mu(t - tau)   if the characteristic met the wall (t >= tau),
//              = f_in(|x - t v|, |v|) / M  otherwise.

#include <limits>
#include <span>
#include <vector>

#include "wallflux/fit.hpp"
#include "wallflux/geometry.hpp"
#include "wallflux/io.hpp"
#include "wallflux/renewal.hpp"
#include "wallflux/sources.hpp"

namespace wallflux::field {

/// g(t, x, v) for gas data. Zero speed never meets the wall and keeps its initial value.
double reconstruct(const RenewalSolution& sol, const RadialInitialData& f_in, double t, const PhasePoint& p);
double reconstruct(const RenewalSolution& sol, const RadialInitialData& f_in, double t, const Vec3& x, const Vec3& v);

/// Grey intensity u(t, x, omega) at unit speed; p.speed is ignored.
double reconstruct_grey(const RenewalSolution& sol, const RadialShellGrey& u_in, double t, const PhasePoint& p);

/// Density of the backward exit time under dx M(v) dv on the unit ball; integrates to |Omega|.
double exit_time_density(double T);

struct LpOptions {
  /// Return the p-th root of the functional.
  bool root = false;
  /// Equilibrium level of g; NaN means sqrt(2 pi) times the discrete limit of the solution
  /// (or the continuum limit when the discrete one is unavailable).
  double reference = std::numeric_limits<double>::quiet_NaN();
};

struct LpError {
  double value = 0.0;     ///< wall + interior, rooted if requested
  double wall = 0.0;      ///< contribution of characteristics that met the wall
  double interior = 0.0;  ///< contribution of characteristics still carrying initial data
  double p = 1.0;
  double reference = 0.0;
};

/// int int |g(t) - reference|^p M dv dx over the unit ball.
LpError lp_error(const RenewalSolution& sol, const RadialInitialData& f_in, double t, double p,
                 const LpOptions& options = {});

/// Mass of characteristics that have not met the wall by time t: int int 1_{t < tau} M dv dx.
double unexited_mass(double t);

/// Outgoing flux int_{v.n > 0} f(t, x, v) v.n dv at a wall point, computed from the reconstruction.
double boundary_flux(const RenewalSolution& sol, const RadialInitialData& f_in, double t, const Vec3& wall_point);

/// Power-law fit of log err against log t on [t0, t1]; rate = -slope.
DecayFit power_fit(std::span<const double> times, std::span<const double> errors, double t0, double t1);

/// Mean of `values` over [t0, t1] by the trapezoid rule on the given nodes.
double window_average(std::span<const double> times, std::span<const double> values, double t0, double t1);

/// Columns t, err_p<...> for each exponent.
io::Table error_curve_table(std::span<const double> times, std::span<const double> exponents,
                            const std::vector<std::vector<double>>& errors);

}  // namespace wallflux::field
