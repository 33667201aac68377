#pragma once

// Transport geometry of the unit ball B(0,1).

#include <array>

namespace wallflux {

using Vec3 = std::array<double, 3>;

/// Reduced phase-space coordinates of a point (x, v) with |x| <= 1.
/// `xi` is the cosine of the angle between x and v (taken as 1 when x = 0).
struct PhasePoint {
  double rho = 0.0;
  double speed = 0.0;
  double xi = 0.0;
};

namespace geometry {

inline constexpr double kDiameter = 2.0;

/// Backward exit time 2 cos(theta) / |v| of a boundary point whose velocity makes
/// angle theta with the outward normal. Throws InfiniteExitTime when speed == 0.
double boundary_exit_time(double cos_theta, double speed);

/// Length of the chord from x back to the wall along -v, i.e. the root of
/// L^2 - 2 L rho xi + rho^2 - 1 = 0 that is >= 0.
double backward_chord(double rho, double xi);

/// Backward exit time: the smallest t >= 0 with |x - t v| = 1.
double interior_exit_time(const PhasePoint& p);

/// |x - t v| computed from reduced coordinates.
double foot_radius(const PhasePoint& p, double t);

double dot(const Vec3& a, const Vec3& b);
double norm(const Vec3& a);

PhasePoint reduce(const Vec3& x, const Vec3& v);

/// Backward exit time from Cartesian data.
double exit_time(const Vec3& x, const Vec3& v);

/// Forward exit time: the smallest t >= 0 with |x + t v| = 1.
double forward_exit_time(const Vec3& x, const Vec3& v);

}  // namespace geometry
}  // namespace wallflux
