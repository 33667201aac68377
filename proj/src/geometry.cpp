#include "wallflux/geometry.hpp"

#include <algorithm>
#include <cmath>

#include "wallflux/errors.hpp"

namespace wallflux::geometry {

double boundary_exit_time(double cos_theta, double speed) {
  if (!(cos_theta >= 0.0 && cos_theta <= 1.0)) throw DomainError("boundary_exit_time: cos_theta must lie in [0, 1]");
  if (speed < 0.0) throw DomainError("boundary_exit_time: speed must be nonnegative");
  if (speed == 0.0) throw InfiniteExitTime();
  return 2.0 * cos_theta / speed;
}

double backward_chord(double rho, double xi) {
  const double b = rho * xi;
  const double c = std::max(0.0, 1.0 - rho * rho);
  const double disc = std::sqrt(b * b + c);
  // Stable root: avoid b + disc with b < 0.
  if (b >= 0.0) return b + disc;
  const double denom = disc - b;
  return denom > 0.0 ? c / denom : 0.0;
}

double interior_exit_time(const PhasePoint& p) {
  if (!(p.rho >= 0.0 && p.rho <= 1.0)) throw DomainError("interior_exit_time: rho must lie in [0, 1]");
  if (!(p.xi >= -1.0 && p.xi <= 1.0)) throw DomainError("interior_exit_time: xi must lie in [-1, 1]");
  if (p.speed < 0.0) throw DomainError("interior_exit_time: speed must be nonnegative");
  if (p.speed == 0.0) throw InfiniteExitTime();
  return backward_chord(p.rho, p.xi) / p.speed;
}

double foot_radius(const PhasePoint& p, double t) {
  const double d = t * p.speed;
  const double r2 = p.rho * p.rho + d * d - 2.0 * d * p.rho * p.xi;
  return std::sqrt(std::max(0.0, r2));
}

double dot(const Vec3& a, const Vec3& b) { return a[0] * b[0] + a[1] * b[1] + a[2] * b[2]; }

double norm(const Vec3& a) { return std::sqrt(dot(a, a)); }

PhasePoint reduce(const Vec3& x, const Vec3& v) {
  PhasePoint p;
  p.rho = std::min(1.0, norm(x));
  p.speed = norm(v);
  if (p.rho > 0.0 && p.speed > 0.0)
    p.xi = std::clamp(dot(x, v) / (p.rho * p.speed), -1.0, 1.0);
  else
    p.xi = 1.0;
  return p;
}

double exit_time(const Vec3& x, const Vec3& v) { return interior_exit_time(reduce(x, v)); }

double forward_exit_time(const Vec3& x, const Vec3& v) {
  return exit_time(x, Vec3{-v[0], -v[1], -v[2]});
}

}  // namespace wallflux::geometry
