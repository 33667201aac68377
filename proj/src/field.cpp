#include "wallflux/field.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/special_functions/gamma.hpp>

#include "wallflux/errors.hpp"
#include "wallflux/quadrature.hpp"

namespace wallflux::field {
namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

const double kSqrtTwoPi = std::sqrt(2.0 * kPi);

// f_in / M at (rho, speed); zero where M underflows.
double initial_ratio(const RadialInitialData& f_in, double rho, double speed) {
  return std::visit(overloaded{
                        [](const EquilibriumMultiple& e) { return e.c; },
                        [&](const BoundedRadial& b) {
                          const double m = MaxwellianWeight::at(speed);
                          return m > 0.0 ? b.profile(rho, speed) / m : 0.0;
                        },
                        [&](const ConcentratedBox&) {
                          const double m = MaxwellianWeight::at(speed);
                          return m > 0.0 ? density(f_in, rho, speed) / m : 0.0;
                        },
                        [](const RadialShellGrey&) -> double {
                          throw UnsupportedVariant("field: grey data needs reconstruct_grey");
                        },
                    },
                    f_in);
}

struct DataBreaks {
  std::vector<double> rho, speed;
};

DataBreaks data_breaks(const RadialInitialData& f_in) {
  DataBreaks d;
  if (const auto* b = std::get_if<BoundedRadial>(&f_in)) {
    d.rho = b->rho_breakpoints;
    d.speed = b->speed_breakpoints;
  } else if (const auto* c = std::get_if<ConcentratedBox>(&f_in)) {
    d.rho = {c->epsilon};
    d.speed = {c->epsilon};
  }
  return d;
}

double default_reference(const RenewalSolution& sol) {
  const double mu = std::isfinite(sol.mu_infinity_discrete) ? sol.mu_infinity_discrete : sol.mu_infinity;
  return kSqrtTwoPi * mu;
}

// Fraction (out of 2) of the direction cosine range keeping y + a omega inside the unit ball, |y| = rho.
double inside_fraction(double rho, double a) {
  if (a <= 1.0 - rho) return 2.0;
  if (a >= 1.0 + rho) return 0.0;
  return std::clamp(1.0 + (1.0 - rho * rho - a * a) / (2.0 * a * rho), 0.0, 2.0);
}

}  // namespace

double reconstruct(const RenewalSolution& sol, const RadialInitialData& f_in, double t, const PhasePoint& p) {
  if (!(t >= 0.0)) throw DomainError("reconstruct: t must be nonnegative");
  if (p.speed == 0.0) return initial_ratio(f_in, p.rho, 0.0);
  const double tau = geometry::interior_exit_time(p);
  if (t < tau) return initial_ratio(f_in, std::min(1.0, geometry::foot_radius(p, t)), p.speed);
  return kSqrtTwoPi * sol.at(t - tau);
}

double reconstruct(const RenewalSolution& sol, const RadialInitialData& f_in, double t, const Vec3& x, const Vec3& v) {
  return reconstruct(sol, f_in, t, geometry::reduce(x, v));
}

double reconstruct_grey(const RenewalSolution& sol, const RadialShellGrey& u_in, double t, const PhasePoint& p) {
  if (!(t >= 0.0)) throw DomainError("reconstruct_grey: t must be nonnegative");
  PhasePoint unit = p;
  unit.speed = 1.0;
  const double tau = geometry::interior_exit_time(unit);
  if (t < tau) {
    const double r = std::min(1.0, geometry::foot_radius(unit, t));
    return u_in.profile(r * r);
  }
  return sol.at(t - tau);
}

double exit_time_density(double T) {
  if (!(T >= 0.0)) throw DomainError("exit_time_density: T must be nonnegative");
  // Chord law of the backward distance (3/4)(1 - l^2/4) on [0, 2], combined with the speed law 4 pi r^2 M.
  const double scale = kBallVolume * 0.75 * 4.0 * kPi * std::pow(2.0 * kPi, -1.5);
  if (T == 0.0) return 2.0 * scale;
  if (std::isinf(T)) return 0.0;
  const double x = 2.0 / (T * T);
  return scale * 2.0 * (boost::math::gamma_p(2.0, x) - T * T * boost::math::gamma_p(3.0, x));
}

double unexited_mass(double t) {
  if (!(t >= 0.0)) throw DomainError("unexited_mass: t must be nonnegative");
  if (t == 0.0) return kBallVolume;
  // For speed r the surviving positions form the lens of two unit balls at distance t r.
  auto lens = [](double a) { return a >= 2.0 ? 0.0 : kPi / 12.0 * (4.0 + a) * (2.0 - a) * (2.0 - a); };
  const double rmax = std::min(sources::kSpeedCutoff, 2.0 / t);
  const auto& rule = quad::gauss_legendre(64);
  return rule.integrate([&](double r) { return 4.0 * kPi * r * r * MaxwellianWeight::at(r) * lens(t * r); }, 0.0,
                        rmax);
}

LpError lp_error(const RenewalSolution& sol, const RadialInitialData& f_in, double t, double p,
                 const LpOptions& options) {
  if (!(p >= 1.0)) throw DomainError("lp_error: p must be at least 1");
  if (!(t >= 0.0) || t > sol.horizon() * (1.0 + 1e-12)) throw DomainError("lp_error: t outside the solved horizon");
  if (!is_gas(f_in)) throw UnsupportedVariant("lp_error: gas data only");
  LpError out;
  out.p = p;
  out.reference = std::isnan(options.reference) ? default_reference(sol) : options.reference;
  const double ref = out.reference;

  // Wall part: int_0^t h(s) density(t - s) ds on the solution grid.
  if (t > 0.0) {
    auto h = [&](double mu) { return std::pow(std::abs(kSqrtTwoPi * mu - ref), p); };
    const double dt = sol.dt;
    const auto m = static_cast<std::size_t>(std::floor(t / dt * (1.0 + 1e-12)));
    double sum = 0.0;
    double prev = h(sol.values[0]) * exit_time_density(t);
    for (std::size_t j = 1; j <= m; ++j) {
      const double s = dt * static_cast<double>(j);
      const double cur = h(sol.values[j]) * exit_time_density(std::max(0.0, t - s));
      sum += 0.5 * dt * (prev + cur);
      prev = cur;
    }
    const double rest = t - dt * static_cast<double>(m);
    if (rest > 1e-12 * dt) sum += 0.5 * rest * (prev + h(sol.at(t)) * exit_time_density(0.0));
    out.wall = sum;
  }

  // Interior part, parametrized by the foot y = x - t v of the characteristic.
  const auto breaks = data_breaks(f_in);
  const auto& rule = quad::gauss_legendre(64);
  const auto rho_pieces = quad::breakpoints(0.0, 1.0, breaks.rho);
  std::vector<double> extra;
  auto speed_integral = [&](double rho) {
    extra = breaks.speed;
    if (t > 0.0) {
      extra.push_back((1.0 - rho) / t);
      extra.push_back((1.0 + rho) / t);
    }
    const double rmax = t > 0.0 ? std::min(sources::kSpeedCutoff, (1.0 + rho) / t) : sources::kSpeedCutoff;
    const auto pieces = quad::breakpoints(0.0, rmax, extra);
    return quad::integrate_pieces(
        [&](double r) {
          const double frac = inside_fraction(rho, t * r);
          if (frac == 0.0) return 0.0;
          const double w = 2.0 * kPi * r * r * MaxwellianWeight::at(r) * frac;
          return w * std::pow(std::abs(initial_ratio(f_in, rho, r) - ref), p);
        },
        pieces, rule);
  };
  // Adaptive in rho: |ratio - ref|^p has kinks wherever the ratio crosses the reference.
  double interior = 0.0;
  for (std::size_t i = 0; i + 1 < rho_pieces.size(); ++i)
    interior += boost::math::quadrature::gauss_kronrod<double, 31>::integrate(
        [&](double rho) { return 4.0 * kPi * rho * rho * speed_integral(rho); }, rho_pieces[i], rho_pieces[i + 1], 12,
        1e-11);
  out.interior = interior;
  const double total = out.wall + out.interior;
  out.value = options.root ? std::pow(total, 1.0 / p) : total;
  return out;
}

double boundary_flux(const RenewalSolution& sol, const RadialInitialData& f_in, double t, const Vec3& wall_point) {
  const double len = geometry::norm(wall_point);
  if (std::abs(len - 1.0) > 1e-12) throw DomainError("boundary_flux: point must lie on the unit sphere");
  const Vec3 n{wall_point[0] / len, wall_point[1] / len, wall_point[2] / len};
  // Orthonormal frame around the normal.
  const Vec3 helper = std::abs(n[0]) < 0.9 ? Vec3{1.0, 0.0, 0.0} : Vec3{0.0, 1.0, 0.0};
  Vec3 e1{helper[1] * n[2] - helper[2] * n[1], helper[2] * n[0] - helper[0] * n[2], helper[0] * n[1] - helper[1] * n[0]};
  const double l1 = geometry::norm(e1);
  for (auto& c : e1) c /= l1;
  const Vec3 e2{n[1] * e1[2] - n[2] * e1[1], n[2] * e1[0] - n[0] * e1[2], n[0] * e1[1] - n[1] * e1[0]};

  const auto breaks = data_breaks(f_in);
  const auto& rule = quad::gauss_legendre(64);
  constexpr int kAzimuth = 6;
  const auto speed_pieces = quad::breakpoints(0.0, sources::kSpeedCutoff, breaks.speed);
  std::vector<double> ycuts;
  auto over_cosine = [&](double r) {
    ycuts.clear();
    ycuts.push_back(0.5 * t * r);
    if (t > 0.0 && r > 0.0)
      for (double b : breaks.rho) ycuts.push_back((1.0 + t * t * r * r - b * b) / (2.0 * t * r));
    const auto pieces = quad::breakpoints(0.0, 1.0, ycuts);
    return quad::integrate_pieces(
        [&](double y) {
          const double s = std::sqrt(std::max(0.0, 1.0 - y * y));
          double acc = 0.0;
          for (int k = 0; k < kAzimuth; ++k) {
            const double phi = 2.0 * kPi * (k + 0.5) / kAzimuth;
            const double c = s * std::cos(phi), d = s * std::sin(phi);
            const Vec3 v{r * (y * n[0] + c * e1[0] + d * e2[0]), r * (y * n[1] + c * e1[1] + d * e2[1]),
                         r * (y * n[2] + c * e1[2] + d * e2[2])};
            acc += reconstruct(sol, f_in, t, wall_point, v);
          }
          return y * acc * (2.0 * kPi / kAzimuth);
        },
        pieces, rule);
  };
  return quad::integrate_pieces(
      [&](double r) { return r * r * r * MaxwellianWeight::at(r) * over_cosine(r); }, speed_pieces, rule);
}

DecayFit power_fit(std::span<const double> times, std::span<const double> errors, double t0, double t1) {
  if (times.size() != errors.size()) throw FitDomainError("power_fit: times and errors differ in length");
  if (!(t0 > 0.0 && t1 > t0)) throw FitDomainError("power_fit: window must satisfy 0 < t0 < t1");
  const auto idx = fit::window_indices(times, t0, t1);
  if (idx.size() < 10) throw FitDomainError("power_fit: fewer than 10 points in the window");
  std::vector<double> x, y;
  for (auto i : idx) {
    if (!(errors[i] > 0.0)) throw FitDomainError("power_fit: nonpositive error at t=" + std::to_string(times[i]));
    x.push_back(std::log(times[i]));
    y.push_back(std::log(errors[i]));
  }
  const auto line = fit::least_squares(x, y);
  DecayFit f;
  f.model = FitModel::PowerLaw;
  f.mode = FitMode::Raw;
  f.rate = -line.slope;
  f.intercept = line.intercept;
  f.t0 = t0;
  f.t1 = t1;
  f.rms_residual = line.rms_residual;
  f.points = idx.size();
  return f;
}

double window_average(std::span<const double> times, std::span<const double> values, double t0, double t1) {
  const auto idx = fit::window_indices(times, t0, t1);
  if (idx.size() < 2) throw FitDomainError("window_average: fewer than two nodes in the window");
  double sum = 0.0;
  for (std::size_t k = 1; k < idx.size(); ++k) {
    const auto i = idx[k - 1], j = idx[k];
    sum += 0.5 * (times[j] - times[i]) * (values[i] + values[j]);
  }
  return sum / (times[idx.back()] - times[idx.front()]);
}

io::Table error_curve_table(std::span<const double> times, std::span<const double> exponents,
                            const std::vector<std::vector<double>>& errors) {
  if (errors.size() != exponents.size()) throw DomainError("error_curve_table: one error series per exponent");
  io::Table t;
  t.header.push_back("t");
  t.columns.emplace_back(times.begin(), times.end());
  for (std::size_t k = 0; k < exponents.size(); ++k) {
    t.header.push_back("err_p" + io::format_number(exponents[k]));
    t.columns.push_back(errors[k]);
  }
  return t;
}

}  // namespace wallflux::field
