#include "wallflux/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "wallflux/errors.hpp"
#include "wallflux/quadrature.hpp"
#include "wallflux/sources.hpp"

namespace wallflux {

void LowerBoundScenario::validate() const {
  if (!(R > 0.0 && R <= 0.5)) throw ValidationError("bounds.R", "must lie in (0, 0.5] for the unit ball");
  if (!(epsilon > 0.0 && epsilon < R)) throw ValidationError("bounds.epsilon", "must lie in (0, R)");
  if (!(T > 0.0)) throw ValidationError("bounds.T", "must be positive");
  if (!(p > 1.0)) throw ValidationError("bounds.p", "must exceed 1");
}

double LowerBoundScenario::dual_exponent() const { return std::isinf(p) ? 1.0 : p / (p - 1.0); }

std::string_view to_string(EnvelopeKind k) { return k == EnvelopeKind::LogEntropy ? "log_entropy" : "algebraic_lp"; }

namespace bounds {
namespace {

const double kMaxwellSup = std::pow(2.0 * kPi, -1.5);

// |B|^2 / |Omega| with Omega the unit ball.
constexpr double kEquilibriumMass = kBallVolume;

double positive(double x) { return x > 0.0 ? x : 0.0; }

double relaxation_factor(double eps) {
  return positive(1.0 - std::pow(eps, 6) * kBallVolume * kBallVolume / (kBallVolume * std::pow(2.0 * kPi, 1.5)));
}

// int_0^T min(1, a/(t+s))^3 ds in closed form.
double window_integral(double a, double t, double T) {
  const double knee = std::clamp(a - t, 0.0, T);
  double v = knee;
  if (knee < T) {
    const double lo = t + knee, hi = t + T;
    v += 0.5 * a * a * a * (1.0 / (lo * lo) - 1.0 / (hi * hi));
  }
  return v;
}

}  // namespace

double absorbing_solution(const LowerBoundScenario& sc, double t, const Vec3& x, const Vec3& v) {
  if (!(t >= 0.0)) throw DomainError("absorbing_solution: t must be nonnegative");
  const double eps = sc.epsilon;
  if (geometry::norm(x) > 1.0 || geometry::norm(v) > eps) return 0.0;
  const Vec3 foot{x[0] - t * v[0], x[1] - t * v[1], x[2] - t * v[2]};
  // The foot lies in eps B, inside the ball; by convexity so does the whole segment.
  if (geometry::norm(foot) > eps) return 0.0;
  return std::pow(eps, -6.0);
}

double lens_volume(double r, double d) {
  if (!(r > 0.0 && d >= 0.0)) throw DomainError("lens_volume: need r > 0, d >= 0");
  const double R = 1.0;
  if (d >= R + r) return 0.0;
  if (d <= R - r) return 4.0 * kPi / 3.0 * r * r * r;
  if (d <= r - R) return 4.0 * kPi / 3.0;
  const double a = R + r - d;
  return kPi * a * a * (d * d + 2.0 * d * r - 3.0 * r * r + 2.0 * d * R + 6.0 * r * R - 3.0 * R * R) / (12.0 * d);
}

double direct_l1_check(const LowerBoundScenario& sc, double t) {
  sc.validate();
  if (!(t >= 0.0)) throw DomainError("direct_l1_check: t must be nonnegative");
  const double eps = sc.epsilon;
  const double level = std::pow(eps, -6.0);
  const auto& rule = quad::gauss_legendre(64);
  auto speed_integral = [&](double u) {
    std::vector<double> cuts;
    if (u > 0.0) cuts = {(1.0 - eps) / u, (1.0 + eps) / u};
    const auto pieces = quad::breakpoints(0.0, eps, cuts);
    return quad::integrate_pieces(
        [&](double r) {
          const double vol = lens_volume(eps, u * r);
          return vol == 0.0 ? 0.0
                            : 4.0 * kPi * r * r * positive(level - kEquilibriumMass * MaxwellianWeight::at(r)) * vol;
        },
        pieces, rule);
  };
  const std::vector<double> cuts{(1.0 - eps) / eps - t, (1.0 + eps) / eps - t};
  const auto pieces = quad::breakpoints(0.0, sc.T, cuts);
  return quad::integrate_pieces([&](double s) { return speed_integral(t + s); }, pieces, rule);
}

double analytic_lower_bound(const LowerBoundScenario& sc, double t) {
  sc.validate();
  const double eps = sc.epsilon;
  const double m = std::min(1.0, (sc.R - eps) / (eps * (t + sc.T)));
  return sc.T * kBallVolume * relaxation_factor(eps) * m * m * m;
}

std::array<double, 5> inequality_chain(const LowerBoundScenario& sc, double t) {
  sc.validate();
  const double eps = sc.epsilon;
  const double level = std::pow(eps, -6.0);
  const double a = (sc.R - eps) / eps;
  std::array<double, 5> c{};
  c[0] = direct_l1_check(sc, t);
  // Survival replaced by (t+s)|v| <= R - eps: the x-section is the full ball eps B.
  const auto& rule = quad::gauss_legendre(64);
  const double box = kBallVolume * eps * eps * eps;
  const auto s_pieces = quad::breakpoints(0.0, sc.T, std::vector<double>{a - t});
  c[1] = quad::integrate_pieces(
      [&](double s) {
        const double top = std::min(eps, (sc.R - eps) / (t + s));
        return rule.integrate(
            [&](double r) {
              return 4.0 * kPi * r * r * box * positive(level - kEquilibriumMass * MaxwellianWeight::at(r));
            },
            0.0, top);
      },
      s_pieces, rule);
  c[2] = kBallVolume * kBallVolume * relaxation_factor(eps) * window_integral(a, t, sc.T);
  const double m = std::min(1.0, a / (t + sc.T));
  c[3] = kBallVolume * kBallVolume * relaxation_factor(eps) * sc.T * m * m * m;
  c[4] = analytic_lower_bound(sc, t);
  return c;
}

double entropy_value(double epsilon) {
  if (!(epsilon > 0.0 && epsilon < 1.0)) throw DomainError("entropy_value: eps must lie in (0, 1)");
  return 2.0 * kDimension * kBallVolume * kBallVolume * std::abs(std::log(epsilon));
}

double lp_norm_value(double epsilon, double p) {
  if (!(epsilon > 0.0)) throw DomainError("lp_norm_value: eps must be positive");
  if (!(p >= 1.0)) throw DomainError("lp_norm_value: p must be at least 1");
  if (std::isinf(p)) return std::pow(epsilon, -2.0 * kDimension);
  const double dual_inv = 1.0 - 1.0 / p;  // 1/p'
  return std::pow(kBallVolume, 2.0 / p) * std::pow(epsilon, -2.0 * kDimension * dual_inv);
}

double energy_value(double epsilon) { return kBallVolume * kBallVolume * 0.6 * epsilon * epsilon; }

namespace {

bool inverse_time(const LowerBoundScenario& sc, const EnvelopeOptions& o) {
  if (o.coupling == EpsilonCoupling::Fixed) return false;
  if (o.coupling == EpsilonCoupling::InverseTime) return true;
  return sc.p < 2.0;
}

}  // namespace

double envelope(EnvelopeKind kind, const LowerBoundScenario& sc, double t, const EnvelopeOptions& options) {
  sc.validate();
  LowerBoundScenario s = sc;
  if (kind == EnvelopeKind::LogEntropy) {
    if (!(t > std::exp(1.0))) throw DomainError("envelope: the entropy envelope needs t > e");
    s.epsilon = 1.0 / t;
    if (!(s.epsilon < s.R)) throw DomainError("envelope: eps = 1/t must stay below R");
    double norm = entropy_value(s.epsilon);
    if (options.with_energy) norm += kBallVolume * kBallVolume + energy_value(s.epsilon);
    return analytic_lower_bound(s, t) / norm;
  }
  if (inverse_time(sc, options)) {
    if (!(t > 1.0 / s.R)) throw DomainError("envelope: eps = 1/t needs t > 1/R");
    s.epsilon = 1.0 / t;
  }
  return analytic_lower_bound(s, t) / lp_norm_value(s.epsilon, s.p);
}

double growth_factor(EnvelopeKind kind, const LowerBoundScenario& sc, double t, const EnvelopeOptions& options) {
  if (kind == EnvelopeKind::LogEntropy) return std::log(t);
  if (!inverse_time(sc, options)) return std::pow(t, kDimension);
  const double dual = sc.dual_exponent();
  return std::pow(t, kDimension * std::min(1.0, 2.0 / dual));
}

io::Table envelope_table(EnvelopeKind kind, const LowerBoundScenario& sc, std::span<const double> times,
                         const EnvelopeOptions& options) {
  io::Table table;
  table.header = {"t", "envelope_value", "growth_normalized_value"};
  std::vector<double> ts, ev, gv;
  for (double t : times) {
    const double e = envelope(kind, sc, t, options);
    ts.push_back(t);
    ev.push_back(e);
    gv.push_back(e * growth_factor(kind, sc, t, options));
  }
  table.columns = {ts, ev, gv};
  table.add_footer("kind", std::string(to_string(kind)));
  table.add_footer("epsilon", sc.epsilon);
  table.add_footer("T", sc.T);
  table.add_footer("R", sc.R);
  table.add_footer("p", sc.p);
  return table;
}

}  // namespace bounds
}  // namespace wallflux
