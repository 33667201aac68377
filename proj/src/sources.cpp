#include "wallflux/sources.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <memory>
#include <sstream>

// Boost 1.74's pchip calls isnan unqualified.
namespace boost::math::interpolators {
using std::isnan;
}
#include <boost/math/interpolators/pchip.hpp>

#include "wallflux/errors.hpp"
#include "wallflux/quadrature.hpp"

namespace wallflux {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

constexpr double kInvTwoPi32 = 0.063493635934240969;  // (2 pi)^{-3/2}

}  // namespace

double MaxwellianWeight::at(double speed) { return kInvTwoPi32 * std::exp(-0.5 * speed * speed); }

double MaxwellianWeight::half_space_flux() { return 1.0 / std::sqrt(2.0 * kPi); }

bool is_gas(const RadialInitialData& data) { return !std::holds_alternative<RadialShellGrey>(data); }

double density(const RadialInitialData& data, double rho, double speed) {
  return std::visit(
      overloaded{
          [&](const EquilibriumMultiple& e) { return e.c * MaxwellianWeight::at(speed); },
          [&](const BoundedRadial& b) { return b.profile(rho, speed); },
          [&](const ConcentratedBox& c) {
            const double e = c.epsilon;
            return (rho <= e && speed <= e) ? std::pow(e, -6.0) : 0.0;
          },
          [&](const RadialShellGrey&) -> double {
            throw UnsupportedVariant("density: grey radiative data has no velocity dependence");
          },
      },
      data);
}

double profile_sup(const RadialInitialData& data) {
  return std::visit(overloaded{
                        [](const EquilibriumMultiple& e) { return e.c * kInvTwoPi32; },
                        [](const BoundedRadial& b) { return b.bound_constant * kInvTwoPi32; },
                        [](const ConcentratedBox& c) { return std::pow(c.epsilon, -6.0); },
                        [](const RadialShellGrey& g) { return g.sup; },
                    },
                    data);
}

double total_mass(const RadialInitialData& data) {
  const auto& rule = quad::gauss_legendre(64);
  return std::visit(
      overloaded{
          [](const EquilibriumMultiple& e) { return e.c * kBallVolume; },
          [&](const BoundedRadial& b) {
            const auto rb = quad::breakpoints(0.0, 1.0, b.rho_breakpoints);
            const auto sb = quad::breakpoints(0.0, sources::kSpeedCutoff, b.speed_breakpoints);
            auto inner = [&](double rho) {
              return quad::integrate_pieces(
                  [&](double r) { return 4.0 * kPi * r * r * b.profile(rho, r); }, sb, rule);
            };
            return quad::integrate_pieces([&](double rho) { return 4.0 * kPi * rho * rho * inner(rho); }, rb,
                                          rule);
          },
          [](const ConcentratedBox&) { return kBallVolume * kBallVolume; },
          [&](const RadialShellGrey& g) {
            std::vector<double> extra;
            for (double q : g.breakpoints)
              if (q > 0.0) extra.push_back(std::sqrt(q));
            const auto rb = quad::breakpoints(0.0, 1.0, extra);
            return 4.0 * kPi *
                   quad::integrate_pieces([&](double rho) { return 4.0 * kPi * rho * rho * g.profile(rho * rho); },
                                          rb, rule);
          },
      },
      data);
}

namespace presets {

BoundedRadial checked_bounded(std::function<double(double, double)> profile, double bound_constant,
                              std::vector<double> rho_breakpoints, std::vector<double> speed_breakpoints,
                              std::string label) {
  if (!(bound_constant > 0.0)) throw ValidationError("initial_data.bound_constant", "must be positive");
  constexpr int kRho = 41, kSpeed = 61;
  for (int i = 0; i < kRho; ++i) {
    const double rho = static_cast<double>(i) / (kRho - 1);
    for (int j = 0; j < kSpeed; ++j) {
      const double r = sources::kSpeedCutoff * j / (kSpeed - 1);
      const double f = profile(rho, r);
      if (!(f >= 0.0)) throw ValidationError("initial_data.profile", "must be nonnegative");
      if (f > bound_constant * MaxwellianWeight::at(r) * (1.0 + 1e-12))
        throw ValidationError("initial_data.profile", "exceeds bound_constant * M(v) at rho=" +
                                                          std::to_string(rho) + ", speed=" + std::to_string(r));
    }
  }
  return BoundedRadial{std::move(profile), bound_constant, std::move(rho_breakpoints), std::move(speed_breakpoints),
                       std::move(label)};
}

BoundedRadial bounded_bump(double amplitude, double radius) {
  if (!(amplitude > 0.0)) throw ValidationError("initial_data.amplitude", "must be positive");
  if (!(radius > 0.0 && radius <= 1.0)) throw ValidationError("initial_data.radius", "must lie in (0, 1]");
  auto profile = [amplitude, radius](double rho, double speed) {
    const double s = rho / radius;
    if (s >= 1.0) return 0.0;
    const double w = 1.0 - s * s;
    return amplitude * MaxwellianWeight::at(speed) * (w * w) * (w * w);
  };
  return checked_bounded(profile, amplitude, {radius}, {}, "bounded_bump");
}

RadialShellGrey grey_bump(double inner, double outer, double amplitude) {
  if (!(inner > 0.0 && inner < outer && outer < 1.0))
    throw ValidationError("initial_data", "grey bump needs 0 < inner < outer < 1");
  if (!(amplitude > 0.0)) throw ValidationError("initial_data.amplitude", "must be positive");
  const double half = 0.5 * (outer - inner);
  const double peak = std::pow(half * half, 4);
  auto profile = [=](double q) {
    if (q <= inner || q >= outer) return 0.0;
    const double w = (q - inner) * (outer - q);
    return amplitude * (w * w) * (w * w) / peak;
  };
  return RadialShellGrey{profile, {inner, outer}, amplitude, "grey_bump"};
}

}  // namespace presets

namespace sources {

namespace {

double box_source(double eps, double t) {
  if (t <= 0.0 || eps >= 1.0) return 0.0;
  const double r_lo = (1.0 - eps) / t;
  const double r_hi = std::min(eps, (1.0 + eps) / t);
  if (r_lo >= r_hi) return 0.0;
  const double a = 1.0 - eps * eps;
  const double q = t * t;
  // Antiderivative of r^3 - r (a + q r^2)^2 / (4 q).
  auto F = [&](double r) {
    const double r2 = r * r;
    return 0.25 * r2 * r2 - (0.5 * a * a * r2 + 0.5 * a * q * r2 * r2 + q * q * r2 * r2 * r2 / 6.0) / (4.0 * q);
  };
  return kPi * std::pow(eps, -6.0) * (F(r_hi) - F(r_lo));
}

double quadrature_gas_source(const std::function<double(double, double)>& f, std::span<const double> rho_breaks,
                             std::span<const double> speed_breaks, double t) {
  const auto& rule = quad::gauss_legendre(64);
  const double r_max = t > 0.0 ? std::min(kSpeedCutoff, 2.0 / t) : kSpeedCutoff;
  const auto rb = quad::breakpoints(0.0, r_max, speed_breaks);
  std::vector<double> ybreaks;
  auto inner = [&](double r) {
    const double y0 = 0.5 * t * r;
    if (y0 >= 1.0) return 0.0;
    ybreaks.clear();
    if (t > 0.0 && r > 0.0)
      for (double b : rho_breaks) ybreaks.push_back((1.0 + t * t * r * r - b * b) / (2.0 * t * r));
    const auto yb = quad::breakpoints(y0, 1.0, ybreaks);
    const double tr = t * r;
    return quad::integrate_pieces(
        [&](double y) {
          const double foot = std::sqrt(std::max(0.0, 1.0 + tr * tr - 2.0 * tr * y));
          return f(std::min(foot, 1.0), r) * y;
        },
        yb, rule);
  };
  return 2.0 * kPi * quad::integrate_pieces([&](double r) { return r * r * r * inner(r); }, rb, rule);
}

}  // namespace

double gas_source(const RadialInitialData& f_in, double t) {
  if (!(t >= 0.0)) throw DomainError("gas_source: t must be nonnegative");
  return std::visit(
      overloaded{
          [t](const EquilibriumMultiple& e) {
            const double c = e.c;
            return quadrature_gas_source([c](double, double r) { return c * MaxwellianWeight::at(r); }, {}, {}, t);
          },
          [t](const BoundedRadial& b) {
            return quadrature_gas_source(b.profile, b.rho_breakpoints, b.speed_breakpoints, t);
          },
          [t](const ConcentratedBox& c) { return box_source(c.epsilon, t); },
          [](const RadialShellGrey&) -> double {
            throw UnsupportedVariant("gas_source: grey data requires radiative_source");
          },
      },
      f_in);
}

double radiative_source(const RadialShellGrey& u_in, double t) {
  if (!(t >= 0.0)) throw DomainError("radiative_source: t must be nonnegative");
  if (t >= 2.0) return 0.0;
  if (t == 0.0) return u_in.profile(1.0);
  std::vector<double> extra;
  for (double b : u_in.breakpoints) extra.push_back((1.0 + t * t - b) / t);
  const auto sb = quad::breakpoints(t, 2.0, extra);
  const auto& rule = quad::gauss_legendre(64);
  return 0.5 * quad::integrate_pieces(
                   [&](double s) { return u_in.profile(std::clamp(1.0 + t * t - t * s, 0.0, 1.0)) * s; }, sb, rule);
}

SourceFunction make_source(const RadialInitialData& data) {
  if (const auto* g = std::get_if<RadialShellGrey>(&data)) {
    auto u = *g;
    return [u](double t) { return radiative_source(u, t); };
  }
  return [data](double t) { return gas_source(data, t); };
}

std::vector<double> source_breakpoints(const RadialInitialData& data) {
  if (const auto* c = std::get_if<ConcentratedBox>(&data)) {
    const double e = c->epsilon;
    return {(1.0 - e) / e, (1.0 + e) / e};
  }
  if (std::holds_alternative<RadialShellGrey>(data)) return {2.0};
  return {};
}

double power_tail(double t0, double s0, double t1, double s1) {
  if (s1 == 0.0) return 0.0;
  const double u0 = 1.0 / t0, u1 = 1.0 / t1;
  const double g0 = s0 / std::pow(u0, 4), g1 = s1 / std::pow(u1, 4);
  const double b = (g0 - g1) / (u0 - u1);
  const double a = g1 - b * u1;
  return a / (3.0 * t1 * t1 * t1) + b / (4.0 * t1 * t1 * t1 * t1);
}

SourceIntegral source_integral(const SourceFunction& source, double horizon, std::span<const double> breakpoints,
                               double bound_constant) {
  if (!(horizon > 0.0)) throw DomainError("source_integral: horizon must be positive");
  std::vector<double> edges(breakpoints.begin(), breakpoints.end());
  const double near = std::min(horizon, 20.0);
  for (double e : quad::uniform_panels(0.0, near, 0.5)) edges.push_back(e);
  for (double a = near; a < horizon; a *= 1.25) edges.push_back(a);
  const auto pieces = quad::breakpoints(0.0, horizon, edges);
  SourceIntegral out;
  out.horizon = horizon;
  out.quadrature = quad::integrate_pieces(source, pieces, quad::gauss_legendre(64));
  out.tail = power_tail(0.8 * horizon, source(0.8 * horizon), horizon, source(horizon));
  out.value = out.quadrature + out.tail;
  if (bound_constant > 0.0) out.error_bar = 4.0 * kPi * bound_constant / (3.0 * horizon * horizon * horizon);
  return out;
}

}  // namespace sources

namespace tables {

namespace {

struct Row {
  std::vector<double> cols;
};

std::vector<Row> read_rows(const std::filesystem::path& path, std::size_t ncols) {
  std::ifstream in(path);
  if (!in) throw ValidationError(path.string(), "cannot open table");
  std::string line;
  if (!std::getline(in, line)) throw ValidationError(path.string(), "missing header line");
  std::vector<Row> rows;
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    std::replace(line.begin(), line.end(), ',', ' ');
    std::replace(line.begin(), line.end(), '\t', ' ');
    if (line.find_first_not_of(' ') == std::string::npos || line[line.find_first_not_of(' ')] == '#') continue;
    std::istringstream ss(line);
    Row row;
    double v;
    while (ss >> v) row.cols.push_back(v);
    if (row.cols.size() != ncols)
      throw ValidationError(path.string() + ":" + std::to_string(lineno), "expected " + std::to_string(ncols) +
                                                                               " columns");
    rows.push_back(std::move(row));
  }
  return rows;
}

using Pchip = boost::math::interpolators::pchip<std::vector<double>>;

double clamp_eval(const Pchip& p, double x, double lo, double hi) { return p(std::clamp(x, lo, hi)); }

struct GasGrid {
  std::vector<double> rho, speed;
  std::vector<Pchip> rows;  // one interpolant along speed per rho node
  double bound = 0.0;

  double operator()(double rho_q, double speed_q) const {
    if (speed_q > speed.back() || speed_q < speed.front()) return 0.0;
    std::vector<double> col(rho.size());
    for (std::size_t i = 0; i < rho.size(); ++i) col[i] = clamp_eval(rows[i], speed_q, speed.front(), speed.back());
    Pchip across(std::vector<double>(rho), std::move(col));
    const double v = clamp_eval(across, rho_q, rho.front(), rho.back());
    return std::clamp(v, 0.0, bound * MaxwellianWeight::at(speed_q));
  }
};

}  // namespace

BoundedRadial load_gas_table(const std::filesystem::path& path) {
  const auto rows = read_rows(path, 3);
  auto grid = std::make_shared<GasGrid>();
  for (const auto& r : rows) {
    if (grid->rho.empty() || r.cols[0] != grid->rho.back()) grid->rho.push_back(r.cols[0]);
    if (grid->rho.size() == 1) grid->speed.push_back(r.cols[1]);
  }
  const std::size_t nr = grid->rho.size(), ns = grid->speed.size();
  if (nr < 4 || ns < 4) throw ValidationError(path.string(), "grid needs at least 4 nodes per axis");
  if (rows.size() != nr * ns) throw ValidationError(path.string(), "grid is not rectangular");
  if (!std::is_sorted(grid->rho.begin(), grid->rho.end()) || !std::is_sorted(grid->speed.begin(), grid->speed.end()))
    throw ValidationError(path.string(), "grid axes must be sorted ascending");
  for (std::size_t i = 0; i < nr; ++i) {
    std::vector<double> x(ns), y(ns);
    for (std::size_t j = 0; j < ns; ++j) {
      const auto& c = rows[i * ns + j].cols;
      if (c[0] != grid->rho[i] || c[1] != grid->speed[j])
        throw ValidationError(path.string(), "grid is not rectangular at row " + std::to_string(i * ns + j + 2));
      if (c[2] < 0.0) throw ValidationError(path.string(), "negative value in table");
      x[j] = c[1];
      y[j] = c[2];
      grid->bound = std::max(grid->bound, c[2] / MaxwellianWeight::at(c[1]));
    }
    grid->rows.emplace_back(std::move(x), std::move(y));
  }
  if (!(grid->bound > 0.0)) throw ValidationError(path.string(), "table has zero mass");
  BoundedRadial out;
  out.bound_constant = grid->bound;
  out.rho_breakpoints = grid->rho;
  out.speed_breakpoints = {grid->speed.back()};
  out.profile = [grid](double rho, double speed) { return (*grid)(rho, speed); };
  out.label = path.filename().string();
  return out;
}

RadialShellGrey load_grey_table(const std::filesystem::path& path) {
  const auto rows = read_rows(path, 2);
  if (rows.size() < 4) throw ValidationError(path.string(), "table needs at least 4 rows");
  std::vector<double> q, u;
  for (const auto& r : rows) {
    if (!q.empty() && !(r.cols[0] > q.back())) throw ValidationError(path.string(), "rho_squared must increase");
    if (r.cols[1] < 0.0) throw ValidationError(path.string(), "negative value in table");
    q.push_back(r.cols[0]);
    u.push_back(r.cols[1]);
  }
  RadialShellGrey out;
  out.sup = *std::max_element(u.begin(), u.end());
  out.breakpoints = q;
  const double lo = q.front(), hi = q.back();
  auto interp = std::make_shared<Pchip>(std::move(q), std::move(u));
  out.profile = [interp, lo, hi](double x) {
    if (x < lo || x > hi) return 0.0;
    return std::max(0.0, (*interp)(x));
  };
  out.label = path.filename().string();
  return out;
}

}  // namespace tables
}  // namespace wallflux
