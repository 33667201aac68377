#include "wallflux/renewal.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "wallflux/errors.hpp"
#include "wallflux/quadrature.hpp"

namespace wallflux {

std::vector<double> RenewalSolution::times() const {
  std::vector<double> t(values.size());
  for (std::size_t i = 0; i < t.size(); ++i) t[i] = time(i);
  return t;
}

double RenewalSolution::at(double t) const {
  if (values.empty()) throw DomainError("RenewalSolution::at: empty solution");
  const double h = horizon();
  if (!(t >= 0.0) || t > h * (1.0 + 1e-12)) throw DomainError("RenewalSolution::at: t outside [0, horizon]");
  const double x = std::min(t, h) / dt;
  const auto i = std::min(static_cast<std::size_t>(x), values.size() - 1);
  if (i + 1 >= values.size()) return values.back();
  const double w = x - static_cast<double>(i);
  return (1.0 - w) * values[i] + w * values[i + 1];
}

namespace renewal {
namespace {

struct Weights {
  double self = 0.0;          // coefficient of mu_n at step n
  std::vector<double> conv;   // conv[k], k >= 1: coefficient of mu_{n-k}
  std::vector<double> first;  // first[n]: coefficient of mu_0 at step n
  std::vector<double> late;   // B_n, the part of first[n + 1]-type weight attached to the right cell end
};

// A_l = int_cell K(s) (s - l dt)/dt ds,  B_l = int_cell K(s) ((l+1) dt - s)/dt ds.
Weights product_weights(const KernelFunction& k, std::size_t n, double dt, std::span<const double> kinks) {
  const auto& rule = quad::gauss_legendre(8);
  std::vector<double> a(n + 1), b(n + 1);
  for (std::size_t l = 0; l <= n; ++l) {
    const double lo = dt * static_cast<double>(l), hi = dt * static_cast<double>(l + 1);
    const auto pieces = quad::breakpoints(lo, hi, kinks);
    double sa = 0.0, sb = 0.0;
    for (std::size_t p = 0; p + 1 < pieces.size(); ++p) {
      const double half = 0.5 * (pieces[p + 1] - pieces[p]), mid = 0.5 * (pieces[p + 1] + pieces[p]);
      for (int q = 0; q < rule.size(); ++q) {
        const double s = mid + half * rule.nodes()[q];
        const double kv = k(s);
        if (!std::isfinite(kv)) throw NonFiniteValue("kernel", l);
        const double w = half * rule.weights()[q] * kv;
        sa += w * (s - lo) / dt;
        sb += w * (hi - s) / dt;
      }
    }
    a[l] = sa;
    b[l] = sb;
  }
  Weights w;
  w.self = b[0];
  w.conv.assign(n + 1, 0.0);
  for (std::size_t j = 1; j <= n; ++j) w.conv[j] = a[j - 1] + b[j];
  w.first.assign(n + 1, 0.0);
  for (std::size_t j = 1; j <= n; ++j) w.first[j] = a[j - 1];
  w.late = std::move(b);
  return w;
}

Weights trapezoid_weights(const KernelFunction& k, std::size_t n, double dt) {
  std::vector<double> kv(n + 1);
  for (std::size_t j = 0; j <= n; ++j) {
    kv[j] = k(dt * static_cast<double>(j));
    if (!std::isfinite(kv[j])) throw NonFiniteValue("kernel", j);
  }
  Weights w;
  w.self = 0.5 * dt * kv[0];
  w.conv.assign(n + 1, 0.0);
  for (std::size_t j = 1; j <= n; ++j) w.conv[j] = dt * kv[j];
  w.first.assign(n + 1, 0.0);
  for (std::size_t j = 1; j <= n; ++j) w.first[j] = 0.5 * dt * kv[j];
  return w;
}

// sum_{k=1}^{n-1} c[k] mu[n-k] with four interleaved accumulators, always combined in the same order.
double convolve(const std::vector<double>& c, const std::vector<double>& mu, std::size_t n) {
  double s0 = 0.0, s1 = 0.0, s2 = 0.0, s3 = 0.0;
  std::size_t k = 1;
  for (; k + 3 < n; k += 4) {
    s0 += c[k] * mu[n - k];
    s1 += c[k + 1] * mu[n - k - 1];
    s2 += c[k + 2] * mu[n - k - 2];
    s3 += c[k + 3] * mu[n - k - 3];
  }
  for (; k < n; ++k) s0 += c[k] * mu[n - k];
  return (s0 + s1) + (s2 + s3);
}

RenewalSolution march(const KernelFunction& k, const SourceFunction& source, double horizon, double dt,
                      const SolveOptions& options, std::span<const double> kinks) {
  if (!(dt > 0.0)) throw DomainError("solve: dt must be positive");
  if (!(horizon >= dt)) throw DomainError("solve: horizon must be at least dt");
  const auto n = static_cast<std::size_t>(std::llround(horizon / dt));
  RenewalSolution sol;
  sol.dt = dt;
  sol.scheme = options.scheme;
  sol.source.resize(n + 1);
  for (std::size_t i = 0; i <= n; ++i) {
    sol.source[i] = source(dt * static_cast<double>(i));
    if (!std::isfinite(sol.source[i])) throw NonFiniteValue("source", i);
  }
  const Weights w = options.scheme == MarchScheme::ProductIntegration ? product_weights(k, n, dt, kinks)
                                                                      : trapezoid_weights(k, n, dt);
  const double denom = 1.0 - w.self;
  if (!(denom > 0.0)) throw DegenerateKernel("solve: kernel mass in the first cell is not below 1");
  auto& mu = sol.values;
  mu.assign(n + 1, 0.0);
  mu[0] = sol.source[0];
  double resid = 0.0;
  for (std::size_t i = 1; i <= n; ++i) {
    const double rhs = sol.source[i] + convolve(w.conv, mu, i) + w.first[i] * mu[0];
    mu[i] = rhs / denom;
    if (!std::isfinite(mu[i])) throw NonFiniteValue("solution", i);
    resid = std::max(resid, std::abs(mu[i] - rhs - w.self * mu[i]));
  }
  sol.residual_max = resid;
  sol.mu_infinity = std::numeric_limits<double>::quiet_NaN();
  sol.mu_infinity_discrete = std::numeric_limits<double>::quiet_NaN();
  // Discrete limit: dt * sum_n (S_n - B_n mu_0) / m1, the B_n carrying the left-over weight of mu_0.
  if (options.scheme == MarchScheme::ProductIntegration) {
    double sum = 0.0;
    for (std::size_t i = 0; i <= n; ++i) sum += sol.source[i] - w.late[i] * mu[0];
    sol.mu_infinity_discrete = sum;  // scaled by the caller once the kernel mean is known
  }
  return sol;
}

}  // namespace

RenewalSolution solve(const Kernel& k, const SourceFunction& source, double horizon, double dt,
                      const SolveOptions& options) {
  std::vector<double> kinks;
  if (k.variant() == KernelVariant::Monokinetic) kinks.push_back(2.0);
  auto sol = march([k](double s) { return kernels::eval(k, s); }, source, horizon, dt, options, kinks);
  sol.kernel_variant = k.variant();
  const double m1 = kernels::moment(k, 1);
  const auto si = sources::source_integral(source, std::max(options.limit_horizon, horizon), options.source_breakpoints,
                                           options.bound_constant);
  sol.mu_infinity = si.value / m1;
  if (options.scheme == MarchScheme::ProductIntegration) {
    const std::size_t n = sol.size() - 1;
    const double tn = sol.time(n);
    const double sn = sol.source[n];
    double tail = 0.0;
    if (sn != 0.0 || si.value != 0.0) {
      // Euler-Maclaurin for sum_{i > n} S_i dt, the integral beyond the grid taken from the full source integral.
      const double head = sources::source_integral(source, tn, options.source_breakpoints).quadrature;
      const double slope = n >= 2 ? (3.0 * sn - 4.0 * sol.source[n - 1] + sol.source[n - 2]) / (2.0 * dt) : 0.0;
      tail = (si.value - head) - 0.5 * dt * sn - dt * dt / 12.0 * slope;
    }
    // The right-end cell weights B_i beyond the grid carry about half the remaining kernel mass.
    const double late = 0.5 * (1.0 - kernels::cumulative(k, tn + dt)) * sol.values[0];
    sol.mu_infinity_discrete = (dt * sol.mu_infinity_discrete + tail - dt * late) / m1;
  } else {
    sol.mu_infinity_discrete = sol.mu_infinity;
  }
  return sol;
}

RenewalSolution solve(const KernelFunction& k, const SourceFunction& source, double horizon, double dt,
                      const SolveOptions& options) {
  auto sol = march(k, source, horizon, dt, options, options.kernel_breakpoints);
  sol.generic_kernel = true;
  sol.mu_infinity_discrete = std::numeric_limits<double>::quiet_NaN();
  return sol;
}

double limit_value(const Kernel& k, const SourceFunction& source, std::span<const double> source_breaks,
                   double horizon) {
  const double m1 = kernels::moment(k, 1);
  if (!(m1 > 0.0)) throw DegenerateKernel("limit_value: kernel has zero first moment");
  return sources::source_integral(source, horizon, source_breaks).value / m1;
}

bool FellerReport::all_pass() const noexcept {
  return std::all_of(moment_finite.begin(), moment_finite.end(), [](bool b) { return b; }) && source_little_o &&
         tail_little_o;
}

FellerReport feller_conditions(const Kernel& k, const SourceFunction& source, std::span<const double> source_breaks) {
  FellerReport r;
  for (int m = 0; m < 4; ++m) {
    try {
      r.moments[m] = kernels::moment(k, m);
      r.moment_finite[m] = std::isfinite(r.moments[m]);
    } catch (const Error&) {
      r.moment_finite[m] = false;
      r.moments[m] = std::numeric_limits<double>::infinity();
    }
  }
  constexpr int kLevels = 11;  // t = 1 .. 1024
  const auto& rule = quad::gauss_legendre(64);
  std::vector<double> panel(kLevels, 0.0);
  try {
    for (int j = 0; j < kLevels; ++j) {
      const double t = std::ldexp(1.0, j);
      r.grid.push_back(t);
      r.t_times_source.push_back(t * source(t));
      const auto pieces = quad::breakpoints(t, 2.0 * t, source_breaks);
      panel[j] = quad::integrate_pieces(source, pieces, rule);
    }
    const double last = r.grid.back();
    double tail = sources::power_tail(0.8 * 2.0 * last, source(1.6 * last), 2.0 * last, source(2.0 * last));
    r.t_times_tail.assign(kLevels, 0.0);
    for (int j = kLevels - 1; j >= 0; --j) {
      tail += panel[j];
      r.t_times_tail[j] = r.grid[j] * tail;
    }
  } catch (const std::exception&) {
    return r;
  }
  // o(1/t): nonincreasing over the last decade and small against the grid maximum.
  auto decays = [](const std::vector<double>& v) {
    if (v.empty()) return false;
    for (double x : v)
      if (!std::isfinite(x)) return false;
    const double peak = *std::max_element(v.begin(), v.end());
    const std::size_t from = v.size() >= 4 ? v.size() - 4 : 0;  // 128 .. 1024
    for (std::size_t i = from + 1; i < v.size(); ++i)
      if (v[i] > v[i - 1] * (1.0 + 1e-9) + 1e-300) return false;
    return v.back() <= 0.1 * peak || peak == 0.0;
  };
  r.source_little_o = decays(r.t_times_source);
  r.tail_little_o = decays(r.t_times_tail);
  return r;
}

double mass_conservation_check(const RenewalSolution& sol, const RadialInitialData& f_in) {
  if (!is_gas(f_in)) throw UnsupportedVariant("mass_conservation_check: gas data only");
  const double rhs = total_mass(f_in) / kBallVolume;
  const double lhs = std::sqrt(2.0 * kPi) * sol.mu_infinity;
  return std::abs(lhs - rhs) / rhs;
}

io::Table to_table(const RenewalSolution& sol) {
  io::Table t;
  t.header = {"t", "mu", "S"};
  t.columns = {sol.times(), sol.values, sol.source};
  t.add_footer("mu_infinity", sol.mu_infinity);
  t.add_footer("mu_infinity_discrete", sol.mu_infinity_discrete);
  t.add_footer("residual_max", sol.residual_max);
  t.add_footer("dt", sol.dt);
  t.add_footer("kernel", sol.generic_kernel ? std::string("generic") : std::string(to_string(sol.kernel_variant)));
  return t;
}

}  // namespace renewal
}  // namespace wallflux
