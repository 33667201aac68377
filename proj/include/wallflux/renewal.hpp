#pragma once

// Renewal equation mu(t) = S(t) + int_0^t K(s) mu(t - s) ds on a uniform grid.

#include <array>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "wallflux/io.hpp"
#include "wallflux/kernels.hpp"
#include "wallflux/sources.hpp"

namespace wallflux {

using KernelFunction = std::function<double(double)>;

enum class MarchScheme {
  /// mu piecewise linear, kernel weights integrated exactly per cell.
  ProductIntegration,
  /// Kernel sampled at the nodes (composite trapezoid).
  PlainTrapezoid,
};

struct SolveOptions {
  MarchScheme scheme = MarchScheme::ProductIntegration;
  /// Nonsmooth points of the source, forwarded to source_integral.
  std::vector<double> source_breakpoints;
  /// Nonsmooth points of a generic kernel; cell integrals split there.
  std::vector<double> kernel_breakpoints;
  /// Horizon of the source integral used for the continuum limit (gas kernel).
  double limit_horizon = 200.0;
  /// sup of the initial profile, used only for the error bar of the source integral.
  double bound_constant = 0.0;
};

struct RenewalSolution {
  double dt = 0.0;
  std::vector<double> values;  ///< mu(i dt)
  std::vector<double> source;  ///< S(i dt)
  double mu_infinity = 0.0;    ///< int S / int tau K
  /// Limit of the discrete scheme itself; differs from mu_infinity by O(dt^2).
  double mu_infinity_discrete = 0.0;
  KernelVariant kernel_variant = KernelVariant::GasMaxwellian;
  bool generic_kernel = false;
  MarchScheme scheme = MarchScheme::ProductIntegration;
  double residual_max = 0.0;

  std::size_t size() const noexcept { return values.size(); }
  double horizon() const noexcept { return dt * static_cast<double>(values.size() - 1); }
  double time(std::size_t i) const noexcept { return dt * static_cast<double>(i); }
  std::vector<double> times() const;
  /// Linear interpolation on the grid; throws DomainError outside [0, horizon].
  double at(double t) const;
};

namespace renewal {

RenewalSolution solve(const Kernel& k, const SourceFunction& source, double horizon, double dt,
                      const SolveOptions& options = {});

/// Same scheme with an arbitrary kernel; mu_infinity is left NaN.
RenewalSolution solve(const KernelFunction& k, const SourceFunction& source, double horizon, double dt,
                      const SolveOptions& options = {});

/// int_0^inf S / int_0^inf tau K.
double limit_value(const Kernel& k, const SourceFunction& source, std::span<const double> source_breaks = {},
                   double horizon = 200.0);

struct FellerReport {
  std::array<bool, 4> moment_finite{};
  std::array<double, 4> moments{};
  std::vector<double> grid;           ///< dyadic times 2^j
  std::vector<double> t_times_source;  ///< t S(t)
  std::vector<double> t_times_tail;    ///< t int_t^inf S
  bool source_little_o = false;
  bool tail_little_o = false;
  bool all_pass() const noexcept;
};

/// Numerical witnesses for the hypotheses of the renewal limit theorem. Never throws.
FellerReport feller_conditions(const Kernel& k, const SourceFunction& source,
                               std::span<const double> source_breaks = {});

/// |sqrt(2 pi) mu_inf - mass / |Omega|| / (mass / |Omega|), gas data only.
double mass_conservation_check(const RenewalSolution& sol, const RadialInitialData& f_in);

/// Columns t, mu, S with mu_infinity and residual_max in the footer.
io::Table to_table(const RenewalSolution& sol);

}  // namespace renewal
}  // namespace wallflux
