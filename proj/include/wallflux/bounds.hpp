#pragma once

// Lower bounds on any uniform decay rate, from concentrated data eps^{-6} 1_{|x|<=eps} 1_{|v|<=eps}
// evolved with an absorbing wall.

#include <array>
#include <span>
#include <string_view>
#include <vector>

#include "wallflux/geometry.hpp"
#include "wallflux/io.hpp"

namespace wallflux {

struct LowerBoundScenario {
  double epsilon = 0.2;
  double T = 1.0;  ///< averaging window
  double R = 0.5;  ///< the unit ball contains B(0, 2R)
  double p = 2.0;  ///< norm exponent, 1 < p <= inf

  void validate() const;
  double dual_exponent() const;  ///< p' = p / (p - 1); 1 when p is infinite
};

enum class EnvelopeKind { LogEntropy, AlgebraicLp };
/// How eps is tied to t in the L^p envelope. Auto: eps = 1/t for p < 2, fixed for p >= 2.
enum class EpsilonCoupling { Auto, Fixed, InverseTime };

std::string_view to_string(EnvelopeKind k);

namespace bounds {

inline constexpr int kDimension = 3;

/// Phi(t, x, v) = F_in(x - t v, v) while the backward segment stays in the unit ball.
double absorbing_solution(const LowerBoundScenario& sc, double t, const Vec3& x, const Vec3& v);

/// Volume of the intersection of B(0, 1) and B(c, r) with |c| = d.
double lens_volume(double r, double d);

/// int_0^T int int (Phi(t + s) - |B|^2/|Omega| M)^+ dv dx ds by quadrature over (s, |v|).
double direct_l1_check(const LowerBoundScenario& sc, double t);

/// Successive relaxations of direct_l1_check, each a lower bound of the previous one:
/// [0] direct, [1] survival replaced by (t+s)|v| <= R - eps, [2] M replaced by its sup,
/// [3] the s-integrand replaced by its value at s = T, [4] the closed-form analytic bound.
std::array<double, 5> inequality_chain(const LowerBoundScenario& sc, double t);

/// T|B| (1 - eps^6 |B|^2 / (|Omega| (2 pi)^{3/2}))^+ min(1, (R - eps)/(eps (t + T)))^3.
double analytic_lower_bound(const LowerBoundScenario& sc, double t);

/// int int F_in |ln F_in| = 2 N |B|^2 |ln eps|.
double entropy_value(double epsilon);
/// ||F_in||_p = |B|^{2/p} eps^{-2N/p'}.
double lp_norm_value(double epsilon, double p);
/// int int |v|^2 F_in = |B|^2 (3/5) eps^2.
double energy_value(double epsilon);

struct EnvelopeOptions {
  EpsilonCoupling coupling = EpsilonCoupling::Auto;
  /// Entropy case: normalize by int F_in (1 + |v|^2 + |ln F_in|) instead.
  bool with_energy = false;
};

double envelope(EnvelopeKind kind, const LowerBoundScenario& sc, double t, const EnvelopeOptions& options = {});

/// ln t for LogEntropy; t^{N min(1, 2/p')} (Auto / InverseTime) or t^N (Fixed) for AlgebraicLp.
double growth_factor(EnvelopeKind kind, const LowerBoundScenario& sc, double t, const EnvelopeOptions& options = {});

/// Columns t, envelope_value, growth_normalized_value.
io::Table envelope_table(EnvelopeKind kind, const LowerBoundScenario& sc, std::span<const double> times,
                         const EnvelopeOptions& options = {});

}  // namespace bounds
}  // namespace wallflux
