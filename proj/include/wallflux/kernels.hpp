#pragma once

// Exit-time renewal kernels of the unit ball.
//
//   GasMaxwellian: law of the chord time 2 cos(theta)/|v| when (theta, |v|) is drawn from
//                  the half-space Maxwellian flux M(v) v.n dv; heavy tail K ~ 8/(3 tau^5).
//   Monokinetic:   same chord time at unit speed, K(s) = s/2 on [0, 2).

#include <complex>
#include <limits>
#include <string_view>

namespace wallflux {

enum class KernelVariant { GasMaxwellian, Monokinetic };

std::string_view to_string(KernelVariant v);

class Kernel {
 public:
  explicit constexpr Kernel(KernelVariant variant) : variant_(variant) {}

  static constexpr Kernel gas() { return Kernel(KernelVariant::GasMaxwellian); }
  static constexpr Kernel monokinetic() { return Kernel(KernelVariant::Monokinetic); }

  constexpr KernelVariant variant() const noexcept { return variant_; }

  /// Right end of the support: 2 for the monokinetic kernel, +inf for the gas kernel.
  constexpr double support_bound() const noexcept {
    return variant_ == KernelVariant::Monokinetic ? 2.0 : std::numeric_limits<double>::infinity();
  }

  double operator()(double tau) const;

  friend constexpr bool operator==(Kernel, Kernel) = default;

 private:
  KernelVariant variant_;
};

namespace kernels {

/// |z| below which the monokinetic transform is summed as a power series.
inline constexpr double kSeriesRadius = 0.25;
/// Split point between quadrature and the analytic tail of the gas kernel.
inline constexpr double kTailSplit = 50.0;

double eval(const Kernel& k, double tau);

/// Cumulative distribution: integral of K over [0, tau], in closed form.
double cumulative(const Kernel& k, double tau);

/// Integral of tau^m K(tau) over [0, inf). Gas kernel: only m <= 3 is finite.
double moment(const Kernel& k, int m);

/// Laplace transform. Monokinetic: entire. Gas: Re(z) >= 0 only.
std::complex<double> laplace(const Kernel& k, std::complex<double> z);

/// d/dz of the monokinetic Laplace transform.
std::complex<double> laplace_derivative(const Kernel& k, std::complex<double> z);

/// K(tau) * 3 tau^5 / 8 for the gas kernel; tends to 1 as tau -> inf.
double tail_ratio(const Kernel& k, double tau);

/// Error tag carried by OutOfDomain for the gas transform left of the imaginary axis.
inline constexpr std::string_view kHeavyTailTag = "heavy-tail kernel: no left half-plane continuation";

}  // namespace kernels
}  // namespace wallflux
