#include "wallflux/kernels.hpp"

#include <array>
#include <cmath>
#include <string>
#include <vector>

#include "wallflux/errors.hpp"
#include "wallflux/quadrature.hpp"

namespace wallflux {

using cplx = std::complex<double>;

std::string_view to_string(KernelVariant v) {
  return v == KernelVariant::GasMaxwellian ? "gas" : "monokinetic";
}

double Kernel::operator()(double tau) const { return kernels::eval(*this, tau); }

namespace kernels {
namespace {

// Regularized lower incomplete gamma P(3, u) = 1 - e^{-u}(1 + u + u^2/2).
double p3(double u) {
  if (u < 1.0) {
    double term = u * u * u / 6.0;
    double sum = 0.0;
    for (int k = 3; k < 60 && term > 1e-18 * sum; ++k) {
      sum += term;
      term *= u / (k + 1);
    }
    return std::exp(-u) * sum;
  }
  return 1.0 - std::exp(-u) * (1.0 + u + 0.5 * u * u);
}

double gas_eval(double tau) {
  if (tau == 0.0) return 0.0;
  // (tau/4)[8 - (c^4 + 4c^2 + 8) e^{-c^2/2}], c = 2/tau, is 2 tau P(3, c^2/2).
  return 2.0 * tau * p3(2.0 / (tau * tau));
}

// W - 2 + e^{-W}(2 + W): the survival 1 - C(t) equals (t^2/2) g(2/t^2).
double survival_bracket(double w) {
  if (w < 1.0) {
    double sum = 0.0;
    double pw = w * w * w / 6.0;  // W^n / n!
    for (int n = 3; n < 60; ++n) {
      const double term = (n % 2 == 0 ? -1.0 : 1.0) * (n - 2) * pw;
      sum += term;
      if (std::abs(term) < 1e-18 * std::abs(sum)) break;
      pw *= w / (n + 1);
    }
    return sum;
  }
  return w - 2.0 + std::exp(-w) * (2.0 + w);
}

// Asymptotic series K(tau) = sum_n a_n tau^{-2n-5}, a_n = (-1)^n 2^{n+3} / (n! (n+3)).
double gas_tail_integral(int m, double split) {
  double sum = 0.0;
  double coeff = 8.0;  // (-1)^n 2^{n+3} / n!
  for (int n = 0; n < 30; ++n) {
    const double a = coeff / (n + 3);
    const int power = m - 2 * n - 4;  // integral of tau^{m-2n-5} from split to inf
    const double term = a * std::pow(split, power) / (2 * n + 4 - m);
    sum += term;
    if (std::abs(term) < 1e-18 * std::abs(sum)) break;
    coeff *= -2.0 / (n + 1);
  }
  return sum;
}

const std::vector<double>& gas_panels() {
  static const std::vector<double> edges{0.0, 0.25, 0.5, 0.75, 1.0, 1.5, 2.0, 3.0, 4.0,
                                         6.0, 8.0, 12.0, 16.0, 24.0, 32.0, 40.0, 50.0};
  return edges;
}

double gas_moment(int m) {
  if (m < 0) throw DomainError("moment: order must be nonnegative");
  if (m >= 4) throw DivergentMoment(m);
  const auto& rule = quad::gauss_legendre(64);
  const double body = quad::integrate_pieces(
      [m](double t) { return std::pow(t, m) * gas_eval(t); }, gas_panels(), rule);
  return body + gas_tail_integral(m, kTailSplit);
}

cplx mono_laplace(cplx z) {
  if (std::abs(z) < kSeriesRadius) {
    // sum_n (-z)^n 2^{n+1} / (n! (n+2))
    cplx sum = 0.0;
    cplx pw = 2.0;  // (-z)^n 2^{n+1} / n!
    for (int n = 0; n < 40; ++n) {
      const cplx term = pw / double(n + 2);
      sum += term;
      if (std::abs(term) < 1e-18) break;
      pw *= -2.0 * z / double(n + 1);
    }
    return sum;
  }
  const cplx e = std::exp(-2.0 * z);
  return (1.0 - e * (1.0 + 2.0 * z)) / (2.0 * z * z);
}

cplx mono_laplace_derivative(cplx z) {
  if (std::abs(z) < kSeriesRadius) {
    // sum_{n>=1} n (-1)^n z^{n-1} 2^{n+1} / (n! (n+2))
    cplx sum = 0.0;
    cplx pw = -4.0;  // (-1)^n z^{n-1} 2^{n+1} / (n-1)!
    for (int n = 1; n < 40; ++n) {
      const cplx term = pw / double(n + 2);
      sum += term;
      if (std::abs(term) < 1e-18) break;
      pw *= -2.0 * z / double(n);
    }
    return sum;
  }
  const cplx e = std::exp(-2.0 * z);
  const cplx num = 1.0 - e * (1.0 + 2.0 * z);
  return 2.0 * e / z - num / (z * z * z);
}

cplx gas_laplace(cplx z) {
  if (z.real() < 0.0) throw OutOfDomain(std::string(kHeavyTailTag));
  if (z == cplx(0.0, 0.0)) return 1.0;
  const auto& rule = quad::gauss_legendre(64);
  const double y = std::abs(z.imag());
  const double osc_width = y > 0.0 ? 8.0 * M_PI / y : 1e300;
  auto f = [z](double t) { return std::exp(-z * t) * gas_eval(t); };
  auto panel_sum = [&](double a, double b) {
    cplx s = 0.0;
    for (double lo = a; lo < b;) {
      const double hi = std::min(b, lo + osc_width);
      const double half = 0.5 * (hi - lo), mid = 0.5 * (hi + lo);
      cplx acc = 0.0;
      for (int i = 0; i < rule.size(); ++i) acc += rule.weights()[i] * f(mid + half * rule.nodes()[i]);
      s += half * acc;
      lo = hi;
    }
    return s;
  };
  cplx total = 0.0;
  const auto& edges = gas_panels();
  for (std::size_t i = 0; i + 1 < edges.size(); ++i) total += panel_sum(edges[i], edges[i + 1]);
  // Beyond 2000 the neglected mass is below 2/(3 * 2000^4) ~ 4e-14.
  for (double a = kTailSplit; a < 2000.0; a *= 1.25) total += panel_sum(a, std::min(2000.0, a * 1.25));
  return total;
}

}  // namespace

double eval(const Kernel& k, double tau) {
  if (!(tau >= 0.0)) throw DomainError("kernel eval: tau must be nonnegative");
  if (k.variant() == KernelVariant::Monokinetic) return tau < 2.0 ? 0.5 * tau : 0.0;
  if (std::isinf(tau)) return 0.0;
  return gas_eval(tau);
}

double cumulative(const Kernel& k, double tau) {
  if (!(tau >= 0.0)) throw DomainError("kernel cumulative: tau must be nonnegative");
  if (k.variant() == KernelVariant::Monokinetic) {
    const double s = std::min(tau, 2.0);
    return 0.25 * s * s;
  }
  if (tau == 0.0) return 0.0;
  if (std::isinf(tau)) return 1.0;
  return 1.0 - 0.5 * tau * tau * survival_bracket(2.0 / (tau * tau));
}

double moment(const Kernel& k, int m) {
  if (m < 0) throw DomainError("moment: order must be nonnegative");
  if (k.variant() == KernelVariant::Monokinetic) return std::ldexp(1.0, m + 1) / (m + 2);
  return gas_moment(m);
}

std::complex<double> laplace(const Kernel& k, std::complex<double> z) {
  if (k.variant() == KernelVariant::Monokinetic) return mono_laplace(z);
  return gas_laplace(z);
}

std::complex<double> laplace_derivative(const Kernel& k, std::complex<double> z) {
  if (k.variant() != KernelVariant::Monokinetic)
    throw UnsupportedVariant("laplace_derivative: only the monokinetic kernel has a closed-form derivative");
  return mono_laplace_derivative(z);
}

double tail_ratio(const Kernel& k, double tau) {
  if (k.variant() != KernelVariant::GasMaxwellian)
    throw UnsupportedVariant("tail_ratio: the monokinetic kernel has compact support");
  if (!(tau > 0.0)) throw DomainError("tail_ratio: tau must be positive");
  const double t2 = tau * tau;
  return gas_eval(tau) * 3.0 * t2 * t2 * tau / 8.0;
}

}  // namespace kernels
}  // namespace wallflux
