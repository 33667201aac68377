#pragma once

// Composite Gauss-Legendre rules shared by every module.

#include <span>
#include <vector>

namespace wallflux::quad {

class GaussLegendre {
 public:
  explicit GaussLegendre(int points);

  int size() const noexcept { return static_cast<int>(nodes_.size()); }
  std::span<const double> nodes() const noexcept { return nodes_; }
  std::span<const double> weights() const noexcept { return weights_; }

  template <class F>
  double integrate(F&& f, double a, double b) const {
    if (b <= a) return 0.0;
    const double half = 0.5 * (b - a);
    const double mid = 0.5 * (a + b);
    double sum = 0.0;
    for (std::size_t i = 0; i < nodes_.size(); ++i) sum += weights_[i] * f(mid + half * nodes_[i]);
    return half * sum;
  }

 private:
  std::vector<double> nodes_;    // on [-1, 1], ascending
  std::vector<double> weights_;
};

/// Cached rules; `points` must be one of 8, 16, 32, 64.
const GaussLegendre& gauss_legendre(int points);

/// Sorted, de-duplicated breakpoints of [a, b] including both ends; extras outside (a, b) are dropped.
std::vector<double> breakpoints(double a, double b, std::span<const double> extras = {});

/// Sum of `rule` applied on each piece [breaks[i], breaks[i+1]].
template <class F>
double integrate_pieces(F&& f, std::span<const double> breaks, const GaussLegendre& rule) {
  double sum = 0.0;
  for (std::size_t i = 0; i + 1 < breaks.size(); ++i) sum += rule.integrate(f, breaks[i], breaks[i + 1]);
  return sum;
}

/// Panel edges on [a, b]: uniform panels of width at most `max_width`, starting at a.
std::vector<double> uniform_panels(double a, double b, double max_width);

}  // namespace wallflux::quad
