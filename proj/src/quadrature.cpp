#include "wallflux/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <boost/math/special_functions/legendre.hpp>

namespace wallflux::quad {

GaussLegendre::GaussLegendre(int points) {
  if (points < 2) throw std::invalid_argument("Gauss-Legendre rule needs at least two points");
  // Boost returns the nonnegative zeros in ascending order.
  const auto positive = boost::math::legendre_p_zeros<double>(points);
  std::vector<double> x;
  for (auto it = positive.rbegin(); it != positive.rend(); ++it)
    if (*it > 0.0) x.push_back(-*it);
  for (double z : positive) x.push_back(z);
  nodes_ = x;
  weights_.reserve(x.size());
  for (double z : x) {
    const double dp = boost::math::legendre_p_prime(points, z);
    weights_.push_back(2.0 / ((1.0 - z * z) * dp * dp));
  }
}

const GaussLegendre& gauss_legendre(int points) {
  static const GaussLegendre g8(8), g16(16), g32(32), g64(64);
  switch (points) {
    case 8: return g8;
    case 16: return g16;
    case 32: return g32;
    case 64: return g64;
    default: throw std::invalid_argument("unsupported Gauss-Legendre order");
  }
}

std::vector<double> breakpoints(double a, double b, std::span<const double> extras) {
  std::vector<double> out{a};
  for (double e : extras)
    if (e > a && e < b && std::isfinite(e)) out.push_back(e);
  out.push_back(b);
  std::sort(out.begin(), out.end());
  const double tiny = 1e-14 * std::max(1.0, std::abs(b - a));
  out.erase(std::unique(out.begin(), out.end(), [tiny](double l, double r) { return std::abs(r - l) <= tiny; }),
            out.end());
  if (out.back() != b) out.back() = b;
  return out;
}

std::vector<double> uniform_panels(double a, double b, double max_width) {
  if (b <= a) return {a, a};
  const auto n = static_cast<std::size_t>(std::ceil((b - a) / max_width));
  std::vector<double> edges(n + 1);
  for (std::size_t i = 0; i <= n; ++i) edges[i] = a + (b - a) * static_cast<double>(i) / static_cast<double>(n);
  edges.back() = b;
  return edges;
}

}  // namespace wallflux::quad
