#include "wallflux/fit.hpp"

#include <cmath>

#include "wallflux/errors.hpp"

namespace wallflux {

std::string_view to_string(FitModel m) { return m == FitModel::PowerLaw ? "power_law" : "exponential"; }
std::string_view to_string(FitMode m) { return m == FitMode::Raw ? "raw" : "envelope"; }

namespace fit {

Line least_squares(std::span<const double> x, std::span<const double> y) {
  const std::size_t n = x.size();
  if (n < 2 || y.size() != n) throw FitDomainError("least_squares: need at least two points");
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= static_cast<double>(n);
  my /= static_cast<double>(n);
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  if (!(sxx > 0.0)) throw FitDomainError("least_squares: abscissae are all equal");
  Line l;
  l.slope = sxy / sxx;
  l.intercept = my - l.slope * mx;
  double ss = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double r = y[i] - (l.intercept + l.slope * x[i]);
    ss += r * r;
  }
  l.rms_residual = std::sqrt(ss / static_cast<double>(n));
  return l;
}

std::vector<std::size_t> window_indices(std::span<const double> times, double t0, double t1) {
  std::vector<std::size_t> idx;
  for (std::size_t i = 0; i < times.size(); ++i)
    if (times[i] >= t0 && times[i] <= t1) idx.push_back(i);
  return idx;
}

std::vector<std::size_t> local_maxima(std::span<const double> v) {
  std::vector<std::size_t> idx;
  for (std::size_t i = 1; i + 1 < v.size(); ++i)
    if (v[i] > v[i - 1] && v[i] >= v[i + 1]) idx.push_back(i);
  return idx;
}

}  // namespace fit
}  // namespace wallflux
