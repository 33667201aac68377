#pragma once

// Least-squares decay fits shared by the field and spectral modules.

#include <cstddef>
#include <span>
#include <string_view>
#include <vector>

namespace wallflux {

enum class FitModel { PowerLaw, Exponential };
enum class FitMode { Raw, Envelope };

std::string_view to_string(FitModel m);
std::string_view to_string(FitMode m);

struct DecayFit {
  FitModel model = FitModel::PowerLaw;
  FitMode mode = FitMode::Raw;
  double rate = 0.0;       ///< exponent magnitude (power law) or rate (exponential)
  double intercept = 0.0;  ///< log of the prefactor
  double t0 = 0.0, t1 = 0.0;
  double rms_residual = 0.0;
  std::size_t points = 0;
};

namespace fit {

struct Line {
  double slope = 0.0;
  double intercept = 0.0;
  double rms_residual = 0.0;
};

/// Ordinary least squares y = intercept + slope x. Needs at least two distinct x.
Line least_squares(std::span<const double> x, std::span<const double> y);

/// Indices i with t0 <= times[i] <= t1.
std::vector<std::size_t> window_indices(std::span<const double> times, double t0, double t1);

/// Indices of strict local maxima of values (interior points only).
std::vector<std::size_t> local_maxima(std::span<const double> values);

}  // namespace fit
}  // namespace wallflux
