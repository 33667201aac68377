#pragma once

// Zeros of F(z) = 1 - L[K](z) for the monokinetic kernel, and the decay rates they control.

#include <complex>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "wallflux/fit.hpp"
#include "wallflux/io.hpp"
#include "wallflux/renewal.hpp"

namespace wallflux {

using cplx = std::complex<double>;

struct Rect {
  double re_min = 0.0, re_max = 0.0, im_min = 0.0, im_max = 0.0;

  double width() const noexcept { return re_max - re_min; }
  double height() const noexcept { return im_max - im_min; }
  cplx center() const noexcept { return {0.5 * (re_min + re_max), 0.5 * (im_min + im_max)}; }
  bool contains(cplx z, double margin = 0.0) const noexcept;
  Rect conjugate() const noexcept { return {re_min, re_max, -im_max, -im_min}; }
};

struct ZeroSet {
  Rect rectangle;
  int count = 0;
  std::vector<cplx> zeros;
  std::vector<double> residuals;  ///< |F(z)| at each zero
};

struct SpectralAbscissa {
  double alpha = 0.0;
  std::optional<cplx> witness;  ///< zero with the smallest -Re among nonzero zeros (upper half-plane)
  double strip_depth = 0.0;
  double height = 0.0;           ///< imaginary extent searched; |L[K]| < 1/2 above it
  bool lower_bound_only = false;  ///< no nonzero zero in the strip; alpha = strip_depth
  std::vector<cplx> zeros;       ///< every zero found in the strip, both half-planes, sorted by Im
  std::vector<double> residuals;
  int tiles = 0;
};

struct ContourOptions {
  double max_phase_step = 0.7853981633974483;  // pi / 4
  double min_modulus = 1e-13;
  int samples_per_unit = 4;  ///< initial uniform samples per unit edge length (at least 8 per edge)
  int max_depth = 60;        ///< bisection depth of an edge segment
  int max_retries = 4;
  double jitter = 1e-7;  ///< relative outward perturbation of the rectangle per retry
};

namespace spectral {

using Function = std::function<cplx(cplx)>;

/// 1 - L[K](z) for the monokinetic kernel.
cplx characteristic(cplx z);

/// Winding number of f around the boundary of rect by phase tracking.
int count_zeros(const Function& f, const Rect& rect, const ContourOptions& options = {});
int count_zeros(const Rect& rect, const ContourOptions& options = {});

struct Refinement {
  cplx zero;
  double residual = 0.0;
  int iterations = 0;
  std::vector<double> history;  ///< |F| after each step
};

/// Newton iteration on F = 1 - L[K]. Throws RefinementError after 50 steps without convergence.
Refinement refine_zero(cplx seed, double tolerance = 1e-12);

/// All zeros in rect: subdivide until each tile holds one zero, Newton from the tile center,
/// certify by a count of exactly 1 in a box of half-width 1e-6.
ZeroSet locate_zeros(const Rect& rect, const ContourOptions& options = {});

/// Imaginary height above which |L[K](z)| < 1/2 for Re z >= -strip_depth.
double height_bound(double strip_depth);

SpectralAbscissa spectral_abscissa(double strip_depth = 3.0, const ContourOptions& options = {});

/// sup{a : no zero in [-a, 0.05] x [0.5, height_bound]} by bisection on counts alone.
double abscissa_by_bisection(double strip_depth = 3.0, double tolerance = 1e-10, const ContourOptions& options = {});

/// Rate fit of log|mu - mu_inf| against t on [t0, t1]; Envelope uses local maxima only.
DecayFit exponential_rate_fit(std::span<const double> times, std::span<const double> values, double limit, double t0,
                              double t1, FitMode mode);
/// On a renewal solution; reference NaN means the discrete limit of the scheme.
DecayFit exponential_rate_fit(const RenewalSolution& sol, double t0, double t1, FitMode mode,
                              double reference = std::numeric_limits<double>::quiet_NaN());

/// Columns re, im, residual with alpha in the footer.
io::Table zero_table(const SpectralAbscissa& s);

}  // namespace spectral
}  // namespace wallflux
