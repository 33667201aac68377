#pragma once

// Particle simulation of free flight in the unit ball with diffuse wall reemission.

#include <cstdint>
#include <limits>
#include <vector>

#include "wallflux/geometry.hpp"
#include "wallflux/io.hpp"
#include "wallflux/kernels.hpp"
#include "wallflux/renewal.hpp"
#include "wallflux/sources.hpp"

namespace wallflux {

/// SplitMix64, a 64-bit generator usable as a standard URBG.
class SplitMix64 {
 public:
  using result_type = std::uint64_t;
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}
  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }
  result_type operator()();
  /// Uniform double in [0, 1) from the top 53 bits.
  double uniform();

 private:
  std::uint64_t state_;
};

/// Independent stream of particle `index` under `seed`.
std::uint64_t stream_seed(std::uint64_t seed, std::uint64_t index);

struct ParticleEnsemble {
  std::vector<Vec3> positions;
  std::vector<Vec3> velocities;
  std::vector<double> weights;
  std::uint64_t rng_seed = 0;
  bool radiative = false;

  std::size_t size() const noexcept { return weights.size(); }
  double total_weight() const;
};

struct EvolveOptions {
  double horizon = 40.0;
  double bin_width = 0.5;
  int batches = 50;
  int threads = 0;  ///< 0: hardware concurrency
  double interval_bin = 0.05;
  double interval_max = 6.0;
};

struct FluxTally {
  double bin_width = 0.0;
  double area_normalizer = 4.0 * kPi;
  double intensity_factor = 1.0;  ///< 1/pi for grey radiation: flux to intensity
  std::vector<double> counts;     ///< weighted wall hits per time bin
  std::vector<double> flux;       ///< counts / (area * bin_width) * intensity_factor
  std::vector<double> standard_error;  ///< batch means, per bin
  double total_weight = 0.0;
  double stalled_mass = 0.0;    ///< zero-speed particles, never at the wall
  double never_hit_mass = 0.0;  ///< reached no wall before the horizon
  std::size_t particles = 0;
  int batches = 0;

  double interval_bin = 0.0;
  std::vector<double> interval_density;  ///< histogram of reemission-to-hit times, normalized to a density
  std::vector<double> interval_standard_error;
  std::size_t intervals = 0;
  double interval_overflow = 0.0;  ///< fraction beyond the last bin
  double flux_floor = 0.0;         ///< flux of a single particle hit in one bin
  double interval_floor = 0.0;     ///< density of a single interval in one bin

  std::vector<double> bin_centers() const;
};

namespace montecarlo {

ParticleEnsemble sample_initial(const RadialInitialData& f_in, std::size_t n, std::uint64_t seed);

/// Velocity leaving the wall along the inward unit normal: cosine-law direction, speed with density
/// r^3 e^{-r^2/2}/2 (gas) or unit speed (radiative).
Vec3 diffuse_resample(SplitMix64& rng, const Vec3& inward_normal, bool radiative);

FluxTally evolve(const ParticleEnsemble& ensemble, const EvolveOptions& options);

/// Columns bin_center, flux_estimate, stderr with the normalization convention in the footer.
io::Table to_table(const FluxTally& tally);
io::Table interval_table(const FluxTally& tally);

struct BinComparison {
  std::vector<double> estimate;
  std::vector<double> reference;  ///< bin average of the deterministic curve
  std::vector<double> sigma;      ///< standard error, floored at one particle's contribution
  std::vector<double> z;
  std::size_t within = 0;         ///< bins with |z| <= threshold
  double fraction_within = 0.0;
  double max_abs_z = 0.0;
  double threshold = 3.0;
};

/// Flux bins against bin averages of the renewal solution on [0, min(horizon, sol.horizon())].
BinComparison compare_flux(const FluxTally& tally, const RenewalSolution& sol, double threshold = 3.0);

/// Interval histogram against bin averages of the kernel density.
BinComparison compare_intervals(const FluxTally& tally, const Kernel& k, double threshold = 3.0);

}  // namespace montecarlo
}  // namespace wallflux
