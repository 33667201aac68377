#include "wallflux/montecarlo.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <string>
#include <thread>

#include "wallflux/errors.hpp"

namespace wallflux {

SplitMix64::result_type SplitMix64::operator()() {
  std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

double SplitMix64::uniform() { return static_cast<double>((*this)() >> 11) * 0x1.0p-53; }

std::uint64_t stream_seed(std::uint64_t seed, std::uint64_t index) {
  SplitMix64 a(seed ^ 0x6a09e667f3bcc909ULL);
  const std::uint64_t base = a();
  SplitMix64 b(base + index * 0xd1342543de82ef95ULL);
  return b();
}

double ParticleEnsemble::total_weight() const {
  double s = 0.0;
  for (double w : weights) s += w;
  return s;
}

std::vector<double> FluxTally::bin_centers() const {
  std::vector<double> c(counts.size());
  for (std::size_t i = 0; i < c.size(); ++i) c[i] = (static_cast<double>(i) + 0.5) * bin_width;
  return c;
}

namespace montecarlo {
namespace {

Vec3 isotropic(SplitMix64& rng) {
  const double z = 2.0 * rng.uniform() - 1.0;
  const double phi = 2.0 * kPi * rng.uniform();
  const double s = std::sqrt(std::max(0.0, 1.0 - z * z));
  return {s * std::cos(phi), s * std::sin(phi), z};
}

Vec3 scaled(const Vec3& a, double s) { return {a[0] * s, a[1] * s, a[2] * s}; }

Vec3 uniform_in_ball(SplitMix64& rng, double radius) {
  return scaled(isotropic(rng), radius * std::cbrt(rng.uniform()));
}

Vec3 maxwellian(SplitMix64& rng) {
  std::normal_distribution<double> g(0.0, 1.0);
  return {g(rng), g(rng), g(rng)};
}

template <class Accept>
void rejection(SplitMix64& rng, Vec3& x, Vec3& v, Accept&& accept, bool unit_speed) {
  for (int attempt = 0; attempt < 1000000; ++attempt) {
    x = uniform_in_ball(rng, 1.0);
    v = unit_speed ? isotropic(rng) : maxwellian(rng);
    if (rng.uniform() < accept(geometry::norm(x), geometry::norm(v))) return;
  }
  throw EmptyEnsemble("sample_initial: rejection sampling found no accepted point");
}

}  // namespace

ParticleEnsemble sample_initial(const RadialInitialData& f_in, std::size_t n, std::uint64_t seed) {
  if (n == 0) throw EmptyEnsemble("sample_initial: particle count must be positive");
  const double mass = total_mass(f_in);
  if (!(mass > 0.0)) throw EmptyEnsemble("sample_initial: initial data has zero mass");
  ParticleEnsemble e;
  e.rng_seed = seed;
  e.radiative = !is_gas(f_in);
  e.positions.resize(n);
  e.velocities.resize(n);
  e.weights.assign(n, mass / static_cast<double>(n));
  for (std::size_t i = 0; i < n; ++i) {
    SplitMix64 rng(stream_seed(seed, i));
    Vec3& x = e.positions[i];
    Vec3& v = e.velocities[i];
    std::visit(
        [&](const auto& d) {
          using T = std::decay_t<decltype(d)>;
          if constexpr (std::is_same_v<T, EquilibriumMultiple>) {
            x = uniform_in_ball(rng, 1.0);
            v = maxwellian(rng);
          } else if constexpr (std::is_same_v<T, ConcentratedBox>) {
            x = uniform_in_ball(rng, d.epsilon);
            v = uniform_in_ball(rng, d.epsilon);
          } else if constexpr (std::is_same_v<T, BoundedRadial>) {
            const double c = d.bound_constant;
            rejection(
                rng, x, v,
                [&](double rho, double r) { return d.profile(rho, r) / (c * MaxwellianWeight::at(r)); }, false);
          } else {
            const double sup = d.sup;
            rejection(rng, x, v, [&](double rho, double) { return d.profile(rho * rho) / sup; }, true);
          }
        },
        f_in);
  }
  return e;
}

Vec3 diffuse_resample(SplitMix64& rng, const Vec3& m, bool radiative) {
  const double c = std::sqrt(rng.uniform());  // density 2 cos(theta) sin(theta)
  const double phi = 2.0 * kPi * rng.uniform();
  const double s = std::sqrt(std::max(0.0, 1.0 - c * c));
  double speed = 1.0;
  if (!radiative) {
    // r^2 is chi-square with four degrees of freedom.
    const double u1 = 1.0 - rng.uniform(), u2 = 1.0 - rng.uniform();
    speed = std::sqrt(-2.0 * std::log(u1 * u2));
  }
  const Vec3 helper = std::abs(m[0]) < 0.9 ? Vec3{1.0, 0.0, 0.0} : Vec3{0.0, 1.0, 0.0};
  Vec3 e1{helper[1] * m[2] - helper[2] * m[1], helper[2] * m[0] - helper[0] * m[2], helper[0] * m[1] - helper[1] * m[0]};
  const double l = geometry::norm(e1);
  e1 = scaled(e1, 1.0 / l);
  const Vec3 e2{m[1] * e1[2] - m[2] * e1[1], m[2] * e1[0] - m[0] * e1[2], m[0] * e1[1] - m[1] * e1[0]};
  const double a = s * std::cos(phi), b = s * std::sin(phi);
  return {speed * (c * m[0] + a * e1[0] + b * e2[0]), speed * (c * m[1] + a * e1[1] + b * e2[1]),
          speed * (c * m[2] + a * e1[2] + b * e2[2])};
}

namespace {

struct BatchTally {
  std::vector<double> hits;
  std::vector<double> intervals;
  double overflow = 0.0;
  std::size_t interval_count = 0;
  double stalled = 0.0;
  double never_hit = 0.0;
  double weight = 0.0;
};

void run_particle(const ParticleEnsemble& e, std::size_t i, const EvolveOptions& o, BatchTally& b) {
  SplitMix64 rng(stream_seed(e.rng_seed ^ 0x5851f42d4c957f2dULL, i));
  Vec3 x = e.positions[i];
  Vec3 v = e.velocities[i];
  const double w = e.weights[i];
  b.weight += w;
  if (geometry::norm(v) == 0.0) {
    b.stalled += w;
    b.never_hit += w;
    return;
  }
  double t = geometry::forward_exit_time(x, v);
  if (t > o.horizon) {
    b.never_hit += w;
    return;
  }
  const std::size_t nbins = b.hits.size();
  Vec3 wall{x[0] + t * v[0], x[1] + t * v[1], x[2] + t * v[2]};
  for (;;) {
    const auto bin = static_cast<std::size_t>(t / o.bin_width);
    if (bin < nbins) b.hits[bin] += w;
    const double len = geometry::norm(wall);
    const Vec3 inward{-wall[0] / len, -wall[1] / len, -wall[2] / len};
    v = diffuse_resample(rng, inward, e.radiative);
    const double speed = geometry::norm(v);
    const double cos_theta = std::clamp(geometry::dot(v, inward) / speed, 0.0, 1.0);
    const double flight = geometry::boundary_exit_time(cos_theta, speed);
    // Every reemission interval is histogrammed, also those ending past the horizon.
    const auto ib = static_cast<std::size_t>(flight / o.interval_bin);
    if (ib < b.intervals.size())
      b.intervals[ib] += 1.0;
    else
      b.overflow += 1.0;
    ++b.interval_count;
    t += flight;
    if (t > o.horizon) return;
    wall = {wall[0] + flight * v[0], wall[1] + flight * v[1], wall[2] + flight * v[2]};
  }
}

}  // namespace

FluxTally evolve(const ParticleEnsemble& e, const EvolveOptions& o) {
  if (!(o.horizon > 0.0)) throw DomainError("evolve: horizon must be positive");
  if (!(o.bin_width > 0.0)) throw DomainError("evolve: bin width must be positive");
  if (o.batches < 2) throw DomainError("evolve: need at least two batches");
  const std::size_t n = e.size();
  if (n == 0) throw EmptyEnsemble("evolve: empty ensemble");
  const auto nb = static_cast<std::size_t>(std::ceil(o.horizon / o.bin_width - 1e-12));
  const auto ni = static_cast<std::size_t>(std::ceil(o.interval_max / o.interval_bin - 1e-12));
  const auto batches = static_cast<std::size_t>(std::min<std::size_t>(o.batches, n));
  std::vector<BatchTally> tallies(batches);
  for (auto& b : tallies) {
    b.hits.assign(nb, 0.0);
    b.intervals.assign(ni, 0.0);
  }
  // Particle range of batch k; threads take whole batches so results do not depend on the thread count.
  auto first = [&](std::size_t k) { return k * n / batches; };
  unsigned threads = o.threads > 0 ? static_cast<unsigned>(o.threads) : std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, batches));
  auto work = [&](unsigned tid) {
    for (std::size_t k = tid; k < batches; k += threads)
      for (std::size_t i = first(k); i < first(k + 1); ++i) run_particle(e, i, o, tallies[k]);
  };
  if (threads <= 1) {
    work(0);
  } else {
    std::vector<std::thread> pool;
    for (unsigned tid = 0; tid < threads; ++tid) pool.emplace_back(work, tid);
    for (auto& th : pool) th.join();
  }

  FluxTally out;
  out.bin_width = o.bin_width;
  out.intensity_factor = e.radiative ? 1.0 / kPi : 1.0;
  out.particles = n;
  out.batches = static_cast<int>(batches);
  out.interval_bin = o.interval_bin;
  out.counts.assign(nb, 0.0);
  out.flux.assign(nb, 0.0);
  out.standard_error.assign(nb, 0.0);
  out.interval_density.assign(ni, 0.0);
  out.interval_standard_error.assign(ni, 0.0);
  const double norm = out.intensity_factor / (out.area_normalizer * o.bin_width);
  out.flux_floor = *std::max_element(e.weights.begin(), e.weights.end()) * norm;
  double overflow = 0.0;
  for (const auto& b : tallies) {
    out.total_weight += b.weight;
    out.stalled_mass += b.stalled;
    out.never_hit_mass += b.never_hit;
    out.intervals += b.interval_count;
    overflow += b.overflow;
    for (std::size_t j = 0; j < nb; ++j) out.counts[j] += b.hits[j];
  }
  for (std::size_t j = 0; j < nb; ++j) out.flux[j] = out.counts[j] * norm;
  // Batch means: each batch scaled up to the full ensemble.
  const double bcount = static_cast<double>(batches);
  for (std::size_t j = 0; j < nb; ++j) {
    double ss = 0.0;
    for (std::size_t k = 0; k < batches; ++k) {
      const double share = static_cast<double>(first(k + 1) - first(k)) / static_cast<double>(n);
      const double est = tallies[k].hits[j] * norm / share;
      ss += (est - out.flux[j]) * (est - out.flux[j]);
    }
    out.standard_error[j] = std::sqrt(ss / (bcount * (bcount - 1.0)));
  }
  if (out.intervals > 0) {
    const double total = static_cast<double>(out.intervals);
    out.interval_overflow = overflow / total;
    out.interval_floor = 1.0 / (total * o.interval_bin);
    for (std::size_t j = 0; j < ni; ++j) {
      double c = 0.0;
      for (const auto& b : tallies) c += b.intervals[j];
      out.interval_density[j] = c / (total * o.interval_bin);
      double ss = 0.0;
      for (const auto& b : tallies) {
        if (b.interval_count == 0) continue;
        const double est = b.intervals[j] / (static_cast<double>(b.interval_count) * o.interval_bin);
        ss += (est - out.interval_density[j]) * (est - out.interval_density[j]);
      }
      out.interval_standard_error[j] = std::sqrt(ss / (bcount * (bcount - 1.0)));
    }
  }
  return out;
}

io::Table to_table(const FluxTally& tally) {
  io::Table t;
  t.header = {"bin_center", "flux_estimate", "stderr"};
  t.columns = {tally.bin_centers(), tally.flux, tally.standard_error};
  t.add_footer("convention", tally.intensity_factor == 1.0
                                 ? std::string("weighted wall hits / (4 pi * bin_width); weights sum to the initial mass")
                                 : std::string("weighted wall hits / (pi * 4 pi * bin_width); weights sum to the initial mass"));
  t.add_footer("bin_width", tally.bin_width);
  t.add_footer("total_weight", tally.total_weight);
  t.add_footer("never_hit_mass", tally.never_hit_mass);
  t.add_footer("stalled_mass", tally.stalled_mass);
  t.add_footer("particles", static_cast<double>(tally.particles));
  t.add_footer("batches", static_cast<double>(tally.batches));
  return t;
}

io::Table interval_table(const FluxTally& tally) {
  io::Table t;
  t.header = {"interval_center", "density", "stderr"};
  std::vector<double> c(tally.interval_density.size());
  for (std::size_t i = 0; i < c.size(); ++i) c[i] = (static_cast<double>(i) + 0.5) * tally.interval_bin;
  t.columns = {c, tally.interval_density, tally.interval_standard_error};
  t.add_footer("intervals", static_cast<double>(tally.intervals));
  t.add_footer("overflow_fraction", tally.interval_overflow);
  return t;
}

namespace {

void finish(BinComparison& c, double floor) {
  const std::size_t n = c.estimate.size();
  c.z.assign(n, 0.0);
  for (std::size_t j = 0; j < n; ++j) {
    c.sigma[j] = std::max(c.sigma[j], floor);
    c.z[j] = (c.estimate[j] - c.reference[j]) / c.sigma[j];
    if (std::abs(c.z[j]) <= c.threshold) ++c.within;
    c.max_abs_z = std::max(c.max_abs_z, std::abs(c.z[j]));
  }
  c.fraction_within = n > 0 ? static_cast<double>(c.within) / static_cast<double>(n) : 0.0;
}

}  // namespace

BinComparison compare_flux(const FluxTally& tally, const RenewalSolution& sol, double threshold) {
  BinComparison c;
  c.threshold = threshold;
  const double end = sol.horizon();
  for (std::size_t j = 0; j < tally.flux.size(); ++j) {
    const double a = static_cast<double>(j) * tally.bin_width, b = a + tally.bin_width;
    if (b > end * (1.0 + 1e-12)) break;
    // Midpoints of half cells: exact for the piecewise linear solution when bins align with the grid.
    const auto m = static_cast<std::size_t>(std::ceil(2.0 * tally.bin_width / sol.dt - 1e-9));
    const double h = (b - a) / static_cast<double>(m);
    double avg = 0.0;
    for (std::size_t i = 0; i < m; ++i) avg += sol.at(std::min(a + (static_cast<double>(i) + 0.5) * h, end));
    avg /= static_cast<double>(m);
    c.estimate.push_back(tally.flux[j]);
    c.reference.push_back(avg);
    c.sigma.push_back(tally.standard_error[j]);
  }
  finish(c, tally.flux_floor);
  return c;
}

BinComparison compare_intervals(const FluxTally& tally, const Kernel& k, double threshold) {
  BinComparison c;
  c.threshold = threshold;
  for (std::size_t j = 0; j < tally.interval_density.size(); ++j) {
    const double a = static_cast<double>(j) * tally.interval_bin, b = a + tally.interval_bin;
    c.estimate.push_back(tally.interval_density[j]);
    c.reference.push_back((kernels::cumulative(k, b) - kernels::cumulative(k, a)) / tally.interval_bin);
    c.sigma.push_back(tally.interval_standard_error[j]);
  }
  finish(c, tally.interval_floor);
  return c;
}

}  // namespace montecarlo
}  // namespace wallflux
