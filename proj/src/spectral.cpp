#include "wallflux/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "wallflux/errors.hpp"
#include "wallflux/kernels.hpp"

namespace wallflux {

bool Rect::contains(cplx z, double margin) const noexcept {
  return z.real() >= re_min - margin && z.real() <= re_max + margin && z.imag() >= im_min - margin &&
         z.imag() <= im_max + margin;
}

namespace spectral {
namespace {

struct TooClose {};

class PhaseTracker {
 public:
  PhaseTracker(const Function& f, const ContourOptions& o) : f_(f), o_(o) {}

  cplx eval(cplx z) const {
    const cplx v = f_(z);
    if (!(std::abs(v) >= o_.min_modulus)) throw TooClose{};
    return v;
  }

  // Phase increment of f along the straight segment a -> b.
  double segment(cplx a, cplx fa, cplx b, cplx fb, int depth) const {
    const double d = std::arg(fb / fa);
    if (std::abs(d) <= o_.max_phase_step) return d;
    if (depth >= o_.max_depth) throw TooClose{};
    const cplx m = 0.5 * (a + b);
    const cplx fm = eval(m);
    return segment(a, fa, m, fm, depth + 1) + segment(m, fm, b, fb, depth + 1);
  }

  double edge(cplx a, cplx b) const {
    const double len = std::abs(b - a);
    const int n = std::max(8, static_cast<int>(std::ceil(len * o_.samples_per_unit)));
    double total = 0.0;
    cplx prev_z = a, prev_f = eval(a);
    for (int i = 1; i <= n; ++i) {
      const cplx z = i == n ? b : a + (b - a) * (static_cast<double>(i) / n);
      const cplx fz = eval(z);
      total += segment(prev_z, prev_f, z, fz, 0);
      prev_z = z;
      prev_f = fz;
    }
    return total;
  }

  int winding(const Rect& r) const {
    const cplx c0(r.re_min, r.im_min), c1(r.re_max, r.im_min), c2(r.re_max, r.im_max), c3(r.re_min, r.im_max);
    const double total = edge(c0, c1) + edge(c1, c2) + edge(c2, c3) + edge(c3, c0);
    const double turns = total / (2.0 * std::numbers::pi);
    const double n = std::round(turns);
    if (std::abs(turns - n) > 0.25) throw TooClose{};
    return static_cast<int>(n);
  }

 private:
  const Function& f_;
  const ContourOptions& o_;
};

Rect box_around(cplx z, double half) {
  return {z.real() - half, z.real() + half, z.imag() - half, z.imag() + half};
}

void collect(const Function& f, const Rect& tile, int count, int depth, const ContourOptions& o, ZeroSet& out) {
  if (count <= 0) return;
  if (count == 1) {
    try {
      const auto r = refine_zero(tile.center());
      if (tile.contains(r.zero, 1e-12) && count_zeros(f, box_around(r.zero, 1e-6), o) == 1) {
        out.zeros.push_back(r.zero);
        out.residuals.push_back(r.residual);
        return;
      }
    } catch (const RefinementError&) {
    }
  }
  if (depth > 48 || std::max(tile.width(), tile.height()) < 1e-9)
    throw RefinementError("locate_zeros: could not isolate zeros near " + std::to_string(tile.center().real()) + " + " +
                          std::to_string(tile.center().imag()) + "i");
  // Off-center split so that symmetric zeros (z = 0, conjugate pairs) never land on the cut.
  constexpr double kSplit = 0.5031;
  Rect a = tile, b = tile;
  if (tile.width() >= tile.height()) {
    const double cut = tile.re_min + kSplit * tile.width();
    a.re_max = cut;
    b.re_min = cut;
  } else {
    const double cut = tile.im_min + kSplit * tile.height();
    a.im_max = cut;
    b.im_min = cut;
  }
  const int ca = count_zeros(f, a, o);
  const int cb = count_zeros(f, b, o);
  collect(f, a, ca, depth + 1, o, out);
  collect(f, b, cb, depth + 1, o, out);
}

}  // namespace

cplx characteristic(cplx z) { return 1.0 - kernels::laplace(Kernel::monokinetic(), z); }

int count_zeros(const Function& f, const Rect& rect, const ContourOptions& options) {
  if (!(rect.width() > 0.0 && rect.height() > 0.0)) throw DomainError("count_zeros: empty rectangle");
  const PhaseTracker tracker(f, options);
  const double scale = std::max({1.0, rect.width(), rect.height()});
  for (int attempt = 0; attempt <= options.max_retries; ++attempt) {
    const double e = options.jitter * scale * attempt;
    const Rect r{rect.re_min - e, rect.re_max + e, rect.im_min - e, rect.im_max + e};
    try {
      return tracker.winding(r);
    } catch (const TooClose&) {
    }
  }
  throw ContourError("count_zeros: contour passes too close to a zero after " + std::to_string(options.max_retries) +
                     " retries");
}

int count_zeros(const Rect& rect, const ContourOptions& options) { return count_zeros(characteristic, rect, options); }

Refinement refine_zero(cplx seed, double tolerance) {
  const Kernel k = Kernel::monokinetic();
  Refinement r;
  cplx z = seed;
  for (int it = 0; it < 50; ++it) {
    const cplx fz = 1.0 - kernels::laplace(k, z);
    const double res = std::abs(fz);
    r.history.push_back(res);
    if (res < tolerance) {
      r.zero = z;
      r.residual = res;
      r.iterations = it;
      return r;
    }
    const cplx dfz = -kernels::laplace_derivative(k, z);
    if (dfz == cplx(0.0, 0.0)) throw RefinementError("refine_zero: vanishing derivative");
    const cplx step = fz / dfz;
    z -= step;
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) throw RefinementError("refine_zero: diverged");
    // Rounding floor: accept a stalled iterate whose residual is already tiny.
    if (std::abs(step) <= 4e-16 * std::max(1.0, std::abs(z))) {
      const double final_res = std::abs(1.0 - kernels::laplace(k, z));
      if (final_res < 1e-10) {
        r.zero = z;
        r.residual = final_res;
        r.iterations = it + 1;
        return r;
      }
    }
  }
  throw RefinementError("refine_zero: no convergence in 50 iterations from seed " + std::to_string(seed.real()) + " + " +
                        std::to_string(seed.imag()) + "i");
}

ZeroSet locate_zeros(const Rect& rect, const ContourOptions& options) {
  ZeroSet out;
  out.rectangle = rect;
  out.count = count_zeros(characteristic, rect, options);
  collect(characteristic, rect, out.count, 0, options, out);
  if (static_cast<int>(out.zeros.size()) != out.count)
    throw RefinementError("locate_zeros: refined " + std::to_string(out.zeros.size()) + " zeros, counted " +
                          std::to_string(out.count));
  return out;
}

double height_bound(double strip_depth) {
  if (!(strip_depth > 0.0)) throw DomainError("height_bound: strip depth must be positive");
  // (1 + (1 + 2R) E) / (2 R^2) < 1/2 with E = e^{2 depth}.
  const double e = std::exp(2.0 * strip_depth);
  const double r = e + std::sqrt(e * e + 1.0 + e);
  return std::ceil(r) + 1.0;
}

SpectralAbscissa spectral_abscissa(double strip_depth, const ContourOptions& options) {
  SpectralAbscissa s;
  s.strip_depth = strip_depth;
  s.height = height_bound(strip_depth);
  std::vector<Rect> tiles{{-strip_depth, 0.05, -0.5, 0.5}};
  const int upper = static_cast<int>(std::ceil((s.height - 0.5) / 2.0));
  for (int i = 0; i < upper; ++i) {
    const double lo = 0.5 + (s.height - 0.5) * i / upper;
    const double hi = 0.5 + (s.height - 0.5) * (i + 1) / upper;
    tiles.push_back({-strip_depth, 0.05, lo, hi});
  }
  s.tiles = static_cast<int>(tiles.size());
  for (std::size_t i = 0; i < tiles.size(); ++i) {
    const auto zs = locate_zeros(tiles[i], options);
    for (std::size_t j = 0; j < zs.zeros.size(); ++j) {
      s.zeros.push_back(zs.zeros[j]);
      s.residuals.push_back(zs.residuals[j]);
      if (i > 0) {
        s.zeros.push_back(std::conj(zs.zeros[j]));
        s.residuals.push_back(zs.residuals[j]);
      }
    }
  }
  std::vector<std::size_t> order(s.zeros.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return s.zeros[a].imag() != s.zeros[b].imag() ? s.zeros[a].imag() < s.zeros[b].imag()
                                                  : s.zeros[a].real() < s.zeros[b].real();
  });
  std::vector<cplx> z;
  std::vector<double> r;
  for (auto i : order) {
    z.push_back(s.zeros[i]);
    r.push_back(s.residuals[i]);
  }
  s.zeros = std::move(z);
  s.residuals = std::move(r);

  s.alpha = strip_depth;
  s.lower_bound_only = true;
  for (const auto& zz : s.zeros) {
    if (std::abs(zz) < 1e-8 || zz.imag() < 0.0) continue;
    if (-zz.real() < s.alpha || s.lower_bound_only) {
      s.alpha = -zz.real();
      s.witness = zz;
      s.lower_bound_only = false;
    }
  }
  return s;
}

double abscissa_by_bisection(double strip_depth, double tolerance, const ContourOptions& options) {
  const double top = height_bound(strip_depth);
  auto count = [&](double a) { return count_zeros(Rect{-a, 0.05, 0.5, top}, options); };
  double lo = 0.0, hi = strip_depth;
  if (count(hi) == 0) return strip_depth;
  while (hi - lo > tolerance) {
    const double mid = 0.5 * (lo + hi);
    if (count(mid) == 0)
      lo = mid;
    else
      hi = mid;
  }
  return 0.5 * (lo + hi);
}

DecayFit exponential_rate_fit(std::span<const double> times, std::span<const double> values, double limit, double t0,
                              double t1, FitMode mode) {
  if (times.size() != values.size()) throw FitDomainError("exponential_rate_fit: length mismatch");
  if (!(t1 > t0)) throw FitDomainError("exponential_rate_fit: empty window");
  const auto idx = fit::window_indices(times, t0, t1);
  if (idx.size() < 3) throw FitDomainError("exponential_rate_fit: fewer than 3 points in the window");
  std::vector<double> dev(values.size());
  for (std::size_t i = 0; i < values.size(); ++i) dev[i] = std::abs(values[i] - limit);
  std::vector<std::size_t> use;
  if (mode == FitMode::Raw) {
    use = idx;
  } else {
    for (auto i : fit::local_maxima(dev))
      if (times[i] >= t0 && times[i] <= t1) use.push_back(i);
    if (use.size() < 3) throw FitDomainError("exponential_rate_fit: fewer than 3 envelope maxima in the window");
  }
  std::vector<double> x, y;
  for (auto i : use) {
    if (!(dev[i] > 0.0))
      throw WindowTooLate("exponential_rate_fit: |mu - mu_inf| vanished at t=" + std::to_string(times[i]));
    x.push_back(times[i]);
    y.push_back(std::log(dev[i]));
  }
  const auto line = fit::least_squares(x, y);
  DecayFit f;
  f.model = FitModel::Exponential;
  f.mode = mode;
  f.rate = -line.slope;
  f.intercept = line.intercept;
  f.t0 = t0;
  f.t1 = t1;
  f.rms_residual = line.rms_residual;
  f.points = use.size();
  return f;
}

DecayFit exponential_rate_fit(const RenewalSolution& sol, double t0, double t1, FitMode mode, double reference) {
  double limit = reference;
  if (std::isnan(limit)) limit = std::isfinite(sol.mu_infinity_discrete) ? sol.mu_infinity_discrete : sol.mu_infinity;
  const auto t = sol.times();
  return exponential_rate_fit(t, sol.values, limit, t0, t1, mode);
}

io::Table zero_table(const SpectralAbscissa& s) {
  io::Table t;
  t.header = {"re", "im", "residual"};
  std::vector<double> re, im;
  for (const auto& z : s.zeros) {
    re.push_back(z.real());
    im.push_back(z.imag());
  }
  t.columns = {re, im, s.residuals};
  t.add_footer("alpha", s.alpha);
  t.add_footer("strip_depth", s.strip_depth);
  t.add_footer("height", s.height);
  t.add_footer("lower_bound_only", s.lower_bound_only ? std::string("true") : std::string("false"));
  return t;
}

}  // namespace spectral
}  // namespace wallflux
