#include <doctest.h>

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <complex>

#include "wallflux/errors.hpp"
#include "wallflux/spectral.hpp"

using namespace wallflux;
using doctest::Approx;
using boost::math::quadrature::gauss;
using boost::math::quadrature::gauss_kronrod;

namespace {

// Moments int_0^2 t^n/2 e^{-zt} dt by composite 10-point Gauss, panels finer than the oscillation.
cplx moment_by_quadrature(cplx z, int n) {
  const int panels = 8 + static_cast<int>(std::ceil(2.0 * std::abs(z.imag())));
  const double h = 2.0 / panels;
  cplx sum = 0.0;
  for (int k = 0; k < panels; ++k) {
    auto re = [&](double t) { return (0.5 * std::pow(t, n) * std::exp(-z * t)).real(); };
    auto im = [&](double t) { return (0.5 * std::pow(t, n) * std::exp(-z * t)).imag(); };
    sum += cplx(gauss<double, 10>::integrate(re, k * h, (k + 1) * h), gauss<double, 10>::integrate(im, k * h, (k + 1) * h));
  }
  return sum;
}

cplx transform_by_quadrature(cplx z) { return moment_by_quadrature(z, 1); }
cplx derivative(cplx z) { return moment_by_quadrature(z, 2); }

// Argument principle by integrating F'/F around the rectangle (F' = -L' = +int t K e^{-zt}).
double contour_count(const Rect& r) {
  const cplx corners[5] = {{r.re_min, r.im_min}, {r.re_max, r.im_min}, {r.re_max, r.im_max}, {r.re_min, r.im_max},
                           {r.re_min, r.im_min}};
  cplx total = 0.0;
  for (int e = 0; e < 4; ++e) {
    const cplx a = corners[e], d = corners[e + 1] - corners[e];
    auto g = [&](double s) {
      const cplx z = a + s * d;
      const cplx F = 1.0 - transform_by_quadrature(z);
      return derivative(z) / F * d;
    };
    total += cplx(gauss_kronrod<double, 31>::integrate([&](double s) { return g(s).real(); }, 0.0, 1.0, 10, 1e-9),
                  gauss_kronrod<double, 31>::integrate([&](double s) { return g(s).imag(); }, 0.0, 1.0, 10, 1e-9));
  }
  return (total / cplx(0.0, 2.0 * 3.141592653589793)).real();
}

}  // namespace

TEST_CASE("characteristic function against quadrature") {
  for (cplx z : {cplx(0.3, 0.0), cplx(-1.2, 4.0), cplx(0.0, 17.0), cplx(-2.9, -0.4), cplx(1e-5, 1e-5)}) {
    const cplx expect = 1.0 - transform_by_quadrature(z);
    CHECK(std::abs(spectral::characteristic(z) - expect) < 1e-12);
  }
  // z = 0 is a zero: the kernel is a probability density.
  CHECK(std::abs(spectral::characteristic(0.0)) < 1e-14);
}

TEST_CASE("winding counts") {
  auto poly = [](cplx z) { return (z - cplx(0.5, 0.5)) * (z - cplx(-0.2, 1.5)) * (z + 3.0); };
  CHECK(spectral::count_zeros(poly, Rect{-1.0, 1.0, 0.0, 2.0}) == 2);
  CHECK(spectral::count_zeros(poly, Rect{-1.0, 1.0, 0.0, 1.0}) == 1);
  CHECK(spectral::count_zeros(poly, Rect{-4.0, 1.0, -1.0, 2.0}) == 3);
  CHECK(spectral::count_zeros(Rect{-0.1, 0.1, -0.1, 0.1}) == 1);

  const Rect strip{-3.0, 0.05, 0.5, 20.0};
  const int counted = spectral::count_zeros(strip);
  CHECK(counted == static_cast<int>(std::lround(contour_count(strip))));
  CHECK(counted > 0);
}

TEST_CASE("zeros and the abscissa") {
  const auto s = spectral::spectral_abscissa(3.0);
  REQUIRE_FALSE(s.lower_bound_only);
  REQUIRE(s.witness.has_value());
  CHECK(s.alpha == Approx(-s.witness->real()).epsilon(1e-14));
  CHECK(s.alpha > 0.0);
  CHECK(s.alpha < 3.0);
  for (std::size_t i = 0; i < s.zeros.size(); ++i) {
    CHECK(std::abs(1.0 - transform_by_quadrature(s.zeros[i])) < 1e-9);
    if (std::abs(s.zeros[i]) > 1e-8) CHECK(s.zeros[i].real() <= -s.alpha + 1e-12);
  }
  // Real kernel: zeros come in conjugate pairs.
  for (const auto& z : s.zeros) {
    double nearest = 1e300;
    for (const auto& w : s.zeros) nearest = std::min(nearest, std::abs(w - std::conj(z)));
    CHECK(nearest < 1e-9);
  }
  CHECK(spectral::abscissa_by_bisection(3.0) == Approx(s.alpha).epsilon(1e-8));

  // Above the height bound the transform is small on the strip.
  for (double re : {-3.0, -1.5, 0.0}) {
    for (double k : {1.0, 1.5, 4.0}) CHECK(std::abs(transform_by_quadrature(cplx(re, k * s.height))) < 0.5);
  }
}

TEST_CASE("newton refinement") {
  const auto s = spectral::spectral_abscissa(3.0);
  const auto r = spectral::refine_zero(*s.witness + cplx(0.01, -0.01));
  CHECK(std::abs(r.zero - *s.witness) < 1e-10);
  CHECK(r.residual < 1e-12);
  // The starting residual is recorded too.
  CHECK(r.history.size() == static_cast<std::size_t>(r.iterations) + 1);
}

TEST_CASE("exponential rate fit") {
  std::vector<double> t, v;
  for (int i = 0; i <= 4000; ++i) {
    const double ti = i * 0.01;
    t.push_back(ti);
    v.push_back(0.3 + std::exp(-0.7 * ti) * (2.0 + std::cos(3.0 * ti)));
  }
  const auto env = spectral::exponential_rate_fit(t, v, 0.3, 5.0, 35.0, FitMode::Envelope);
  CHECK(env.rate == Approx(0.7).epsilon(1e-3));
  const auto raw = spectral::exponential_rate_fit(t, v, 0.3, 5.0, 35.0, FitMode::Raw);
  CHECK(std::abs(raw.rate - 0.7) < 0.02);
  CHECK_THROWS(spectral::exponential_rate_fit(t, v, 0.3, 35.0, 5.0, FitMode::Raw));
}

TEST_CASE("zero table") {
  const auto s = spectral::spectral_abscissa(1.0);
  const auto tab = spectral::zero_table(s);
  CHECK(tab.header.size() == 3);
  CHECK(tab.columns[0].size() == s.zeros.size());
}
