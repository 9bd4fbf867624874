#include "doctest.h"
#include "oracles.hpp"
#include "vortex/mollifier.hpp"

using namespace vortex;
using oracle::pi;

namespace {

/// Continuous transform of the unit-disk bump scaled to radius 1/ell,
/// normalized to mass one: a radial Hankel integral.
double bump_transform(double ell, double kmod) {
  auto weight = [&](double r, double k) { return unit_bump(ell * r) * std::cyl_bessel_j(0.0, k * r) * r; };
  const double r = 1.0 / ell;
  const double mass = oracle::trapezoid([&](double s) { return weight(s, 0.0); }, 0.0, r, 20000);
  return oracle::trapezoid([&](double s) { return weight(s, kmod); }, 0.0, r, 20000) / mass;
}

}  // namespace

TEST_CASE("Gaussian multiplier") {
  const TorusGrid g(64);
  for (double ell : {0.5, 2.0, 7.0, 100.0}) CHECK(make_kernel(g, ell, MollifierProfile::Gaussian).at(0, 0) == 1.0);
  const auto k = make_kernel(g, 2.0, MollifierProfile::Gaussian);
  CHECK(std::abs(k.at(2, 0) - 0.6065306597126334) < 1e-12);
  CHECK(std::abs(k.at(-2, 0) - std::exp(-0.5)) < 1e-15);
  CHECK(std::abs(k.at(1, 0) - 0.8824969025845955) < 1e-12);
  CHECK(make_kernel(g, kInfinity, MollifierProfile::Gaussian).multiplier().minCoeff() == 1.0);
}

TEST_CASE("smooth bump multiplier") {
  const TorusGrid g(256);
  const auto k = make_kernel(g, 4.0, MollifierProfile::SmoothBump);
  CHECK(k.at(0, 0) == 1.0);
  CHECK(k.multiplier().abs().maxCoeff() <= 1.0 + 1e-10);

  const auto samples = Nodal::sample(g, [](double x1, double x2) { return unit_bump(4.0 * torus_distance(x1, x2, 0, 0)); });
  const double mass = oracle::dft(samples, 0, 0).real();
  for (auto [k1, k2] : {std::pair{1, 0}, {3, 4}, {-7, 2}, {20, 0}}) {
    const auto direct = oracle::dft(samples, k1, k2) / mass;
    CHECK(std::abs(direct.imag()) < 1e-14);
    CHECK(std::abs(direct.real() - k.at(k1, k2)) < 1e-13);
    CHECK(std::abs(k.at(k1, k2) - bump_transform(4.0, std::hypot(k1, k2))) < 1e-4);
  }
  CHECK(make_kernel(g, kInfinity, MollifierProfile::SmoothBump).multiplier().minCoeff() == 1.0);
}

TEST_CASE("kernel errors") {
  const TorusGrid g(32);
  try {
    make_kernel(g, 0.3, MollifierProfile::Gaussian);
    FAIL("expected ScaleTooCoarse");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::ScaleTooCoarse);
  }
  try {
    make_kernel(g, 8.0, MollifierProfile::SmoothBump);
    FAIL("expected UnresolvedKernel");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::UnresolvedKernel);
  }
  take_warnings();
  CHECK_NOTHROW(make_kernel(g, 8.0, MollifierProfile::Gaussian));
  CHECK(take_warnings().size() == 1);
}

TEST_CASE("mollify examples") {
  const TorusGrid g(64);
  const auto gauss = make_kernel(g, 2.0, MollifierProfile::Gaussian);
  CHECK(mollify(Field(g), gauss).max_coeff_abs() == 0.0);
  const Field m = mollify(cosine_mode(g, 1, 0, 1.0), gauss);
  const Nodal expect = Nodal::sample(g, [](double x1, double) { return std::exp(-0.125) * std::cos(x1); });
  CHECK(oracle::max_diff(to_physical(m), expect) < 1e-15);

  const TorusGrid g2(32);
  CHECK_THROWS_AS(mollify(Field(g2), gauss), Error);
}

TEST_CASE("smooth bump contracts in L2") {
  const TorusGrid g(64);
  const auto bump = make_kernel(g, 2.0, MollifierProfile::SmoothBump);
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const Field f = to_spectral(oracle::white_noise(g, seed));
    const Field m = mollify(f, bump);
    CHECK(lp_norm(m, 2) <= lp_norm(f, 2));
    CHECK(l2_norm_squared_parseval(m) <= l2_norm_squared_parseval(f));
    CHECK(m.mean_coeff() == std::complex<double>(0));
  }
}

TEST_CASE("mollification error") {
  const TorusGrid g(64);
  const Field c = cosine_mode(g, 1, 0, 1.0);
  const auto gauss = make_kernel(g, 2.0, MollifierProfile::Gaussian);
  CHECK(mollification_error(c, gauss, 2) == doctest::Approx((1 - std::exp(-0.125)) * pi * std::sqrt(2.0)).epsilon(1e-13));
  CHECK(mollification_error(c, gauss, 2) == doctest::Approx(0.5220524).epsilon(1e-7));
  CHECK(mollification_error(Field(g), gauss, 2) == 0.0);
  CHECK_THROWS_AS(mollification_error(c, gauss, 0.9), Error);

  const TorusGrid g2(256);
  const Field f = cosine_mode(g2, 3, 1, 1.0);
  for (auto profile : {MollifierProfile::Gaussian, MollifierProfile::SmoothBump}) {
    double previous = kInfinity;
    for (double ell : {2.0, 4.0, 8.0, 16.0}) {
      const double e = mollification_error(f, make_kernel(g2, ell, profile), 2);
      CHECK(e < previous);
      previous = e;
    }
  }
}

TEST_CASE("commutes with derivatives and keeps zero mean") {
  const TorusGrid g(128);
  const Field f = oracle::random_band(g, 40, 5);
  for (auto profile : {MollifierProfile::Gaussian, MollifierProfile::SmoothBump}) {
    const auto k = make_kernel(g, 4.0, profile);
    for (int axis : {1, 2}) {
      const Field a = derivative(mollify(f, k), axis);
      const Field b = mollify(derivative(f, axis), k);
      CHECK((a.coeffs() - b.coeffs()).abs().maxCoeff() <= 1e-13 * a.max_coeff_abs());
    }
    CHECK(mollify(f, k).mean_coeff() == std::complex<double>(0));
  }
}

TEST_CASE("Young inequality for the bump") {
  const TorusGrid g(64);
  const auto bump = make_kernel(g, 2.0, MollifierProfile::SmoothBump);
  for (std::uint64_t seed = 100; seed < 120; ++seed) {
    const Nodal raw = oracle::white_noise(g, seed);
    const Field f = to_spectral(raw);
    const Field m = mollify(f, bump);
    for (double p : {1.5, 2.0, 4.0}) CHECK(lp_norm(m, p) <= lp_norm(f, p) + 1e-8);
  }
}
