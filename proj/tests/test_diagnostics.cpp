#include "doctest.h"
#include "oracles.hpp"
#include "vortex/diagnostics.hpp"
#include "vortex/evolution.hpp"

using namespace vortex;
using oracle::pi;

namespace {

SolverConfig config(int n, double nu, double t_end, double dt_max, double cfl = 0.5) {
  SolverConfig c{TorusGrid(n)};
  c.nu = nu;
  c.t_end = t_end;
  c.dt_max = dt_max;
  c.cfl = cfl;
  return c;
}

Field smooth_datum(const TorusGrid& g, std::uint64_t seed, double peak = 1.0) {
  Field w = resample(oracle::random_band(TorusGrid(32), 4, seed), g);
  w *= peak / lp_norm(w, kInfinity);
  return w;
}

TestFunction low_mode_test(const TorusGrid& g, double t_end) {
  return TestFunction{cosine_mode(g, 1, 0, 1.0) + sine_mode(g, 1, 2, 0.5), TestFunction::Profile::CosineRamp, t_end};
}

}  // namespace

TEST_CASE("lp norm examples") {
  const TorusGrid g(64);
  const Field c = cosine_mode(g, 1, 0, 1.0);
  CHECK(lp_norm(c, 2) == doctest::Approx(pi * std::sqrt(2.0)).epsilon(1e-14));
  CHECK(lp_norm(c, 4) == doctest::Approx(std::pow(1.5 * pi * pi, 0.25)).epsilon(1e-14));
  CHECK(std::abs(lp_norm(c, 4) - 1.962) < 5e-4);
  CHECK(oracle::trapezoid([](double x) { return std::pow(std::cos(x), 4); }, 0, 2 * pi, 64) * 2 * pi ==
        doctest::Approx(std::pow(lp_norm(c, 4), 4)).epsilon(1e-13));
  for (double p : {1.0, 1.5, 2.0, 7.0, kInfinity}) CHECK(lp_norm(Field(g), p) == 0.0);
  try {
    lp_norm(c, 0.5);
    FAIL("expected BadExponent");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::BadExponent);
  }
}

TEST_CASE("lp norm is a norm and Jensen holds") {
  const TorusGrid g(64);
  const double measure = 4 * pi * pi;
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const Field f = to_spectral(oracle::white_noise(g, seed));
    const Field h = to_spectral(oracle::white_noise(g, seed + 100));
    double previous = 0;
    for (double p : {1.0, 1.5, 2.0, 3.0, 6.0}) {
      const double nf = lp_norm(f, p);
      CHECK(lp_norm(f + h, p) <= nf + lp_norm(h, p) + 1e-10);
      CHECK(std::abs(lp_norm(f * -2.5, p) - 2.5 * nf) <= 1e-10 * nf);
      const double normalized = nf / std::pow(measure, 1.0 / p);
      CHECK(normalized >= previous - 1e-10);
      previous = normalized;
    }
    CHECK(lp_norm(f, kInfinity) >= previous - 1e-10);
  }
}

TEST_CASE("energy estimate reports") {
  const TorusGrid g(128);
  const Trajectory viscous = solve(smooth_datum(g, 3, 2.0), config(128, 1e-2, 0.5, 1e-2), Forcing::zero());
  REQUIRE(viscous.ok());
  for (double p : {1.5, 2.0, 4.0}) {
    const EnergyReport r = energy_estimate_report(viscous, Forcing::zero(), p);
    CHECK(!r.inviscid);
    CHECK(r.sup_ratio <= 1 + 1e-6);
    CHECK(r.dissipation > 0);
  }

  const Trajectory steady = solve(cosine_mode(TorusGrid(64), 2, 0, 1.0), config(64, 0, 1, 1e-2), Forcing::zero());
  const EnergyReport s = energy_estimate_report(steady, Forcing::zero(), 2);
  CHECK(s.inviscid);
  CHECK(std::abs(s.ratio - 1) < 1e-8);
  CHECK(std::abs(s.sup_ratio - 1) < 1e-8);

  const Trajectory zero = solve(Field(TorusGrid(32)), config(32, 0.1, 0.2, 1e-2), Forcing::zero());
  const EnergyReport z = energy_estimate_report(zero, Forcing::zero(), 2);
  CHECK(z.initial_lp == 0);
  CHECK(z.sup_lp == 0);
  CHECK(z.dissipation == 0);
  CHECK(z.forcing_l1_lp == 0);
  CHECK(z.rhs == 0);
}

TEST_CASE("renormalization residual") {
  const TorusGrid g(32);
  const Trajectory zero = solve(Field(g), config(32, 0, 0.5, 1e-2), Forcing::zero());
  CHECK(renorm_residual(zero, Forcing::zero(), RenormalizerBeta::tanh(), low_mode_test(g, 0.5)) == 0.0);

  const TorusGrid g64(64);
  const Trajectory steady = solve(cosine_mode(g64, 2, 0, 1.0), config(64, 0, 1, 1e-2), Forcing::zero());
  CHECK(renorm_residual(steady, Forcing::zero(), RenormalizerBeta::tanh(), low_mode_test(g64, 1)) < 1e-6);
  CHECK(renorm_residual(steady, Forcing::zero(), RenormalizerBeta::rational(), low_mode_test(g64, 1)) < 1e-6);

  std::vector<double> residuals;
  for (int n : {64, 128}) {
    const TorusGrid gn(n);
    const Trajectory run = solve(smooth_datum(gn, 12, 2.0), config(n, 0, 0.5, 1.0, 0.5), Forcing::zero());
    REQUIRE(run.ok());
    residuals.push_back(renorm_residual(run, Forcing::zero(), RenormalizerBeta::tanh(), low_mode_test(gn, 0.5)));
  }
  MESSAGE("renormalized residual " << residuals[0] << " -> " << residuals[1]);
  CHECK(residuals[1] * 2 <= residuals[0]);
}

TEST_CASE("clipped identity matches the weak residual") {
  const TorusGrid g(64);
  const Trajectory run = solve(smooth_datum(g, 5, 1.0), config(64, 0, 0.5, 1e-2), Forcing::zero());
  const auto beta = RenormalizerBeta::clipped_identity(10.0);
  CHECK(beta.value(0) == 0.0);
  CHECK(beta.value(0.7) == 0.7);
  CHECK(beta.derivative(0.7) == 1.0);
  const TestFunction test = low_mode_test(g, 0.5);
  CHECK(std::abs(renorm_residual(run, Forcing::zero(), beta, test) - weak_residual(run, Forcing::zero(), test)) < 1e-8);
}

TEST_CASE("renormalizers are admissible") {
  for (const auto& beta : {RenormalizerBeta::tanh(), RenormalizerBeta::rational(), RenormalizerBeta::clipped_identity(2)}) {
    CHECK(beta.value(0) == 0.0);
    for (double s = -50; s <= 50; s += 0.37) {
      CHECK(std::abs(beta.value(s)) <= 3.0);
      CHECK(std::abs(beta.derivative(s)) <= 1.0 + 1e-12);
      const double fd = (beta.value(s + 1e-6) - beta.value(s - 1e-6)) / 2e-6;
      CHECK(std::abs(fd - beta.derivative(s)) < 1e-6);
    }
  }
}

TEST_CASE("L2 balance") {
  const TorusGrid g(64);
  const Trajectory steady = solve(cosine_mode(g, 2, 0, 1.0), config(64, 0, 1, 1e-2), Forcing::zero());
  CHECK(l2_balance_residual(steady, Forcing::zero()) < 1e-8);

  const TorusGrid g128(128);
  const Field w0 = smooth_datum(g128, 30, 1.0);
  const Trajectory generic = solve(w0, config(128, 0, 1, 1e-2), Forcing::zero());
  CHECK(l2_balance_residual(generic, Forcing::zero()) < 1e-4 * std::pow(lp_norm(w0, 2), 2));

  const Trajectory zero = solve(Field(TorusGrid(32)), config(32, 0, 0.3, 1e-2), Forcing::zero());
  CHECK(l2_balance_residual(zero, Forcing::zero()) == 0.0);
}

TEST_CASE("pair distance") {
  const TorusGrid g(64);
  const Field w0 = cosine_mode(g, 2, 0, 1.0);
  const Trajectory euler = solve(w0, config(64, 0, 1, 1e-2), Forcing::zero());
  const Trajectory ns = solve(w0, config(64, 0.1, 1, 1e-2), Forcing::zero());
  const Trajectory ns2 = solve(w0, config(64, 0.05, 1, 1e-2), Forcing::zero());
  CHECK(pair_distance(euler, euler, 2) == 0.0);
  const double closed = (1 - std::exp(-0.4)) * pi * std::sqrt(2.0);
  CHECK(pair_distance(ns, euler, 2) == doctest::Approx(closed).epsilon(1e-6));
  CHECK(std::abs(pair_distance(ns, euler, 2) - 1.46473) < 1e-5);
  CHECK(pair_distance(ns2, euler, 2) < pair_distance(ns, euler, 2));

  for (double p : {1.5, 2.0, 4.0})
    CHECK(pair_distance(ns, euler, p) <= pair_distance(ns, ns2, p) + pair_distance(ns2, euler, p) + 1e-10);

  const Trajectory coarse = solve(cosine_mode(TorusGrid(32), 2, 0, 1.0), config(32, 0, 1, 1e-2), Forcing::zero());
  try {
    pair_distance(coarse, euler, 2);
    FAIL("expected GridMismatch");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::GridMismatch);
  }
  const Trajectory shorter = solve(w0, config(64, 0, 0.5, 1e-2), Forcing::zero());
  try {
    pair_distance(shorter, euler, 2);
    FAIL("expected TimeMisalignment");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::TimeMisalignment);
  }
  SolverConfig sparse = config(64, 0, 1, 1e-2);
  sparse.snapshot_stride = 20;
  const Trajectory gappy = solve(w0, sparse, Forcing::zero());
  try {
    pair_distance(gappy, euler, 2);
    FAIL("expected TimeMisalignment");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::TimeMisalignment);
  }
}

TEST_CASE("viscous Lp norms decay snapshot to snapshot") {
  const TorusGrid g(64);
  const Trajectory run = solve(smooth_datum(g, 44, 3.0), config(64, 5e-3, 1, 1e-2), Forcing::zero());
  REQUIRE(run.ok());
  for (double p : {1.5, 2.0, 4.0})
    for (std::size_t i = 1; i < run.size(); ++i)
      CHECK(lp_norm(run.snapshots[i], p) <= lp_norm(run.snapshots[i - 1], p) + 1e-8);
}
