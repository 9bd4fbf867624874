#include "vortex/initial_data.hpp"

#include <cmath>
#include <numbers>
#include <random>

#include "vortex/norms.hpp"

namespace vortex {
namespace {

/// Smooth transition from 1 (s <= 0) to 0 (s >= 1).
double smooth_step_down(double s) {
  if (s <= 0.0) return 1.0;
  if (s >= 1.0) return 0.0;
  auto f = [](double x) { return x > 0.0 ? std::exp(-1.0 / x) : 0.0; };
  return f(1.0 - s) / (f(1.0 - s) + f(s));
}

double unit_uniform(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

Field single_mode(const SingleMode& m, const TorusGrid& grid) {
  Field f(grid);
  if (m.k1 == 0 && m.k2 == 0) return f;
  if (std::max(std::abs(m.k1), std::abs(m.k2)) > grid.cutoff())
    throw Error(ErrorCode::BadConfig, "single mode lies outside the dealiased band");
  if (m.phase == 0.0)
    f.set_coeff(m.k1, m.k2, {0.5, 0.0});
  else
    f.set_coeff(m.k1, m.k2, 0.5 * std::polar(1.0, m.phase));
  return f;
}

Field multi_mode(const MultiMode& m, const TorusGrid& grid) {
  if (m.kmax < 1 || m.kmax > grid.cutoff()) throw Error(ErrorCode::BadConfig, "multi-mode kmax outside the dealiased band");
  std::mt19937_64 rng(m.seed);
  Field f(grid);
  for (int k2 = 0; k2 <= m.kmax; ++k2) {
    for (int k1 = -m.kmax; k1 <= m.kmax; ++k1) {
      if (k2 == 0 && k1 <= 0) continue;
      const double kabs = std::hypot(k1, k2);
      const double phase = 2.0 * std::numbers::pi * unit_uniform(rng);
      f.set_coeff(k1, k2, std::polar(std::pow(kabs, -m.slope), phase));
    }
  }
  const double rms = std::sqrt(l2_norm_squared_parseval(f)) / (2.0 * std::numbers::pi);
  f *= 1.0 / rms;
  return f;
}

/// Integral of F(|y - c|) over the square of side `size` centred at y, refined
/// towards the singular point. The innermost box holding c is replaced by the
/// disk of equal area, where F ~ r^{-a} integrates in closed form.
template <typename F>
double box_integral(F&& integrand, double a, double y1, double y2, double size, double c1, double c2, int depth) {
  const double d = torus_distance(y1, y2, c1, c2);
  if (d > 1.5 * size || depth == 0) {
    if (depth == 0 && d < size && a < 2.0) {
      const double radius = size / std::sqrt(std::numbers::pi);
      return integrand(radius) * 2.0 * std::numbers::pi * radius * radius / (2.0 - a);
    }
    const double o = size / (2.0 * std::sqrt(3.0));
    double sum = 0.0;
    for (double s1 : {-o, o})
      for (double s2 : {-o, o}) sum += integrand(torus_distance(y1 + s1, y2 + s2, c1, c2));
    return sum * size * size / 4.0;
  }
  const double q = size / 4.0;
  double sum = 0.0;
  for (double s1 : {-q, q})
    for (double s2 : {-q, q}) sum += box_integral(integrand, a, y1 + s1, y2 + s2, size / 2.0, c1, c2, depth - 1);
  return sum;
}

Field power_singularity(const PowerSingularity& s, double p, const TorusGrid& grid) {
  if (!(s.alpha > 0.0)) throw Error(ErrorCode::BadConfig, "alpha must be positive");
  if (!(s.cutoff_radius > 0.0 && s.cutoff_radius <= std::numbers::pi))
    throw Error(ErrorCode::BadConfig, "cutoff radius must lie in (0, pi]");
  const double r_in = 0.5 * s.cutoff_radius;
  const double h = grid.spacing();
  auto powered = [&](double r) {
    const double chi = smooth_step_down((r - r_in) / (s.cutoff_radius - r_in));
    return chi == 0.0 ? 0.0 : std::pow(chi, p) * std::pow(r, -s.alpha * p);
  };
  const auto nodal = Nodal::sample(grid, [&](double x1, double x2) {
    if (torus_distance(x1, x2, s.c1, s.c2) > s.cutoff_radius + h) return 0.0;
    const double mean = box_integral(powered, s.alpha * p, x1, x2, h, s.c1, s.c2, 24) / (h * h);
    return std::pow(mean, 1.0 / p);
  });
  return dealias(to_spectral(nodal));
}

Field patchlike(const Patchlike& s, const TorusGrid& grid) {
  if (!(s.radius > 0.0 && s.width > 0.0)) throw Error(ErrorCode::BadConfig, "patch radius and width must be positive");
  const auto nodal = Nodal::sample(grid, [&](double x1, double x2) {
    const double r = torus_distance(x1, x2, s.c1, s.c2);
    return 0.5 * (1.0 - std::tanh((r - s.radius) / s.width));
  });
  return dealias(to_spectral(nodal));
}

}  // namespace

Field build_initial(const InitialDataSpec& spec, const TorusGrid& grid) {
  if (const auto* s = std::get_if<PowerSingularity>(&spec.kind); s && spec.assert_lp) {
    if (s->alpha >= 2.0 / *spec.assert_lp)
      throw Error(ErrorCode::AlphaOutOfRange, "alpha=" + std::to_string(s->alpha) + " >= 2/p=" +
                                                  std::to_string(2.0 / *spec.assert_lp) + ", datum not in L^p");
  }
  Field f = std::visit(
      [&grid, &spec](const auto& kind) -> Field {
        using T = std::decay_t<decltype(kind)>;
        if constexpr (std::is_same_v<T, SingleMode>) return single_mode(kind, grid);
        if constexpr (std::is_same_v<T, MultiMode>) return multi_mode(kind, grid);
        if constexpr (std::is_same_v<T, PowerSingularity>) return power_singularity(kind, spec.assert_lp.value_or(1.0), grid);
        if constexpr (std::is_same_v<T, Patchlike>) return patchlike(kind, grid);
      },
      spec.kind);
  f *= spec.amplitude;
  f.coeffs()(0, 0) = 0;
  return f;
}

Field build_initial(std::span<const InitialDataSpec> specs, const TorusGrid& grid) {
  Field sum(grid);
  for (const auto& s : specs) sum += build_initial(s, grid);
  return sum;
}

Field build_family(const PerturbationFamily& family, double nu, const TorusGrid& grid) {
  if (!(nu >= 0.0)) throw Error(ErrorCode::BadConfig, "family viscosity must be >= 0");
  Field base = build_initial(family.base, grid);
  if (nu == 0.0) return base;
  switch (family.mode) {
    case PerturbationFamily::Mode::None:
      return base;
    case PerturbationFamily::Mode::MollifyByNu: {
      const double ell = std::pow(nu, -family.exponent);
      return mollify(base, make_kernel<double>(grid, ell, family.profile));
    }
    case PerturbationFamily::Mode::AdditiveHighMode: {
      const SingleMode high{family.high_k1, family.high_k2, 0.0};
      return base + build_initial(InitialDataSpec{high, family.high_amplitude * std::pow(nu, family.exponent), {}}, grid);
    }
  }
  return base;
}

FamilyConvergence check_family(const PerturbationFamily& family, std::span<const double> nu_ladder,
                               const TorusGrid& grid, double p) {
  FamilyConvergence out;
  const Field base = build_family(family, 0.0, grid);
  for (double nu : nu_ladder) out.distances.push_back(lp_norm(build_family(family, nu, grid) - base, p));
  for (std::size_t i = 1; i < out.distances.size(); ++i)
    if (out.distances[i] > 1.05 * out.distances[i - 1]) out.monotone = false;
  return out;
}

Forcing build_forcing(const ForcingSpec& spec, const TorusGrid& grid, double nu) {
  if (spec.zero || spec.shape.base.empty()) return Forcing::zero();
  return Forcing::analytic(build_family(spec.shape, nu, grid), spec.envelope);
}

}  // namespace vortex
