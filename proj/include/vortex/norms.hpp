#pragma once

#include <cmath>
#include <limits>

#include "vortex/spectral_field.hpp"

namespace vortex {

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

inline void require_exponent(double p) {
  if (!(p >= 1.0)) throw Error(ErrorCode::BadExponent, "L^p exponent must be >= 1, got " + std::to_string(p));
}

/// (sum |f|^p h^2)^{1/p} over the nodes; p = infinity gives the nodal max.
template <typename Scalar>
double lp_norm(const PhysicalField<Scalar>& f, double p) {
  require_exponent(p);
  const auto& v = f.values();
  if (std::isinf(p)) return static_cast<double>(v.abs().maxCoeff());
  const double h2 = f.grid().cell_area();
  if (p == 2.0) return std::sqrt(v.template cast<double>().abs2().sum() * h2);
  if (p == 1.0) return v.template cast<double>().abs().sum() * h2;
  return std::pow(v.template cast<double>().abs().pow(p).sum() * h2, 1.0 / p);
}

template <typename Scalar>
double lp_norm(const SpectralField<Scalar>& f, double p) {
  require_exponent(p);
  return lp_norm(to_physical(f), p);
}

/// Integral of f g over the torus by nodal quadrature.
template <typename Scalar>
double inner(const PhysicalField<Scalar>& f, const PhysicalField<Scalar>& g) {
  require_same_grid(f.grid(), g.grid());
  return (f.values().template cast<double>() * g.values().template cast<double>()).sum() * f.grid().cell_area();
}

/// Squared L^2 norm from the coefficients alone, (2 pi)^2 sum_k |c_k|^2.
template <typename Scalar>
double l2_norm_squared_parseval(const SpectralField<Scalar>& f) {
  const TorusGrid& g = f.grid();
  const auto& c = f.coeffs();
  double interior = 0.0, edges = 0.0;
  for (int a = 0; a < g.n(); ++a) {
    for (int b = 0; b < g.spectral_cols(); ++b) {
      const double m = std::norm(std::complex<double>(c(a, b)));
      if (b == 0 || b == g.half())
        edges += m;
      else
        interior += m;
    }
  }
  const double four_pi2 = 4.0 * std::numbers::pi * std::numbers::pi;
  return four_pi2 * (edges + 2.0 * interior);
}

}  // namespace vortex
