#pragma once

#include <cmath>
#include <string>

#include "vortex/norms.hpp"
#include "vortex/spectral_field.hpp"

namespace vortex {

/// Divergence-free velocity u = -grad^perp (-Delta)^{-1} w together with the
/// time tag of the vorticity it came from.
template <typename Scalar>
struct VelocityField {
  SpectralField<Scalar> u1;
  SpectralField<Scalar> u2;
  double source_time = 0.0;

  const TorusGrid& grid() const { return u1.grid(); }
};

/// Mode-wise u_hat = (i k2, -i k1) w_hat / |k|^2, Nyquist lines dropped.
template <typename Scalar>
VelocityField<Scalar> velocity_from_vorticity(const SpectralField<Scalar>& w) {
  using Complex = std::complex<Scalar>;
  const double mean = std::abs(w.mean_coeff());
  if (mean > 1e-14 * static_cast<double>(w.max_coeff_abs()) && mean > 0.0)
    throw Error(ErrorCode::NonZeroMean, "vorticity mean coefficient " + std::to_string(mean) + " is not zero");

  const TorusGrid& g = w.grid();
  const int nyq = g.half();
  VelocityField<Scalar> out{SpectralField<Scalar>(g, w.time()), SpectralField<Scalar>(g, w.time()), w.time()};
  for (int a = 0; a < g.n(); ++a) {
    const int k1 = g.k1(a);
    for (int b = 0; b < g.spectral_cols(); ++b) {
      const int k2 = b;
      const int kk = k1 * k1 + k2 * k2;
      if (kk == 0 || std::abs(k1) == nyq || k2 == nyq) continue;
      // i * psi_hat with psi = (-Delta)^{-1} w
      const Complex ipsi = Complex(0, 1) * (w.coeffs()(a, b) / Scalar(kk));
      out.u1.coeffs()(a, b) = Scalar(k2) * ipsi;
      out.u2.coeffs()(a, b) = -Scalar(k1) * ipsi;
    }
  }
  return out;
}

/// i k1 u1_hat + i k2 u2_hat.
template <typename Scalar>
SpectralField<Scalar> divergence(const VelocityField<Scalar>& u) {
  return derivative(u.u1, 1) + derivative(u.u2, 2);
}

/// i k1 u2_hat - i k2 u1_hat.
template <typename Scalar>
SpectralField<Scalar> curl(const VelocityField<Scalar>& u) {
  return derivative(u.u2, 1) - derivative(u.u1, 2);
}

/// Largest nodal speed |u|.
template <typename Scalar>
double max_speed(const VelocityField<Scalar>& u) {
  const auto p1 = to_physical(u.u1);
  const auto p2 = to_physical(u.u2);
  return std::sqrt(static_cast<double>((p1.values().abs2() + p2.values().abs2()).maxCoeff()));
}

/// L^p norm of the full velocity gradient, (sum_ij |d_i u_j|^2)^{1/2} pointwise.
template <typename Scalar>
double sobolev_norm_gradient(const VelocityField<Scalar>& u, double p) {
  require_exponent(p);
  const auto d11 = to_physical(derivative(u.u1, 1));
  const auto d12 = to_physical(derivative(u.u1, 2));
  const auto d21 = to_physical(derivative(u.u2, 1));
  const auto d22 = to_physical(derivative(u.u2, 2));
  PhysicalField<Scalar> mag(u.grid());
  mag.values() = (d11.values().abs2() + d12.values().abs2() + d21.values().abs2() + d22.values().abs2()).sqrt();
  return lp_norm(mag, p);
}

}  // namespace vortex
