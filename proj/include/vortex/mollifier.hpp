#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <numbers>
#include <string>

#include "vortex/norms.hpp"
#include "vortex/spectral_field.hpp"

namespace vortex {

enum class MollifierProfile { SmoothBump, Gaussian };

/// The kernel phi_ell(x) = ell^2 phi_1(ell x) held as its Fourier multiplier,
/// normalized so that the zero mode is exactly 1.
template <typename Scalar>
class MollifierKernel {
 public:
  using Multiplier = Eigen::Array<Scalar, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

  MollifierKernel(const TorusGrid& grid, double ell, MollifierProfile profile, Multiplier multiplier)
      : grid_(grid), ell_(ell), profile_(profile), multiplier_(std::move(multiplier)) {}

  const TorusGrid& grid() const { return grid_; }
  double ell() const { return ell_; }
  MollifierProfile profile() const { return profile_; }
  const Multiplier& multiplier() const { return multiplier_; }

  /// m_hat(k) for |k_i| <= n/2.
  Scalar at(int k1, int k2) const { return multiplier_(grid_.row_of(k1), std::abs(k2)); }

 private:
  TorusGrid grid_;
  double ell_;
  MollifierProfile profile_;
  Multiplier multiplier_;
};

/// Unnormalized bump exp(-1 / (1 - r^2)) on the unit disk.
inline double unit_bump(double r) {
  if (r >= 1.0) return 0.0;
  return std::exp(-1.0 / (1.0 - r * r));
}

/// Distance from (x1, x2) to (c1, c2) on the 2 pi periodic torus.
inline double torus_distance(double x1, double x2, double c1, double c2) {
  const double two_pi = 2.0 * std::numbers::pi;
  auto wrap = [two_pi](double d) {
    d = std::fmod(std::abs(d), two_pi);
    return std::min(d, two_pi - d);
  };
  return std::hypot(wrap(x1 - c1), wrap(x2 - c2));
}

/// Builds phi_ell on the grid. ell = infinity yields the identity multiplier.
///
/// SmoothBump samples the periodized bump of radius 1/ell at the nodes and
/// normalizes its discrete transform, so convolution is a nonnegative
/// average of nodal values. Gaussian uses exp(-|k|^2 / (2 ell^2)).
template <typename Scalar = double>
MollifierKernel<Scalar> make_kernel(const TorusGrid& grid, double ell, MollifierProfile profile) {
  using Multiplier = typename MollifierKernel<Scalar>::Multiplier;
  if (!(ell >= 1.0 / std::numbers::pi))
    throw Error(ErrorCode::ScaleTooCoarse, "mollifier scale ell=" + std::to_string(ell) + " is below 1/pi");

  const int n = grid.n();
  const bool unresolved = std::isfinite(ell) && static_cast<double>(n) / ell < 8.0;
  Multiplier m(n, grid.spectral_cols());

  if (profile == MollifierProfile::Gaussian) {
    if (unresolved)
      warn("Gaussian mollifier with ell=" + std::to_string(ell) + " is narrower than 8 nodes on n=" +
           std::to_string(n));
    for (int a = 0; a < n; ++a) {
      const int k1 = grid.k1(a);
      for (int b = 0; b < grid.spectral_cols(); ++b) {
        const double kk = static_cast<double>(k1 * k1 + b * b);
        m(a, b) = static_cast<Scalar>(std::isinf(ell) ? 1.0 : std::exp(-kk / (2.0 * ell * ell)));
      }
    }
    return MollifierKernel<Scalar>(grid, ell, profile, std::move(m));
  }

  if (unresolved)
    throw Error(ErrorCode::UnresolvedKernel,
                "bump of radius 1/" + std::to_string(ell) + " spans fewer than 8 nodes on n=" + std::to_string(n));
  if (std::isinf(ell)) {
    m.setOnes();
    return MollifierKernel<Scalar>(grid, ell, profile, std::move(m));
  }

  const auto samples =
      PhysicalField<double>::sample(grid, [ell](double x1, double x2) { return unit_bump(ell * torus_distance(x1, x2, 0, 0)); });
  const auto hat = to_spectral(samples, MeanPolicy::Keep);
  const double mass = hat.coeffs()(0, 0).real();
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < grid.spectral_cols(); ++b) m(a, b) = static_cast<Scalar>(hat.coeffs()(a, b).real() / mass);
  m(0, 0) = 1;
  return MollifierKernel<Scalar>(grid, ell, profile, std::move(m));
}

template <typename Scalar>
SpectralField<Scalar> mollify(const SpectralField<Scalar>& f, const MollifierKernel<Scalar>& kernel) {
  require_same_grid(f.grid(), kernel.grid());
  SpectralField<Scalar> out = f;
  out.coeffs() *= kernel.multiplier().template cast<std::complex<Scalar>>();
  return out;
}

/// || f * phi_ell - f ||_{L^p}.
template <typename Scalar>
double mollification_error(const SpectralField<Scalar>& f, const MollifierKernel<Scalar>& kernel, double p) {
  require_exponent(p);
  return lp_norm(mollify(f, kernel) - f, p);
}

}  // namespace vortex
