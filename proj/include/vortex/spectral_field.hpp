#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <complex>
#include <stdexcept>
#include <string>

#include "vortex/error.hpp"
#include "vortex/fft.hpp"
#include "vortex/grid.hpp"

namespace vortex {

/// Nodal values on the grid, row-major: values(i, j) lives at (2 pi i / n, 2 pi j / n).
template <typename Scalar>
class PhysicalField {
 public:
  using Values = Eigen::Array<Scalar, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

  explicit PhysicalField(const TorusGrid& grid)
      : grid_(grid), values_(Values::Zero(grid.n(), grid.n())) {}

  PhysicalField(const TorusGrid& grid, Values values) : grid_(grid), values_(std::move(values)) {
    if (values_.rows() != grid.n() || values_.cols() != grid.n())
      throw Error(ErrorCode::GridMismatch, "nodal array does not match grid size");
  }

  /// Samples fn(x1, x2) at every node.
  template <typename Fn>
  static PhysicalField sample(const TorusGrid& grid, Fn&& fn) {
    PhysicalField out(grid);
    for (int i = 0; i < grid.n(); ++i)
      for (int j = 0; j < grid.n(); ++j)
        out.values_(i, j) = static_cast<Scalar>(fn(grid.node(i), grid.node(j)));
    return out;
  }

  const TorusGrid& grid() const { return grid_; }
  const Values& values() const { return values_; }
  Values& values() { return values_; }
  Scalar operator()(int i, int j) const { return values_(i, j); }

  Scalar mean() const { return values_.mean(); }
  Scalar max_abs() const { return values_.abs().maxCoeff(); }
  bool all_finite() const { return values_.isFinite().all(); }

 private:
  TorusGrid grid_;
  Values values_;
};

/// Zero-mean real scalar field stored as Fourier coefficients in the
/// half-complex layout described on TorusGrid. coeff(k) is the continuous
/// Fourier coefficient (1/n^2) sum_x f(x) e^{-ik.x}.
template <typename Scalar>
class SpectralField {
 public:
  using Complex = std::complex<Scalar>;
  using Coeffs = Eigen::Array<Complex, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

  explicit SpectralField(const TorusGrid& grid, double time = 0.0)
      : grid_(grid), coeffs_(Coeffs::Zero(grid.n(), grid.spectral_cols())), time_(time) {}

  SpectralField(const TorusGrid& grid, Coeffs coeffs, double time = 0.0)
      : grid_(grid), coeffs_(std::move(coeffs)), time_(time) {
    if (coeffs_.rows() != grid.n() || coeffs_.cols() != grid.spectral_cols())
      throw Error(ErrorCode::GridMismatch, "coefficient array does not match grid size");
  }

  const TorusGrid& grid() const { return grid_; }
  const Coeffs& coeffs() const { return coeffs_; }
  Coeffs& coeffs() { return coeffs_; }
  double time() const { return time_; }
  void set_time(double t) { time_ = t; }

  /// Coefficient of e^{ik.x} for any |k_i| <= n/2.
  Complex coeff(int k1, int k2) const {
    check_range(k1, k2);
    if (k2 < 0) return std::conj(coeffs_(grid_.row_of(-k1), -k2));
    return coeffs_(grid_.row_of(k1), k2);
  }

  /// Sets coeff(k) = v and coeff(-k) = conj(v) so the field stays real.
  void set_coeff(int k1, int k2, Complex v) {
    check_range(k1, k2);
    if (k2 < 0 || (k2 == 0 && k1 < 0)) {
      k1 = -k1;
      k2 = -k2;
      v = std::conj(v);
    }
    const int n = grid_.n();
    const int row = grid_.row_of(k1);
    if (k2 == 0 || k2 == grid_.half()) {
      const int partner = (n - row) % n;
      if (partner == row) v = Complex(v.real(), 0);
      coeffs_(partner, k2) = std::conj(v);
    }
    coeffs_(row, k2) = v;
  }

  Complex mean_coeff() const { return coeffs_(0, 0); }
  bool is_zero_mean() const { return coeffs_(0, 0) == Complex(0); }
  Scalar max_coeff_abs() const { return coeffs_.abs().maxCoeff(); }

  SpectralField& operator+=(const SpectralField& other) {
    require_same_grid(grid_, other.grid_);
    coeffs_ += other.coeffs_;
    return *this;
  }
  SpectralField& operator-=(const SpectralField& other) {
    require_same_grid(grid_, other.grid_);
    coeffs_ -= other.coeffs_;
    return *this;
  }
  SpectralField& operator*=(Scalar s) {
    coeffs_ *= s;
    return *this;
  }

  friend SpectralField operator+(SpectralField a, const SpectralField& b) { return a += b; }
  friend SpectralField operator-(SpectralField a, const SpectralField& b) { return a -= b; }
  friend SpectralField operator*(SpectralField a, Scalar s) { return a *= s; }
  friend SpectralField operator*(Scalar s, SpectralField a) { return a *= s; }
  friend SpectralField operator-(SpectralField a) { return a *= Scalar(-1); }

 private:
  void check_range(int k1, int k2) const {
    if (std::abs(k1) > grid_.half() || std::abs(k2) > grid_.half())
      throw std::out_of_range("wavevector outside grid band");
  }

  TorusGrid grid_;
  Coeffs coeffs_;
  double time_ = 0.0;
};

using Field = SpectralField<double>;
using Nodal = PhysicalField<double>;

enum class MeanPolicy { Project, Keep };

namespace detail {

/// Makes the self-paired columns (k2 = 0 and k2 = n/2) exactly Hermitian.
template <typename Coeffs>
void enforce_hermitian(Coeffs& c, int n) {
  using Complex = typename Coeffs::Scalar;
  for (int col : {0, n / 2}) {
    for (int a = 1; a < n / 2; ++a) {
      const Complex v = (c(a, col) + std::conj(c(n - a, col))) / typename Complex::value_type(2);
      c(a, col) = v;
      c(n - a, col) = std::conj(v);
    }
    c(0, col) = Complex(c(0, col).real(), 0);
    c(n / 2, col) = Complex(c(n / 2, col).real(), 0);
  }
}

/// Multiplies every stored coefficient by fn(k1, k2).
template <typename Scalar, typename Fn>
SpectralField<Scalar> apply_multiplier(const SpectralField<Scalar>& f, Fn&& fn) {
  const TorusGrid& g = f.grid();
  SpectralField<Scalar> out(g, f.time());
  for (int a = 0; a < g.n(); ++a) {
    const int k1 = g.k1(a);
    for (int b = 0; b < g.spectral_cols(); ++b) out.coeffs()(a, b) = fn(k1, b) * f.coeffs()(a, b);
  }
  return out;
}

}  // namespace detail

template <typename Scalar>
PhysicalField<Scalar> to_physical(const SpectralField<Scalar>& f) {
  const TorusGrid& g = f.grid();
  typename SpectralField<Scalar>::Coeffs scratch = f.coeffs();
  PhysicalField<Scalar> out(g);
  fft::inverse(g.n(), scratch.data(), out.values().data());
  return out;
}

/// Forward transform. The mean is removed unless MeanPolicy::Keep is asked for.
template <typename Scalar>
SpectralField<Scalar> to_spectral(const PhysicalField<Scalar>& f, MeanPolicy policy = MeanPolicy::Project,
                                  double time = 0.0) {
  if (!f.all_finite()) throw Error(ErrorCode::NonFiniteInput, "nodal values contain NaN or Inf");
  const TorusGrid& g = f.grid();
  SpectralField<Scalar> out(g, time);
  fft::forward(g.n(), f.values().data(), out.coeffs().data());
  out.coeffs() *= Scalar(1) / (Scalar(g.n()) * Scalar(g.n()));
  detail::enforce_hermitian(out.coeffs(), g.n());
  if (policy == MeanPolicy::Project) out.coeffs()(0, 0) = 0;
  return out;
}

/// Spectral derivative along axis 1 (x1) or 2 (x2). The Nyquist line of the
/// differentiated axis is dropped so the result stays real.
template <typename Scalar>
SpectralField<Scalar> derivative(const SpectralField<Scalar>& f, int axis) {
  if (axis != 1 && axis != 2) throw std::invalid_argument("axis must be 1 or 2");
  using Complex = std::complex<Scalar>;
  const int nyq = f.grid().half();
  return detail::apply_multiplier(f, [axis, nyq](int k1, int k2) {
    const int k = axis == 1 ? k1 : k2;
    return std::abs(k) == nyq ? Complex(0) : Complex(0, Scalar(k));
  });
}

template <typename Scalar>
SpectralField<Scalar> laplacian(const SpectralField<Scalar>& f) {
  return detail::apply_multiplier(f, [](int k1, int k2) { return Scalar(-(k1 * k1 + k2 * k2)); });
}

/// (-Delta)^{-1}, with the k = 0 mode annihilated.
template <typename Scalar>
SpectralField<Scalar> inverse_laplacian(const SpectralField<Scalar>& f) {
  return detail::apply_multiplier(f, [](int k1, int k2) {
    const int k2sum = k1 * k1 + k2 * k2;
    return k2sum == 0 ? Scalar(0) : Scalar(1) / Scalar(k2sum);
  });
}

/// Zeroes every mode with max(|k1|, |k2|) above the grid cutoff.
template <typename Scalar>
SpectralField<Scalar> dealias(const SpectralField<Scalar>& f) {
  const int cut = f.grid().cutoff();
  return detail::apply_multiplier(f, [cut](int k1, int k2) {
    return (std::abs(k1) > cut || k2 > cut) ? Scalar(0) : Scalar(1);
  });
}

/// Pointwise product evaluated on the nodes, transformed back and dealiased.
template <typename Scalar>
SpectralField<Scalar> product(const SpectralField<Scalar>& f, const SpectralField<Scalar>& g,
                              MeanPolicy policy = MeanPolicy::Project) {
  require_same_grid(f.grid(), g.grid());
  PhysicalField<Scalar> pf = to_physical(f);
  const PhysicalField<Scalar> pg = to_physical(g);
  pf.values() *= pg.values();
  return dealias(to_spectral(pf, policy, f.time()));
}

/// Copies the modes representable on both grids (Nyquist lines excluded).
template <typename Scalar>
SpectralField<Scalar> resample(const SpectralField<Scalar>& f, const TorusGrid& target) {
  SpectralField<Scalar> out(target, f.time());
  const int kmax = std::min(f.grid().half(), target.half()) - 1;
  for (int k1 = -kmax; k1 <= kmax; ++k1)
    for (int k2 = 0; k2 <= kmax; ++k2)
      out.coeffs()(target.row_of(k1), k2) = f.coeffs()(f.grid().row_of(k1), k2);
  return out;
}

/// amplitude * cos(k.x), built directly in spectral space.
template <typename Scalar = double>
SpectralField<Scalar> cosine_mode(const TorusGrid& grid, int k1, int k2, Scalar amplitude = 1) {
  SpectralField<Scalar> f(grid);
  if (k1 != 0 || k2 != 0) f.set_coeff(k1, k2, {amplitude / 2, 0});
  return f;
}

/// amplitude * sin(k.x), built directly in spectral space.
template <typename Scalar = double>
SpectralField<Scalar> sine_mode(const TorusGrid& grid, int k1, int k2, Scalar amplitude = 1) {
  SpectralField<Scalar> f(grid);
  if (k1 != 0 || k2 != 0) f.set_coeff(k1, k2, {0, -amplitude / 2});
  return f;
}

}  // namespace vortex
