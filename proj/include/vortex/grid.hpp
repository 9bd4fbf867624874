#pragma once

#include <cmath>
#include <numbers>
#include <string>

#include "vortex/error.hpp"

namespace vortex {

/// Uniform n x n grid on the torus [0, 2pi)^2.
///
/// Spectral storage follows the real-to-complex layout: row a in [0, n)
/// holds k1 = a (a <= n/2) or a - n, column b in [0, n/2] holds k2 = b.
/// Negative k2 are implied by Hermitian symmetry.
class TorusGrid {
 public:
  TorusGrid() = default;

  explicit TorusGrid(int n, double dealias_fraction = 2.0 / 3.0)
      : n_(n), dealias_fraction_(dealias_fraction) {
    if (n < 8 || n % 2 != 0)
      throw Error(ErrorCode::InvalidGrid, "grid size must be even and >= 8, got " + std::to_string(n));
    if (!(dealias_fraction > 0.0 && dealias_fraction <= 1.0))
      throw Error(ErrorCode::InvalidGrid, "dealias fraction must lie in (0, 1]");
  }

  int n() const { return n_; }
  int half() const { return n_ / 2; }
  /// Number of stored spectral columns (k2 = 0..n/2).
  int spectral_cols() const { return n_ / 2 + 1; }
  double spacing() const { return 2.0 * std::numbers::pi / n_; }
  double cell_area() const { return spacing() * spacing(); }
  double dealias_fraction() const { return dealias_fraction_; }

  /// Largest retained |k_i| after dealiasing.
  int cutoff() const {
    // the small bias keeps exact products such as (2/3)*48 = 32 from rounding down
    return static_cast<int>(std::floor(dealias_fraction_ * half() + 1e-9));
  }

  int k1(int row) const { return row <= half() ? row : row - n_; }
  int k2(int col) const { return col; }
  int row_of(int k1) const { return k1 >= 0 ? k1 : k1 + n_; }

  double node(int i) const { return spacing() * i; }

  friend bool operator==(const TorusGrid& a, const TorusGrid& b) {
    return a.n_ == b.n_ && a.dealias_fraction_ == b.dealias_fraction_;
  }

 private:
  int n_ = 8;
  double dealias_fraction_ = 2.0 / 3.0;
};

inline void require_same_grid(const TorusGrid& a, const TorusGrid& b) {
  if (!(a == b))
    throw Error(ErrorCode::GridMismatch,
                "grids differ (n=" + std::to_string(a.n()) + " vs n=" + std::to_string(b.n()) + ")");
}

}  // namespace vortex
