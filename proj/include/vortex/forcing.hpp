#pragma once

#include <memory>
#include <optional>
#include <vector>

#include "vortex/mollifier.hpp"
#include "vortex/trajectory.hpp"

namespace vortex {

/// Scalar time profile multiplying a fixed spatial shape.
struct TemporalEnvelope {
  enum class Kind { Constant, Exponential };
  Kind kind = Kind::Constant;
  double rate = 0.0;  // e^{-rate t} for Exponential

  double value(double t) const;
  /// Integral of the envelope over [0, t_end].
  double integral(double t_end) const;
};

/// The source term g(t, x) of a vorticity equation: zero, a stored
/// trajectory interpolated in time, or shape(x) * envelope(t). An optional
/// mollifier is applied to every evaluation.
class Forcing {
 public:
  enum class Mode { Zero, Prescribed, Analytic };

  static Forcing zero() { return Forcing(); }
  /// Throws NonZeroMeanForcing if any snapshot carries a mean.
  static Forcing prescribed(std::shared_ptr<const Trajectory> source);
  static Forcing analytic(Field shape, TemporalEnvelope envelope);

  Mode mode() const { return mode_; }
  bool is_zero() const { return mode_ == Mode::Zero; }

  /// The same forcing convolved with a mollifier.
  Forcing mollified(const MollifierKernel<double>& kernel) const;
  const std::optional<MollifierKernel<double>>& kernel() const { return kernel_; }

  /// g(t), dealiased; std::nullopt for Zero forcing.
  std::optional<Field> at(double t) const;

  /// || g ||_{L^1(0, t_end; L^p)}. Closed form in time for Analytic forcing,
  /// trapezoid over the stored knots for Prescribed forcing.
  double l1_lp_norm(double t_end, double p) const;

  /// Same forcing resampled onto another grid.
  Forcing resampled(const TorusGrid& target) const;

  const std::optional<Field>& shape() const { return shape_; }
  const TemporalEnvelope& envelope() const { return envelope_; }
  const std::shared_ptr<const Trajectory>& source() const { return source_; }

 private:
  Mode mode_ = Mode::Zero;
  std::optional<Field> shape_;
  TemporalEnvelope envelope_;
  std::shared_ptr<const Trajectory> source_;
  std::optional<MollifierKernel<double>> kernel_;
};

}  // namespace vortex
