#include "vortex/forcing.hpp"

#include <cmath>

namespace vortex {

double TemporalEnvelope::value(double t) const {
  return kind == Kind::Constant ? 1.0 : std::exp(-rate * t);
}

double TemporalEnvelope::integral(double t_end) const {
  if (kind == Kind::Constant || rate == 0.0) return t_end;
  return -std::expm1(-rate * t_end) / rate;
}

Forcing Forcing::prescribed(std::shared_ptr<const Trajectory> source) {
  if (!source || source->times.empty()) throw Error(ErrorCode::MissingTrajectory, "prescribed forcing needs snapshots");
  for (const auto& s : source->snapshots)
    if (!s.is_zero_mean())
      throw Error(ErrorCode::NonZeroMeanForcing, "forcing snapshot at t=" + std::to_string(s.time()) + " has a mean");
  Forcing f;
  f.mode_ = Mode::Prescribed;
  f.source_ = std::move(source);
  return f;
}

Forcing Forcing::analytic(Field shape, TemporalEnvelope envelope) {
  if (!shape.is_zero_mean()) throw Error(ErrorCode::NonZeroMeanForcing, "forcing shape has a mean");
  Forcing f;
  f.mode_ = Mode::Analytic;
  f.shape_ = dealias(shape);
  f.envelope_ = envelope;
  return f;
}

Forcing Forcing::mollified(const MollifierKernel<double>& kernel) const {
  Forcing f = *this;
  if (f.kernel_) {
    // compose the two multipliers
    auto combined = f.kernel_->multiplier() * kernel.multiplier();
    f.kernel_ = MollifierKernel<double>(kernel.grid(), kernel.ell(), kernel.profile(), combined);
  } else {
    f.kernel_ = kernel;
  }
  return f;
}

std::optional<Field> Forcing::at(double t) const {
  std::optional<Field> g;
  switch (mode_) {
    case Mode::Zero:
      return std::nullopt;
    case Mode::Prescribed:
      g = dealias(source_->at(t));
      break;
    case Mode::Analytic:
      g = *shape_ * envelope_.value(t);
      break;
  }
  if (kernel_) g = mollify(*g, *kernel_);
  g->set_time(t);
  return g;
}

double Forcing::l1_lp_norm(double t_end, double p) const {
  switch (mode_) {
    case Mode::Zero:
      return 0.0;
    case Mode::Analytic: {
      const Field s = kernel_ ? mollify(*shape_, *kernel_) : *shape_;
      return envelope_.integral(t_end) * lp_norm(s, p);
    }
    case Mode::Prescribed: {
      // trapezoid over the stored knots inside [0, t_end]
      std::vector<double> knots;
      for (double t : source_->times)
        if (t <= t_end) knots.push_back(t);
      if (knots.empty() || knots.back() < t_end) knots.push_back(t_end);
      double total = 0.0;
      double prev = lp_norm(*at(knots.front()), p);
      for (std::size_t i = 1; i < knots.size(); ++i) {
        const double cur = lp_norm(*at(knots[i]), p);
        total += 0.5 * (prev + cur) * (knots[i] - knots[i - 1]);
        prev = cur;
      }
      return total;
    }
  }
  return 0.0;
}

Forcing Forcing::resampled(const TorusGrid& target) const {
  Forcing f = *this;
  if (shape_) f.shape_ = resample(*shape_, target);
  if (source_) f.source_ = std::make_shared<const Trajectory>(source_->resampled(target));
  // FIXME: a composed kernel (mollified twice) is rebuilt from its last scale only
  if (kernel_) f.kernel_ = make_kernel<double>(target, kernel_->ell(), kernel_->profile());
  return f;
}

}  // namespace vortex
