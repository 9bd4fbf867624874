#pragma once

#include <functional>
#include <memory>
#include <variant>

#include "vortex/biot_savart.hpp"
#include "vortex/forcing.hpp"
#include "vortex/trajectory.hpp"

namespace vortex {

using Velocity = VelocityField<double>;

/// Velocity prescribed as a function of time.
using VelocityProvider = std::function<Velocity(double t)>;

/// Velocity reconstructed from a stored vorticity trajectory, linear in time
/// between snapshots. Throws TrajectoryGap outside the stored range.
class FrozenVelocity {
 public:
  explicit FrozenVelocity(std::shared_ptr<const Trajectory> source);

  Velocity operator()(double t) const;
  const Trajectory& source() const { return *source_; }

 private:
  std::shared_ptr<const Trajectory> source_;
};

/// One step of the vorticity equation dw/dt + u.grad w = nu Lap w + g with
/// u recovered from w. Diffusion is integrated exactly through the factor
/// e^{-nu |k|^2 dt}; advection and forcing use Williamson's low-storage RK3.
/// The step starts at w.time(). Throws CFLViolation if dt exceeds
/// cfl * spacing / max|u|.
Field step_nonlinear(const Field& w, const SolverConfig& cfg, const Forcing& forcing, double dt);

/// Same scheme for the linear problem with a prescribed velocity.
Field step_linear(const Field& theta, const VelocityProvider& velocity, const SolverConfig& cfg,
                  const Forcing& forcing, double dt);

struct Nonlinear {};
struct LinearFrozen {
  std::shared_ptr<const Trajectory> velocity_source;
};
using SolveMode = std::variant<Nonlinear, LinearFrozen>;

/// Adaptive loop from t = 0 to cfg.t_end with dt = min(dt_max, cfl h / |u|_inf).
/// Snapshots are kept at t = 0, every snapshot_stride accepted steps and at
/// t_end. In LinearFrozen mode the steps land on the source's snapshot
/// times so the velocity is only interpolated inside a step.
///
/// Step failures (CFL, blow-up, gaps) stop the loop and are reported in
/// Trajectory::failure; invalid inputs throw.
Trajectory solve(const Field& w0, const SolverConfig& cfg, const Forcing& forcing, const SolveMode& mode = Nonlinear{});

}  // namespace vortex
