#include "vortex/evolution.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>

#include "vortex/diagnostics.hpp"

namespace vortex {
namespace {

// Williamson (1980) low-storage RK3: q <- A q + dt f, w <- w + B q.
constexpr std::array<double, 3> kA = {0.0, -5.0 / 9.0, -153.0 / 128.0};
constexpr std::array<double, 3> kB = {1.0 / 3.0, 15.0 / 16.0, 8.0 / 15.0};
constexpr std::array<double, 4> kC = {0.0, 1.0 / 3.0, 3.0 / 4.0, 1.0};

struct Rhs {
  Field value;
  double max_speed;
};

/// -u.grad w + g(t), dealiased, evaluated nodally.
Rhs transport_rhs(const Field& w, const Velocity& u, const Forcing& forcing, double t) {
  const auto u1 = to_physical(u.u1);
  const auto u2 = to_physical(u.u2);
  const auto w1 = to_physical(derivative(w, 1));
  const auto w2 = to_physical(derivative(w, 2));
  Nodal adv(w.grid());
  adv.values() = u1.values() * w1.values() + u2.values() * w2.values();
  const double speed = std::sqrt((u1.values().abs2() + u2.values().abs2()).maxCoeff());
  Field r = to_spectral(adv, MeanPolicy::Project, t);
  r *= -1.0;
  if (auto g = forcing.at(t)) r += *g;
  return {dealias(r), speed};
}

/// e^{-nu |k|^2 tau} on every stored mode.
Field::Coeffs decay_factor(const TorusGrid& g, double nu, double tau) {
  Field::Coeffs m(g.n(), g.spectral_cols());
  for (int a = 0; a < g.n(); ++a) {
    const int k1 = g.k1(a);
    for (int b = 0; b < g.spectral_cols(); ++b) m(a, b) = std::exp(-nu * static_cast<double>(k1 * k1 + b * b) * tau);
  }
  return m;
}

void check_cfl(double dt, double cfl, double spacing, double speed) {
  if (speed > 0.0 && dt > cfl * spacing / speed * (1.0 + 1e-9))
    throw Error(ErrorCode::CFLViolation, "dt=" + std::to_string(dt) + " exceeds cfl*h/|u|=" +
                                             std::to_string(cfl * spacing / speed));
}

/// Integrating-factor RK3 step. Registers are carried in the frame of the
/// current stage time, so only decaying exponentials are ever applied.
template <typename StageRhs>
Field advance(const Field& w0, double nu, double dt, double cfl, StageRhs&& stage_rhs) {
  const TorusGrid& g = w0.grid();
  const double t0 = w0.time();
  Field w = w0;
  Field q(g, t0);
  for (int s = 0; s < 3; ++s) {
    const Rhs f = stage_rhs(w, t0 + kC[s] * dt);
    if (s == 0) check_cfl(dt, cfl, g.spacing(), f.max_speed);
    q *= kA[s];
    q.coeffs() += dt * f.value.coeffs();
    w.coeffs() += kB[s] * q.coeffs();
    if (nu > 0.0) {
      const auto decay = decay_factor(g, nu, (kC[s + 1] - kC[s]) * dt);
      w.coeffs() *= decay;
      q.coeffs() *= decay;
    }
  }
  Field out = dealias(w);
  out.coeffs()(0, 0) = 0;
  out.set_time(t0 + dt);
  return out;
}

Field nonlinear_step(const Field& w, double nu, double cfl, const Forcing& forcing, double dt) {
  return advance(w, nu, dt, cfl, [&](const Field& stage, double t) {
    return transport_rhs(stage, velocity_from_vorticity(stage), forcing, t);
  });
}

Field linear_step(const Field& theta, const VelocityProvider& velocity, double nu, double cfl, const Forcing& forcing,
                  double dt) {
  return advance(theta, nu, dt, cfl,
                 [&](const Field& stage, double t) { return transport_rhs(stage, velocity(t), forcing, t); });
}

}  // namespace

FrozenVelocity::FrozenVelocity(std::shared_ptr<const Trajectory> source) : source_(std::move(source)) {
  if (!source_ || source_->times.empty()) throw Error(ErrorCode::MissingTrajectory, "frozen velocity needs a trajectory");
}

Velocity FrozenVelocity::operator()(double t) const { return velocity_from_vorticity(source_->at(t)); }

Field step_nonlinear(const Field& w, const SolverConfig& cfg, const Forcing& forcing, double dt) {
  if (dt > cfg.dt_max * (1.0 + 1e-9)) throw Error(ErrorCode::CFLViolation, "dt exceeds dt_max");
  return nonlinear_step(w, cfg.nu, cfg.cfl, forcing, dt);
}

Field step_linear(const Field& theta, const VelocityProvider& velocity, const SolverConfig& cfg,
                  const Forcing& forcing, double dt) {
  if (dt > cfg.dt_max * (1.0 + 1e-9)) throw Error(ErrorCode::CFLViolation, "dt exceeds dt_max");
  return linear_step(theta, velocity, cfg.nu, cfg.cfl, forcing, dt);
}

Trajectory solve(const Field& w0, const SolverConfig& cfg, const Forcing& forcing, const SolveMode& mode) {
  cfg.validate();
  require_same_grid(w0.grid(), cfg.grid);
  if (!w0.is_zero_mean()) throw Error(ErrorCode::NonZeroMean, "initial vorticity must have zero mean");

  const auto* linear = std::get_if<LinearFrozen>(&mode);
  std::optional<FrozenVelocity> frozen;
  if (linear) {
    frozen.emplace(linear->velocity_source);
    require_same_grid(linear->velocity_source->grid(), cfg.grid);
  }

  Trajectory traj;
  traj.config = cfg;
  Field w = w0;
  w.set_time(0.0);
  traj.times.push_back(0.0);
  traj.snapshots.push_back(w);
  traj.records.push_back(snapshot_record(w, cfg.p));

  const double h = cfg.grid.spacing();
  const double t_end = cfg.t_end;
  const double end_slack = 1e-12 * std::max(1.0, t_end);
  const double linf0 = traj.records.front().linf_norm;
  double t = 0.0;

  // knots the linear solve must land on
  std::vector<double> knots;
  if (linear) knots = linear->velocity_source->times;

  while (t < t_end - end_slack) {
    try {
      const Velocity u = linear ? (*frozen)(t) : velocity_from_vorticity(w);
      const double speed = max_speed(u);
      double target = t_end;
      if (linear) {
        auto it = std::upper_bound(knots.begin(), knots.end(), t + end_slack);
        if (it != knots.end()) target = std::min(target, *it);
      }
      double dt = cfg.dt_max;
      if (speed > 0.0) dt = std::min(dt, cfg.cfl * h / speed);
      const bool lands = dt >= target - t - end_slack;
      if (lands) dt = target - t;

      w = linear ? linear_step(w, *frozen, cfg.nu, cfg.cfl, forcing, dt) : nonlinear_step(w, cfg.nu, cfg.cfl, forcing, dt);
      t = lands ? target : t + dt;
      w.set_time(t);
      ++traj.accepted_steps;

      const Nodal nodal = to_physical(w);
      const double linf = nodal.max_abs();
      if (!std::isfinite(linf) || (linf0 > 0.0 && linf > 1e6 * linf0))
        throw Error(ErrorCode::BlowupDetected, "|w|_inf=" + std::to_string(linf) + " at t=" + std::to_string(t));
    } catch (const Error& e) {
      const ErrorCode code = e.code() == ErrorCode::NonFiniteInput ? ErrorCode::BlowupDetected : e.code();
      traj.failure = Failure{code, e.what()};
      break;
    }

    if (traj.accepted_steps % cfg.snapshot_stride == 0 || t >= t_end) {
      traj.times.push_back(t);
      traj.snapshots.push_back(w);
      traj.records.push_back(snapshot_record(w, cfg.p));
    }
  }
  return traj;
}

}  // namespace vortex
