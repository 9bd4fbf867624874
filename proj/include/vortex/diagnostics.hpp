#pragma once

#include <string>
#include <vector>

#include "vortex/biot_savart.hpp"
#include "vortex/forcing.hpp"
#include "vortex/norms.hpp"
#include "vortex/trajectory.hpp"

namespace vortex {

/// || grad |w|^{p/2} ||_{L^2}, with |w| smoothed to (w^2 + delta^2)^{1/2}.
double grad_halfp_norm(const Field& w, double p, double delta = 1e-12);

/// Norms of one snapshot: exponents p and 2 plus the nodal max.
DiagnosticsRecord snapshot_record(const Field& w, double p);

struct EnergyReport {
  bool inviscid = false;
  double p = 2.0;
  double initial_lp = 0.0;      // ||w_0||_p
  double sup_lp = 0.0;          // sup_t ||w(t)||_p
  double dissipation = 0.0;     // nu (int_0^T ||grad |w|^{p/2}||^2 dt)^{1/p}
  double forcing_l1_lp = 0.0;   // ||g||_{L^1_t L^p}
  double rhs = 0.0;             // ||w_0||_p + ||g||  (viscous), ||w_0||_p + p ||g||  (inviscid)
  double ratio = 0.0;           // (sup_lp + dissipation) / rhs
  double sup_ratio = 0.0;       // sup_t ||w(t)||_p / ||w_0||_p
  /// max over snapshots t > 0 of (||w(t)||_p - ||w_0||_p - p int_0^t ||g||_p) / rhs;
  /// negative when the inviscid bound holds with margin everywhere.
  double inviscid_excess = 0.0;
};

/// Measured pieces of the L^p energy estimates. The viscous constant is not
/// known, so for nu > 0 only the ratio is reported.
EnergyReport energy_estimate_report(const Trajectory& traj, const Forcing& forcing, double p);

/// Admissible renormalizations: bounded, bounded derivative, beta(0) = 0.
class RenormalizerBeta {
 public:
  enum class Kind { Tanh, Rational, ClippedIdentity };

  static RenormalizerBeta tanh() { return RenormalizerBeta(Kind::Tanh, 0.0); }
  static RenormalizerBeta rational() { return RenormalizerBeta(Kind::Rational, 0.0); }
  /// beta(s) = s on [-window, window], saturating smoothly outside.
  static RenormalizerBeta clipped_identity(double window) { return RenormalizerBeta(Kind::ClippedIdentity, window); }

  Kind kind() const { return kind_; }
  double value(double s) const;
  double derivative(double s) const;

 private:
  RenormalizerBeta(Kind kind, double window) : kind_(kind), window_(window) {}
  Kind kind_;
  double window_;
};

/// Space-time test function chi(x) psi(t) with psi(t_end) = 0.
struct TestFunction {
  enum class Profile { CosineRamp, QuadraticRamp };
  Field spatial;
  Profile profile = Profile::CosineRamp;
  double t_end = 1.0;

  double psi(double t) const;
  double dpsi(double t) const;
};

/// |int int beta(w)(d_t phi + u.grad phi) + beta'(w) g phi + int phi(0) beta(w_0)|
/// by nodal quadrature in space and the trapezoid rule over snapshots.
double renorm_residual(const Trajectory& traj, const Forcing& forcing, const RenormalizerBeta& beta,
                       const TestFunction& test);

/// The same weak residual for the equation itself (beta = identity).
double weak_residual(const Trajectory& traj, const Forcing& forcing, const TestFunction& test);

/// max_t | ||w(t)||^2 - ||w_0||^2 - 2 int_0^t int g w |, time integral by trapezoid.
double l2_balance_residual(const Trajectory& traj, const Forcing& forcing);

/// sup_t || A(t) - B(t) ||_p over the union of both snapshot grids, each
/// trajectory interpolated linearly in time. Throws GridMismatch, or
/// TimeMisalignment when the time ranges differ or an interpolation gap
/// exceeds dt_max.
double pair_distance(const Trajectory& a, const Trajectory& b, double p);

}  // namespace vortex
