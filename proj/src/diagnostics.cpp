#include "vortex/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace vortex {
namespace {

double grad_halfp_from_nodal(const Nodal& w, double p, double delta) {
  Nodal s(w.grid());
  s.values() = (w.values().square() + delta * delta).pow(p / 4.0);
  const Field hat = to_spectral(s);
  return std::sqrt(l2_norm_squared_parseval(derivative(hat, 1)) + l2_norm_squared_parseval(derivative(hat, 2)));
}

/// Cumulative trapezoid of samples over times.
std::vector<double> cumulative_trapezoid(const std::vector<double>& times, const std::vector<double>& values) {
  std::vector<double> out(values.size(), 0.0);
  for (std::size_t i = 1; i < values.size(); ++i)
    out[i] = out[i - 1] + 0.5 * (values[i] + values[i - 1]) * (times[i] - times[i - 1]);
  return out;
}

/// Shared quadrature for the renormalized and plain weak residuals.
template <typename Beta, typename DBeta>
double weak_form_residual(const Trajectory& traj, const Forcing& forcing, const TestFunction& test, Beta&& beta,
                          DBeta&& dbeta) {
  const TorusGrid& grid = traj.grid();
  const Field chi_hat = resample(test.spatial, grid);
  const Nodal chi = to_physical(chi_hat);
  const Nodal chi1 = to_physical(derivative(chi_hat, 1));
  const Nodal chi2 = to_physical(derivative(chi_hat, 2));
  const double h2 = grid.cell_area();

  std::vector<double> integrand(traj.size());
  double initial_term = 0.0;
  for (std::size_t i = 0; i < traj.size(); ++i) {
    const double t = traj.times[i];
    const Nodal w = to_physical(traj.snapshots[i]);
    const auto u = velocity_from_vorticity(traj.snapshots[i]);
    const Nodal u1 = to_physical(u.u1);
    const Nodal u2 = to_physical(u.u2);
    const Nodal::Values bw = w.values().unaryExpr(beta);
    const Nodal::Values transport =
        test.dpsi(t) * chi.values() + test.psi(t) * (u1.values() * chi1.values() + u2.values() * chi2.values());
    double value = (bw * transport).sum();
    if (auto g = forcing.at(t)) {
      const Nodal gn = to_physical(*g);
      value += test.psi(t) * (w.values().unaryExpr(dbeta) * gn.values() * chi.values()).sum();
    }
    integrand[i] = value * h2;
    if (i == 0) initial_term = test.psi(t) * (bw * chi.values()).sum() * h2;
  }
  const auto integral = cumulative_trapezoid(traj.times, integrand);
  return std::abs(integral.back() + initial_term);
}

}  // namespace

double grad_halfp_norm(const Field& w, double p, double delta) {
  require_exponent(p);
  return grad_halfp_from_nodal(to_physical(w), p, delta);
}

DiagnosticsRecord snapshot_record(const Field& w, double p) {
  const Nodal nodal = to_physical(w);
  DiagnosticsRecord r;
  r.time = w.time();
  r.lp_norms[p] = lp_norm(nodal, p);
  r.lp_norms[2.0] = lp_norm(nodal, 2.0);
  r.linf_norm = nodal.max_abs();
  r.grad_halfp_norm = grad_halfp_from_nodal(nodal, p, 1e-12);
  return r;
}

EnergyReport energy_estimate_report(const Trajectory& traj, const Forcing& forcing, double p) {
  require_exponent(p);
  EnergyReport rep;
  rep.p = p;
  rep.inviscid = traj.config.nu == 0.0;
  const std::size_t m = traj.size();

  std::vector<double> norms(m), grads(m), gnorms(m, 0.0);
  for (std::size_t i = 0; i < m; ++i) {
    const Nodal w = to_physical(traj.snapshots[i]);
    norms[i] = lp_norm(w, p);
    grads[i] = grad_halfp_from_nodal(w, p, 1e-12);
    if (forcing.mode() == Forcing::Mode::Prescribed) gnorms[i] = lp_norm(*forcing.at(traj.times[i]), p);
  }

  // running || g ||_{L^1(0,t; L^p)}
  std::vector<double> gint(m, 0.0);
  if (forcing.mode() == Forcing::Mode::Analytic) {
    for (std::size_t i = 0; i < m; ++i) gint[i] = forcing.l1_lp_norm(traj.times[i], p);
  } else if (forcing.mode() == Forcing::Mode::Prescribed) {
    gint = cumulative_trapezoid(traj.times, gnorms);
  }

  std::vector<double> grad_sq(m);
  for (std::size_t i = 0; i < m; ++i) grad_sq[i] = grads[i] * grads[i];
  const double grad_time_integral = cumulative_trapezoid(traj.times, grad_sq).back();

  rep.initial_lp = norms.front();
  rep.sup_lp = *std::max_element(norms.begin(), norms.end());
  rep.dissipation = traj.config.nu * std::pow(grad_time_integral, 1.0 / p);
  rep.forcing_l1_lp = gint.back();
  rep.rhs = rep.initial_lp + (rep.inviscid ? p : 1.0) * rep.forcing_l1_lp;

  const double lhs = rep.sup_lp + rep.dissipation;
  rep.ratio = rep.rhs > 0.0 ? lhs / rep.rhs : 0.0;
  rep.sup_ratio = rep.initial_lp > 0.0 ? rep.sup_lp / rep.initial_lp : 0.0;

  double excess = m > 1 ? -std::numeric_limits<double>::infinity() : 0.0;
  for (std::size_t i = 1; i < m; ++i) excess = std::max(excess, norms[i] - rep.initial_lp - p * gint[i]);
  rep.inviscid_excess = rep.rhs > 0.0 ? excess / rep.rhs : std::max(excess, 0.0);
  return rep;
}

double RenormalizerBeta::value(double s) const {
  switch (kind_) {
    case Kind::Tanh:
      return std::tanh(s);
    case Kind::Rational:
      return s / (1.0 + s * s);
    case Kind::ClippedIdentity: {
      const double a = std::abs(s);
      if (a <= window_) return s;
      return std::copysign(window_ + std::tanh(a - window_), s);
    }
  }
  return 0.0;
}

double RenormalizerBeta::derivative(double s) const {
  switch (kind_) {
    case Kind::Tanh: {
      const double c = std::cosh(s);
      return 1.0 / (c * c);
    }
    case Kind::Rational: {
      const double d = 1.0 + s * s;
      return (1.0 - s * s) / (d * d);
    }
    case Kind::ClippedIdentity: {
      const double a = std::abs(s);
      if (a <= window_) return 1.0;
      const double c = std::cosh(a - window_);
      return 1.0 / (c * c);
    }
  }
  return 0.0;
}

double TestFunction::psi(double t) const {
  const double s = t / t_end;
  switch (profile) {
    case Profile::CosineRamp:
      return std::cos(0.5 * std::numbers::pi * s);
    case Profile::QuadraticRamp:
      return (1.0 - s) * (1.0 - s);
  }
  return 0.0;
}

double TestFunction::dpsi(double t) const {
  const double s = t / t_end;
  switch (profile) {
    case Profile::CosineRamp:
      return -0.5 * std::numbers::pi / t_end * std::sin(0.5 * std::numbers::pi * s);
    case Profile::QuadraticRamp:
      return -2.0 * (1.0 - s) / t_end;
  }
  return 0.0;
}

double renorm_residual(const Trajectory& traj, const Forcing& forcing, const RenormalizerBeta& beta,
                       const TestFunction& test) {
  return weak_form_residual(
      traj, forcing, test, [&beta](double s) { return beta.value(s); },
      [&beta](double s) { return beta.derivative(s); });
}

double weak_residual(const Trajectory& traj, const Forcing& forcing, const TestFunction& test) {
  return weak_form_residual(
      traj, forcing, test, [](double s) { return s; }, [](double) { return 1.0; });
}

double l2_balance_residual(const Trajectory& traj, const Forcing& forcing) {
  const std::size_t m = traj.size();
  std::vector<double> energy(m), source(m, 0.0);
  for (std::size_t i = 0; i < m; ++i) {
    const Nodal w = to_physical(traj.snapshots[i]);
    energy[i] = inner(w, w);
    if (auto g = forcing.at(traj.times[i])) source[i] = inner(to_physical(*g), w);
  }
  const auto integral = cumulative_trapezoid(traj.times, source);
  double worst = 0.0;
  for (std::size_t i = 0; i < m; ++i) worst = std::max(worst, std::abs(energy[i] - energy[0] - 2.0 * integral[i]));
  return worst;
}

double pair_distance(const Trajectory& a, const Trajectory& b, double p) {
  require_same_grid(a.grid(), b.grid());
  require_exponent(p);
  const double slack = 1e-12 * std::max({1.0, std::abs(a.end()), std::abs(b.end())});
  if (std::abs(a.start() - b.start()) > slack || std::abs(a.end() - b.end()) > slack)
    throw Error(ErrorCode::TimeMisalignment, "trajectories cover different time ranges");

  std::vector<double> times;
  std::merge(a.times.begin(), a.times.end(), b.times.begin(), b.times.end(), std::back_inserter(times));
  times.erase(std::unique(times.begin(), times.end(), [slack](double x, double y) { return y - x <= slack; }),
              times.end());

  const double allowed = std::max(a.config.dt_max, b.config.dt_max) * (1.0 + 1e-9);
  auto check_gap = [&](const Trajectory& tr, double t) {
    auto it = std::lower_bound(tr.times.begin(), tr.times.end(), t - slack);
    if (it == tr.times.end() || std::abs(*it - t) <= slack) return;
    if (it == tr.times.begin()) return;
    if (*it - *(it - 1) > allowed)
      throw Error(ErrorCode::TimeMisalignment, "interpolation gap " + std::to_string(*it - *(it - 1)) + " exceeds dt_max");
  };

  double sup = 0.0;
  for (double t : times) {
    check_gap(a, t);
    check_gap(b, t);
    sup = std::max(sup, lp_norm(a.at(t) - b.at(t), p));
  }
  return sup;
}

}  // namespace vortex
