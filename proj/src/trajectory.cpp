#include "vortex/trajectory.hpp"

#include <algorithm>
#include <cmath>

namespace vortex {

void SolverConfig::validate() const {
  auto fail = [](const std::string& what) { throw Error(ErrorCode::BadConfig, what); };
  if (!(nu >= 0.0)) fail("nu must be >= 0");
  if (!(t_end >= 0.0)) fail("t_end must be >= 0");
  if (!(dt_max > 0.0)) fail("dt_max must be > 0");
  if (!(cfl > 0.0 && cfl < 1.0)) fail("cfl must lie in (0, 1)");
  if (!(p > 1.0)) fail("diagnostic exponent p must be > 1");
  if (snapshot_stride < 1) fail("snapshot_stride must be >= 1");
}

Field Trajectory::at(double t) const {
  if (times.empty()) throw Error(ErrorCode::TrajectoryGap, "empty trajectory");
  const double slack = 1e-12 * std::max(1.0, std::abs(times.back()));
  if (t < times.front() - slack || t > times.back() + slack)
    throw Error(ErrorCode::TrajectoryGap, "time " + std::to_string(t) + " outside stored range [" +
                                              std::to_string(times.front()) + ", " + std::to_string(times.back()) + "]");
  auto it = std::lower_bound(times.begin(), times.end(), t);
  if (it == times.end()) return snapshots.back();
  const auto hi = static_cast<std::size_t>(it - times.begin());
  if (*it == t || hi == 0) {
    Field f = snapshots[hi];
    f.set_time(t);
    return f;
  }
  const std::size_t lo = hi - 1;
  const double s = (t - times[lo]) / (times[hi] - times[lo]);
  Field f = snapshots[lo];
  f.coeffs() = (1.0 - s) * snapshots[lo].coeffs() + s * snapshots[hi].coeffs();
  f.set_time(t);
  return f;
}

double Trajectory::max_gap() const {
  double gap = 0.0;
  for (std::size_t i = 1; i < times.size(); ++i) gap = std::max(gap, times[i] - times[i - 1]);
  return gap;
}

Trajectory Trajectory::resampled(const TorusGrid& target) const {
  Trajectory out;
  out.config = config;
  out.config.grid = target;
  out.times = times;
  out.records = records;
  out.failure = failure;
  out.accepted_steps = accepted_steps;
  out.snapshots.reserve(snapshots.size());
  for (const auto& s : snapshots) out.snapshots.push_back(resample(s, target));
  return out;
}

}  // namespace vortex
