#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "vortex/spectral_field.hpp"

namespace vortex {

struct SolverConfig {
  TorusGrid grid;
  double nu = 0.0;  // 0 selects the Euler equation
  double t_end = 1.0;
  double dt_max = 1e-2;
  double cfl = 0.5;
  double p = 2.0;  // diagnostic exponent
  int snapshot_stride = 1;

  /// Throws BadConfig on out-of-range values.
  void validate() const;
};

/// Per-snapshot diagnostics emitted by the solver.
struct DiagnosticsRecord {
  double time = 0.0;
  std::map<double, double> lp_norms;  // exponent -> ||w||_p
  double linf_norm = 0.0;
  double grad_halfp_norm = 0.0;  // || grad |w|^{p/2} ||_{L^2}
  double renorm_residual = 0.0;
  std::string notes;
};

struct Failure {
  ErrorCode code;
  std::string message;
};

/// Time-ordered vorticity snapshots. A failed solve keeps everything up to
/// the last accepted snapshot and records why it stopped.
struct Trajectory {
  SolverConfig config;
  std::vector<double> times;
  std::vector<Field> snapshots;
  std::vector<DiagnosticsRecord> records;
  std::optional<Failure> failure;
  int accepted_steps = 0;

  bool ok() const { return !failure.has_value(); }
  const TorusGrid& grid() const { return config.grid; }
  double start() const { return times.front(); }
  double end() const { return times.back(); }
  std::size_t size() const { return times.size(); }

  /// Linear interpolation in time. Throws TrajectoryGap outside the stored range.
  Field at(double t) const;

  /// Largest spacing between consecutive snapshot times.
  double max_gap() const;

  /// The same trajectory with every snapshot resampled to another grid.
  Trajectory resampled(const TorusGrid& target) const;
};

}  // namespace vortex
