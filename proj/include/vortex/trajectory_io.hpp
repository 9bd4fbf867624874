#pragma once

#include <filesystem>

#include "json.hpp"
#include "vortex/trajectory.hpp"

namespace vortex {

// Trajectory directory layout:
//   manifest.json            times, config echo, file list, records, failure
//   w_<index>.vvf            vorticity snapshots
//   u1_<index>.vvf, u2_<index>.vvf   optional velocity snapshots

/// Writes the trajectory into dir (created if missing). `extra` is stored
/// verbatim under the manifest key "extra".
void write_trajectory(const std::filesystem::path& dir, const Trajectory& traj, const nlohmann::json& extra = {},
                      bool write_velocity = false);

struct LoadedTrajectory {
  Trajectory trajectory;
  nlohmann::json extra;
};

/// Throws MissingTrajectory if dir has no manifest, BadFile on malformed content.
LoadedTrajectory read_trajectory(const std::filesystem::path& dir);

}  // namespace vortex
