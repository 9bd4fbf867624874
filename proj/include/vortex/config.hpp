#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "vortex/initial_data.hpp"

namespace vortex {

enum class ReferenceKind { Euler, Richardson };

/// Experiment description loaded from JSON. Unknown keys are rejected at
/// every level; see the README for the schema.
struct ExperimentConfig {
  std::vector<int> grids{64};
  double dealias_fraction = 2.0 / 3.0;
  std::vector<double> nu_ladder;   // strictly decreasing, positive
  std::vector<double> ell_ladder;  // strictly increasing, positive (inf allowed last)
  double p = 2.0;
  double p_tilde = 2.0;
  std::vector<double> q_exponents{2.0};  // extra exponents for the sweep distances
  double t_end = 1.0;
  double dt_max = 1e-2;
  double cfl = 0.5;
  int snapshot_stride = 1;
  PerturbationFamily initial;
  ForcingSpec forcing;
  MollifierProfile profile = MollifierProfile::Gaussian;  // kernel of the linear program
  ReferenceKind reference = ReferenceKind::Euler;
  std::filesystem::path output_dir = "vortex-out";
  int parallelism = 1;
  bool persist_trajectories = true;
  bool write_velocity = false;
  std::optional<double> nu;  // viscosity of a single `simulate` run

  TorusGrid finest_grid() const;
  SolverConfig solver(double viscosity, int n) const;
};

/// Throws BadConfig (or the data errors of the initial-data module) on any
/// schema or range violation.
ExperimentConfig parse_config(const nlohmann::json& j);
ExperimentConfig load_config(const std::filesystem::path& path);
nlohmann::json to_json(const ExperimentConfig& cfg);

ForcingSpec parse_forcing(const nlohmann::json& j);
nlohmann::json to_json(const ForcingSpec& spec);

/// Replaces the seed of every multi-mode component.
void override_seed(ExperimentConfig& cfg, std::uint64_t seed);

}  // namespace vortex
