#pragma once

#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <vector>

#include "vortex/config.hpp"
#include "vortex/diagnostics.hpp"
#include "vortex/evolution.hpp"

namespace vortex {

/// Trajectories of one experiment keyed by run id. Runs are cached in
/// memory and, when persistence is on, mirrored under <output_dir>/runs/<id>.
/// Safe to use from several workers.
class RunStore {
 public:
  RunStore(std::filesystem::path output_dir, bool persist, bool write_velocity = false);

  void put(const std::string& id, std::shared_ptr<const Trajectory> traj, const nlohmann::json& extra = {});
  /// Cached or loaded from disk; throws MissingTrajectory.
  std::shared_ptr<const Trajectory> get(const std::string& id);
  bool contains(const std::string& id);
  std::filesystem::path run_dir(const std::string& id) const { return root_ / "runs" / id; }
  const std::filesystem::path& root() const { return root_; }

 private:
  std::filesystem::path root_;
  bool persist_;
  bool write_velocity_;
  std::mutex mutex_;
  std::map<std::string, std::shared_ptr<const Trajectory>> cache_;
};

std::string reference_id(int n);
std::string rung_id(int rung, int n);
std::string ell_tag(double ell);

struct ConvergenceRow {
  int rung = 0;
  double nu = 0.0;
  int n = 0;
  double distance = 0.0;               // sup_t || w^nu - w_ref ||_p
  std::vector<double> distance_q;      // same at each configured q
  double alternative_distance = 0.0;   // against the finest-nu run
  std::string status = "ok";
  double runtime = 0.0;                // seconds, kept out of convergence.csv
};

struct ConvergenceTable {
  std::vector<ConvergenceRow> rows;
  bool monotone = true;  // distances strictly decrease along the ladder on the finest grid
  double reference_runtime = 0.0;
  /// sup_t distance between the primary reference and the finest-nu run.
  double reference_sensitivity = 0.0;
};

/// Solves every (rung, grid) pair and the reference, then tabulates
/// distances. Failed rows are recorded, not fatal. Writes convergence.csv,
/// reference.csv, timings.csv, diagnostics.csv and estimates.csv into the
/// store's root when `write_files` is set.
ConvergenceTable run_viscosity_sweep(const ExperimentConfig& cfg, RunStore& store, bool write_files = true);
ConvergenceTable run_viscosity_sweep(const ExperimentConfig& cfg);

struct LinearProgramResult {
  std::shared_ptr<const Trajectory> omega_ell;    // frozen reference velocity, nu = 0
  std::shared_ptr<const Trajectory> omega_k_ell;  // frozen rung-k velocity, nu_k diffusion
};

/// The two mollified linear problems at scale ell for rung k. Requires the
/// reference and rung-k trajectories (finest grid) in the store.
LinearProgramResult run_linear_program(const ExperimentConfig& cfg, RunStore& store, double ell, int k);

struct Lemma1Row {
  int k = -1;  // -1 for the reference problem
  double nu = 0.0;
  double lhs = 0.0;             // sup_t || w^k_ell - w^k ||_p
  double rhs_forcing = 0.0;     // || g^k * phi_ell - g^k ||_{L^1_t L^p}
  double rhs_initial = 0.0;     // || w_0^k * phi_ell - w_0^k ||_p
  double rhs() const { return rhs_forcing + rhs_initial; }
};

struct Lemma1Report {
  double ell = 0.0;
  std::vector<Lemma1Row> rows;
  double max_lhs = 0.0;  // over the viscosity ladder
  double max_rhs = 0.0;
};

Lemma1Report lemma1_report(const ExperimentConfig& cfg, RunStore& store, double ell);

struct TriangleRow {
  double ell = 0.0;
  int k = 0;
  double nu = 0.0;
  double lhs = 0.0;        // || w^k - w ||
  double k_to_kell = 0.0;  // || w^k - w^k_ell ||
  double kell_to_ell = 0.0;  // || w^k_ell - w_ell ||
  double ell_to_ref = 0.0;   // || w_ell - w ||
  double violation() const { return lhs - (k_to_kell + kell_to_ell + ell_to_ref); }
};

TriangleRow triangle_decomposition(const ExperimentConfig& cfg, RunStore& store, double ell, int k);

/// Appends lemma1.csv, lemma1_uniform.csv and triangle.csv rows.
void write_lemma1(const std::filesystem::path& dir, const std::vector<Lemma1Report>& reports);
void write_triangle(const std::filesystem::path& dir, const std::vector<TriangleRow>& rows);

/// diagnostics.csv (long format) and estimates.csv for a set of runs.
void write_run_diagnostics(const std::filesystem::path& dir,
                           const std::vector<std::pair<std::string, std::shared_ptr<const Trajectory>>>& runs,
                           const std::vector<Forcing>& forcings, double p, double p_tilde);

/// distance_vs_nu.svg from convergence.csv and distance_vs_ell.svg from
/// lemma1_uniform.csv, whichever inputs exist. Returns the files written.
std::vector<std::filesystem::path> write_report(const std::filesystem::path& dir);

/// Shortest round-trip decimal form, "nan" and "inf" spelled out.
std::string format_number(double v);

}  // namespace vortex
