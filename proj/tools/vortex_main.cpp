// Command-line front end: simulate, sweep, linearize, diagnose, report.

#include <cstdlib>
#include <iostream>
#include <optional>

#include "CLI11.hpp"
#include "vortex/harness.hpp"
#include "vortex/trajectory_io.hpp"

namespace fs = std::filesystem;
using namespace vortex;

namespace {

struct Overrides {
  std::optional<int> grid;
  std::optional<std::uint64_t> seed;
  std::optional<int> parallel;
  std::optional<std::string> profile;
};

int exit_code_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::BadConfig:
    case ErrorCode::AlphaOutOfRange:
    case ErrorCode::BadExponent:
    case ErrorCode::ScaleTooCoarse:
    case ErrorCode::UnresolvedKernel:
    case ErrorCode::InvalidGrid:
      return 2;
    case ErrorCode::BlowupDetected:
    case ErrorCode::CFLViolation:
    case ErrorCode::TrajectoryGap:
    case ErrorCode::NonFiniteInput:
      return 3;
    default:
      return 1;
  }
}

ExperimentConfig load(const fs::path& path, const Overrides& o) {
  ExperimentConfig cfg = load_config(path);
  if (o.grid) {
    TorusGrid(*o.grid, cfg.dealias_fraction);
    cfg.grids = {*o.grid};
  }
  if (o.seed) override_seed(cfg, *o.seed);
  if (o.parallel) {
    if (*o.parallel < 1) throw Error(ErrorCode::BadConfig, "--parallel must be >= 1");
    cfg.parallelism = *o.parallel;
  }
  if (o.profile) {
    if (*o.profile != "gaussian" && *o.profile != "bump")
      throw Error(ErrorCode::BadConfig, "--profile must be gaussian or bump");
    cfg.profile = *o.profile == "gaussian" ? MollifierProfile::Gaussian : MollifierProfile::SmoothBump;
    cfg.initial.profile = cfg.profile;
    cfg.forcing.shape.profile = cfg.profile;
  }
  if (const char* env = std::getenv("VORTEX_OUTPUT_DIR"); env && *env) cfg.output_dir = env;
  return cfg;
}

int simulate(const ExperimentConfig& cfg) {
  const double nu = cfg.nu.value_or(0.0);
  const TorusGrid grid = cfg.finest_grid();
  const SolverConfig sc = cfg.solver(nu, grid.n());
  const Field w0 = build_family(cfg.initial, nu, grid);
  const Forcing g = build_forcing(cfg.forcing, grid, nu);
  auto traj = std::make_shared<const Trajectory>(solve(w0, sc, g));
  const fs::path dir = cfg.output_dir / "simulate";
  const nlohmann::json extra = {{"kind", "nonlinear"}, {"nu", nu}, {"forcing", to_json(cfg.forcing)}, {"forcing_nu", nu}};
  write_trajectory(dir, *traj, extra, cfg.write_velocity);
  write_run_diagnostics(dir, {{"simulate", traj}}, {g}, cfg.p, cfg.p_tilde);
  std::cout << "trajectory: " << dir.string() << " (" << traj->size() << " snapshots, " << traj->accepted_steps
            << " steps, t = " << format_number(traj->end()) << ")\n";
  if (!traj->ok()) {
    std::cerr << "solver aborted: " << traj->failure->message << '\n';
    return 3;
  }
  return 0;
}

int sweep(const ExperimentConfig& cfg) {
  const ConvergenceTable table = run_viscosity_sweep(cfg);
  std::cout << "rung  nu            n     distance          status\n";
  for (const auto& r : table.rows) {
    std::printf("%-5d %-13.6g %-5d %-17.10g %s\n", r.rung, r.nu, r.n, r.distance, r.status.c_str());
    if (r.status != "ok") warn("rung " + std::to_string(r.rung) + " at n=" + std::to_string(r.n) + ": " + r.status);
  }
  std::cout << "monotone: " << (table.monotone ? "yes" : "no")
            << "   reference sensitivity: " << format_number(table.reference_sensitivity) << '\n';
  std::cout << "wrote " << (cfg.output_dir / "convergence.csv").string() << '\n';
  return 0;
}

int linearize(const ExperimentConfig& cfg, std::optional<double> ell, std::optional<int> k) {
  RunStore store(cfg.output_dir, true, cfg.write_velocity);
  std::vector<double> ells = ell ? std::vector<double>{*ell} : cfg.ell_ladder;
  if (ells.empty()) throw Error(ErrorCode::BadConfig, "no ell given and ell_ladder is empty");
  std::vector<int> ks;
  if (k) {
    ks.push_back(*k);
  } else {
    for (std::size_t i = 0; i < cfg.nu_ladder.size(); ++i) ks.push_back(static_cast<int>(i));
  }
  std::vector<Lemma1Report> reports;
  std::vector<TriangleRow> triangle;
  for (double l : ells) {
    if (!k) reports.push_back(lemma1_report(cfg, store, l));
    for (int kk : ks) triangle.push_back(triangle_decomposition(cfg, store, l, kk));
  }
  if (!reports.empty()) {
    write_lemma1(cfg.output_dir, reports);
    for (const auto& rep : reports)
      std::cout << "ell " << ell_tag(rep.ell) << ": max_k lhs = " << format_number(rep.max_lhs)
                << ", max_k rhs = " << format_number(rep.max_rhs) << '\n';
  }
  write_triangle(cfg.output_dir, triangle);
  for (const auto& t : triangle) {
    std::cout << "ell " << ell_tag(t.ell) << " k " << t.k << ": " << format_number(t.lhs)
              << " <= " << format_number(t.k_to_kell) << " + " << format_number(t.kell_to_ell) << " + "
              << format_number(t.ell_to_ref) << '\n';
    if (t.violation() >= 1e-10) warn("triangle inequality violated by " + format_number(t.violation()));
  }
  return 0;
}

int diagnose(const fs::path& dir) {
  const LoadedTrajectory loaded = read_trajectory(dir);
  auto traj = std::make_shared<const Trajectory>(loaded.trajectory);
  Forcing g;
  if (loaded.extra.is_object() && loaded.extra.contains("forcing")) {
    const ForcingSpec spec = parse_forcing(loaded.extra["forcing"]);
    g = build_forcing(spec, traj->grid(), loaded.extra.value("forcing_nu", 0.0));
    if (loaded.extra.contains("ell") && !g.is_zero()) {
      const std::string tag = loaded.extra["ell"];
      const double ell = tag == "inf" ? std::numeric_limits<double>::infinity() : std::stod(tag);
      const auto profile = loaded.extra.value("profile", "gaussian") == "gaussian" ? MollifierProfile::Gaussian
                                                                                   : MollifierProfile::SmoothBump;
      g = g.mollified(make_kernel<double>(traj->grid(), ell, profile));
    }
  }
  const double p = traj->config.p;
  write_run_diagnostics(dir, {{dir.filename().string(), traj}}, {g}, p, std::max(2.0, p / (p - 1.0)));
  const EnergyReport rep = energy_estimate_report(*traj, g, p);
  std::cout << "snapshots " << traj->size() << ", nu " << format_number(traj->config.nu) << ", p " << format_number(p)
            << '\n'
            << "||w0||_p " << format_number(rep.initial_lp) << "  sup_t ||w||_p " << format_number(rep.sup_lp)
            << "  ratio " << format_number(rep.ratio) << '\n';
  if (rep.inviscid)
    std::cout << "inviscid excess " << format_number(rep.inviscid_excess) << "  L2 balance residual "
              << format_number(l2_balance_residual(*traj, g)) << '\n';
  if (!traj->ok()) std::cout << "run stopped early: " << traj->failure->message << '\n';
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Pseudo-spectral 2D vorticity laboratory on the torus"};
  app.require_subcommand(1);
  Overrides o;
  app.add_option("--grid", o.grid, "Override the grid list with a single n");
  app.add_option("--seed", o.seed, "Seed for every multi-mode component");
  app.add_option("--parallel", o.parallel, "Worker threads for sweep rows");
  app.add_option("--profile", o.profile, "Mollifier profile")->check(CLI::IsMember({"gaussian", "bump"}));

  fs::path config_path;
  fs::path dir_path;
  std::optional<double> ell;
  std::optional<int> k;

  auto* sim = app.add_subcommand("simulate", "One nonlinear run at the config's nu");
  sim->add_option("config", config_path)->required()->check(CLI::ExistingFile);
  auto* sw = app.add_subcommand("sweep", "Vanishing-viscosity sweep, writes convergence.csv");
  sw->add_option("config", config_path)->required()->check(CLI::ExistingFile);
  auto* lin = app.add_subcommand("linearize", "Mollified linear problems on a finished sweep");
  lin->add_option("config", config_path)->required()->check(CLI::ExistingFile);
  lin->add_option("--ell", ell, "Mollifier scale (default: every ell_ladder entry)");
  lin->add_option("--k", k, "Rung index (default: every rung, plus the uniformity report)");
  auto* diag = app.add_subcommand("diagnose", "Estimates for a stored trajectory");
  diag->add_option("trajectory", dir_path)->required()->check(CLI::ExistingDirectory);
  auto* rep = app.add_subcommand("report", "SVG plots from the CSV outputs");
  rep->add_option("output", dir_path)->required()->check(CLI::ExistingDirectory);

  CLI11_PARSE(app, argc, argv);

  int code = 0;
  try {
    if (sim->parsed()) {
      code = simulate(load(config_path, o));
    } else if (sw->parsed()) {
      code = sweep(load(config_path, o));
    } else if (lin->parsed()) {
      code = linearize(load(config_path, o), ell, k);
    } else if (diag->parsed()) {
      code = diagnose(dir_path);
    } else if (rep->parsed()) {
      for (const auto& f : write_report(dir_path)) std::cout << "wrote " << f.string() << '\n';
    }
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return exit_code_for(e.code());
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  const auto warnings = take_warnings();
  if (!warnings.empty()) std::cerr << warnings.size() << " warning(s) recorded\n";
  return code;
}
