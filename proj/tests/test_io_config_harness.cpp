#include <cstdlib>
#include <fstream>
#include <regex>
#include <sstream>
#include <sys/wait.h>

#include "doctest.h"
#include "oracles.hpp"
#include "vortex/config.hpp"
#include "vortex/evolution.hpp"
#include "vortex/harness.hpp"
#include "vortex/snapshot_io.hpp"
#include "vortex/trajectory_io.hpp"

namespace fs = std::filesystem;
using json = nlohmann::json;
using namespace vortex;
using oracle::pi;

namespace {

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("vortex_tests_" + std::to_string(::getpid())) / name;
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::string slurp(const fs::path& path) {
  std::ifstream is(path, std::ios::binary);
  std::ostringstream ss;
  ss << is.rdbuf();
  return ss.str();
}

std::vector<std::string> lines(const fs::path& path) {
  std::vector<std::string> out;
  std::istringstream is(slurp(path));
  for (std::string line; std::getline(is, line);)
    if (!line.empty()) out.push_back(line);
  return out;
}

json single_mode_json(const fs::path& out) {
  return {{"grids", {64}},
          {"nu_ladder", {0.4, 0.2, 0.1}},
          {"ell_ladder", {4, 8, 16}},
          {"p", 2},
          {"t_end", 1.0},
          {"dt_max", 0.01},
          {"initial", {{"components", {{{"kind", "single_mode"}, {"k", {2, 0}}}}}}},
          {"output_dir", out.string()}};
}

template <typename Fn>
ErrorCode code_of(Fn&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("no vortex::Error thrown");
  return ErrorCode::BadConfig;
}

int run_cli(const std::string& args, const fs::path& log) {
  const std::string cmd = std::string("\"") + VORTEX_CLI + "\" " + args + " > \"" + log.string() + "\" 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

double closed_form(double nu) { return (1 - std::exp(-4 * nu)) * pi * std::sqrt(2.0); }

}  // namespace

TEST_CASE("snapshot files round-trip") {
  const fs::path dir = scratch("snapshots");
  const TorusGrid g(32);
  const Field f = oracle::random_band(g, 10, 2);
  Field timed = f;
  timed.set_time(0.375);
  write_field(dir / "f.vvf", timed);
  const Field back = read_field(dir / "f.vvf");
  CHECK(back.time() == 0.375);
  CHECK((back.coeffs() - f.coeffs()).abs().maxCoeff() < 1e-15 * f.max_coeff_abs() * 32);

  const Nodal noise = oracle::white_noise(g, 3);
  write_snapshot(dir / "n.vvf", noise, 2.5);
  const Snapshot s = read_snapshot(dir / "n.vvf");
  CHECK(s.time == 2.5);
  CHECK((s.values.values() == noise.values()).all());
  CHECK(fs::file_size(dir / "n.vvf") == 4 + 4 + 8 + 32 * 32 * 8);

  std::string bytes = slurp(dir / "n.vvf");
  bytes[0] = 'X';
  std::ofstream(dir / "magic.vvf", std::ios::binary) << bytes;
  CHECK(code_of([&] { read_snapshot(dir / "magic.vvf"); }) == ErrorCode::BadFile);

  bytes = slurp(dir / "n.vvf");
  const std::uint32_t odd = 31;
  std::memcpy(bytes.data() + 4, &odd, 4);
  std::ofstream(dir / "odd.vvf", std::ios::binary) << bytes;
  CHECK(code_of([&] { read_snapshot(dir / "odd.vvf"); }) == ErrorCode::BadFile);

  std::ofstream(dir / "short.vvf", std::ios::binary) << bytes.substr(0, 100);
  CHECK(code_of([&] { read_snapshot(dir / "short.vvf"); }) == ErrorCode::BadFile);
}

TEST_CASE("trajectory directories round-trip") {
  const fs::path dir = scratch("trajectory");
  SolverConfig c{TorusGrid(32)};
  c.nu = 0.05;
  c.t_end = 0.2;
  c.snapshot_stride = 3;
  const Trajectory traj = solve(oracle::random_band(c.grid, 6, 5), c, Forcing::zero());
  write_trajectory(dir / "run", traj, {{"tag", "demo"}}, true);
  CHECK(fs::exists(dir / "run" / "manifest.json"));
  CHECK(fs::exists(dir / "run" / "w_0.vvf"));
  CHECK(fs::exists(dir / "run" / "u1_0.vvf"));
  CHECK(fs::exists(dir / "run" / "u2_0.vvf"));

  const LoadedTrajectory loaded = read_trajectory(dir / "run");
  const Trajectory& back = loaded.trajectory;
  CHECK(loaded.extra["tag"] == "demo");
  CHECK(back.times == traj.times);
  CHECK(back.accepted_steps == traj.accepted_steps);
  CHECK(back.config.nu == c.nu);
  CHECK(back.config.snapshot_stride == 3);
  CHECK(back.ok());
  REQUIRE(back.size() == traj.size());
  for (std::size_t i = 0; i < traj.size(); ++i)
    CHECK((back.snapshots[i].coeffs() - traj.snapshots[i].coeffs()).abs().maxCoeff() < 1e-14);

  fs::create_directories(dir / "empty");
  CHECK(code_of([&] { read_trajectory(dir / "empty"); }) == ErrorCode::MissingTrajectory);
  std::ofstream(dir / "empty" / "manifest.json") << "{ not json";
  CHECK(code_of([&] { read_trajectory(dir / "empty"); }) == ErrorCode::BadFile);
}

TEST_CASE("config parsing rejects unknown keys everywhere") {
  const json base = single_mode_json("out");
  CHECK_NOTHROW(parse_config(base));

  auto with = [&](auto&& edit) {
    json j = base;
    edit(j);
    return code_of([&] { parse_config(j); });
  };
  CHECK(with([](json& j) { j["colour"] = 1; }) == ErrorCode::BadConfig);
  CHECK(with([](json& j) { j["initial"]["components"][0]["wavenumber"] = 2; }) == ErrorCode::BadConfig);
  CHECK(with([](json& j) { j["initial"]["family"] = {{"mode", "none"}, {"beta", 1}}; }) == ErrorCode::BadConfig);
  CHECK(with([](json& j) { j["initial"]["extra"] = 0; }) == ErrorCode::BadConfig);
  CHECK(with([](json& j) { j["nu_ladder"] = {{"nu0", 0.1}, {"rungs", 3}, {"ratio", 2}}; }) == ErrorCode::BadConfig);
  CHECK(with([](json& j) {
          j["forcing"] = {{"components", {{{"kind", "single_mode"}}}}, {"envelope", {{"kind", "constant"}, {"tau", 1}}}};
        }) == ErrorCode::BadConfig);
  CHECK(with([](json& j) { j["forcing"] = {{"components", json::array()}, {"when", 1}}; }) == ErrorCode::BadConfig);
}

TEST_CASE("config validation") {
  const json base = single_mode_json("out");
  auto with = [&](auto&& edit) {
    json j = base;
    edit(j);
    return code_of([&] { parse_config(j); });
  };
  CHECK(with([](json& j) { j["p"] = 1.0; }) == ErrorCode::BadConfig);
  CHECK(with([](json& j) {
          j["p"] = 1.5;
          j["p_tilde"] = 2.5;
        }) == ErrorCode::BadConfig);
  CHECK(with([](json& j) { j["p_tilde"] = 1.5; }) == ErrorCode::BadConfig);
  CHECK(with([](json& j) { j["nu_ladder"] = {0.1, 0.2}; }) == ErrorCode::BadConfig);
  CHECK(with([](json& j) { j["nu_ladder"] = {0.1, 0.0}; }) == ErrorCode::BadConfig);
  CHECK(with([](json& j) { j["ell_ladder"] = {8, 4}; }) == ErrorCode::BadConfig);
  CHECK(with([](json& j) { j["parallelism"] = 0; }) == ErrorCode::BadConfig);
  CHECK(with([](json& j) { j["grids"] = json::array({31}); }) == ErrorCode::InvalidGrid);
  CHECK(with([](json& j) { j["initial"]["components"] = json::array(); }) == ErrorCode::BadConfig);
  CHECK(with([](json& j) {
          j["initial"]["components"][0] = {{"kind", "power_singularity"}, {"alpha", 1.0}, {"assert_lp", 2.5}};
        }) == ErrorCode::AlphaOutOfRange);

  json p15 = base;
  p15["p"] = 1.5;
  CHECK(parse_config(p15).p_tilde == doctest::Approx(3.0));
  CHECK(parse_config(base).p_tilde == 2.0);

  json geometric = base;
  geometric["nu_ladder"] = {{"nu0", 0.4}, {"rungs", 3}};
  CHECK(parse_config(geometric).nu_ladder == std::vector<double>{0.4, 0.2, 0.1});
  json open = base;
  open["ell_ladder"] = {4, 8, "inf"};
  CHECK(std::isinf(parse_config(open).ell_ladder.back()));
}

TEST_CASE("config survives a JSON round trip") {
  for (const char* name : {"single_mode.json", "power_dipole.json", "forced_multimode.json"}) {
    const ExperimentConfig cfg = load_config(fs::path(VORTEX_CONFIG_DIR) / name);
    const json once = to_json(cfg);
    CHECK(to_json(parse_config(once)) == once);
  }
  CHECK(code_of([] { load_config("/nonexistent/config.json"); }) == ErrorCode::BadConfig);
}

TEST_CASE("sweep reproduces the single-mode closed form") {
  const fs::path dir = scratch("sweep");
  const ExperimentConfig cfg = parse_config(single_mode_json(dir));
  const ConvergenceTable table = run_viscosity_sweep(cfg);
  REQUIRE(table.rows.size() == 3);
  for (const auto& row : table.rows) {
    CHECK(row.status == "ok");
    CHECK(std::abs(row.distance - closed_form(row.nu)) < 1e-5);
  }
  CHECK(table.monotone);
  const auto csv = lines(dir / "convergence.csv");
  CHECK(csv.size() == 4);
  CHECK(csv[0].rfind("rung,nu,n,distance", 0) == 0);
  for (const char* f : {"reference.csv", "timings.csv", "diagnostics.csv", "estimates.csv", "sweep_summary.json"})
    CHECK(fs::exists(dir / f));

  ExperimentConfig empty = cfg;
  empty.nu_ladder.clear();
  empty.output_dir = scratch("sweep_empty");
  CHECK(run_viscosity_sweep(empty).rows.empty());
  CHECK(lines(empty.output_dir / "convergence.csv").size() == 1);
}

TEST_CASE("linear programs and the triangle decomposition") {
  const fs::path dir = scratch("linear");
  ExperimentConfig cfg = parse_config(single_mode_json(dir));
  cfg.persist_trajectories = false;
  RunStore store(cfg.output_dir, false, false);
  run_viscosity_sweep(cfg, store, false);

  const double ell = 4.0;
  const double m = std::exp(-4.0 / (2 * ell * ell));
  const TorusGrid g(64);
  const LinearProgramResult lp = run_linear_program(cfg, store, ell, 1);
  const double nu = cfg.nu_ladder[1];
  CHECK(to_physical(lp.omega_ell->snapshots.back() - cosine_mode(g, 2, 0, m)).max_abs() < 1e-8);
  for (std::size_t i = 0; i < lp.omega_k_ell->size(); ++i) {
    const double t = lp.omega_k_ell->times[i];
    CHECK(to_physical(lp.omega_k_ell->snapshots[i] - cosine_mode(g, 2, 0, m * std::exp(-4 * nu * t))).max_abs() < 1e-6);
  }

  const Lemma1Report rep = lemma1_report(cfg, store, ell);
  for (const auto& row : rep.rows) {
    CHECK(row.lhs <= row.rhs() + 1e-6);
    CHECK(row.lhs == doctest::Approx((1 - m) * pi * std::sqrt(2.0)).epsilon(1e-6));
  }
  CHECK(lemma1_report(cfg, store, kInfinity).max_lhs < 1e-8);

  const TriangleRow row = triangle_decomposition(cfg, store, ell, 1);
  const double norm = pi * std::sqrt(2.0);
  CHECK(row.lhs == doctest::Approx(closed_form(nu)).epsilon(1e-6));
  CHECK(row.k_to_kell == doctest::Approx((1 - m) * norm).epsilon(1e-6));
  CHECK(row.kell_to_ell == doctest::Approx(m * (1 - std::exp(-4 * nu)) * norm).epsilon(1e-6));
  CHECK(row.ell_to_ref == doctest::Approx((1 - m) * norm).epsilon(1e-6));
  CHECK(row.violation() < 0);

  double previous = kInfinity;
  for (int k = 0; k < 3; ++k) {
    const double middle = triangle_decomposition(cfg, store, ell, k).kell_to_ell;
    CHECK(middle < previous);
    previous = middle;
  }
  CHECK(code_of([&] { run_linear_program(cfg, store, ell, 7); }) == ErrorCode::BadConfig);

  json silent = single_mode_json(scratch("silent"));
  silent["initial"]["components"][0]["amplitude"] = 0.0;
  const ExperimentConfig zero = parse_config(silent);
  RunStore zstore(zero.output_dir, false, false);
  run_viscosity_sweep(zero, zstore, false);
  const TriangleRow z = triangle_decomposition(zero, zstore, ell, 0);
  CHECK(z.lhs == 0.0);
  CHECK(z.k_to_kell == 0.0);
  CHECK(z.kell_to_ell == 0.0);
  CHECK(z.ell_to_ref == 0.0);
}

TEST_CASE("missing runs are reported") {
  const fs::path dir = scratch("missing");
  const ExperimentConfig cfg = parse_config(single_mode_json(dir));
  RunStore store(cfg.output_dir, true, false);
  CHECK(code_of([&] { store.get(rung_id(0, 64)); }) == ErrorCode::MissingTrajectory);
  CHECK(code_of([&] { run_linear_program(cfg, store, 4.0, 0); }) == ErrorCode::MissingTrajectory);
}

TEST_CASE("sweep outputs are deterministic") {
  json j = single_mode_json("");
  j["initial"]["components"] = {{{"kind", "multi_mode"}, {"seed", 4}, {"kmax", 5}}};
  j["grids"] = {32, 64};
  std::vector<std::string> outputs;
  for (int run = 0; run < 2; ++run) {
    j["output_dir"] = scratch("determinism_" + std::to_string(run)).string();
    j["parallelism"] = run == 0 ? 1 : 3;
    run_viscosity_sweep(parse_config(j));
    outputs.push_back(slurp(fs::path(j["output_dir"].get<std::string>()) / "convergence.csv") +
                      slurp(fs::path(j["output_dir"].get<std::string>()) / "diagnostics.csv"));
  }
  CHECK(outputs[0] == outputs[1]);
}

TEST_CASE("command line") {
  const fs::path dir = scratch("cli");
  const fs::path cfg_path = dir / "cfg.json";
  std::ofstream(cfg_path) << single_mode_json(dir / "out").dump(2);
  const fs::path log = dir / "log.txt";

  CHECK(run_cli("simulate \"" + cfg_path.string() + "\"", log) == 0);
  CHECK(fs::exists(dir / "out" / "simulate" / "manifest.json"));
  CHECK(run_cli("diagnose \"" + (dir / "out" / "simulate").string() + "\"", log) == 0);
  CHECK(fs::exists(dir / "out" / "simulate" / "estimates.csv"));

  CHECK(run_cli("sweep \"" + cfg_path.string() + "\"", log) == 0);
  const auto csv = lines(dir / "out" / "convergence.csv");
  CHECK(csv.size() == 4);

  CHECK(run_cli("report \"" + (dir / "out").string() + "\"", log) == 0);
  const std::string svg = slurp(dir / "out" / "distance_vs_nu.svg");
  const std::regex point("<circle[^>]*data-x=\"([^\"]+)\" data-y=\"([^\"]+)\"");
  std::vector<std::pair<double, double>> points;
  for (auto it = std::sregex_iterator(svg.begin(), svg.end(), point); it != std::sregex_iterator(); ++it)
    points.emplace_back(std::stod((*it)[1]), std::stod((*it)[2]));
  REQUIRE(points.size() == 3);
  for (const auto& [nu, d] : points) CHECK(std::abs(d - closed_form(nu)) < 1e-5);

  CHECK(run_cli("linearize \"" + cfg_path.string() + "\" --ell 8 --k 2", log) == 0);
  CHECK(lines(dir / "out" / "triangle.csv").size() == 2);

  std::ofstream(dir / "bad.json") << R"({"grids": [64], "colour": 1})";
  CHECK(run_cli("sweep \"" + (dir / "bad.json").string() + "\"", log) == 2);
  std::ofstream(dir / "broken.json") << "{";
  CHECK(run_cli("simulate \"" + (dir / "broken.json").string() + "\"", log) == 2);
  fs::create_directories(dir / "nothing");
  CHECK(run_cli("diagnose \"" + (dir / "nothing").string() + "\"", log) == 1);

  json blow = single_mode_json(dir / "blow");
  blow["initial"]["components"][0]["amplitude"] = 1e-9;
  blow["forcing"] = {{"components", {{{"kind", "single_mode"}, {"k", {0, 1}}}}}};
  std::ofstream(dir / "blow.json") << blow.dump();
  CHECK(run_cli("simulate \"" + (dir / "blow.json").string() + "\"", log) == 3);

  const std::string env = "VORTEX_OUTPUT_DIR=\"" + (dir / "env").string() + "\" ";
  const std::string cmd = env + "\"" + VORTEX_CLI + "\" --grid 32 simulate \"" + cfg_path.string() + "\" > /dev/null 2>&1";
  CHECK(std::system(cmd.c_str()) == 0);
  CHECK(fs::exists(dir / "env" / "simulate" / "manifest.json"));
}
