#include "vortex/trajectory_io.hpp"

#include <fstream>

#include "vortex/biot_savart.hpp"
#include "vortex/snapshot_io.hpp"

namespace vortex {

namespace fs = std::filesystem;
using nlohmann::json;

void write_trajectory(const fs::path& dir, const Trajectory& traj, const json& extra, bool write_velocity) {
  fs::create_directories(dir);
  json manifest;
  manifest["format"] = "vortex-trajectory-1";
  const SolverConfig& c = traj.config;
  manifest["config"] = {{"n", c.grid.n()},      {"dealias_fraction", c.grid.dealias_fraction()},
                        {"nu", c.nu},           {"t_end", c.t_end},
                        {"dt_max", c.dt_max},   {"cfl", c.cfl},
                        {"p", c.p},             {"snapshot_stride", c.snapshot_stride}};
  manifest["times"] = traj.times;
  manifest["accepted_steps"] = traj.accepted_steps;

  json files = json::array();
  json velocity_files = json::array();
  for (std::size_t i = 0; i < traj.size(); ++i) {
    const std::string name = "w_" + std::to_string(i) + ".vvf";
    write_field(dir / name, traj.snapshots[i]);
    files.push_back(name);
    if (write_velocity) {
      const auto u = velocity_from_vorticity(traj.snapshots[i]);
      const std::string n1 = "u1_" + std::to_string(i) + ".vvf";
      const std::string n2 = "u2_" + std::to_string(i) + ".vvf";
      write_field(dir / n1, u.u1);
      write_field(dir / n2, u.u2);
      velocity_files.push_back({n1, n2});
    }
  }
  manifest["files"] = files;
  if (write_velocity) manifest["velocity_files"] = velocity_files;

  json records = json::array();
  for (const auto& r : traj.records) {
    json lp = json::array();
    for (const auto& [p, v] : r.lp_norms) lp.push_back({p, v});
    records.push_back({{"time", r.time},
                       {"lp_norms", lp},
                       {"linf", r.linf_norm},
                       {"grad_halfp", r.grad_halfp_norm},
                       {"renorm_residual", r.renorm_residual},
                       {"notes", r.notes}});
  }
  manifest["records"] = records;
  if (traj.failure)
    manifest["failure"] = {{"code", std::string(to_string(traj.failure->code))}, {"message", traj.failure->message}};
  else
    manifest["failure"] = nullptr;
  manifest["extra"] = extra;

  std::ofstream os(dir / "manifest.json");
  if (!os) throw Error(ErrorCode::BadFile, "cannot write manifest in " + dir.string());
  os << manifest.dump(2) << '\n';
}

LoadedTrajectory read_trajectory(const fs::path& dir) {
  const fs::path manifest_path = dir / "manifest.json";
  if (!fs::exists(manifest_path)) throw Error(ErrorCode::MissingTrajectory, "no manifest in " + dir.string());
  std::ifstream is(manifest_path);
  LoadedTrajectory out;
  try {
    const json m = json::parse(is);
    const json& c = m.at("config");
    Trajectory& t = out.trajectory;
    const double fraction = c.at("dealias_fraction").get<double>();
    t.config.grid = TorusGrid(c.at("n").get<int>(), fraction);
    t.config.nu = c.at("nu").get<double>();
    t.config.t_end = c.at("t_end").get<double>();
    t.config.dt_max = c.at("dt_max").get<double>();
    t.config.cfl = c.at("cfl").get<double>();
    t.config.p = c.at("p").get<double>();
    t.config.snapshot_stride = c.at("snapshot_stride").get<int>();
    t.times = m.at("times").get<std::vector<double>>();
    t.accepted_steps = m.value("accepted_steps", 0);
    const auto files = m.at("files").get<std::vector<std::string>>();
    if (files.size() != t.times.size()) throw Error(ErrorCode::BadFile, "manifest times and files differ in length");
    for (std::size_t i = 0; i < files.size(); ++i) {
      Field f = read_field(dir / files[i], fraction);
      f.set_time(t.times[i]);
      t.snapshots.push_back(std::move(f));
    }
    for (const auto& r : m.at("records")) {
      DiagnosticsRecord rec;
      rec.time = r.at("time").get<double>();
      for (const auto& pv : r.at("lp_norms")) rec.lp_norms[pv.at(0).get<double>()] = pv.at(1).get<double>();
      rec.linf_norm = r.at("linf").get<double>();
      rec.grad_halfp_norm = r.at("grad_halfp").get<double>();
      rec.renorm_residual = r.value("renorm_residual", 0.0);
      rec.notes = r.value("notes", "");
      t.records.push_back(rec);
    }
    if (!m.at("failure").is_null()) {
      t.failure = Failure{ErrorCode::BlowupDetected, m["failure"].at("message").get<std::string>()};
      const auto code = m["failure"].at("code").get<std::string>();
      for (int k = 0; k <= static_cast<int>(ErrorCode::BadConfig); ++k)
        if (to_string(static_cast<ErrorCode>(k)) == code) t.failure->code = static_cast<ErrorCode>(k);
    }
    out.extra = m.value("extra", json{});
  } catch (const json::exception& e) {
    throw Error(ErrorCode::BadFile, "malformed manifest in " + dir.string() + ": " + e.what());
  }
  return out;
}

}  // namespace vortex
