#include "vortex/harness.hpp"

#include <atomic>
#include <charconv>
#include <chrono>
#include <cmath>
#include <fstream>
#include <thread>

#include "vortex/trajectory_io.hpp"

namespace vortex {

namespace fs = std::filesystem;
using nlohmann::json;

std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

std::string reference_id(int n) { return "ref_n" + std::to_string(n); }
std::string rung_id(int rung, int n) { return "nu" + std::to_string(rung) + "_n" + std::to_string(n); }
std::string ell_tag(double ell) { return std::isinf(ell) ? "inf" : format_number(ell); }

namespace {

/// Runs fn(0..count-1) on up to `threads` workers. Exceptions escape from
/// the lowest failing index.
template <typename Fn>
void parallel_for(std::size_t count, int threads, Fn&& fn) {
  const std::size_t workers = std::min<std::size_t>(count, static_cast<std::size_t>(std::max(threads, 1)));
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::exception_ptr> errors(count);
  std::vector<std::thread> pool;
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < count; i = next++) {
        try {
          fn(i);
        } catch (...) {
          errors[i] = std::current_exception();
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

std::ofstream open_csv(const fs::path& path) {
  fs::create_directories(path.parent_path());
  std::ofstream os(path);
  if (!os) throw Error(ErrorCode::BadFile, "cannot write " + path.string());
  return os;
}

json run_extra(const ExperimentConfig& cfg, const std::string& kind, double nu) {
  return {{"kind", kind}, {"nu", nu}, {"forcing", to_json(cfg.forcing)}, {"forcing_nu", nu}};
}

/// Linear-in-nu extrapolation of the two finest rungs to nu = 0.
Trajectory richardson_reference(const Trajectory& fine, double nu_fine, const Trajectory& coarse, double nu_coarse) {
  Trajectory out;
  out.config = fine.config;
  out.config.nu = 0.0;
  out.times = fine.times;
  const double a = nu_coarse / (nu_coarse - nu_fine);
  const double b = -nu_fine / (nu_coarse - nu_fine);
  for (std::size_t i = 0; i < fine.size(); ++i) {
    Field f = fine.snapshots[i];
    f.coeffs() = a * fine.snapshots[i].coeffs() + b * coarse.at(fine.times[i]).coeffs();
    out.snapshots.push_back(std::move(f));
    out.records.push_back(snapshot_record(out.snapshots.back(), fine.config.p));
  }
  out.accepted_steps = fine.accepted_steps;
  return out;
}

Forcing mollified_forcing(const Forcing& g, const TorusGrid& grid, double ell, MollifierProfile profile) {
  if (g.is_zero()) return g;
  return g.mollified(make_kernel<double>(grid, ell, profile));
}

std::vector<std::vector<std::string>> read_csv(const fs::path& path) {
  std::ifstream is(path);
  std::vector<std::vector<std::string>> rows;
  std::string line;
  while (std::getline(is, line)) {
    std::vector<std::string> cells;
    std::size_t start = 0;
    for (;;) {
      const auto comma = line.find(',', start);
      cells.push_back(line.substr(start, comma - start));
      if (comma == std::string::npos) break;
      start = comma + 1;
    }
    rows.push_back(std::move(cells));
  }
  return rows;
}

}  // namespace

RunStore::RunStore(fs::path output_dir, bool persist, bool write_velocity)
    : root_(std::move(output_dir)), persist_(persist), write_velocity_(write_velocity) {}

void RunStore::put(const std::string& id, std::shared_ptr<const Trajectory> traj, const json& extra) {
  if (persist_) write_trajectory(run_dir(id), *traj, extra, write_velocity_);
  std::lock_guard lock(mutex_);
  cache_[id] = std::move(traj);
}

std::shared_ptr<const Trajectory> RunStore::get(const std::string& id) {
  {
    std::lock_guard lock(mutex_);
    if (auto it = cache_.find(id); it != cache_.end()) return it->second;
  }
  auto loaded = std::make_shared<const Trajectory>(read_trajectory(run_dir(id)).trajectory);
  std::lock_guard lock(mutex_);
  return cache_.emplace(id, std::move(loaded)).first->second;
}

bool RunStore::contains(const std::string& id) {
  {
    std::lock_guard lock(mutex_);
    if (cache_.count(id)) return true;
  }
  return fs::exists(run_dir(id) / "manifest.json");
}

ConvergenceTable run_viscosity_sweep(const ExperimentConfig& cfg) {
  RunStore store(cfg.output_dir, cfg.persist_trajectories, cfg.write_velocity);
  return run_viscosity_sweep(cfg, store);
}

namespace {

std::string convergence_header(const ExperimentConfig& cfg) {
  std::string h = "rung,nu,n,distance";
  for (double q : cfg.q_exponents) h += ",distance_q" + format_number(q);
  return h + ",status\n";
}

}  // namespace

ConvergenceTable run_viscosity_sweep(const ExperimentConfig& cfg, RunStore& store, bool write_files) {
  ConvergenceTable table;
  const TorusGrid fine = cfg.finest_grid();
  const int nf = fine.n();
  const std::size_t rungs = cfg.nu_ladder.size();
  if (rungs == 0) {
    if (write_files) {
      open_csv(store.root() / "convergence.csv") << convergence_header(cfg);
    }
    return table;
  }
  if (cfg.reference == ReferenceKind::Richardson && rungs < 2)
    throw Error(ErrorCode::BadConfig, "a Richardson reference needs at least two rungs");

  std::vector<int> grids = cfg.grids;
  std::sort(grids.begin(), grids.end());
  grids.erase(std::unique(grids.begin(), grids.end()), grids.end());

  struct Task {
    int rung;  // -1 for the Euler reference
    int n;
  };
  std::vector<Task> tasks;
  if (cfg.reference == ReferenceKind::Euler) tasks.push_back({-1, nf});
  for (std::size_t r = 0; r < rungs; ++r)
    for (int n : grids) tasks.push_back({static_cast<int>(r), n});

  std::vector<std::shared_ptr<const Trajectory>> results(tasks.size());
  std::vector<Forcing> forcings(tasks.size());
  std::vector<double> runtimes(tasks.size(), 0.0);

  parallel_for(tasks.size(), cfg.parallelism, [&](std::size_t i) {
    const auto start = std::chrono::steady_clock::now();
    const Task& t = tasks[i];
    const double nu = t.rung < 0 ? 0.0 : cfg.nu_ladder[static_cast<std::size_t>(t.rung)];
    const SolverConfig sc = cfg.solver(nu, t.n);
    const Field w0 = build_family(cfg.initial, nu, sc.grid);
    forcings[i] = build_forcing(cfg.forcing, sc.grid, nu);
    auto traj = std::make_shared<const Trajectory>(solve(w0, sc, forcings[i]));
    const std::string id = t.rung < 0 ? reference_id(t.n) : rung_id(t.rung, t.n);
    store.put(id, traj, run_extra(cfg, "nonlinear", nu));
    results[i] = traj;
    runtimes[i] = seconds_since(start);
  });

  auto result_of = [&](int rung, int n) -> std::shared_ptr<const Trajectory> {
    for (std::size_t i = 0; i < tasks.size(); ++i)
      if (tasks[i].rung == rung && tasks[i].n == n) return results[i];
    return nullptr;
  };

  std::shared_ptr<const Trajectory> reference;
  if (cfg.reference == ReferenceKind::Euler) {
    reference = results.front();
    table.reference_runtime = runtimes.front();
  } else {
    const auto& a = result_of(static_cast<int>(rungs) - 1, nf);
    const auto& b = result_of(static_cast<int>(rungs) - 2, nf);
    if (a->ok() && b->ok()) {
      reference = std::make_shared<const Trajectory>(
          richardson_reference(*a, cfg.nu_ladder[rungs - 1], *b, cfg.nu_ladder[rungs - 2]));
      store.put(reference_id(nf), reference, run_extra(cfg, "richardson", 0.0));
    }
  }
  if (reference && !reference->ok()) {
    throw Error(reference->failure->code, "reference run failed: " + reference->failure->message);
  }
  if (!reference) throw Error(ErrorCode::BlowupDetected, "reference runs failed, no Richardson reference");
  const auto alternative = result_of(static_cast<int>(rungs) - 1, nf);

  // Distances in parallel as well; each row only reads shared trajectories.
  std::vector<std::size_t> row_tasks;
  for (std::size_t i = 0; i < tasks.size(); ++i)
    if (tasks[i].rung >= 0) row_tasks.push_back(i);
  table.rows.resize(row_tasks.size());
  parallel_for(row_tasks.size(), cfg.parallelism, [&](std::size_t r) {
    const std::size_t i = row_tasks[r];
    ConvergenceRow& row = table.rows[r];
    row.rung = tasks[i].rung;
    row.nu = cfg.nu_ladder[static_cast<std::size_t>(row.rung)];
    row.n = tasks[i].n;
    row.runtime = runtimes[i];
    const double nan = std::numeric_limits<double>::quiet_NaN();
    row.distance = nan;
    row.alternative_distance = nan;
    row.distance_q.assign(cfg.q_exponents.size(), nan);
    const auto& traj = results[i];
    if (!traj->ok()) {
      row.status = to_string(traj->failure->code);
      return;
    }
    try {
      const Trajectory fine_traj = traj->grid() == fine ? *traj : traj->resampled(fine);
      row.distance = pair_distance(fine_traj, *reference, cfg.p);
      for (std::size_t q = 0; q < cfg.q_exponents.size(); ++q)
        row.distance_q[q] = pair_distance(fine_traj, *reference, cfg.q_exponents[q]);
      if (alternative && alternative->ok()) row.alternative_distance = pair_distance(fine_traj, *alternative, cfg.p);
    } catch (const Error& e) {
      row.status = to_string(e.code());
    }
  });

  double previous = std::numeric_limits<double>::infinity();
  for (const auto& row : table.rows) {
    if (row.n != nf) continue;
    if (!(row.distance < previous)) table.monotone = false;
    previous = row.distance;
  }
  if (alternative && alternative->ok()) table.reference_sensitivity = pair_distance(*reference, *alternative, cfg.p);

  if (!write_files) return table;
  const fs::path dir = store.root();
  {
    auto os = open_csv(dir / "convergence.csv");
    os << convergence_header(cfg);
    for (const auto& row : table.rows) {
      os << row.rung << ',' << format_number(row.nu) << ',' << row.n << ',' << format_number(row.distance);
      for (double d : row.distance_q) os << ',' << format_number(d);
      os << ',' << row.status << '\n';
    }
  }
  {
    auto os = open_csv(dir / "reference.csv");
    os << "rung,nu,n,distance_primary,distance_alternative,difference\n";
    for (const auto& row : table.rows)
      os << row.rung << ',' << format_number(row.nu) << ',' << row.n << ',' << format_number(row.distance) << ','
         << format_number(row.alternative_distance) << ',' << format_number(row.distance - row.alternative_distance)
         << '\n';
  }
  {
    auto os = open_csv(dir / "timings.csv");
    os << "run_id,seconds\n";
    for (std::size_t i = 0; i < tasks.size(); ++i)
      os << (tasks[i].rung < 0 ? reference_id(tasks[i].n) : rung_id(tasks[i].rung, tasks[i].n)) << ','
         << format_number(runtimes[i]) << '\n';
  }
  {
    json summary = {{"monotone", table.monotone},
                    {"reference", cfg.reference == ReferenceKind::Euler ? "euler" : "richardson"},
                    {"reference_sensitivity", table.reference_sensitivity},
                    {"rows", table.rows.size()},
                    {"config", to_json(cfg)}};
    std::ofstream(dir / "sweep_summary.json") << summary.dump(2) << '\n';
  }
  std::vector<std::pair<std::string, std::shared_ptr<const Trajectory>>> runs;
  std::vector<Forcing> run_forcings;
  if (cfg.reference == ReferenceKind::Richardson) {
    runs.emplace_back(reference_id(nf), reference);
    run_forcings.push_back(build_forcing(cfg.forcing, fine, 0.0));
  }
  for (std::size_t i = 0; i < tasks.size(); ++i) {
    runs.emplace_back(tasks[i].rung < 0 ? reference_id(tasks[i].n) : rung_id(tasks[i].rung, tasks[i].n), results[i]);
    run_forcings.push_back(forcings[i]);
  }
  write_run_diagnostics(dir, runs, run_forcings, cfg.p, cfg.p_tilde);
  return table;
}

LinearProgramResult run_linear_program(const ExperimentConfig& cfg, RunStore& store, double ell, int k) {
  if (k < 0 || static_cast<std::size_t>(k) >= cfg.nu_ladder.size())
    throw Error(ErrorCode::BadConfig, "rung index " + std::to_string(k) + " outside the viscosity ladder");
  const TorusGrid grid = cfg.finest_grid();
  const double nu_k = cfg.nu_ladder[static_cast<std::size_t>(k)];
  const auto kernel = make_kernel<double>(grid, ell, cfg.profile);
  LinearProgramResult out;

  const std::string ref_id = "lin_ref_ell" + ell_tag(ell);
  if (store.contains(ref_id)) {
    out.omega_ell = store.get(ref_id);
  } else {
    auto reference = store.get(reference_id(grid.n()));
    const Forcing g = mollified_forcing(build_forcing(cfg.forcing, grid, 0.0), grid, ell, cfg.profile);
    const Field w0 = mollify(reference->snapshots.front(), kernel);
    SolverConfig sc = cfg.solver(0.0, grid.n());
    out.omega_ell = std::make_shared<const Trajectory>(solve(w0, sc, g, LinearFrozen{reference}));
    json extra = run_extra(cfg, "linear", 0.0);
    extra["ell"] = ell_tag(ell);
    extra["profile"] = cfg.profile == MollifierProfile::Gaussian ? "gaussian" : "bump";
    store.put(ref_id, out.omega_ell, extra);
  }

  const std::string k_id = "lin_k" + std::to_string(k) + "_ell" + ell_tag(ell);
  if (store.contains(k_id)) {
    out.omega_k_ell = store.get(k_id);
  } else {
    auto source = store.get(rung_id(k, grid.n()));
    const Forcing g = mollified_forcing(build_forcing(cfg.forcing, grid, nu_k), grid, ell, cfg.profile);
    const Field w0 = mollify(source->snapshots.front(), kernel);
    SolverConfig sc = cfg.solver(nu_k, grid.n());
    out.omega_k_ell = std::make_shared<const Trajectory>(solve(w0, sc, g, LinearFrozen{source}));
    json extra = run_extra(cfg, "linear", nu_k);
    extra["ell"] = ell_tag(ell);
    extra["profile"] = cfg.profile == MollifierProfile::Gaussian ? "gaussian" : "bump";
    store.put(k_id, out.omega_k_ell, extra);
  }
  if (!out.omega_ell->ok()) throw Error(out.omega_ell->failure->code, out.omega_ell->failure->message);
  if (!out.omega_k_ell->ok()) throw Error(out.omega_k_ell->failure->code, out.omega_k_ell->failure->message);
  return out;
}

namespace {

Lemma1Row lemma1_row(const ExperimentConfig& cfg, const Trajectory& linear, const Trajectory& nonlinear, double nu,
                     double ell, int k) {
  const TorusGrid& grid = nonlinear.grid();
  const auto kernel = make_kernel<double>(grid, ell, cfg.profile);
  Lemma1Row row;
  row.k = k;
  row.nu = nu;
  row.lhs = pair_distance(linear, nonlinear, cfg.p);
  row.rhs_initial = mollification_error(nonlinear.snapshots.front(), kernel, cfg.p);
  const Forcing g = build_forcing(cfg.forcing, grid, nu);
  if (!g.is_zero()) {
    const Field shape = *g.shape();
    row.rhs_forcing = Forcing::analytic(mollify(shape, kernel) - shape, g.envelope()).l1_lp_norm(cfg.t_end, cfg.p);
  }
  return row;
}

}  // namespace

Lemma1Report lemma1_report(const ExperimentConfig& cfg, RunStore& store, double ell) {
  Lemma1Report rep;
  rep.ell = ell;
  const int n = cfg.finest_grid().n();
  for (std::size_t k = 0; k < cfg.nu_ladder.size(); ++k) {
    const auto lin = run_linear_program(cfg, store, ell, static_cast<int>(k));
    if (k == 0) rep.rows.push_back(lemma1_row(cfg, *lin.omega_ell, *store.get(reference_id(n)), 0.0, ell, -1));
    Lemma1Row row = lemma1_row(cfg, *lin.omega_k_ell, *store.get(rung_id(static_cast<int>(k), n)),
                               cfg.nu_ladder[k], ell, static_cast<int>(k));
    rep.max_lhs = std::max(rep.max_lhs, row.lhs);
    rep.max_rhs = std::max(rep.max_rhs, row.rhs());
    rep.rows.push_back(row);
  }
  return rep;
}

TriangleRow triangle_decomposition(const ExperimentConfig& cfg, RunStore& store, double ell, int k) {
  const auto lin = run_linear_program(cfg, store, ell, k);
  const int n = cfg.finest_grid().n();
  const auto reference = store.get(reference_id(n));
  const auto rung = store.get(rung_id(k, n));
  TriangleRow row;
  row.ell = ell;
  row.k = k;
  row.nu = cfg.nu_ladder[static_cast<std::size_t>(k)];
  row.lhs = pair_distance(*rung, *reference, cfg.p);
  row.k_to_kell = pair_distance(*rung, *lin.omega_k_ell, cfg.p);
  row.kell_to_ell = pair_distance(*lin.omega_k_ell, *lin.omega_ell, cfg.p);
  row.ell_to_ref = pair_distance(*lin.omega_ell, *reference, cfg.p);
  return row;
}

void write_lemma1(const fs::path& dir, const std::vector<Lemma1Report>& reports) {
  auto os = open_csv(dir / "lemma1.csv");
  os << "ell,k,nu,lhs,rhs_forcing,rhs_initial,rhs,lhs_minus_rhs\n";
  for (const auto& rep : reports)
    for (const auto& r : rep.rows)
      os << ell_tag(rep.ell) << ',' << (r.k < 0 ? std::string("ref") : std::to_string(r.k)) << ','
         << format_number(r.nu) << ',' << format_number(r.lhs) << ',' << format_number(r.rhs_forcing) << ','
         << format_number(r.rhs_initial) << ',' << format_number(r.rhs()) << ',' << format_number(r.lhs - r.rhs())
         << '\n';
  auto us = open_csv(dir / "lemma1_uniform.csv");
  us << "ell,max_lhs,max_rhs\n";
  for (const auto& rep : reports)
    us << ell_tag(rep.ell) << ',' << format_number(rep.max_lhs) << ',' << format_number(rep.max_rhs) << '\n';
}

void write_triangle(const fs::path& dir, const std::vector<TriangleRow>& rows) {
  auto os = open_csv(dir / "triangle.csv");
  os << "ell,k,nu,lhs,k_to_kell,kell_to_ell,ell_to_ref,violation,holds\n";
  for (const auto& r : rows)
    os << ell_tag(r.ell) << ',' << r.k << ',' << format_number(r.nu) << ',' << format_number(r.lhs) << ','
       << format_number(r.k_to_kell) << ',' << format_number(r.kell_to_ell) << ',' << format_number(r.ell_to_ref)
       << ',' << format_number(r.violation()) << ',' << (r.violation() < 1e-10 ? "true" : "false") << '\n';
}

void write_run_diagnostics(const fs::path& dir,
                           const std::vector<std::pair<std::string, std::shared_ptr<const Trajectory>>>& runs,
                           const std::vector<Forcing>& forcings, double p, double p_tilde) {
  auto ds = open_csv(dir / "diagnostics.csv");
  ds << "run_id,time,metric,value\n";
  const std::string lp = "lp_" + format_number(p);
  const std::string lpt = "lp_" + format_number(p_tilde);
  for (const auto& [id, traj] : runs) {
    for (std::size_t i = 0; i < traj->size(); ++i) {
      const auto& rec = traj->records[i];
      const std::string prefix = id + ',' + format_number(traj->times[i]) + ',';
      ds << prefix << lp << ',' << format_number(rec.lp_norms.at(p)) << '\n';
      if (p != 2.0) ds << prefix << "lp_2," << format_number(rec.lp_norms.at(2.0)) << '\n';
      if (p_tilde != p && p_tilde != 2.0)
        ds << prefix << lpt << ',' << format_number(lp_norm(traj->snapshots[i], p_tilde)) << '\n';
      ds << prefix << "linf," << format_number(rec.linf_norm) << '\n';
      ds << prefix << "grad_halfp," << format_number(rec.grad_halfp_norm) << '\n';
    }
  }
  auto es = open_csv(dir / "estimates.csv");
  es << "run_id,nu,p,initial_lp,sup_lp,dissipation,forcing_l1_lp,rhs,ratio,sup_ratio,inviscid_excess,l2_balance,"
        "status\n";
  for (std::size_t r = 0; r < runs.size(); ++r) {
    const auto& [id, traj] = runs[r];
    const EnergyReport rep = energy_estimate_report(*traj, forcings[r], p);
    es << id << ',' << format_number(traj->config.nu) << ',' << format_number(p) << ','
       << format_number(rep.initial_lp) << ',' << format_number(rep.sup_lp) << ',' << format_number(rep.dissipation)
       << ',' << format_number(rep.forcing_l1_lp) << ',' << format_number(rep.rhs) << ',' << format_number(rep.ratio)
       << ',' << format_number(rep.sup_ratio) << ',' << format_number(rep.inviscid_excess) << ',';
    if (traj->config.nu == 0.0) es << format_number(l2_balance_residual(*traj, forcings[r]));
    es << ',' << (traj->ok() ? "ok" : to_string(traj->failure->code)) << '\n';
  }
}

namespace {

struct Series {
  std::string name;
  std::vector<std::pair<double, double>> points;
};

std::string svg_plot(const std::string& title, const std::string& xlabel, const std::string& ylabel,
                     const std::vector<Series>& series) {
  constexpr double W = 640, H = 440, L = 80, R = 160, T = 40, B = 60;
  bool log_y = true;
  double xmin = INFINITY, xmax = -INFINITY, ymin = INFINITY, ymax = -INFINITY;
  for (const auto& s : series)
    for (auto [x, y] : s.points) {
      xmin = std::min(xmin, std::log10(x));
      xmax = std::max(xmax, std::log10(x));
      if (!(y > 0.0)) log_y = false;
    }
  for (const auto& s : series)
    for (auto [x, y] : s.points) {
      const double v = log_y ? std::log10(y) : y;
      ymin = std::min(ymin, v);
      ymax = std::max(ymax, v);
    }
  if (!(xmax > xmin)) xmin -= 0.5, xmax += 0.5;
  if (!(ymax > ymin)) ymin -= 0.5, ymax += 0.5;
  auto px = [&](double x) { return L + (std::log10(x) - xmin) / (xmax - xmin) * (W - L - R); };
  auto py = [&](double y) { return H - B - ((log_y ? std::log10(y) : y) - ymin) / (ymax - ymin) * (H - T - B); };

  static const char* colors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"};
  std::string s;
  s += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"640\" height=\"440\" viewBox=\"0 0 640 440\">\n";
  s += "<rect width=\"640\" height=\"440\" fill=\"white\"/>\n";
  s += "<text x=\"320\" y=\"24\" text-anchor=\"middle\" font-size=\"15\">" + title + "</text>\n";
  s += "<line x1=\"80\" y1=\"380\" x2=\"480\" y2=\"380\" stroke=\"black\"/>\n";
  s += "<line x1=\"80\" y1=\"40\" x2=\"80\" y2=\"380\" stroke=\"black\"/>\n";
  s += "<text x=\"280\" y=\"420\" text-anchor=\"middle\" font-size=\"13\">" + xlabel + " (log scale)</text>\n";
  s += "<text x=\"20\" y=\"210\" text-anchor=\"middle\" font-size=\"13\" transform=\"rotate(-90 20 210)\">" + ylabel +
       (log_y ? " (log scale)" : "") + "</text>\n";
  for (int tick = 0; tick <= 4; ++tick) {
    const double xv = xmin + (xmax - xmin) * tick / 4.0;
    const double yv = ymin + (ymax - ymin) * tick / 4.0;
    const double xp = L + (W - L - R) * tick / 4.0;
    const double yp = H - B - (H - T - B) * tick / 4.0;
    s += "<text x=\"" + format_number(xp) + "\" y=\"396\" text-anchor=\"middle\" font-size=\"11\">" +
         format_number(std::round(std::pow(10.0, xv) * 1e4) / 1e4) + "</text>\n";
    s += "<text x=\"74\" y=\"" + format_number(yp + 4) + "\" text-anchor=\"end\" font-size=\"11\">" +
         format_number(std::round((log_y ? std::pow(10.0, yv) : yv) * 1e4) / 1e4) + "</text>\n";
  }
  for (std::size_t i = 0; i < series.size(); ++i) {
    const char* color = colors[i % 6];
    std::string pts;
    for (auto [x, y] : series[i].points) pts += format_number(px(x)) + "," + format_number(py(y)) + " ";
    s += "<g class=\"series\" data-name=\"" + series[i].name + "\">\n";
    s += "<polyline fill=\"none\" stroke=\"" + std::string(color) + "\" stroke-width=\"1.5\" points=\"" + pts + "\"/>\n";
    for (auto [x, y] : series[i].points)
      s += "<circle cx=\"" + format_number(px(x)) + "\" cy=\"" + format_number(py(y)) + "\" r=\"3.5\" fill=\"" +
           color + "\" data-x=\"" + format_number(x) + "\" data-y=\"" + format_number(y) + "\"/>\n";
    s += "</g>\n";
    const double ly = T + 20.0 * static_cast<double>(i);
    s += "<text x=\"492\" y=\"" + format_number(ly + 4) + "\" font-size=\"12\" fill=\"" + color + "\">" +
         series[i].name + "</text>\n";
  }
  s += "</svg>\n";
  return s;
}

int column(const std::vector<std::string>& header, const std::string& name, const fs::path& path) {
  const auto it = std::find(header.begin(), header.end(), name);
  if (it == header.end()) throw Error(ErrorCode::BadFile, path.string() + " has no column " + name);
  return static_cast<int>(it - header.begin());
}

}  // namespace

std::vector<fs::path> write_report(const fs::path& dir) {
  std::vector<fs::path> written;
  if (const fs::path conv = dir / "convergence.csv"; fs::exists(conv)) {
    const auto rows = read_csv(conv);
    if (rows.empty()) throw Error(ErrorCode::BadFile, conv.string() + " is empty");
    const int cn = column(rows[0], "n", conv), cnu = column(rows[0], "nu", conv), cd = column(rows[0], "distance", conv);
    std::map<int, Series> by_grid;
    for (std::size_t i = 1; i < rows.size(); ++i) {
      const double nu = std::stod(rows[i][cnu]);
      const double d = std::stod(rows[i][cd]);
      const int n = std::stoi(rows[i][cn]);
      if (!std::isfinite(d)) continue;
      by_grid[n].name = "n = " + std::to_string(n);
      by_grid[n].points.emplace_back(nu, d);
    }
    std::vector<Series> series;
    for (auto& [n, s] : by_grid) series.push_back(std::move(s));
    std::ofstream(dir / "distance_vs_nu.svg") << svg_plot("sup_t distance to the reference", "nu", "distance", series);
    written.push_back(dir / "distance_vs_nu.svg");
  }
  if (const fs::path uni = dir / "lemma1_uniform.csv"; fs::exists(uni)) {
    const auto rows = read_csv(uni);
    if (rows.empty()) throw Error(ErrorCode::BadFile, uni.string() + " is empty");
    const int ce = column(rows[0], "ell", uni), cl = column(rows[0], "max_lhs", uni), cr = column(rows[0], "max_rhs", uni);
    Series lhs{"max over k, measured", {}}, rhs{"max over k, bound", {}};
    for (std::size_t i = 1; i < rows.size(); ++i) {
      const double ell = std::stod(rows[i][ce]);
      if (!std::isfinite(ell)) continue;
      lhs.points.emplace_back(ell, std::stod(rows[i][cl]));
      rhs.points.emplace_back(ell, std::stod(rows[i][cr]));
    }
    std::ofstream(dir / "distance_vs_ell.svg")
        << svg_plot("linear problems vs nonlinear runs", "ell", "sup_t distance", {lhs, rhs});
    written.push_back(dir / "distance_vs_ell.svg");
  }
  if (written.empty()) throw Error(ErrorCode::BadFile, "no convergence.csv or lemma1_uniform.csv in " + dir.string());
  return written;
}

}  // namespace vortex
