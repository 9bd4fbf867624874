#include "vortex/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>

namespace vortex {

using nlohmann::json;

namespace {

[[noreturn]] void bad(const std::string& what) { throw Error(ErrorCode::BadConfig, what); }

void check_keys(const json& obj, std::initializer_list<const char*> allowed, const std::string& where) {
  if (!obj.is_object()) bad(where + " must be an object");
  for (const auto& [key, value] : obj.items()) {
    if (std::none_of(allowed.begin(), allowed.end(), [&key = key](const char* a) { return key == a; }))
      bad("unknown key '" + key + "' in " + where);
  }
}

double number(const json& obj, const char* key, double fallback) {
  if (!obj.contains(key)) return fallback;
  const json& v = obj[key];
  if (v.is_number()) return v.get<double>();
  if (v.is_string() && (v == "inf" || v == "infinity")) return std::numeric_limits<double>::infinity();
  bad(std::string("key '") + key + "' must be a number");
}

/// Finite-or-"inf" value in a ladder.
double ladder_value(const json& v, const std::string& where) {
  if (v.is_number()) return v.get<double>();
  if (v.is_string() && (v == "inf" || v == "infinity")) return std::numeric_limits<double>::infinity();
  bad(where + " entries must be numbers");
}

json ladder_value_json(double v) { return std::isinf(v) ? json("inf") : json(v); }

std::pair<double, double> pair_of(const json& obj, const char* key, std::pair<double, double> fallback) {
  if (!obj.contains(key)) return fallback;
  const json& v = obj[key];
  if (!v.is_array() || v.size() != 2 || !v[0].is_number() || !v[1].is_number())
    bad(std::string("key '") + key + "' must be a two-element numeric array");
  return {v[0].get<double>(), v[1].get<double>()};
}

MollifierProfile parse_profile(const std::string& s) {
  if (s == "gaussian") return MollifierProfile::Gaussian;
  if (s == "bump") return MollifierProfile::SmoothBump;
  bad("profile must be 'gaussian' or 'bump', got '" + s + "'");
}

const char* profile_name(MollifierProfile p) { return p == MollifierProfile::Gaussian ? "gaussian" : "bump"; }

InitialDataSpec parse_component(const json& j) {
  if (!j.is_object() || !j.contains("kind") || !j["kind"].is_string()) bad("each component needs a string 'kind'");
  const std::string kind = j["kind"];
  InitialDataSpec spec;
  if (kind == "single_mode") {
    check_keys(j, {"kind", "k", "phase", "amplitude"}, "single_mode component");
    const auto [k1, k2] = pair_of(j, "k", {1, 0});
    spec.kind = SingleMode{static_cast<int>(k1), static_cast<int>(k2), number(j, "phase", 0.0)};
  } else if (kind == "multi_mode") {
    check_keys(j, {"kind", "seed", "slope", "kmax", "amplitude"}, "multi_mode component");
    spec.kind = MultiMode{j.value("seed", std::uint64_t{0}), number(j, "slope", 1.0), j.value("kmax", 4)};
  } else if (kind == "power_singularity") {
    check_keys(j, {"kind", "center", "alpha", "cutoff_radius", "amplitude", "assert_lp"}, "power_singularity component");
    const auto [c1, c2] = pair_of(j, "center", {3.0, 3.0});
    spec.kind = PowerSingularity{c1, c2, number(j, "alpha", 1.0), number(j, "cutoff_radius", 1.5)};
    if (j.contains("assert_lp")) spec.assert_lp = number(j, "assert_lp", 2.0);
  } else if (kind == "patch") {
    check_keys(j, {"kind", "center", "radius", "width", "amplitude"}, "patch component");
    const auto [c1, c2] = pair_of(j, "center", {3.0, 3.0});
    spec.kind = Patchlike{c1, c2, number(j, "radius", 1.0), number(j, "width", 0.1)};
  } else {
    bad("unknown component kind '" + kind + "'");
  }
  spec.amplitude = number(j, "amplitude", 1.0);
  if (const auto* s = std::get_if<PowerSingularity>(&spec.kind); s && spec.assert_lp && s->alpha >= 2.0 / *spec.assert_lp)
    throw Error(ErrorCode::AlphaOutOfRange, "power singularity alpha=" + std::to_string(s->alpha) +
                                                " is not below 2/p for the asserted p=" + std::to_string(*spec.assert_lp));
  return spec;
}

json component_json(const InitialDataSpec& spec) {
  json j = std::visit(
      [](const auto& k) -> json {
        using T = std::decay_t<decltype(k)>;
        if constexpr (std::is_same_v<T, SingleMode>)
          return {{"kind", "single_mode"}, {"k", {k.k1, k.k2}}, {"phase", k.phase}};
        if constexpr (std::is_same_v<T, MultiMode>)
          return {{"kind", "multi_mode"}, {"seed", k.seed}, {"slope", k.slope}, {"kmax", k.kmax}};
        if constexpr (std::is_same_v<T, PowerSingularity>)
          return {{"kind", "power_singularity"},
                  {"center", {k.c1, k.c2}},
                  {"alpha", k.alpha},
                  {"cutoff_radius", k.cutoff_radius}};
        if constexpr (std::is_same_v<T, Patchlike>)
          return {{"kind", "patch"}, {"center", {k.c1, k.c2}}, {"radius", k.radius}, {"width", k.width}};
      },
      spec.kind);
  j["amplitude"] = spec.amplitude;
  if (spec.assert_lp) j["assert_lp"] = *spec.assert_lp;
  return j;
}

void parse_family_options(const json& j, PerturbationFamily& fam) {
  check_keys(j, {"mode", "exponent", "profile", "high_k", "high_amplitude"}, "family");
  const std::string mode = j.value("mode", "none");
  if (mode == "none")
    fam.mode = PerturbationFamily::Mode::None;
  else if (mode == "mollify_by_nu")
    fam.mode = PerturbationFamily::Mode::MollifyByNu;
  else if (mode == "additive_high_mode")
    fam.mode = PerturbationFamily::Mode::AdditiveHighMode;
  else
    bad("family mode must be none, mollify_by_nu or additive_high_mode");
  fam.exponent = number(j, "exponent", 0.5);
  if (!(fam.exponent > 0.0)) bad("family exponent must be > 0");
  fam.profile = parse_profile(j.value("profile", "gaussian"));
  const auto [h1, h2] = pair_of(j, "high_k", {8, 3});
  fam.high_k1 = static_cast<int>(h1);
  fam.high_k2 = static_cast<int>(h2);
  fam.high_amplitude = number(j, "high_amplitude", 1.0);
}

json family_json(const PerturbationFamily& fam) {
  const char* mode = fam.mode == PerturbationFamily::Mode::None          ? "none"
                     : fam.mode == PerturbationFamily::Mode::MollifyByNu ? "mollify_by_nu"
                                                                         : "additive_high_mode";
  return {{"mode", mode},
          {"exponent", fam.exponent},
          {"profile", profile_name(fam.profile)},
          {"high_k", {fam.high_k1, fam.high_k2}},
          {"high_amplitude", fam.high_amplitude}};
}

PerturbationFamily parse_data(const json& j, const std::string& where, std::initializer_list<const char*> keys) {
  check_keys(j, keys, where);
  PerturbationFamily fam;
  if (!j.contains("components") || !j["components"].is_array()) bad(where + " needs a 'components' array");
  for (const auto& c : j["components"]) fam.base.push_back(parse_component(c));
  if (j.contains("family")) parse_family_options(j["family"], fam);
  return fam;
}

json data_json(const PerturbationFamily& fam) {
  json comps = json::array();
  for (const auto& c : fam.base) comps.push_back(component_json(c));
  return {{"components", comps}, {"family", family_json(fam)}};
}

}  // namespace

ForcingSpec parse_forcing(const json& j) {
  ForcingSpec spec;
  if (j.is_null()) return spec;
  spec.shape = parse_data(j, "forcing", {"components", "family", "envelope"});
  spec.zero = spec.shape.base.empty();
  if (j.contains("envelope")) {
    const json& e = j["envelope"];
    check_keys(e, {"kind", "rate"}, "forcing envelope");
    const std::string kind = e.value("kind", "constant");
    if (kind == "zero") {
      spec.zero = true;
    } else if (kind == "constant") {
      spec.envelope.kind = TemporalEnvelope::Kind::Constant;
    } else if (kind == "exponential") {
      spec.envelope.kind = TemporalEnvelope::Kind::Exponential;
      spec.envelope.rate = number(e, "rate", 1.0);
    } else {
      bad("envelope kind must be zero, constant or exponential");
    }
  }
  return spec;
}

json to_json(const ForcingSpec& spec) {
  if (spec.zero) return nullptr;
  json j = data_json(spec.shape);
  if (spec.envelope.kind == TemporalEnvelope::Kind::Constant)
    j["envelope"] = {{"kind", "constant"}};
  else
    j["envelope"] = {{"kind", "exponential"}, {"rate", spec.envelope.rate}};
  return j;
}

TorusGrid ExperimentConfig::finest_grid() const {
  return TorusGrid(*std::max_element(grids.begin(), grids.end()), dealias_fraction);
}

SolverConfig ExperimentConfig::solver(double viscosity, int n) const {
  SolverConfig c;
  c.grid = TorusGrid(n, dealias_fraction);
  c.nu = viscosity;
  c.t_end = t_end;
  c.dt_max = dt_max;
  c.cfl = cfl;
  c.p = p;
  c.snapshot_stride = snapshot_stride;
  return c;
}

ExperimentConfig parse_config(const json& j) {
  check_keys(j,
             {"grids", "dealias_fraction", "nu_ladder", "ell_ladder", "p", "p_tilde", "q_exponents", "t_end", "dt_max",
              "cfl", "snapshot_stride", "initial", "forcing", "profile", "reference", "output_dir", "parallelism",
              "persist_trajectories", "write_velocity", "nu"},
             "experiment config");
  ExperimentConfig cfg;
  try {
    if (j.contains("grids")) cfg.grids = j["grids"].get<std::vector<int>>();
    cfg.dealias_fraction = number(j, "dealias_fraction", cfg.dealias_fraction);

    if (j.contains("nu_ladder")) {
      const json& l = j["nu_ladder"];
      if (l.is_array()) {
        for (const auto& v : l) cfg.nu_ladder.push_back(ladder_value(v, "nu_ladder"));
      } else {
        check_keys(l, {"nu0", "rungs"}, "nu_ladder");
        const double nu0 = number(l, "nu0", 0.0);
        const int rungs = l.value("rungs", 0);
        for (int k = 0; k < rungs; ++k) cfg.nu_ladder.push_back(std::ldexp(nu0, -k));
      }
    }
    if (j.contains("ell_ladder"))
      for (const auto& v : j["ell_ladder"]) cfg.ell_ladder.push_back(ladder_value(v, "ell_ladder"));

    cfg.p = number(j, "p", cfg.p);
    if (!(cfg.p > 1.0)) bad("p must be > 1");
    const double p_conj = cfg.p / (cfg.p - 1.0);
    cfg.p_tilde = number(j, "p_tilde", std::max(2.0, p_conj));
    if (cfg.p_tilde < 2.0 || cfg.p_tilde < p_conj * (1.0 - 1e-12))
      bad("p_tilde must be >= max(2, p/(p-1)) = " + std::to_string(std::max(2.0, p_conj)));
    if (j.contains("q_exponents")) cfg.q_exponents = j["q_exponents"].get<std::vector<double>>();
    for (double q : cfg.q_exponents) {
      if (!(q >= 1.0)) bad("q exponents must be >= 1");
      if (q > cfg.p_tilde) warn("q=" + std::to_string(q) + " exceeds p_tilde");
    }

    cfg.t_end = number(j, "t_end", cfg.t_end);
    cfg.dt_max = number(j, "dt_max", cfg.dt_max);
    cfg.cfl = number(j, "cfl", cfg.cfl);
    cfg.snapshot_stride = j.value("snapshot_stride", cfg.snapshot_stride);
    if (j.contains("initial")) cfg.initial = parse_data(j["initial"], "initial", {"components", "family"});
    if (j.contains("forcing")) cfg.forcing = parse_forcing(j["forcing"]);
    cfg.profile = parse_profile(j.value("profile", "gaussian"));
    const std::string ref = j.value("reference", "euler");
    if (ref == "euler")
      cfg.reference = ReferenceKind::Euler;
    else if (ref == "richardson")
      cfg.reference = ReferenceKind::Richardson;
    else
      bad("reference must be 'euler' or 'richardson'");
    cfg.output_dir = j.value("output_dir", cfg.output_dir.string());
    cfg.parallelism = j.value("parallelism", cfg.parallelism);
    cfg.persist_trajectories = j.value("persist_trajectories", cfg.persist_trajectories);
    cfg.write_velocity = j.value("write_velocity", cfg.write_velocity);
    if (j.contains("nu")) cfg.nu = number(j, "nu", 0.0);
  } catch (const json::exception& e) {
    bad(std::string("malformed experiment config: ") + e.what());
  }

  if (cfg.grids.empty()) bad("grids must not be empty");
  for (int n : cfg.grids) TorusGrid(n, cfg.dealias_fraction);
  if (!(cfg.dealias_fraction > 0.0 && cfg.dealias_fraction <= 1.0)) bad("dealias_fraction must lie in (0, 1]");
  for (std::size_t i = 0; i < cfg.nu_ladder.size(); ++i) {
    if (!(cfg.nu_ladder[i] > 0.0 && std::isfinite(cfg.nu_ladder[i]))) bad("nu_ladder entries must be positive");
    if (i > 0 && !(cfg.nu_ladder[i] < cfg.nu_ladder[i - 1])) bad("nu_ladder must be strictly decreasing");
  }
  for (std::size_t i = 0; i < cfg.ell_ladder.size(); ++i) {
    if (!(cfg.ell_ladder[i] > 0.0)) bad("ell_ladder entries must be positive");
    if (i > 0 && !(cfg.ell_ladder[i] > cfg.ell_ladder[i - 1])) bad("ell_ladder must be strictly increasing");
  }
  if (cfg.parallelism < 1) bad("parallelism must be >= 1");
  if (cfg.nu && !(*cfg.nu >= 0.0)) bad("nu must be >= 0");
  if (cfg.initial.base.empty()) bad("initial needs at least one component");
  cfg.solver(0.0, cfg.grids.front()).validate();
  return cfg;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream is(path);
  if (!is) throw Error(ErrorCode::BadConfig, "cannot open config " + path.string());
  json j;
  try {
    j = json::parse(is);
  } catch (const json::exception& e) {
    throw Error(ErrorCode::BadConfig, "cannot parse " + path.string() + ": " + e.what());
  }
  return parse_config(j);
}

json to_json(const ExperimentConfig& cfg) {
  json nus = json::array();
  for (double v : cfg.nu_ladder) nus.push_back(v);
  json ells = json::array();
  for (double v : cfg.ell_ladder) ells.push_back(ladder_value_json(v));
  json j = {{"grids", cfg.grids},
            {"dealias_fraction", cfg.dealias_fraction},
            {"nu_ladder", nus},
            {"ell_ladder", ells},
            {"p", cfg.p},
            {"p_tilde", cfg.p_tilde},
            {"q_exponents", cfg.q_exponents},
            {"t_end", cfg.t_end},
            {"dt_max", cfg.dt_max},
            {"cfl", cfg.cfl},
            {"snapshot_stride", cfg.snapshot_stride},
            {"initial", data_json(cfg.initial)},
            {"forcing", to_json(cfg.forcing)},
            {"profile", profile_name(cfg.profile)},
            {"reference", cfg.reference == ReferenceKind::Euler ? "euler" : "richardson"},
            {"output_dir", cfg.output_dir.string()},
            {"parallelism", cfg.parallelism},
            {"persist_trajectories", cfg.persist_trajectories},
            {"write_velocity", cfg.write_velocity}};
  if (cfg.nu) j["nu"] = *cfg.nu;
  return j;
}

void override_seed(ExperimentConfig& cfg, std::uint64_t seed) {
  for (auto* fam : {&cfg.initial, &cfg.forcing.shape})
    for (auto& c : fam->base)
      if (auto* m = std::get_if<MultiMode>(&c.kind)) m->seed = seed;
}

}  // namespace vortex
