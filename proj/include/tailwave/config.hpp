#pragma once

// Run configuration: flat JSON schema with hard errors on unknown keys,
// named equation presets, and a canonical config hash.

#include <fstream>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"

#include "tailwave/initialdata.hpp"
#include "tailwave/nullform.hpp"
#include "tailwave/util.hpp"

namespace tailwave {

struct EquationSpec {
  std::string name = "linear";
  std::optional<NullFormTensor> tensor;  // absent for radial-only presets
  RadialNullForm radial;                 // resolved form used by the evolver
  bool radial_ok = true;  // false for classify-only (angle-dependent) presets
};

/// Named presets.  Tensor presets are reduced exactly; "p2_alpha1..3" and
/// "p3_012" are classify-only (their reductions are angle-dependent and
/// radial_reduce rejects them).  "generic_radial" models the l=0 sector of a
/// generic P3-containing equation through the direct radial interface: every
/// rotation-compatible constant-coefficient tensor reduces into the span of
/// the P1/P2 reductions, so a genuinely generic radial source term can only
/// be specified at the radial level.
inline EquationSpec resolve_preset(const std::string& name) {
  EquationSpec eq;
  eq.name = name;
  auto reduced = [&](const NullFormTensor& t) {
    eq.tensor = t;
    eq.radial = radial_reduce(t);
    eq.radial.name = name;
  };
  if (name == "linear") {
    // zero form
  } else if (name == "semilinear_null") {
    eq.radial.semi_uv = Rat(-1);  // Box psi = d^g psi d_g psi = -(U psi)(V psi)
  } else if (name == "p1_box") {
    reduced(p1_generator(0));
  } else if (name.rfind("p2_alpha", 0) == 0 && name.size() == 9 &&
             name[8] >= '0' && name[8] <= '3') {
    const int a = name[8] - '0';
    eq.tensor = p2_generator(a);
    if (a == 0)
      eq.radial = radial_reduce(*eq.tensor);
    else
      eq.radial_ok = false;  // reduction is angle-dependent
  } else if (name == "p3_012") {
    eq.tensor = p3_generator(0, 1, 2);  // classify-only
    eq.radial_ok = false;
  } else if (name == "generic_p3") {
    NullFormTensor t;
    for (int i = 1; i <= 3; ++i) t += p3_generator(0, i, i);
    reduced(t);
  } else if (name == "generic_radial") {
    eq.radial.c[RadialNullForm::V][RadialNullForm::UU] = Rat(1, 2);
  } else {
    throw ConfigError("unknown equation preset: " + name);
  }
  eq.radial.name = name;
  return eq;
}

struct RunConfig {
  EquationSpec eq;
  InitialDataSpec data;

  int N = 512;
  double cfl = 0.5;
  double tau_final = 100.0;
  double eta = 1.0;
  double scale = 10.0;
  double dissipation = 0.02;
  double cadence = 0.5;
  std::vector<double> probes = {5.0};
  std::vector<double> snapshot_taus;

  double delta = 0.1;  // the small parameter in the rate targets
  std::vector<std::pair<int, double>> energy_pairs;
  double fit_window_fraction = 0.1;  // final decade by default
  double fit_window_start = 0.0;     // explicit override when > 0
  double noise_floor = 1e-12;
  double mismatch_tol = 0.05;
  double lpi_tol = 0.15;
  double r_min = 1e-8;
  double hyp_min = 0.1;

  std::string scenario = "all";
  int threads = 0;
  std::vector<double> sweep_epsilons;
  std::vector<int> sweep_Ns;
  std::vector<std::string> sweep_presets;

  std::string hash;  // canonical FNV-1a, filled by finalize()
};

namespace detail {

inline Rat rat_from_json(const nlohmann::json& v) {
  if (v.is_number_integer()) return Rat(v.get<long long>());
  if (v.is_string()) {
    const std::string s = v.get<std::string>();
    const auto slash = s.find('/');
    try {
      if (slash == std::string::npos) return Rat(std::stoll(s));
      return Rat(std::stoll(s.substr(0, slash)), std::stoll(s.substr(slash + 1)));
    } catch (const std::exception&) {
      throw ConfigError("cannot parse rational coefficient: " + s);
    }
  }
  throw ConfigError("rational coefficients must be integers or \"p/q\" strings");
}

inline std::string rat_str(const Rat& r) {
  std::ostringstream os;
  os << r.numerator();
  if (r.denominator() != 1) os << "/" << r.denominator();
  return os.str();
}

}  // namespace detail

/// Rebuild the equation object from a canonical config image (artifact
/// rehydration path).
inline EquationSpec resolve_equation_from_canonical(const nlohmann::json& c) {
  const std::string name = c.at("equation").get<std::string>();
  if (name == "custom_tensor") {
    const auto& t = c.at("equation_tensor");
    NullFormTensor T;
    for (int a = 0; a < 4; ++a)
      for (int b = 0; b < 4; ++b)
        for (int g = 0; g < 4; ++g) T.at(a, b, g) = detail::rat_from_json(t[a][b][g]);
    EquationSpec eq;
    eq.name = name;
    eq.tensor = T;
    eq.radial = radial_reduce(T);
    eq.radial.name = name;
    return eq;
  }
  if (name == "custom_radial") {
    const auto& r = c.at("equation_radial");
    EquationSpec eq;
    eq.name = name;
    auto slot = [&](const char* k) { return detail::rat_from_json(r.at(k)); };
    eq.radial.c[RadialNullForm::U][RadialNullForm::UV] = slot("c_u_uv");
    eq.radial.c[RadialNullForm::U][RadialNullForm::VV] = slot("c_u_vv");
    eq.radial.c[RadialNullForm::V][RadialNullForm::UU] = slot("c_v_uu");
    eq.radial.c[RadialNullForm::V][RadialNullForm::UV] = slot("c_v_uv");
    eq.radial.tr[0] = slot("tr_u");
    eq.radial.tr[1] = slot("tr_v");
    eq.radial.semi_uv = slot("semi_uv");
    eq.radial.name = name;
    return eq;
  }
  return resolve_preset(name);
}

/// Canonical JSON image of a fully-defaulted config (keys sorted by nlohmann's
/// object ordering); the config hash is FNV-1a over its dump.
inline nlohmann::json canonical_json(const RunConfig& c) {
  nlohmann::json j;
  j["equation"] = c.eq.name;
  if (c.eq.tensor) {
    nlohmann::json t = nlohmann::json::array();
    for (int a = 0; a < 4; ++a) {
      nlohmann::json ra = nlohmann::json::array();
      for (int b = 0; b < 4; ++b) {
        nlohmann::json rb = nlohmann::json::array();
        for (int g = 0; g < 4; ++g) rb.push_back(detail::rat_str(c.eq.tensor->at(a, b, g)));
        ra.push_back(rb);
      }
      t.push_back(ra);
    }
    j["equation_tensor"] = t;
  } else {
    nlohmann::json r;
    static const char* cn[2][3] = {{"c_u_uu", "c_u_uv", "c_u_vv"},
                                   {"c_v_uu", "c_v_uv", "c_v_vv"}};
    for (int a = 0; a < 2; ++a)
      for (int bc = 0; bc < 3; ++bc) r[cn[a][bc]] = detail::rat_str(c.eq.radial.c[a][bc]);
    r["tr_u"] = detail::rat_str(c.eq.radial.tr[0]);
    r["tr_v"] = detail::rat_str(c.eq.radial.tr[1]);
    r["semi_uv"] = detail::rat_str(c.eq.radial.semi_uv);
    j["equation_radial"] = r;
  }
  j["family"] = c.data.family == InitialDataSpec::Family::CompactBump ? "compact_bump"
                                                                      : "noncompact_tail";
  j["epsilon"] = c.data.epsilon;
  j["bump_center"] = c.data.bump_center;
  j["bump_width"] = c.data.bump_width;
  j["data_mode"] = c.data.mode == InitialDataSpec::Mode::TimeSymmetric ? "time_symmetric"
                   : c.data.mode == InitialDataSpec::Mode::Outgoing    ? "outgoing"
                                                                       : "ingoing";
  j["c_init"] = c.data.c_init;
  j["delta_id"] = c.data.delta_id;
  j["tau0"] = c.data.tau0;
  j["N"] = c.N;
  j["cfl"] = c.cfl;
  j["tau_final"] = c.tau_final;
  j["eta"] = c.eta;
  j["scale"] = c.scale;
  j["dissipation"] = c.dissipation;
  j["cadence"] = c.cadence;
  j["probes"] = c.probes;
  j["snapshot_taus"] = c.snapshot_taus;
  j["delta"] = c.delta;
  nlohmann::json ep = nlohmann::json::array();
  for (const auto& [k, p] : c.energy_pairs) ep.push_back(nlohmann::json::array({k, p}));
  j["energy_pairs"] = ep;
  j["fit_window_fraction"] = c.fit_window_fraction;
  j["fit_window_start"] = c.fit_window_start;
  j["noise_floor"] = c.noise_floor;
  j["mismatch_tol"] = c.mismatch_tol;
  j["lpi_tol"] = c.lpi_tol;
  j["r_min"] = c.r_min;
  j["hyp_min"] = c.hyp_min;
  j["scenario"] = c.scenario;
  j["sweep_epsilons"] = c.sweep_epsilons;
  j["sweep_Ns"] = c.sweep_Ns;
  j["sweep_presets"] = c.sweep_presets;
  return j;
}

inline void finalize(RunConfig& c) {
  // physics-side validation, each naming the violated constraint
  if (!(c.eta > 0.0) || c.eta > 1.0)
    throw ConfigError("eta must lie in (0,1] (slicing requirement: asymptotically null, spacelike slices)");
  if (c.N < 64) throw ConfigError("N must be >= 64");
  if (!(c.cfl > 0.0) || c.cfl > 1.0) throw ConfigError("cfl must lie in (0,1]");
  if (!(c.scale > 0.0)) throw ConfigError("scale must be positive");
  if (c.dissipation < 0.0) throw ConfigError("dissipation must be >= 0");
  if (!(c.cadence > 0.0)) throw ConfigError("cadence must be positive");
  if (c.data.family == InitialDataSpec::Family::NoncompactTail && !(c.data.tau0 > 0.0))
    throw ConfigError("noncompact_tail requires tau0 > 0 (v > 0 at the origin)");
  for (double rp : c.probes)
    if (!(rp >= 0.0)) throw ConfigError("probe radii must be >= 0");
  if (c.eq.tensor) {
    if (auto m = null_violation_monomial(*c.eq.tensor))
      throw ConfigError("null condition violated: surviving monomial " + *m);
  }
  std::ostringstream os;
  os << std::hex << fnv1a(canonical_json(c).dump());
  c.hash = os.str();
}

inline RunConfig parse_config_json(const nlohmann::json& j) {
  if (!j.is_object()) throw ConfigError("config must be a JSON object");
  static const std::set<std::string> known = {
      "preset",       "tensor",        "radial",        "family",
      "epsilon",      "bump_center",   "bump_width",    "data_mode",
      "c_init",       "delta_id",      "tau0",          "N",
      "cfl",          "tau_final",     "eta",           "scale",
      "dissipation",  "cadence",       "probes",        "snapshot_taus",
      "delta",        "energy_pairs",  "fit_window_fraction", "fit_window_start",
      "noise_floor",  "mismatch_tol",  "lpi_tol",       "r_min",
      "hyp_min",      "scenario",      "threads",       "sweep_epsilons",
      "sweep_Ns",     "sweep_presets"};
  for (auto it = j.begin(); it != j.end(); ++it)
    if (!known.count(it.key())) throw ConfigError("unknown config key: " + it.key());

  RunConfig c;
  auto getd = [&](const char* k, double& dst) {
    if (!j.contains(k)) return;
    if (!j[k].is_number()) throw ConfigError(std::string(k) + ": expected number");
    dst = j[k].get<double>();
  };
  auto geti = [&](const char* k, int& dst) {
    if (!j.contains(k)) return;
    if (!j[k].is_number_integer()) throw ConfigError(std::string(k) + ": expected integer");
    dst = j[k].get<int>();
  };

  // equation: preset, explicit tensor, or direct radial slots
  const int nspec = j.contains("preset") + j.contains("tensor") + j.contains("radial");
  if (nspec > 1) throw ConfigError("give exactly one of preset / tensor / radial");
  if (j.contains("preset")) {
    if (!j["preset"].is_string()) throw ConfigError("preset: expected string");
    c.eq = resolve_preset(j["preset"].get<std::string>());
  } else if (j.contains("tensor")) {
    const auto& t = j["tensor"];
    if (!t.is_array() || t.size() != 4) throw ConfigError("tensor: expected 4x4x4 array");
    NullFormTensor T;
    for (int a = 0; a < 4; ++a) {
      if (!t[a].is_array() || t[a].size() != 4) throw ConfigError("tensor: expected 4x4x4 array");
      for (int b = 0; b < 4; ++b) {
        if (!t[a][b].is_array() || t[a][b].size() != 4)
          throw ConfigError("tensor: expected 4x4x4 array");
        for (int g = 0; g < 4; ++g) T.at(a, b, g) = detail::rat_from_json(t[a][b][g]);
      }
    }
    T.symmetrize();
    c.eq.name = "custom_tensor";
    c.eq.tensor = T;
    if (auto m = null_violation_monomial(T))
      throw ConfigError("null condition violated: surviving monomial " + *m);
    c.eq.radial = radial_reduce(T);
    c.eq.radial.name = c.eq.name;
  } else if (j.contains("radial")) {
    const auto& r = j["radial"];
    if (!r.is_object()) throw ConfigError("radial: expected object");
    static const std::set<std::string> rkeys = {"c_u_uv", "c_u_vv", "c_v_uu",
                                               "c_v_uv", "tr_u",   "tr_v",
                                               "semi_uv"};
    for (auto it = r.begin(); it != r.end(); ++it)
      if (!rkeys.count(it.key()))
        throw ConfigError("unknown radial slot: " + it.key() +
                          " (pure UU/VV slots are forbidden by the null condition)");
    c.eq.name = "custom_radial";
    auto slot = [&](const char* k) {
      return r.contains(k) ? detail::rat_from_json(r[k]) : Rat(0);
    };
    c.eq.radial.c[RadialNullForm::U][RadialNullForm::UV] = slot("c_u_uv");
    c.eq.radial.c[RadialNullForm::U][RadialNullForm::VV] = slot("c_u_vv");
    c.eq.radial.c[RadialNullForm::V][RadialNullForm::UU] = slot("c_v_uu");
    c.eq.radial.c[RadialNullForm::V][RadialNullForm::UV] = slot("c_v_uv");
    c.eq.radial.tr[0] = slot("tr_u");
    c.eq.radial.tr[1] = slot("tr_v");
    c.eq.radial.semi_uv = slot("semi_uv");
    c.eq.radial.name = c.eq.name;
  }

  if (j.contains("family")) {
    const std::string f = j["family"].get<std::string>();
    if (f == "compact_bump")
      c.data.family = InitialDataSpec::Family::CompactBump;
    else if (f == "noncompact_tail")
      c.data.family = InitialDataSpec::Family::NoncompactTail;
    else
      throw ConfigError("family must be compact_bump or noncompact_tail");
  }
  if (j.contains("data_mode")) {
    const std::string m = j["data_mode"].get<std::string>();
    if (m == "time_symmetric")
      c.data.mode = InitialDataSpec::Mode::TimeSymmetric;
    else if (m == "outgoing")
      c.data.mode = InitialDataSpec::Mode::Outgoing;
    else if (m == "ingoing")
      c.data.mode = InitialDataSpec::Mode::Ingoing;
    else
      throw ConfigError("data_mode must be time_symmetric, outgoing, or ingoing");
  }
  getd("epsilon", c.data.epsilon);
  getd("bump_center", c.data.bump_center);
  getd("bump_width", c.data.bump_width);
  getd("c_init", c.data.c_init);
  getd("delta_id", c.data.delta_id);
  getd("tau0", c.data.tau0);
  geti("N", c.N);
  getd("cfl", c.cfl);
  getd("tau_final", c.tau_final);
  getd("eta", c.eta);
  getd("scale", c.scale);
  getd("dissipation", c.dissipation);
  getd("cadence", c.cadence);
  if (j.contains("probes")) c.probes = j["probes"].get<std::vector<double>>();
  if (j.contains("snapshot_taus"))
    c.snapshot_taus = j["snapshot_taus"].get<std::vector<double>>();
  getd("delta", c.delta);
  if (j.contains("energy_pairs")) {
    c.energy_pairs.clear();
    for (const auto& e : j["energy_pairs"]) {
      if (!e.is_array() || e.size() != 2)
        throw ConfigError("energy_pairs entries must be [k, p]");
      c.energy_pairs.emplace_back(e[0].get<int>(), e[1].get<double>());
    }
  }
  getd("fit_window_fraction", c.fit_window_fraction);
  getd("fit_window_start", c.fit_window_start);
  getd("noise_floor", c.noise_floor);
  getd("mismatch_tol", c.mismatch_tol);
  getd("lpi_tol", c.lpi_tol);
  getd("r_min", c.r_min);
  getd("hyp_min", c.hyp_min);
  if (j.contains("scenario")) c.scenario = j["scenario"].get<std::string>();
  geti("threads", c.threads);
  if (j.contains("sweep_epsilons"))
    c.sweep_epsilons = j["sweep_epsilons"].get<std::vector<double>>();
  if (j.contains("sweep_Ns")) c.sweep_Ns = j["sweep_Ns"].get<std::vector<int>>();
  if (j.contains("sweep_presets"))
    c.sweep_presets = j["sweep_presets"].get<std::vector<std::string>>();

  finalize(c);
  return c;
}

inline RunConfig parse_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const std::exception& e) {
    throw ConfigError(std::string("config JSON parse error: ") + e.what());
  }
  return parse_config_json(j);
}

}  // namespace tailwave
