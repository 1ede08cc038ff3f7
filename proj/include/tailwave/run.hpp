#pragma once

// Run orchestration: from a RunConfig to a RunArtifact holding the emitted
// time series (probe values, scri traces, energies), optional slice
// snapshots, and the terminal state.  Artifacts serialize to JSON losslessly
// so expensive runs can be cached on disk keyed by the config hash.

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "json.hpp"

#include "tailwave/config.hpp"
#include "tailwave/energies.hpp"
#include "tailwave/evolver.hpp"
#include "tailwave/initialdata.hpp"

namespace tailwave {

struct RunArtifact {
  RunConfig cfg;
  double L = 0.0;  // u = tau - L at scri

  std::vector<double> taus;
  std::vector<std::vector<double>> probe_psi;  // [probe][sample]
  std::vector<double> scri_Psi, scri_VPsi, scri_UPsi, scri_r3source;
  std::vector<std::vector<double>> energies;  // [energy_pair][sample]
  std::vector<double> std_energy;

  std::vector<GridState> snapshots;
  GridState initial, final_state;

  bool aborted = false;
  std::string abort_reason;
  long long steps = 0;
};

namespace detail {

/// psi(tau, rho_p): Psi/rho away from the origin, d_rho Psi at rho = 0, and
/// the vanishing scri limit.
inline double probe_psi_value(const Grid& g, const GridState& s,
                              const Grid::ProbeWeights& pw, double rho_p) {
  if (rho_p < 1e-12) return g.cmap().dsigma_drho(0.0) * g.d1origin(s.Psi);
  std::vector<double> psi(g.N() + 1, 0.0);
  (void)psi;
  // interpolate Psi, then divide by the probe radius
  double v = Grid::applyProbe(pw, s.Psi);
  return v / rho_p;
}

inline bool state_finite(const GridState& s) {
  for (double v : s.Psi)
    if (!std::isfinite(v)) return false;
  for (double v : s.Pi)
    if (!std::isfinite(v)) return false;
  return true;
}

}  // namespace detail

inline RunArtifact evolve(const RunConfig& cfg) {
  if (!cfg.eq.radial_ok)
    throw ConfigError("equation \"" + cfg.eq.name +
                      "\" has no radial reduction (classify-only preset)");
  const HeightFunction h(cfg.eta);
  const Grid g(cfg.N, cfg.scale, h);
  EvolverParams ep;
  ep.dissipation = cfg.dissipation;
  ep.r_min = cfg.r_min;
  ep.hyp_min = cfg.hyp_min;
  const Evolver ev(g, cfg.eq.radial, ep);

  RunArtifact art;
  art.cfg = cfg;
  art.L = h.uOffset();
  art.probe_psi.resize(cfg.probes.size());
  art.energies.resize(cfg.energy_pairs.size());

  std::vector<Grid::ProbeWeights> pws;
  for (double rp : cfg.probes) pws.push_back(g.probeWeights(rp));

  GridState s = make_initial_data(cfg.data, g);
  art.initial = s;

  const double dt = ev.dtau(cfg.cfl);
  const long long nsteps =
      std::max<long long>(1, static_cast<long long>(std::ceil((cfg.tau_final - s.tau) / dt - 1e-12)));
  const long long emit_every =
      std::max<long long>(1, static_cast<long long>(std::llround(cfg.cadence / dt)));

  std::vector<double> snap_taus = cfg.snapshot_taus;
  std::sort(snap_taus.begin(), snap_taus.end());
  size_t next_snap = 0;

  std::vector<double> dPsi, dPi, UPsi, VPsi, r3(g.N() + 1, 0.0);
  // everything below rhs() can throw on hyperbolicity loss; compute the whole
  // sample first so an abort never leaves ragged series
  auto emit = [&](const GridState& st) {
    std::vector<double> probes(pws.size());
    for (size_t q = 0; q < pws.size(); ++q)
      probes[q] = detail::probe_psi_value(g, st, pws[q], cfg.probes[q]);
    ev.frameDerivs(st, UPsi, VPsi);
    ev.rhs(st, dPsi, dPi);
    std::fill(r3.begin(), r3.end(), 0.0);
    for (int j = 1; j < g.N(); ++j) r3[j] = ev.r3Source(st, dPi, j);
    std::vector<double> ener(cfg.energy_pairs.size());
    for (size_t q = 0; q < cfg.energy_pairs.size(); ++q)
      ener[q] = rp_energy(ev, st, cfg.energy_pairs[q].first, cfg.energy_pairs[q].second);
    const double estd = standard_energy(g, st);

    art.taus.push_back(st.tau);
    for (size_t q = 0; q < pws.size(); ++q) art.probe_psi[q].push_back(probes[q]);
    art.scri_Psi.push_back(st.Psi[g.N()]);
    art.scri_VPsi.push_back(VPsi[g.N()]);
    art.scri_UPsi.push_back(UPsi[g.N()]);
    art.scri_r3source.push_back(g.scriExtrapolate(r3));
    for (size_t q = 0; q < cfg.energy_pairs.size(); ++q)
      art.energies[q].push_back(ener[q]);
    art.std_energy.push_back(estd);
  };

  try {
    emit(s);
    for (long long n = 1; n <= nsteps; ++n) {
      ev.step(s, dt);
      ++art.steps;
      while (next_snap < snap_taus.size() && s.tau >= snap_taus[next_snap] - 0.5 * dt) {
        art.snapshots.push_back(s);
        ++next_snap;
      }
      if (n % emit_every == 0 || n == nsteps) {
        if (!detail::state_finite(s))
          throw NumericalError("non-finite field values at tau = " + std::to_string(s.tau));
        emit(s);
      }
    }
  } catch (const NumericalError& e) {
    art.aborted = true;
    art.abort_reason = e.what();
  }
  art.final_state = s;
  return art;
}

// --- artifact (de)serialization --------------------------------------------

inline nlohmann::json to_json(const GridState& s) {
  return {{"tau", s.tau}, {"Psi", s.Psi}, {"Pi", s.Pi}};
}

inline GridState state_from_json(const nlohmann::json& j) {
  GridState s;
  s.tau = j.at("tau").get<double>();
  s.Psi = j.at("Psi").get<std::vector<double>>();
  s.Pi = j.at("Pi").get<std::vector<double>>();
  return s;
}

inline nlohmann::json to_json(const RunArtifact& a) {
  nlohmann::json j;
  j["config"] = canonical_json(a.cfg);
  j["config_hash"] = a.cfg.hash;
  j["L"] = a.L;
  j["taus"] = a.taus;
  j["probe_psi"] = a.probe_psi;
  j["scri_Psi"] = a.scri_Psi;
  j["scri_VPsi"] = a.scri_VPsi;
  j["scri_UPsi"] = a.scri_UPsi;
  j["scri_r3source"] = a.scri_r3source;
  j["energies"] = a.energies;
  j["std_energy"] = a.std_energy;
  nlohmann::json snaps = nlohmann::json::array();
  for (const auto& s : a.snapshots) snaps.push_back(to_json(s));
  j["snapshots"] = snaps;
  j["initial"] = to_json(a.initial);
  j["final_state"] = to_json(a.final_state);
  j["aborted"] = a.aborted;
  j["abort_reason"] = a.abort_reason;
  j["steps"] = a.steps;
  return j;
}

/// Rehydrate an artifact; the embedded canonical config is re-parsed so the
/// equation object and hash are rebuilt from scratch.
inline RunArtifact artifact_from_json(const nlohmann::json& j) {
  RunArtifact a;
  {
    const nlohmann::json& c = j.at("config");
    RunConfig cfg;
    cfg.eq = resolve_equation_from_canonical(c);
    const std::string fam = c.at("family").get<std::string>();
    cfg.data.family = fam == "compact_bump" ? InitialDataSpec::Family::CompactBump
                                            : InitialDataSpec::Family::NoncompactTail;
    const std::string m = c.at("data_mode").get<std::string>();
    cfg.data.mode = m == "time_symmetric" ? InitialDataSpec::Mode::TimeSymmetric
                    : m == "outgoing"     ? InitialDataSpec::Mode::Outgoing
                                          : InitialDataSpec::Mode::Ingoing;
    cfg.data.epsilon = c.at("epsilon").get<double>();
    cfg.data.bump_center = c.at("bump_center").get<double>();
    cfg.data.bump_width = c.at("bump_width").get<double>();
    cfg.data.c_init = c.at("c_init").get<double>();
    cfg.data.delta_id = c.at("delta_id").get<double>();
    cfg.data.tau0 = c.at("tau0").get<double>();
    cfg.N = c.at("N").get<int>();
    cfg.cfl = c.at("cfl").get<double>();
    cfg.tau_final = c.at("tau_final").get<double>();
    cfg.eta = c.at("eta").get<double>();
    cfg.scale = c.at("scale").get<double>();
    cfg.dissipation = c.at("dissipation").get<double>();
    cfg.cadence = c.at("cadence").get<double>();
    cfg.probes = c.at("probes").get<std::vector<double>>();
    cfg.snapshot_taus = c.at("snapshot_taus").get<std::vector<double>>();
    cfg.delta = c.at("delta").get<double>();
    cfg.energy_pairs.clear();
    for (const auto& e : c.at("energy_pairs"))
      cfg.energy_pairs.emplace_back(e[0].get<int>(), e[1].get<double>());
    cfg.fit_window_fraction = c.at("fit_window_fraction").get<double>();
    cfg.fit_window_start = c.at("fit_window_start").get<double>();
    cfg.noise_floor = c.at("noise_floor").get<double>();
    cfg.mismatch_tol = c.at("mismatch_tol").get<double>();
    cfg.lpi_tol = c.at("lpi_tol").get<double>();
    cfg.r_min = c.at("r_min").get<double>();
    cfg.hyp_min = c.at("hyp_min").get<double>();
    cfg.scenario = c.at("scenario").get<std::string>();
    cfg.sweep_epsilons = c.at("sweep_epsilons").get<std::vector<double>>();
    cfg.sweep_Ns = c.at("sweep_Ns").get<std::vector<int>>();
    cfg.sweep_presets = c.at("sweep_presets").get<std::vector<std::string>>();
    finalize(cfg);
    a.cfg = cfg;
  }
  a.L = j.at("L").get<double>();
  a.taus = j.at("taus").get<std::vector<double>>();
  a.probe_psi = j.at("probe_psi").get<std::vector<std::vector<double>>>();
  a.scri_Psi = j.at("scri_Psi").get<std::vector<double>>();
  a.scri_VPsi = j.at("scri_VPsi").get<std::vector<double>>();
  a.scri_UPsi = j.at("scri_UPsi").get<std::vector<double>>();
  a.scri_r3source = j.at("scri_r3source").get<std::vector<double>>();
  a.energies = j.at("energies").get<std::vector<std::vector<double>>>();
  a.std_energy = j.at("std_energy").get<std::vector<double>>();
  for (const auto& s : j.at("snapshots")) a.snapshots.push_back(state_from_json(s));
  a.initial = state_from_json(j.at("initial"));
  a.final_state = state_from_json(j.at("final_state"));
  a.aborted = j.at("aborted").get<bool>();
  a.abort_reason = j.at("abort_reason").get<std::string>();
  a.steps = j.at("steps").get<long long>();
  return a;
}

}  // namespace tailwave
