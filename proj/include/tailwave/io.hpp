#pragma once

// Deterministic output: diagnostics CSV and summary JSON written atomically
// (temp file + rename).  All floating-point fields go through a fixed
// "%.17g" format so identical runs produce byte-identical files.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>

#include "json.hpp"

#include "tailwave/run.hpp"
#include "tailwave/tails.hpp"

namespace tailwave {

inline std::string g17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

inline void write_text_atomic(const std::filesystem::path& path,
                              const std::string& content) {
  namespace fs = std::filesystem;
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  const fs::path tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open for writing: " + tmp.string());
    out << content;
    if (!out) throw std::runtime_error("write failed: " + tmp.string());
  }
  fs::rename(tmp, path);
}

inline void write_json_atomic(const std::filesystem::path& path,
                              const nlohmann::json& j) {
  write_text_atomic(path, j.dump(2) + "\n");
}

/// Diagnostics CSV: one row per emitted sample per probe radius, scri traces
/// and energies repeated across the probe rows of a sample.
inline std::string diagnostics_csv(const RunArtifact& art) {
  const RunConfig& cfg = art.cfg;
  std::string s = "tau,probe_rho,psi,Psi_scri,VPsi_scri,r3source_scri";
  for (const auto& [k, p] : cfg.energy_pairs) {
    char col[64];
    std::snprintf(col, sizeof(col), ",E_k%d_p%g", k, p);
    s += col;
  }
  s += ",E_std\n";
  const size_t nprobe = cfg.probes.empty() ? 1 : cfg.probes.size();
  for (size_t i = 0; i < art.taus.size(); ++i) {
    for (size_t q = 0; q < nprobe; ++q) {
      s += g17(art.taus[i]);
      s += ',';
      s += g17(cfg.probes.empty() ? 0.0 : cfg.probes[q]);
      s += ',';
      s += g17(cfg.probes.empty() ? 0.0 : art.probe_psi[q][i]);
      s += ',';
      s += g17(art.scri_Psi[i]);
      s += ',';
      s += g17(art.scri_VPsi[i]);
      s += ',';
      s += g17(art.scri_r3source[i]);
      for (size_t e = 0; e < cfg.energy_pairs.size(); ++e) {
        s += ',';
        s += g17(art.energies[e][i]);
      }
      s += ',';
      s += g17(art.std_energy[i]);
      s += '\n';
    }
  }
  return s;
}

inline nlohmann::json summary_json(const RunArtifact& art) {
  nlohmann::json j;
  j["config_hash"] = art.cfg.hash;
  j["config"] = canonical_json(art.cfg);
  j["L"] = art.L;
  j["steps"] = art.steps;
  j["aborted"] = art.aborted;
  j["abort_reason"] = art.abort_reason;
  j["tau_end"] = art.taus.empty() ? 0.0 : art.taus.back();
  j["samples"] = art.taus.size();
  return j;
}

inline nlohmann::json report_json(const TailReport& r) {
  nlohmann::json j;
  j["c_init"] = r.c_init;
  j["c_scri"] = r.c_scri;
  j["c_total"] = r.c_total;
  j["a_mean"] = r.a_mean;
  j["a_drift"] = r.a_drift;
  j["mismatch"] = r.mismatch;
  j["scri_fit_slope"] = r.scri_fit_slope;
  j["slow_decay_warning"] = r.slow_decay_warning;
  j["probe_lpi"] = r.probe_lpi;
  j["expected_exponent"] = r.expected_exponent;
  j["amplitude_ok"] = r.amplitude_ok;
  j["exponents_ok"] = r.exponents_ok;
  j["window"] = {r.window_start, r.window_end};
  return j;
}

inline void save_artifact(const RunArtifact& art, const std::filesystem::path& path) {
  write_json_atomic(path, to_json(art));
}

inline RunArtifact load_artifact(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open artifact: " + path.string());
  nlohmann::json j;
  in >> j;
  return artifact_from_json(j);
}

}  // namespace tailwave
