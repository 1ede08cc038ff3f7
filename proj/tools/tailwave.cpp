// tailwave: hyperboloidal evolution of the radial quasilinear wave equation
// under the null condition, with late-time tail extraction and verification.
//
// Usage: tailwave <mode> --config <path> [--out <dir>] [--threads k]
//   modes: evolve, verify, sweep, classify, oracle-check
// Exit codes: 0 success, 1 config error, 2 numerical abort, 3 verification
// failure.

#include <atomic>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"

#include "tailwave/config.hpp"
#include "tailwave/io.hpp"
#include "tailwave/run.hpp"
#include "tailwave/tails.hpp"
#include "tailwave/verify.hpp"

namespace fs = std::filesystem;
using namespace tailwave;

namespace {

int resolve_threads(int cli_threads) {
  if (cli_threads > 0) return cli_threads;
  if (const char* e = std::getenv("TAILWAVE_THREADS")) {
    const int v = std::atoi(e);
    if (v > 0) return v;
  }
  return 1;
}

int mode_evolve(const RunConfig& cfg, const fs::path& out) {
  RunArtifact art = evolve(cfg);
  nlohmann::json summary = summary_json(art);
  if (!art.aborted) {
    try {
      summary["tail_report"] = report_json(verify_prediction(art));
      summary["fits_converged"] = true;
    } catch (const VerificationError& e) {
      summary["fits_converged"] = false;
      summary["fit_warning"] = e.what();
    }
  }
  write_text_atomic(out / "diagnostics.csv", diagnostics_csv(art));
  write_json_atomic(out / "summary.json", summary);
  save_artifact(art, out / "artifact.json");
  for (size_t i = 0; i < art.snapshots.size(); ++i)
    write_json_atomic(out / ("snapshot_" + std::to_string(i) + ".json"),
                      to_json(art.snapshots[i]));
  if (art.aborted) {
    std::cerr << "numerical abort: " << art.abort_reason << "\n";
    return 2;
  }
  std::cout << "wrote " << (out / "diagnostics.csv").string() << " ("
            << art.taus.size() << " samples, hash " << cfg.hash << ")\n";
  return 0;
}

int mode_verify(const RunConfig& cfg, const fs::path& out) {
  ArtifactCache cache;
  const std::vector<int> ids = scenario_ids(cfg.scenario);
  nlohmann::json results = nlohmann::json::array();
  bool all_pass = true;
  for (int id : ids) {
    CheckResult r;
    try {
      r = run_criterion(id, cache);
    } catch (const std::exception& e) {
      r.id = id;
      r.name = "criterion_" + std::to_string(id);
      r.pass = false;
      r.detail = std::string("exception: ") + e.what();
    }
    all_pass = all_pass && r.pass;
    std::printf("[%s] %d %s: %s\n", r.pass ? "PASS" : "FAIL", r.id, r.name.c_str(),
                r.detail.c_str());
    results.push_back({{"id", r.id}, {"name", r.name}, {"pass", r.pass},
                       {"detail", r.detail}});
  }
  write_json_atomic(out / "verify.json",
                    {{"config_hash", cfg.hash}, {"results", results},
                     {"all_pass", all_pass}});
  return all_pass ? 0 : 3;
}

int mode_sweep(const RunConfig& base, const fs::path& out, int threads) {
  std::vector<double> eps = base.sweep_epsilons;
  std::vector<int> Ns = base.sweep_Ns;
  std::vector<std::string> presets = base.sweep_presets;
  if (eps.empty()) eps = {base.data.epsilon};
  if (Ns.empty()) Ns = {base.N};
  if (presets.empty()) presets = {base.eq.name};

  struct Cell {
    RunConfig cfg;
  };
  std::vector<Cell> cells;
  for (const std::string& p : presets)
    for (int N : Ns)
      for (double e : eps) {
        RunConfig c = base;
        c.eq = resolve_preset(p);
        c.N = N;
        c.data.epsilon = e;
        c.sweep_epsilons.clear();
        c.sweep_Ns.clear();
        c.sweep_presets.clear();
        finalize(c);
        cells.push_back({std::move(c)});
      }

  std::atomic<size_t> next{0};
  std::atomic<bool> numerical_abort{false};
  std::mutex iomu;
  auto worker = [&]() {
    for (;;) {
      const size_t i = next.fetch_add(1);
      if (i >= cells.size()) return;
      const RunConfig& cfg = cells[i].cfg;
      RunArtifact art = evolve(cfg);
      nlohmann::json summary = summary_json(art);
      if (!art.aborted) {
        try {
          summary["tail_report"] = report_json(verify_prediction(art));
        } catch (const VerificationError& e) {
          summary["fit_warning"] = e.what();
        }
      } else {
        numerical_abort = true;
      }
      write_text_atomic(out / ("sweep_" + cfg.hash + ".csv"), diagnostics_csv(art));
      write_json_atomic(out / ("sweep_" + cfg.hash + ".json"), summary);
      std::lock_guard<std::mutex> lk(iomu);
      std::cout << "cell " << cfg.eq.name << " N=" << cfg.N
                << " eps=" << cfg.data.epsilon << " -> sweep_" << cfg.hash
                << (art.aborted ? " (aborted)" : "") << "\n";
    }
  };
  std::vector<std::thread> pool;
  const int k = std::min<int>(threads, static_cast<int>(cells.size()));
  for (int t = 0; t < k - 1; ++t) pool.emplace_back(worker);
  worker();
  for (auto& th : pool) th.join();
  return numerical_abort ? 2 : 0;
}

int mode_classify(const RunConfig& cfg) {
  Classification cl;
  if (cfg.eq.tensor)
    cl = classify(*cfg.eq.tensor);
  else
    cl = classify_radial(cfg.eq.radial);
  nlohmann::json j;
  j["equation"] = cfg.eq.name;
  j["in_span_P1P2"] = cl.in_span_p1p2;
  j["restricted_residual"] = cl.restricted_residual;
  j["residual_norm"] = cl.residual_norm;
  j["predicted_tail_exponent"] = cl.predicted_tail_exponent;
  std::cout << j.dump(2) << "\n";
  return 0;
}

int mode_oracle_check(const fs::path& out) {
  const auto checks = run_oracle_checks();
  bool all = true;
  nlohmann::json results = nlohmann::json::array();
  for (const auto& r : checks) {
    all = all && r.pass;
    std::printf("[%s] %s: %s\n", r.pass ? "PASS" : "FAIL", r.name.c_str(),
                r.detail.c_str());
    results.push_back({{"name", r.name}, {"pass", r.pass}, {"detail", r.detail}});
  }
  write_json_atomic(out / "oracle_check.json", {{"results", results}, {"all_pass", all}});
  return all ? 0 : 3;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"hyperboloidal tail evolution and verification"};
  app.require_subcommand(1);

  std::string config_path, out_dir = "out";
  int threads = 0;
  app.add_option("--config", config_path, "JSON config path");
  app.add_option("--out", out_dir, "output directory");
  app.add_option("--threads", threads, "worker threads (sweep mode)");
  for (const char* m : {"evolve", "verify", "sweep", "classify", "oracle-check"})
    app.add_subcommand(m)->fallthrough();

  CLI11_PARSE(app, argc, argv);
  const std::string mode = app.get_subcommands().front()->get_name();

  try {
    RunConfig cfg;
    if (mode != "oracle-check") {
      if (config_path.empty()) throw ConfigError("--config is required for mode " + mode);
      cfg = parse_config(config_path);
    }
    const fs::path out = out_dir;
    if (mode == "evolve") return mode_evolve(cfg, out);
    if (mode == "verify") return mode_verify(cfg, out);
    if (mode == "sweep") return mode_sweep(cfg, out, resolve_threads(threads));
    if (mode == "classify") return mode_classify(cfg);
    return mode_oracle_check(out);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 1;
  } catch (const NullConditionViolation& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 1;
  } catch (const NotRadialCompatible& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 1;
  } catch (const NumericalError& e) {
    std::cerr << "numerical error: " << e.what() << "\n";
    return 2;
  } catch (const VerificationError& e) {
    std::cerr << "verification error: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
