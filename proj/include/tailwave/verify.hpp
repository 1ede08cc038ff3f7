#pragma once

// Acceptance scenarios: each criterion is a self-contained check returning a
// pass/fail result with a one-line quantitative detail string.  Long runs are
// shared between criteria through an artifact cache keyed by config hash and
// persisted on disk (directory "acceptance_cache", override with the
// TAILWAVE_CACHE environment variable).

#include <cstdlib>
#include <filesystem>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "tailwave/config.hpp"
#include "tailwave/io.hpp"
#include "tailwave/oracle.hpp"
#include "tailwave/run.hpp"
#include "tailwave/tails.hpp"

namespace tailwave {

struct CheckResult {
  int id = 0;
  std::string name;
  bool pass = false;
  std::string detail;

  CheckResult() = default;
  CheckResult(int i, std::string n) : id(i), name(std::move(n)) {}
};

class ArtifactCache {
public:
  static std::filesystem::path default_dir() {
    if (const char* e = std::getenv("TAILWAVE_CACHE")) return e;
    return "acceptance_cache";
  }
  explicit ArtifactCache(std::filesystem::path dir = default_dir())
      : dir_(std::move(dir)) {}

  const RunArtifact& get(const RunConfig& cfg) {
    auto it = mem_.find(cfg.hash);
    if (it != mem_.end()) return it->second;
    const std::filesystem::path path = dir_ / ("art_" + cfg.hash + ".json");
    if (std::filesystem::exists(path)) {
      try {
        RunArtifact a = load_artifact(path);
        if (a.cfg.hash == cfg.hash)
          return mem_.emplace(cfg.hash, std::move(a)).first->second;
      } catch (const std::exception&) {
        // fall through to recompute
      }
    }
    RunArtifact a = evolve(cfg);
    std::filesystem::create_directories(dir_);
    save_artifact(a, path);
    return mem_.emplace(cfg.hash, std::move(a)).first->second;
  }

private:
  std::filesystem::path dir_;
  std::map<std::string, RunArtifact> mem_;
};

// --- shared scenario configs ----------------------------------------------

namespace scenarios {

/// Generic quasilinear run: source outside the faster-decay span, compact
/// bump data; shared by the tail, amplitude-comparison, and energy criteria.
inline RunConfig generic_tail() {
  RunConfig c;
  c.eq = resolve_preset("generic_radial");
  c.data.family = InitialDataSpec::Family::CompactBump;
  c.data.mode = InitialDataSpec::Mode::TimeSymmetric;
  c.data.epsilon = 0.05;
  c.data.bump_center = 0.5;
  c.data.bump_width = 0.35;
  // scale 1: the amplitude approaches its limit as a(u) = c (1 + b/u) with b
  // growing roughly like the compactification scale, and the final-decade
  // drift bound needs b small.  The generic principal part leaves a wide
  // hyperbolicity margin at this scale (unlike the alpha = 0 preset below).
  // N = 4096 keeps the truncation-driven decay of the scri signal (which is
  // dissipation-independent and fed from the v-compressed outer grid) under
  // the drift budget.
  c.N = 4096;
  c.cfl = 0.8;
  c.scale = 1.0;
  c.tau_final = 300.0;
  c.cadence = 0.25;
  c.probes = {5.0};
  c.delta = 0.1;
  c.energy_pairs = {{0, 0.1}, {0, 1.0}, {0, 1.9}};
  c.fit_window_start = 30.0;
  finalize(c);
  return c;
}

/// Generic run at a larger compactification scale: the r^2.5-weighted energy
/// draws on the tail out to radii ~ an order of magnitude past the slice
/// time, which only stays resolved with the larger scale.  The amplitude
/// drift constant is too large here for the tail criterion (see above), so
/// the two criteria use separate runs.
inline RunConfig extended_energy_run() {
  RunConfig c;
  c.eq = resolve_preset("generic_radial");
  c.data.family = InitialDataSpec::Family::CompactBump;
  c.data.mode = InitialDataSpec::Mode::TimeSymmetric;
  c.data.epsilon = 0.05;
  c.data.bump_center = 0.5;
  c.data.bump_width = 0.35;
  c.N = 2048;
  c.cfl = 0.8;
  c.scale = 4.0;
  c.tau_final = 450.0;
  c.cadence = 0.25;
  c.probes = {5.0};
  c.delta = 0.1;
  c.energy_pairs = {{0, 0.1}, {0, 1.0}, {0, 1.9}, {0, 2.5}};
  c.fit_window_start = 45.0;
  finalize(c);
  return c;
}

/// Generic run with the faster-decay comparison's exact data (same outgoing
/// bump, same epsilon): criterion 5 compares scri amplitudes at matched
/// epsilon.  Short run; only the windowed amplitude is used.
inline RunConfig generic_matched() {
  RunConfig c;
  c.eq = resolve_preset("generic_radial");
  c.data.family = InitialDataSpec::Family::CompactBump;
  c.data.mode = InitialDataSpec::Mode::Outgoing;
  c.data.epsilon = 0.15;
  c.data.bump_center = 0.7;
  c.data.bump_width = 0.2;
  c.N = 1024;
  c.cfl = 0.8;
  c.scale = 1.0;
  c.tau_final = 150.0;
  c.cadence = 0.25;
  c.probes = {5.0};
  c.fit_window_start = 30.0;
  finalize(c);
  return c;
}

/// Faster-decay run with the alpha = 0 gradient-square-derivative preset.
inline RunConfig p2_tail() {
  RunConfig c;
  c.eq = resolve_preset("p2_alpha0");
  c.data.family = InitialDataSpec::Family::CompactBump;
  // Purely outgoing data, support away from the origin: the alpha = 0
  // principal part is ~8x the generic one and loses hyperbolicity when the
  // ingoing half of time-symmetric data focuses through the origin (where
  // psi = Psi/r amplifies it).  With no ingoing pulse the margin is wide
  // even at epsilon = 0.15, which this fast-decaying tail needs to clear
  // the truncation floor.
  c.data.mode = InitialDataSpec::Mode::Outgoing;
  c.data.epsilon = 0.15;
  c.data.bump_center = 0.7;
  c.data.bump_width = 0.2;
  c.N = 1024;
  c.cfl = 0.8;
  c.scale = 1.0;
  c.tau_final = 250.0;  // past ~tau 300 at this N, under-resolved remnants of
                        // the outgoing burst leak back from the compressed
                        // outer grid and bury the tail
  c.cadence = 0.25;
  c.probes = {5.0};
  c.fit_window_start = 50.0;
  finalize(c);
  return c;
}

inline RunConfig semilinear_run() {
  RunConfig c;
  c.eq = resolve_preset("semilinear_null");
  c.data.family = InitialDataSpec::Family::CompactBump;
  c.data.mode = InitialDataSpec::Mode::TimeSymmetric;
  c.data.epsilon = 0.05;
  c.data.bump_center = 0.5;
  c.data.bump_width = 0.35;
  c.N = 512;
  c.cfl = 0.8;
  c.scale = 1.0;
  c.tau_final = 2000.0;
  c.cadence = 0.5;
  c.probes = {5.0};
  finalize(c);
  return c;
}

/// Noncompact-tail run carrying a prescribed c_init plus a compact bump
/// perturbation; shared by the coefficient-identity and sensitivity criteria.
inline RunConfig noncompact_run(double c_init) {
  RunConfig c;
  c.eq = resolve_preset("generic_radial");
  c.data.family = InitialDataSpec::Family::NoncompactTail;
  c.data.mode = InitialDataSpec::Mode::TimeSymmetric;
  c.data.epsilon = 0.05;
  c.data.bump_center = 0.5;
  c.data.bump_width = 0.35;
  c.data.c_init = c_init;
  c.data.delta_id = 0.5;
  c.data.tau0 = 1.0;
  c.N = 1024;
  c.cfl = 0.8;
  c.scale = 4.0;  // the scri signal at retarded time u is fed by data at
                  // rho ~ u/2; the larger scale keeps the amplitude window
                  // inside the resolved range
  c.tau_final = 400.0;
  c.cadence = 0.1;  // the bump's burst through scri dominates c_scri and
                    // oscillates on a sub-unit u scale
  c.probes = {5.0};
  c.fit_window_start = 100.0;
  finalize(c);
  return c;
}

/// Linear compact pulse for the no-tail check.
inline RunConfig huygens_run() {
  RunConfig c;
  c.eq = resolve_preset("linear");
  c.data.family = InitialDataSpec::Family::CompactBump;
  c.data.mode = InitialDataSpec::Mode::TimeSymmetric;
  c.data.epsilon = 1.0;
  c.data.bump_center = 0.4;
  c.data.bump_width = 0.1;
  c.N = 1024;
  c.cfl = 0.8;
  c.scale = 3.0;
  c.tau_final = 20.0;
  c.cadence = 0.05;
  c.dissipation = 0.005;
  c.probes = {0.0};
  finalize(c);
  return c;
}

}  // namespace scenarios

namespace detail {

inline std::string fmt(double v) {
  std::ostringstream os;
  os.precision(4);
  os << v;
  return os.str();
}

/// Exact rational membership test of a tensor in the span of the first two
/// generator groups (independent of the floating-point classifier).
inline bool in_span_p1p2_exact(const NullFormTensor& T) {
  const auto& gens = p1p2_generators();
  const int m = static_cast<int>(gens.size());
  // columns: generators; last column: target.  Rational Gaussian elimination.
  std::vector<std::vector<Rat>> M(64, std::vector<Rat>(m + 1, Rat(0)));
  auto flat = [](const NullFormTensor& t, int row) {
    const int a = row / 16, b = (row / 4) % 4, c = row % 4;
    return t.at(a, b, c);
  };
  for (int r = 0; r < 64; ++r) {
    for (int j = 0; j < m; ++j) M[r][j] = flat(gens[j], r);
    M[r][m] = flat(T, r);
  }
  int rank = 0;
  for (int col = 0; col <= m && rank < 64; ++col) {
    if (col == m) {
      // any leftover nonzero entry in the target column means "not in span"
      for (int r = rank; r < 64; ++r)
        if (M[r][m] != Rat(0)) return false;
      return true;
    }
    int piv = -1;
    for (int r = rank; r < 64; ++r)
      if (M[r][col] != Rat(0)) {
        piv = r;
        break;
      }
    if (piv < 0) continue;
    std::swap(M[rank], M[piv]);
    for (int r = 0; r < 64; ++r) {
      if (r == rank || M[r][col] == Rat(0)) continue;
      const Rat f = M[r][col] / M[rank][col];
      for (int c = col; c <= m; ++c) M[r][c] -= f * M[rank][c];
    }
    ++rank;
  }
  for (int r = rank; r < 64; ++r)
    if (M[r][m] != Rat(0)) return false;
  return true;
}

}  // namespace detail

// --- criteria --------------------------------------------------------------

/// 1. Fourth-order convergence of the evolver against the exact free radial
/// pulse, plus an absolute accuracy bound at the finest resolution.
inline CheckResult check_linear_convergence() {
  CheckResult res{1, "linear_convergence"};
  const ProfileFunction f(3.0, 2.0);
  const ExactLinearRadial ex(f);
  const HeightFunction h(1.0);
  const double tau_end = 3.0;
  const double probe_rho = 2.0;

  double vals[3] = {0, 0, 0};
  double maxerr_fine = 0.0, peak = 0.0;
  const int Ns[3] = {512, 1024, 2048};
  for (int q = 0; q < 3; ++q) {
    const int N = Ns[q];
    const Grid g(N, 3.0, h);
    EvolverParams ep;
    ep.dissipation = 0.0;
    const RadialNullForm zero;
    const Evolver ev(g, zero, ep);

    GridState s;
    s.tau = 0.0;
    s.Psi.assign(N + 1, 0.0);
    s.Pi.assign(N + 1, 0.0);
    for (int j = 1; j < N; ++j) {
      const double t0 = h.h(g.rho[j]);
      s.Psi[j] = ex.Psi(t0, g.rho[j]);
      s.Pi[j] = ex.dtPsi(t0, g.rho[j]);
    }
    s.Psi[N] = f(-h.uOffset());  // u = tau - L, f(v) -> 0
    s.Pi[N] = f.d1(-h.uOffset());

    const double dt0 = ev.dtau(0.8);
    const long long nsteps = static_cast<long long>(std::ceil(tau_end / dt0));
    const double dt = tau_end / nsteps;
    for (long long n = 0; n < nsteps; ++n) ev.step(s, dt);

    const auto pw = g.probeWeights(probe_rho);
    vals[q] = Grid::applyProbe(pw, s.Psi);

    if (q == 2) {
      for (int j = 0; j <= N; ++j) {
        double exact;
        if (j == N)
          exact = f(s.tau - h.uOffset());
        else
          exact = ex.Psi(s.tau + h.h(g.rho[j]), g.rho[j]);
        maxerr_fine = std::max(maxerr_fine, std::abs(s.Psi[j] - exact));
      }
      peak = f.amplitude();
    }
  }

  bool order_ok = false;
  double order = 0.0;
  try {
    order = richardson(vals[0], vals[1], vals[2]).order;
    order_ok = std::abs(order - 4.0) <= 0.3;
  } catch (const std::exception&) {
    order_ok = false;
  }
  const bool err_ok = maxerr_fine <= 1e-7 * peak;
  res.pass = order_ok && err_ok;
  res.detail = "richardson order " + detail::fmt(order) + " (target 4.0 +- 0.3), max rel error " +
               detail::fmt(maxerr_fine / peak) + " (target <= 1e-7)";
  return res;
}

/// 2. Strong Huygens: no tail at the origin after the pulse crosses.
inline CheckResult check_huygens(ArtifactCache& cache) {
  CheckResult res{2, "linear_huygens"};
  const RunConfig cfg = scenarios::huygens_run();
  const RunArtifact& art = cache.get(cfg);
  if (art.aborted) {
    res.detail = "run aborted: " + art.abort_reason;
    return res;
  }
  // outer support edge of the bump, in rho
  const double sig_edge = cfg.data.bump_center + cfg.data.bump_width;
  const double rho_edge = cfg.scale * sig_edge / (1.0 - sig_edge);
  const double tau_quiet = rho_edge + 5.0;

  double peak = 0.0, late = 0.0;
  for (size_t i = 0; i < art.taus.size(); ++i) {
    peak = std::max(peak, std::abs(art.probe_psi[0][i]));
    if (art.taus[i] > tau_quiet) late = std::max(late, std::abs(art.probe_psi[0][i]));
  }
  res.pass = late < 1e-9 * peak;
  res.detail = "|psi(tau>" + detail::fmt(tau_quiet) + ",0)|/peak = " +
               detail::fmt(late / peak) + " (target < 1e-9)";
  return res;
}

/// 3. Generic quasilinear tail: LPI -> -2 at a fixed probe and a converged
/// scri amplitude.
inline CheckResult check_generic_tail(ArtifactCache& cache) {
  CheckResult res{3, "generic_tail"};
  const RunConfig cfg = scenarios::generic_tail();
  const RunArtifact& art = cache.get(cfg);
  if (art.aborted) {
    res.detail = "run aborted: " + art.abort_reason;
    return res;
  }
  const double t1 = cfg.fit_window_start, t2 = cfg.tau_final;
  const double lpi = median_lpi(art.taus, art.probe_psi[0], t1, t2, cfg.noise_floor);
  const AmplitudeEstimate a =
      scri_amplitude(art.taus, art.scri_Psi, art.L, t1 - art.L, t2 - art.L);
  const bool lpi_ok = std::abs(lpi + 2.0) <= 0.1;
  const bool drift_ok = a.drift < 0.02;
  res.pass = lpi_ok && drift_ok;
  res.detail = "LPI(rho=5) = " + detail::fmt(lpi) + " (target -2 +- 0.1), a(u) = " +
               detail::fmt(a.mean) + " drift " + detail::fmt(a.drift) +
               " (target < 0.02)";
  return res;
}

/// 4. Coefficient identity c_total = c_init + c_scri on noncompact data.
inline CheckResult check_coefficient_identity(ArtifactCache& cache) {
  CheckResult res{4, "coefficient_identity"};
  const RunConfig cfg = scenarios::noncompact_run(0.3);
  const RunArtifact& art = cache.get(cfg);
  if (art.aborted) {
    res.detail = "run aborted: " + art.abort_reason;
    return res;
  }
  const TailReport rep = verify_prediction(art);
  res.pass = rep.mismatch < 0.05;
  res.detail = "c_init " + detail::fmt(rep.c_init) + " + c_scri " + detail::fmt(rep.c_scri) +
               " = " + detail::fmt(rep.c_total) + " vs measured " + detail::fmt(rep.a_mean) +
               ", mismatch " + detail::fmt(rep.mismatch) + " (target < 0.05)";
  return res;
}

/// 5. Faster decay for sources inside the special span: LPI -> -3 and a scri
/// amplitude far below the generic run's.
inline CheckResult check_p1p2_decay(ArtifactCache& cache) {
  CheckResult res{5, "p1p2_decay"};
  const RunConfig cfgP = scenarios::p2_tail();
  const RunConfig cfgG = scenarios::generic_matched();
  const RunArtifact& artP = cache.get(cfgP);
  const RunArtifact& artG = cache.get(cfgG);
  if (artP.aborted || artG.aborted) {
    res.detail = "run aborted";
    return res;
  }
  const double lpi = median_lpi(artP.taus, artP.probe_psi[0], cfgP.fit_window_start,
                                cfgP.tau_final, cfgP.noise_floor);
  const AmplitudeEstimate aP =
      scri_amplitude(artP.taus, artP.scri_Psi, artP.L,
                     cfgP.fit_window_start - artP.L, cfgP.tau_final - artP.L);
  const AmplitudeEstimate aG =
      scri_amplitude(artG.taus, artG.scri_Psi, artG.L,
                     cfgG.fit_window_start - artG.L, cfgG.tau_final - artG.L);
  const bool lpi_ok = std::abs(lpi + 3.0) <= 0.15;
  const double ratio = std::abs(aP.mean) / std::max(std::abs(aG.mean), 1e-300);
  const bool amp_ok = ratio < 1e-3;
  res.pass = lpi_ok && amp_ok;
  res.detail = "LPI = " + detail::fmt(lpi) + " (target -3 +- 0.15), |a|/|a_generic| = " +
               detail::fmt(ratio) + " (target < 1e-3)";
  return res;
}

/// 6. Semilinear super-polynomial decay and the transformation chain gaining
/// at least one power.
inline CheckResult check_semilinear(ArtifactCache& cache) {
  CheckResult res{6, "semilinear_decay"};
  const RunConfig cfg = scenarios::semilinear_run();
  const RunArtifact& art = cache.get(cfg);
  if (art.aborted) {
    res.detail = "run aborted: " + art.abort_reason;
    return res;
  }
  const std::vector<double>& psi = art.probe_psi[0];
  const std::vector<double> psi1 = semilinear_transform(psi, 1);
  const auto lpi = local_power_index(art.taus, psi, cfg.noise_floor);
  const auto lpi1 = local_power_index(art.taus, psi1, cfg.noise_floor);

  // (a) LPI of psi dives below -3 while still above the floor
  double min_lpi = 0.0;
  bool below3 = false;
  const double floor_amp = 100.0 * cfg.noise_floor;
  for (size_t i = 0; i < lpi.size(); ++i) {
    if (!std::isfinite(lpi[i]) || std::abs(psi[i]) < floor_amp) continue;
    min_lpi = std::min(min_lpi, lpi[i]);
    if (lpi[i] < -3.0) below3 = true;
  }

  // (b) at the latest tau where both series are still well above the noise
  // left behind by the pulse (1e-3 of the peak), the transformed field decays
  // at least 0.8 powers faster (median over the preceding half-decade)
  double peak = 0.0;
  for (double v : psi) peak = std::max(peak, std::abs(v));
  const double clean_amp = std::max(1e-3 * peak, floor_amp);
  size_t imatch = 0;
  for (size_t i = lpi.size(); i-- > 0;) {
    if (std::isfinite(lpi[i]) && std::isfinite(lpi1[i]) &&
        std::abs(psi[i]) > clean_amp && std::abs(psi1[i]) > clean_amp) {
      imatch = i;
      break;
    }
  }
  bool gap_ok = false;
  double m0 = 0.0, m1 = 0.0;
  if (imatch > 0) {
    const double t2 = art.taus[imatch], t1 = 0.5 * t2;
    std::vector<double> w0, w1;
    for (size_t i = 0; i <= imatch; ++i) {
      if (art.taus[i] < t1) continue;
      if (std::isfinite(lpi[i])) w0.push_back(lpi[i]);
      if (std::isfinite(lpi1[i])) w1.push_back(lpi1[i]);
    }
    if (w0.size() >= 3 && w1.size() >= 3) {
      m0 = median(w0);
      m1 = median(w1);
      gap_ok = m1 <= m0 - 0.8;
    }
  }
  res.pass = below3 && gap_ok;
  res.detail = "min LPI(psi) = " + detail::fmt(min_lpi) + " (target < -3), LPI(psi_1) = " +
               detail::fmt(m1) + " vs LPI(psi) = " + detail::fmt(m0) +
               " at matched late tau (target gap >= 0.8)";
  return res;
}

/// 7. Weighted-energy decay-rate fits on the generic run.
inline CheckResult check_energy_decay(ArtifactCache& cache) {
  CheckResult res{7, "energy_decay"};
  const RunConfig cfg = scenarios::generic_tail();
  const RunArtifact& art = cache.get(cfg);
  if (art.aborted) {
    res.detail = "run aborted: " + art.abort_reason;
    return res;
  }
  const double d = cfg.delta;
  bool all_ok = true;
  std::string det;
  auto fit_one = [&](const RunArtifact& a, const RunConfig& c, size_t e, bool extended) {
    const double p = c.energy_pairs[e].second;
    const double target = (extended ? -(3.0 - d) : -(2.0 - d)) + p;
    const double tol = extended ? 0.3 : 0.2;
    const DecayFit fit =
        fit_decay_rate(a.taus, a.energies[e], c.fit_window_start, c.tau_final);
    const bool ok = std::abs(fit.slope - target) <= tol;
    all_ok = all_ok && ok;
    if (!det.empty()) det += "; ";
    det += "p=" + detail::fmt(p) + ": slope " + detail::fmt(fit.slope) + " vs " +
           detail::fmt(target) + " +- " + detail::fmt(tol) + (ok ? " ok" : " FAIL");
  };
  for (size_t e = 0; e < cfg.energy_pairs.size(); ++e) fit_one(art, cfg, e, false);
  // The l=0 extended-range rate draws on the tail an order of magnitude past
  // the slice time in radius; it needs the larger-scale run to stay resolved.
  const RunConfig cfgX = scenarios::extended_energy_run();
  const RunArtifact& artX = cache.get(cfgX);
  if (artX.aborted) {
    res.detail = det + "; extended run aborted: " + artX.abort_reason;
    return res;
  }
  for (size_t e = 0; e < cfgX.energy_pairs.size(); ++e)
    if (cfgX.energy_pairs[e].second > 2.0) fit_one(artX, cfgX, e, true);
  res.pass = all_ok;
  res.detail = det;
  return res;
}

/// 8. Genericity sensitivity: dc_total/dc_init across two perturbations.
inline CheckResult check_sensitivity(ArtifactCache& cache) {
  CheckResult res{8, "genericity_sensitivity"};
  const double cis[2] = {0.3, 0.36};
  double x[2], y[2];
  for (int q = 0; q < 2; ++q) {
    const RunConfig cfg = scenarios::noncompact_run(cis[q]);
    const RunArtifact& art = cache.get(cfg);
    if (art.aborted) {
      res.detail = "run aborted: " + art.abort_reason;
      return res;
    }
    x[q] = fit_c_init(art).c_init;
    y[q] = amplitude_limit(art.taus, art.scri_Psi, art.L, cfg.data.delta_id, 60.0,
                           cfg.tau_final - art.L)
               .c;
  }
  const double slope = (y[1] - y[0]) / (x[1] - x[0]);
  res.pass = slope > 0.9 && slope < 1.1;
  res.detail = "dc_total/dc_init = " + detail::fmt(slope) + " (target in (0.9, 1.1))";
  return res;
}

/// 9. Null algebra: generator validation, rejection of corrupted tensors,
/// classification against an exact rational membership oracle.
inline CheckResult check_null_algebra() {
  CheckResult res{9, "null_algebra"};
  const auto& gens = all_generators();
  int bad_validate = 0;
  for (const auto& g : gens)
    if (!validate_null(g)) ++bad_validate;

  std::mt19937 rng(42);
  std::uniform_int_distribution<int> idx4(0, 3), coef(1, 3),
      gidx(0, static_cast<int>(gens.size()) - 1), mix(-2, 2);
  int accepted_corrupt = 0;
  for (int trial = 0; trial < 10; ++trial) {
    NullFormTensor T;
    for (int k = 0; k < 3; ++k) {
      const NullFormTensor& g = gens[gidx(rng)];
      T += g * Rat(mix(rng));
    }
    // inject a single surviving monomial
    T.addTerm(idx4(rng), idx4(rng), idx4(rng), Rat(coef(rng)));
    if (validate_null(T)) ++accepted_corrupt;
  }

  int misflagged = 0;
  for (size_t j = 0; j < gens.size(); ++j) {
    const bool expect = detail::in_span_p1p2_exact(gens[j]);
    const Classification cl = classify(gens[j]);
    if (cl.in_span_p1p2 != expect) ++misflagged;
    if ((j < 8) != expect && j < 8) ++misflagged;  // first 8 must be in span
  }

  res.pass = bad_validate == 0 && accepted_corrupt == 0 && misflagged == 0;
  res.detail = std::to_string(bad_validate) + " generators failed validation, " +
               std::to_string(accepted_corrupt) + "/10 corrupted tensors accepted, " +
               std::to_string(misflagged) + " classification mismatches";
  return res;
}

/// 10. Kirchhoff oracle: a source in the t^-3 (t-r)^-3 class behind the light
/// cone gives an interior field decaying at least like t^-1.9.
inline CheckResult check_kirchhoff() {
  CheckResult res{10, "kirchhoff_oracle"};
  auto src = [](double t, double r) {
    const double w = t - r;
    return std::pow(1.0 + t * t, -1.5) * std::pow(1.0 + w * w, -1.5) *
           smoothstep(w - 1.0);
  };
  // t^2 psi approaches its limit with an O(1/t) correction; fit late enough
  // that the residual slope error is inside the criterion band
  const KirchhoffEvaluator kir(src, 700.0, 1e-8);
  const double ts[7] = {80, 113, 160, 226, 320, 453, 640};
  std::vector<double> lx, ly;
  for (double t : ts) {
    const double v = kir.evaluate(t, 0.0).first;
    if (!(std::abs(v) > 0.0)) {
      res.detail = "interior value vanished at t = " + detail::fmt(t);
      return res;
    }
    lx.push_back(std::log(t));
    ly.push_back(std::log(std::abs(v)));
  }
  const LineFit f = fit_line(lx, ly);
  res.pass = f.slope <= -1.9;
  res.detail = "|psi(t,0)| fit slope " + detail::fmt(f.slope) + " (target <= -1.9)";
  return res;
}

// --- dispatch --------------------------------------------------------------

inline CheckResult run_criterion(int id, ArtifactCache& cache) {
  switch (id) {
    case 1: return check_linear_convergence();
    case 2: return check_huygens(cache);
    case 3: return check_generic_tail(cache);
    case 4: return check_coefficient_identity(cache);
    case 5: return check_p1p2_decay(cache);
    case 6: return check_semilinear(cache);
    case 7: return check_energy_decay(cache);
    case 8: return check_sensitivity(cache);
    case 9: return check_null_algebra();
    case 10: return check_kirchhoff();
    default: throw ConfigError("unknown criterion id: " + std::to_string(id));
  }
}

inline std::vector<int> scenario_ids(const std::string& name) {
  static const std::map<std::string, int> byname = {
      {"linear_convergence", 1}, {"linear_huygens", 2},  {"generic_tail", 3},
      {"coefficient_identity", 4}, {"p1p2_decay", 5},    {"semilinear_decay", 6},
      {"energy_decay", 7},       {"genericity_sensitivity", 8},
      {"null_algebra", 9},       {"kirchhoff_oracle", 10}};
  if (name == "all" || name.empty()) {
    std::vector<int> v;
    for (int i = 1; i <= 10; ++i) v.push_back(i);
    return v;
  }
  auto it = byname.find(name);
  if (it == byname.end()) throw ConfigError("unknown verify scenario: " + name);
  return {it->second};
}

// --- oracle self-checks (mode oracle-check) --------------------------------

inline std::vector<CheckResult> run_oracle_checks() {
  std::vector<CheckResult> out;
  auto add = [&](const std::string& name, bool pass, const std::string& det) {
    CheckResult r(0, name);
    r.pass = pass;
    r.detail = det;
    out.push_back(std::move(r));
  };

  // exact free radial wave: support and the r -> 0 Taylor limit
  {
    const ProfileFunction f(4.0, 1.0);
    const ExactLinearRadial ex(f);
    const bool zero_out = ex.psi(20.0, 1.0) == 0.0 && ex.psi(0.0, 1.0) == 0.0;
    const double lim = ex.psi(4.3, 0.0), near = ex.psi(4.3, 1e-6);
    add("exact_linear_support", zero_out, "psi vanishes outside the light cone");
    add("exact_linear_origin_limit", std::abs(lim - near) < 1e-10,
        "r->0 limit vs r=1e-6: diff " + detail::fmt(std::abs(lim - near)));
  }

  // Kirchhoff: zero source and a manufactured solution
  {
    const KirchhoffEvaluator kz([](double, double) { return 0.0; }, 10.0);
    add("kirchhoff_zero", kz.evaluate(5.0, 1.0).first == 0.0, "zero source -> 0");

    // psi_m = b(t) exp(-r^2), b supported in [2,4]; the retarded integral of
    // Box psi_m must reproduce psi_m exactly.
    const ProfileFunction b(3.0, 1.0);
    auto psi_m = [&](double t, double r) { return b(t) * std::exp(-r * r); };
    auto boxsrc = [&](double t, double r) {
      const double e = std::exp(-r * r);
      const double lap = b(t) * e * (4.0 * r * r - 6.0);  // Delta of e^{-r^2}
      return b.d2(t) * e - lap;
    };
    const KirchhoffEvaluator km(boxsrc, 12.0, 1e-7);
    double worst = 0.0;
    for (double r : {0.0, 1.0}) {
      const double got = km.evaluate(3.5, r).first;
      worst = std::max(worst, std::abs(got - psi_m(3.5, r)));
    }
    add("kirchhoff_manufactured", worst < 1e-6,
        "max |retarded - exact| = " + detail::fmt(worst));
  }

  // Richardson on a synthetic 4th-order sequence
  {
    const double L = 0.7, C = 2.0;
    const auto r = richardson(L + C * std::pow(256.0, -4), L + C * std::pow(512.0, -4),
                              L + C * std::pow(1024.0, -4));
    add("richardson_synthetic", std::abs(r.order - 4.0) < 1e-6,
        "order " + detail::fmt(r.order));
  }

  // semilinear transform basics
  {
    const bool id0 = semilinear_transform_value(0.0, 1) == 0.0 &&
                     semilinear_transform_value(0.0, 3) == 0.0;
    const double v = 0.3;
    const bool n1 = std::abs(semilinear_transform_value(v, 1) - (v - v * v / 2.0)) < 1e-15;
    add("semilinear_transform", id0 && n1, "psi_(1) = psi - psi^2/2 at psi=0.3");
  }
  return out;
}

}  // namespace tailwave
