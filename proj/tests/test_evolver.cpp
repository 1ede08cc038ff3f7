#include <catch_amalgamated.hpp>

#include <cmath>
#include <cstring>

#include "tailwave/config.hpp"
#include "tailwave/energies.hpp"
#include "tailwave/evolver.hpp"
#include "tailwave/oracle.hpp"
#include "tailwave/run.hpp"

using namespace tailwave;

namespace {

GridState exact_state(const ExactLinearRadial& ex, const Grid& g,
                      const HeightFunction& h, double tau) {
  const int N = g.N();
  GridState s;
  s.tau = tau;
  s.Psi.assign(N + 1, 0.0);
  s.Pi.assign(N + 1, 0.0);
  for (int j = 1; j < N; ++j) {
    const double t = tau + h.h(g.rho[j]);
    s.Psi[j] = ex.Psi(t, g.rho[j]);
    s.Pi[j] = ex.dtPsi(t, g.rho[j]);
  }
  s.Psi[N] = ex.profile()(tau - h.uOffset());
  s.Pi[N] = ex.profile().d1(tau - h.uOffset());
  return s;
}

double run_linear_error(int N, double tau_end) {
  const HeightFunction h(1.0);
  const Grid g(N, 5.0, h);
  EvolverParams ep;
  ep.dissipation = 0.0;
  const RadialNullForm zero;
  const Evolver ev(g, zero, ep);
  const ProfileFunction f(4.0, 1.5);
  const ExactLinearRadial ex(f);

  GridState s = exact_state(ex, g, h, 0.0);
  const double dt0 = ev.dtau(0.8);
  const long long n = static_cast<long long>(std::ceil(tau_end / dt0));
  const double dt = tau_end / n;
  for (long long i = 0; i < n; ++i) ev.step(s, dt);

  const GridState ref = exact_state(ex, g, h, s.tau);
  double err = 0.0;
  for (int j = 0; j <= N; ++j) err = std::max(err, std::abs(s.Psi[j] - ref.Psi[j]));
  return err;
}

}  // namespace

TEST_CASE("zero data stays zero") {
  const HeightFunction h(1.0);
  const Grid g(128, 10.0, h);
  const Evolver ev(g, resolve_preset("generic_radial").radial);
  GridState s;
  s.tau = 0.0;
  s.Psi.assign(129, 0.0);
  s.Pi.assign(129, 0.0);
  for (int i = 0; i < 50; ++i) ev.step(s, ev.dtau(0.5));
  for (double v : s.Psi) CHECK(v == 0.0);
  for (double v : s.Pi) CHECK(v == 0.0);
}

TEST_CASE("linear pulse converges at 4th order") {
  const double e1 = run_linear_error(256, 3.0);
  const double e2 = run_linear_error(512, 3.0);
  const double rate = std::log2(e1 / e2);
  CHECK(rate > 3.3);
  CHECK(e2 < 1e-4);
}

TEST_CASE("evolution is bitwise deterministic") {
  RunConfig c;
  c.eq = resolve_preset("generic_radial");
  c.data.epsilon = 0.05;
  c.N = 128;
  c.tau_final = 5.0;
  c.cadence = 0.5;
  finalize(c);
  const RunArtifact a = evolve(c);
  const RunArtifact b = evolve(c);
  REQUIRE(a.taus.size() == b.taus.size());
  CHECK(std::memcmp(a.final_state.Psi.data(), b.final_state.Psi.data(),
                    a.final_state.Psi.size() * sizeof(double)) == 0);
  CHECK(std::memcmp(a.scri_Psi.data(), b.scri_Psi.data(),
                    a.scri_Psi.size() * sizeof(double)) == 0);
}

TEST_CASE("standard energy decays and balances the scri flux") {
  RunConfig c;
  c.eq = resolve_preset("linear");
  c.data.epsilon = 1.0;
  c.data.bump_center = 0.4;
  c.data.bump_width = 0.15;
  c.N = 512;
  c.scale = 3.0;
  c.cfl = 0.8;
  c.tau_final = 10.0;
  c.cadence = 0.05;
  c.dissipation = 0.0;
  finalize(c);
  const RunArtifact art = evolve(c);
  REQUIRE_FALSE(art.aborted);
  // monotone up to discretization-level wiggle (no dissipation in this run)
  for (size_t i = 1; i < art.std_energy.size(); ++i)
    CHECK(art.std_energy[i] <= art.std_energy[i - 1] * (1.0 + 1e-5) + 1e-14);
  const double drop = art.std_energy.front() - art.std_energy.back();
  const double flux = scri_flux(art.taus, art.scri_UPsi);
  CHECK(drop == Catch::Approx(flux / 4.0).epsilon(0.02));
}

TEST_CASE("hyperbolicity loss aborts with a clean artifact") {
  // ingoing pulse whose focusing leaves the hyperbolic regime mid-run
  RunConfig c;
  c.eq = resolve_preset("generic_radial");
  c.data.epsilon = 0.1;
  c.data.mode = InitialDataSpec::Mode::Ingoing;
  c.data.bump_center = 0.6;
  c.data.bump_width = 0.12;
  c.scale = 1.0;
  c.N = 256;
  c.tau_final = 10.0;
  c.cadence = 0.1;
  finalize(c);
  const RunArtifact art = evolve(c);
  CHECK(art.aborted);
  CHECK(art.abort_reason.find("hyperbolicity") != std::string::npos);
  CHECK(art.taus.size() >= 5);  // prefix retained
  CHECK(art.taus.back() < c.tau_final);
  // ragged-free series: every emitted column has the same length
  CHECK(art.scri_Psi.size() == art.taus.size());
  CHECK(art.scri_r3source.size() == art.taus.size());
  CHECK(art.std_energy.size() == art.taus.size());
}

TEST_CASE("probe padding insensitivity") {
  // the same physical probe radius interpolated on two slightly different
  // grids agrees to interpolation accuracy
  auto probe_val = [](int N) {
    RunConfig c;
    c.eq = resolve_preset("semilinear_null");
    c.data.epsilon = 0.05;
    c.N = N;
    c.tau_final = 8.0;
    c.cadence = 8.0;
    c.probes = {3.0};
    finalize(c);
    const RunArtifact art = evolve(c);
    return art.probe_psi[0].back();
  };
  CHECK(probe_val(256) == Catch::Approx(probe_val(272)).margin(1e-5));
}
