// Dumps the quasilinear degeneracy ratio invW * aqz and the frame
// derivatives near scri at a fixed cadence, for chasing margin drift.

#include <cstdio>
#include <cstdlib>

#include "tailwave/config.hpp"
#include "tailwave/evolver.hpp"
#include "tailwave/initialdata.hpp"
#include "tailwave/run.hpp"

using namespace tailwave;

int main(int argc, char** argv) {
  const int N = argc > 1 ? std::atoi(argv[1]) : 512;
  const double tau_final = argc > 2 ? std::atof(argv[2]) : 60.0;
  const std::string preset = argc > 3 ? argv[3] : "generic_radial";
  const double scale = argc > 4 ? std::atof(argv[4]) : 1.0;
  const double eps = argc > 5 ? std::atof(argv[5]) : 0.05;

  RunConfig c;
  c.eq = resolve_preset(preset);
  c.data.family = InitialDataSpec::Family::CompactBump;
  c.data.epsilon = eps;
  c.data.bump_center = 0.5;
  c.data.bump_width = 0.35;
  c.N = N;
  c.cfl = 0.8;
  c.scale = scale;
  c.tau_final = tau_final;
  c.hyp_min = -100.0;  // never abort; we want the profile
  finalize(c);

  const HeightFunction h(c.eta);
  const Grid g(c.N, c.scale, h);
  EvolverParams ep;
  ep.dissipation = c.dissipation;
  ep.hyp_min = c.hyp_min;
  const Evolver ev(g, c.eq.radial, ep);
  GridState s = make_initial_data(c.data, g);

  const double dt = ev.dtau(c.cfl);
  const long long nsteps = static_cast<long long>(tau_final / dt);
  const long long every = std::max<long long>(1, nsteps / 12);

  std::vector<double> UPsi, VPsi;
  auto dump = [&]() {
    ev.frameDerivs(s, UPsi, VPsi);
    double worst = 0.0;
    int jworst = 0;
    for (int j = 1; j < g.N(); ++j) {
      const double aqz = ev.principal(UPsi[j], VPsi[j], s.Psi[j], g.rho[j],
                                      g.mu[j], g.nu[j]);
      const double q = g.invW[j] * aqz;
      if (std::abs(q) > std::abs(worst)) {
        worst = q;
        jworst = j;
      }
    }
    const int j = jworst;
    std::printf("tau %7.3f  worst q %+9.5f at j=%d (rho %9.3f)  VPsi %+.3e  Psi %+.3e  nu %.3e\n",
                s.tau, worst, j, g.rho[j], VPsi[j], s.Psi[j], g.nu[j]);
  };

  dump();
  for (long long n = 1; n <= nsteps; ++n) {
    ev.step(s, dt);
    if (n % every == 0) dump();
  }
  dump();
  return 0;
}
