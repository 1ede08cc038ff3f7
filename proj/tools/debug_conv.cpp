// Scratch diagnostic: semi-discrete truncation of the linear RHS against the
// exact free radial wave, plus a full-evolution error profile.
#include <cstdio>
#include <cmath>
#include <vector>

#include "tailwave/evolver.hpp"
#include "tailwave/oracle.hpp"

using namespace tailwave;

static GridState exact_state(const ExactLinearRadial& ex, const Grid& g,
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

int main() {
  const HeightFunction h(1.0);
  const ProfileFunction f(4.0, 1.5);
  const ExactLinearRadial ex(f);

  for (int N : {128, 256, 512}) {
    const Grid g(N, 5.0, h);
    EvolverParams ep;
    ep.dissipation = 0.0;
    const RadialNullForm zero;
    const Evolver ev(g, zero, ep);
    const double tau = 1.0;
    GridState s = exact_state(ex, g, h, tau);
    std::vector<double> dPsi, dPi;
    ev.rhs(s, dPsi, dPi);
    double emax = 0.0; int jmax = -1;
    for (int j = 1; j < N; ++j) {
      const double t = tau + h.h(g.rho[j]);
      const double exact = f.d2(t - g.rho[j]) - f.d2(t + g.rho[j]);
      const double e = std::abs(dPi[j] - exact);
      if (e > emax) { emax = e; jmax = j; }
    }
    const double exactScri = f.d2(tau - h.uOffset());
    std::printf("N=%4d  rhs truncation max %.3e at j=%d (sigma=%.3f rho=%.3f)  scri dPi err %.3e\n",
                N, emax, jmax, g.sigma[jmax], g.rho[jmax],
                std::abs(dPi[N] - exactScri));
  }

  // full evolution error profile at N=128
  for (int N : {128, 256}) {
    const Grid g(N, 5.0, h);
    EvolverParams ep;
    ep.dissipation = 0.0;
    const RadialNullForm zero;
    const Evolver ev(g, zero, ep);
    GridState s = exact_state(ex, g, h, 0.0);
    const double tau_end = 3.0;
    const double dt0 = ev.dtau(0.8);
    const long long n = (long long)std::ceil(tau_end / dt0);
    const double dt = tau_end / n;
    double emax_run = 0.0; int jmax_run = -1;
    for (long long i = 0; i < n; ++i) {
      ev.step(s, dt);
    }
    const GridState ref = exact_state(ex, g, h, s.tau);
    for (int j = 0; j <= N; ++j) {
      const double e = std::abs(s.Psi[j] - ref.Psi[j]);
      if (e > emax_run) { emax_run = e; jmax_run = j; }
    }
    std::printf("N=%4d  evolution err %.3e at j=%d (sigma=%.3f)\n", N, emax_run,
                jmax_run, g.sigma[jmax_run]);
    // print profile every 8 nodes
    if (N == 128) {
      for (int j = 0; j <= N; j += 8)
        std::printf("  j=%3d sigma=%.3f err=%.3e Psi=%.3e\n", j, g.sigma[j],
                    std::abs(s.Psi[j] - ref.Psi[j]), ref.Psi[j]);
    }
  }
  return 0;
}
