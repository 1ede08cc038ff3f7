#pragma once

// Discrete weighted slice energies, the standard (unweighted) energy, scri
// fluxes, and log-log decay-rate fits.
//
// The k-th order r^p energy sums, over radial operator words of length <= k
// drawn from {d_tau, rV}, the slice integral
//   <r>^(p-2) |rV A|^2 + <r>^(-1-eta) |U A|^2 + <r>^iota |A|^2,  iota = max{-2, p-eta-3},
// with A the word applied to Psi.  d_tau values come from the semi-discrete
// right-hand side (never from time differencing); the deepest tau-derivative
// needed at k = 2 uses the frozen-coefficient linear operator.

#include <cmath>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "tailwave/evolver.hpp"
#include "tailwave/grid.hpp"
#include "tailwave/util.hpp"

namespace tailwave {

inline double iota_weight(double p, double eta) { return std::max(-2.0, p - eta - 3.0); }

namespace detail {

/// dsigma derivative of an odd-parity node field, on nodes 0..N-1.
inline std::vector<double> dsig_field(const Grid& g, const std::vector<double>& A) {
  const int N = g.N();
  std::vector<double> d(N + 1, 0.0);
  const double gh = g.ghost(A);
  for (int j = 0; j < N; ++j) {
    if (j == 0)
      d[j] = g.d1origin(A);
    else if (j == 1)
      d[j] = g.d1g(A, gh);
    else if (j == N - 1)
      d[j] = g.d1edge(A);
    else
      d[j] = g.d1(A, j);
  }
  d[N] = g.scriExtrapolate(d);
  return d;
}

/// rV extension: B = r (nu Ad + sigma' dsigma A); finite scri limit filled by
/// extrapolation.
inline std::vector<double> rv_field(const Grid& g, const std::vector<double>& A,
                                    const std::vector<double>& Ad) {
  const int N = g.N();
  const auto As = dsig_field(g, A);
  std::vector<double> B(N + 1, 0.0);
  for (int j = 1; j < N; ++j)
    B[j] = g.rho[j] * (g.nu[j] * Ad[j] + g.sigp[j] * As[j]);
  B[N] = g.scriExtrapolate(B);
  return B;
}

/// Frozen-coefficient tau derivative: d_tau B for the pair (A, B) = (A, d_tau A)
/// under the linearized compactified operator.
inline std::vector<double> frozen_dtau(const Grid& g, const std::vector<double>& A,
                                       const std::vector<double>& B) {
  const int N = g.N();
  std::vector<double> out(N + 1, 0.0);
  const double gA = g.ghost(A), gB = g.ghost(B);
  for (int j = 1; j < N; ++j) {
    double As, Ass, Bs;
    if (j == 1) {
      As = g.d1g(A, gA);
      Ass = g.d2g(A, gA);
      Bs = g.d1g(B, gB);
    } else if (j == N - 1) {
      As = g.d1edge(A);
      Ass = g.d2edge(A);
      Bs = g.d1edge(B);
    } else {
      As = g.d1(A, j);
      Ass = g.d2(A, j);
      Bs = g.d1(B, j);
    }
    out[j] = g.cA[j] * Ass + g.cB[j] * As + g.cC[j] * Bs + g.cD[j] * B[j];
  }
  out[N] = g.scriExtrapolate(out);
  return out;
}

}  // namespace detail

/// k-th order r^p slice energy of the radiation field (k <= 2).
inline double rp_energy(const Evolver& ev, const GridState& s, int k, double p) {
  if (k < 0 || k > 2) throw ConfigError("rp_energy: k must be in {0,1,2}");
  const Grid& g = ev.grid();
  const int N = g.N();
  const double eta = g.height().eta();
  const double iw = iota_weight(p, eta);

  // Base tau-derivative tower, depth k+2.
  std::vector<std::vector<double>> tower;
  tower.push_back(s.Psi);
  tower.push_back(s.Pi);
  if (k >= 1) {
    std::vector<double> dPsi, dPi;
    ev.rhs(s, dPsi, dPi);
    tower.push_back(dPi);
  }
  if (k >= 2) tower.push_back(detail::frozen_dtau(g, tower[1], tower[2]));

  double total = 0.0;
  auto addWord = [&](const std::vector<double>& A, const std::vector<double>& Ad) {
    const auto As = detail::dsig_field(g, A);
    std::vector<double> integ(N, 0.0);
    for (int j = 0; j < N; ++j) {
      const double r = g.rho[j];
      const double rb2 = 1.0 + r * r;  // <r>^2
      const double UA = g.mu[j] * Ad[j] - g.sigp[j] * As[j];
      const double rVA = r * (g.nu[j] * Ad[j] + g.sigp[j] * As[j]);
      integ[j] = (std::pow(rb2, 0.5 * (p - 2.0)) * rVA * rVA +
                  std::pow(rb2, 0.5 * (-1.0 - eta)) * UA * UA +
                  std::pow(rb2, 0.5 * iw) * A[j] * A[j]) *
                 g.drho[j];
    }
    for (int j = 0; j + 1 < N; ++j)
      total += 0.5 * (integ[j] + integ[j + 1]) * g.dsigma();
  };

  // Recursive enumeration of words of length <= k over {d_tau, rV}, carried
  // as towers of tau-derivatives deep enough for the remaining letters.
  std::function<void(const std::vector<std::vector<double>>&, int)> walk =
      [&](const std::vector<std::vector<double>>& tw, int remaining) {
        addWord(tw[0], tw[1]);
        if (remaining == 0) return;
        // d_tau: shift the tower.
        std::vector<std::vector<double>> shifted(tw.begin() + 1, tw.end());
        walk(shifted, remaining - 1);
        // rV: apply levelwise (rV commutes with d_tau; coefficients are static).
        std::vector<std::vector<double>> rv;
        for (size_t i = 0; i + 1 < tw.size(); ++i)
          rv.push_back(detail::rv_field(g, tw[i], tw[i + 1]));
        walk(rv, remaining - 1);
      };
  walk(tower, k);
  return total;
}

/// Standard slice energy E = (1/2) int [(1-h'^2) Pi^2 + (d_rho Psi)^2] d rho;
/// for the linear equation its drop equals a quarter of the scri flux
/// int |U Psi|^2 d tau (U Psi -> 2 Pi at scri).
inline double standard_energy(const Grid& g, const GridState& s) {
  const int N = g.N();
  const auto Ps = detail::dsig_field(g, s.Psi);
  std::vector<double> integ(N, 0.0);
  for (int j = 0; j < N; ++j) {
    const double Prho = g.sigp[j] * Ps[j];
    integ[j] = 0.5 * (g.mu[j] * g.nu[j] * s.Pi[j] * s.Pi[j] + Prho * Prho) * g.drho[j];
  }
  double total = 0.0;
  for (int j = 0; j + 1 < N; ++j) total += 0.5 * (integ[j] + integ[j + 1]) * g.dsigma();
  return total;
}

/// Accumulated scri flux int |U Psi|^2 d tau over the run window.
inline double scri_flux(const std::vector<double>& taus,
                        const std::vector<double>& UPsi_scri) {
  std::vector<double> y(UPsi_scri.size());
  for (size_t i = 0; i < y.size(); ++i) y[i] = UPsi_scri[i] * UPsi_scri[i];
  return trapezoid(taus, y);
}

struct DecayFit {
  double slope = 0.0;
  double stderr_slope = 0.0;
  int samples = 0;
};

/// Least-squares slope of log|value| vs log tau over [t1, t2].
inline DecayFit fit_decay_rate(const std::vector<double>& taus,
                               const std::vector<double>& values, double t1,
                               double t2) {
  std::vector<double> x, y;
  for (size_t i = 0; i < taus.size(); ++i) {
    if (taus[i] < t1 || taus[i] > t2) continue;
    if (!(values[i] > 0.0)) {
      std::ostringstream os;
      os << "fit_decay_rate: nonpositive value at tau = " << taus[i];
      throw VerificationError(os.str());
    }
    x.push_back(std::log(taus[i]));
    y.push_back(std::log(values[i]));
  }
  if (x.size() < 10) throw VerificationError("fit_decay_rate: fewer than 10 samples in window");
  const LineFit f = fit_line(x, y);
  return {f.slope, f.stderr_slope, static_cast<int>(x.size())};
}

}  // namespace tailwave
