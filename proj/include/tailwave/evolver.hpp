#pragma once

// Method-of-lines core for the radiation-field equation on compactified
// hyperboloidal slices:
//
//   (mu nu + a_qz) d_tau Pi = Psi_rhorho - 2 h' Pi_rho - h'' Pi - r P_0
//
// where a_qz collects the quasilinear d_tau^2 contributions and r P_0 is the
// nonlinearity evaluated with the d_tau Pi-free parts of the frame second
// derivatives.  Dividing by mu nu = 1 - h'^2 gives coefficients with finite
// scri limits; the scri node itself carries no equation and is filled by
// least-squares extrapolation (both characteristics leave the domain there).

#include <cmath>
#include <sstream>
#include <string>
#include <vector>

#include "tailwave/grid.hpp"
#include "tailwave/nullform.hpp"
#include "tailwave/util.hpp"

namespace tailwave {

struct EvolverParams {
  double dissipation = 0.02;    // Kreiss-Oliger strength (0 disables)
  double r_min = 1e-8;          // source floor radius
  double hyp_min = 0.1;         // abort when 1 + a_qz/(1-h'^2) drops below this
};

class Evolver {
public:
  Evolver(const Grid& g, const RadialNullForm& form, EvolverParams p = {})
      : g_(g), p_(p) {
    cUUV_ = form.cd(RadialNullForm::U, RadialNullForm::UV);
    cUVV_ = form.cd(RadialNullForm::U, RadialNullForm::VV);
    cVUU_ = form.cd(RadialNullForm::V, RadialNullForm::UU);
    cVUV_ = form.cd(RadialNullForm::V, RadialNullForm::UV);
    trU_ = form.trd(0);
    trV_ = form.trd(1);
    semi_ = form.semid();
    zero_ = form.isZero();
    quasi_ = form.quasilinear();
  }

  const Grid& grid() const { return g_; }
  const EvolverParams& params() const { return p_; }

  double dtau(double cfl) const { return cfl * g_.dsigma() / g_.vmax(); }

  /// r * P at psi level from Psi-level frame derivatives (chain rule psi = Psi/r).
  double sourceRP(double UPsi, double VPsi, double UVPsi, double UUPsi, double VVPsi,
                  double Psi, double r) const {
    if (r < p_.r_min) return 0.0;
    const double ir = 1.0 / r, ir2 = ir * ir, ir3 = ir2 * ir;
    const double u1 = UPsi * ir + Psi * ir2;
    const double v1 = VPsi * ir - Psi * ir2;
    const double uu = UUPsi * ir + 2.0 * UPsi * ir2 + 2.0 * Psi * ir3;
    const double vv = VVPsi * ir - 2.0 * VPsi * ir2 + 2.0 * Psi * ir3;
    const double uv = UVPsi * ir + (VPsi - UPsi) * ir2 - 2.0 * Psi * ir3;
    const double q = (0.5 * (VPsi - UPsi) * ir - Psi * ir2) * ir;
    double P = u1 * (cUUV_ * uv + cUVV_ * vv) + v1 * (cVUU_ * uu + cVUV_ * uv);
    P += (trU_ * u1 + trV_ * v1) * q + semi_ * u1 * v1;
    return r * P;
  }

  /// Coefficient of d_tau Pi in r * P (quasilinear principal-part weight).
  double principal(double UPsi, double VPsi, double Psi, double r, double mu,
                   double nu) const {
    if (!quasi_ || r < p_.r_min) return 0.0;
    const double ir = 1.0 / r, ir2 = ir * ir;
    const double u1 = UPsi * ir + Psi * ir2;
    const double v1 = VPsi * ir - Psi * ir2;
    const double kUU = mu * mu, kUV = mu * nu, kVV = nu * nu;
    return u1 * (cUUV_ * kUV + cUVV_ * kVV) + v1 * (cVUU_ * kUU + cVUV_ * kUV);
  }

  /// Semi-discrete right-hand side: dPsi = Pi, dPi per the quasilinear relation.
  void rhs(const GridState& s, std::vector<double>& dPsi, std::vector<double>& dPi) const {
    const int N = g_.N();
    dPsi.resize(N + 1);
    dPi.resize(N + 1);
    const double gPsi = g_.ghost(s.Psi);
    const double gPi = g_.ghost(s.Pi);

    dPsi[0] = 0.0;
    dPi[0] = 0.0;
    for (int j = 1; j <= N; ++j) dPsi[j] = s.Pi[j];

    for (int j = 1; j < N; ++j) {
      double Ps, Pss, Pis;
      if (j == 1) {
        Ps = g_.d1g(s.Psi, gPsi);
        Pss = g_.d2g(s.Psi, gPsi);
        Pis = g_.d1g(s.Pi, gPi);
      } else if (j == N - 1) {
        Ps = g_.d1edge(s.Psi);
        Pss = g_.d2edge(s.Psi);
        Pis = g_.d1edge(s.Pi);
      } else {
        Ps = g_.d1(s.Psi, j);
        Pss = g_.d2(s.Psi, j);
        Pis = g_.d1(s.Pi, j);
      }
      const double lin = g_.cA[j] * Pss + g_.cB[j] * Ps + g_.cC[j] * Pis +
                         g_.cD[j] * s.Pi[j];
      if (zero_) {
        dPi[j] = lin;
        continue;
      }
      const double sp = g_.sigp[j], mu = g_.mu[j], nu = g_.nu[j];
      const double UPsi = mu * s.Pi[j] - sp * Ps;
      const double VPsi = nu * s.Pi[j] + sp * Ps;
      const double Pirho = sp * Pis;
      const double Psirr = sp * sp * Pss + g_.sigpp[j] * Ps;
      const double hpp = g_.hpp[j];
      const double UU0 = -2.0 * mu * Pirho - hpp * s.Pi[j] + Psirr;
      const double VV0 = 2.0 * nu * Pirho - hpp * s.Pi[j] + Psirr;
      const double UV0 = 2.0 * g_.hp[j] * Pirho + hpp * s.Pi[j] - Psirr;
      const double rP0 =
          sourceRP(UPsi, VPsi, UV0, UU0, VV0, s.Psi[j], g_.rho[j]);
      double denom = 1.0;
      if (quasi_) {
        const double aqz = principal(UPsi, VPsi, s.Psi[j], g_.rho[j], mu, nu);
        denom = 1.0 + g_.invW[j] * aqz;
        if (denom < p_.hyp_min) {
          std::ostringstream os;
          os << "hyperbolicity loss at node " << j << " (rho = " << g_.rho[j]
             << ", tau = " << s.tau << "): 1 + q = " << denom;
          throw NumericalError(os.str());
        }
      }
      dPi[j] = (lin - g_.invW[j] * rP0) / denom;
    }
    dPi[N] = g_.scriExtrapolate(dPi);

    if (p_.dissipation > 0.0) {
      // 6th-order Kreiss-Oliger: O(dsigma^5), below the scheme's truncation.
      const double eps = p_.dissipation / (64.0 * g_.dsigma());
      const double g2Psi = g_.ghost2(s.Psi);
      const double g2Pi = g_.ghost2(s.Pi);
      auto d6 = [](const std::vector<double>& f, double g1, double g2, int j) {
        const double fm3 = (j == 1) ? g2 : (j == 2) ? g1 : f[j - 3];
        const double fm2 = (j == 1) ? g1 : f[j - 2];
        return fm3 - 6.0 * fm2 + 15.0 * f[j - 1] - 20.0 * f[j] +
               15.0 * f[j + 1] - 6.0 * f[j + 2] + f[j + 3];
      };
      for (int j = 1; j <= N - 3; ++j) {
        dPsi[j] += eps * d6(s.Psi, gPsi, g2Psi, j);
        dPi[j] += eps * d6(s.Pi, gPi, g2Pi, j);
      }
      // reduced-order damping on the two outermost interior nodes; the
      // degenerate source ratios near scri inject grid noise exactly where
      // the 7-point operator cannot reach
      const double e4 = p_.dissipation / (16.0 * g_.dsigma());
      const double e2 = p_.dissipation / (4.0 * g_.dsigma());
      auto d4 = [](const std::vector<double>& f, int j) {
        return f[j - 2] - 4.0 * f[j - 1] + 6.0 * f[j] - 4.0 * f[j + 1] + f[j + 2];
      };
      auto d2 = [](const std::vector<double>& f, int j) {
        return f[j - 1] - 2.0 * f[j] + f[j + 1];
      };
      dPsi[N - 2] -= e4 * d4(s.Psi, N - 2);
      dPi[N - 2] -= e4 * d4(s.Pi, N - 2);
      dPsi[N - 1] += e2 * d2(s.Psi, N - 1);
      dPi[N - 1] += e2 * d2(s.Pi, N - 1);
    }
  }

  /// Classical RK4 step; reapplies the origin pin afterwards.
  void step(GridState& s, double dt) const {
    const int N = g_.N();
    k1p_.resize(N + 1);
    scratch(N + 1);
    rhs(s, k1s_, k1p_);
    stage(s, tmp_, k1s_, k1p_, 0.5 * dt);
    rhs(tmp_, k2s_, k2p_);
    stage(s, tmp_, k2s_, k2p_, 0.5 * dt);
    rhs(tmp_, k3s_, k3p_);
    stage(s, tmp_, k3s_, k3p_, dt);
    rhs(tmp_, k4s_, k4p_);
    const double c = dt / 6.0;
    for (int j = 0; j <= N; ++j) {
      s.Psi[j] += c * (k1s_[j] + 2.0 * (k2s_[j] + k3s_[j]) + k4s_[j]);
      s.Pi[j] += c * (k1p_[j] + 2.0 * (k2p_[j] + k3p_[j]) + k4p_[j]);
    }
    s.tau += dt;
    s.Psi[0] = 0.0;
    s.Pi[0] = 0.0;
  }

  /// -r^2 (r P) with the full (on-shell) second derivatives, i.e. the scri
  /// source density r^3 (-Box psi), at node j.  Needs dPi from rhs().
  double r3Source(const GridState& s, const std::vector<double>& dPi, int j) const {
    if (zero_) return 0.0;
    double Ps, Pss, Pis;
    if (j == 1) {
      Ps = g_.d1g(s.Psi, g_.ghost(s.Psi));
      Pss = g_.d2g(s.Psi, g_.ghost(s.Psi));
      Pis = g_.d1g(s.Pi, g_.ghost(s.Pi));
    } else if (j == N_edge()) {
      Ps = g_.d1edge(s.Psi);
      Pss = g_.d2edge(s.Psi);
      Pis = g_.d1edge(s.Pi);
    } else {
      Ps = g_.d1(s.Psi, j);
      Pss = g_.d2(s.Psi, j);
      Pis = g_.d1(s.Pi, j);
    }
    const double sp = g_.sigp[j], mu = g_.mu[j], nu = g_.nu[j];
    const double UPsi = mu * s.Pi[j] - sp * Ps;
    const double VPsi = nu * s.Pi[j] + sp * Ps;
    const double Pirho = sp * Pis;
    const double Psirr = sp * sp * Pss + g_.sigpp[j] * Ps;
    const double hpp = g_.hpp[j];
    const double dpi = dPi[j];
    const double UU = mu * mu * dpi - 2.0 * mu * Pirho - hpp * s.Pi[j] + Psirr;
    const double VV = nu * nu * dpi + 2.0 * nu * Pirho - hpp * s.Pi[j] + Psirr;
    const double UV = mu * nu * dpi + 2.0 * g_.hp[j] * Pirho + hpp * s.Pi[j] - Psirr;
    const double rP = sourceRP(UPsi, VPsi, UV, UU, VV, s.Psi[j], g_.rho[j]);
    return -g_.rho[j] * g_.rho[j] * rP;
  }

  /// U Psi and V Psi arrays on interior nodes (scri value extrapolated).
  void frameDerivs(const GridState& s, std::vector<double>& UPsi,
                   std::vector<double>& VPsi) const {
    const int N = g_.N();
    UPsi.assign(N + 1, 0.0);
    VPsi.assign(N + 1, 0.0);
    const double gPsi = g_.ghost(s.Psi);
    for (int j = 0; j < N; ++j) {
      double Ps;
      if (j == 0)
        Ps = g_.d1origin(s.Psi);
      else if (j == 1)
        Ps = g_.d1g(s.Psi, gPsi);
      else if (j == N - 1)
        Ps = g_.d1edge(s.Psi);
      else
        Ps = g_.d1(s.Psi, j);
      UPsi[j] = g_.mu[j] * s.Pi[j] - g_.sigp[j] * Ps;
      VPsi[j] = g_.nu[j] * s.Pi[j] + g_.sigp[j] * Ps;
    }
    UPsi[N] = g_.scriExtrapolate(UPsi);
    VPsi[N] = g_.scriExtrapolate(VPsi);
  }

private:
  int N_edge() const { return g_.N() - 1; }
  void scratch(int M) const {
    for (auto* v : {&k1s_, &k2s_, &k3s_, &k4s_, &k2p_, &k3p_, &k4p_}) v->resize(M);
    tmp_.Psi.resize(M);
    tmp_.Pi.resize(M);
  }
  static void stage(const GridState& s, GridState& out, const std::vector<double>& ds,
                    const std::vector<double>& dp, double a) {
    out.tau = s.tau + a;
    const size_t M = s.Psi.size();
    for (size_t j = 0; j < M; ++j) {
      out.Psi[j] = s.Psi[j] + a * ds[j];
      out.Pi[j] = s.Pi[j] + a * dp[j];
    }
  }

  const Grid& g_;
  EvolverParams p_;
  double cUUV_, cUVV_, cVUU_, cVUV_, trU_, trV_, semi_;
  bool zero_, quasi_;
  mutable std::vector<double> k1s_, k1p_, k2s_, k2p_, k3s_, k3p_, k4s_, k4p_;
  mutable GridState tmp_;
};

}  // namespace tailwave
