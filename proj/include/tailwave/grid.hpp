#pragma once

// Compactified radial grid: per-node foliation/compactification coefficient
// caches, finite-difference stencils, parity ghosts at the origin, and the
// least-squares extrapolation operator onto the scri node sigma = 1.

#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

#include <Eigen/Dense>

#include "tailwave/foliation.hpp"
#include "tailwave/util.hpp"

namespace tailwave {

/// One hyperboloidal slice of the radiation field on the sigma grid.
struct GridState {
  double tau = 0.0;
  std::vector<double> Psi;  // radiation field, Psi[0] = 0 (origin regularity)
  std::vector<double> Pi;   // d_tau Psi
};

class Grid {
public:
  Grid(int N, double scale, const HeightFunction& h)
      : N_(N), h_(h), map_(scale), dsig_(1.0 / N) {
    if (N < 64) throw std::invalid_argument("Grid: N >= 64 required");
    const int M = N + 1;
    sigma.resize(M);
    rho.resize(M);
    mu.resize(M);
    nu.resize(M);
    hp.resize(M);
    hpp.resize(M);
    sigp.resize(M);
    sigpp.resize(M);
    invW.resize(M);
    drho.resize(M);
    cA.resize(M);
    cB.resize(M);
    cC.resize(M);
    cD.resize(M);

    for (int j = 0; j < M; ++j) {
      sigma[j] = static_cast<double>(j) / N;
      if (j == N) {
        rho[j] = std::numeric_limits<double>::infinity();
        hp[j] = 1.0;
        hpp[j] = 0.0;
        mu[j] = 2.0;
        nu[j] = 0.0;
        sigp[j] = 0.0;
        sigpp[j] = 0.0;
        invW[j] = 0.0;  // divergent; never used at the scri node
        drho[j] = 0.0;
        continue;
      }
      rho[j] = map_.rho(sigma[j]);
      hp[j] = h.hp(rho[j]);
      hpp[j] = h.hpp(rho[j]);
      mu[j] = 1.0 + hp[j];
      nu[j] = 1.0 - hp[j];
      sigp[j] = map_.dsigma_drho(rho[j]);
      sigpp[j] = map_.d2sigma_drho2(rho[j]);
      invW[j] = 1.0 / (mu[j] * nu[j]);
      drho[j] = map_.drho_dsigma(sigma[j]);
      cA[j] = sigp[j] * sigp[j] * invW[j];
      cB[j] = sigpp[j] * invW[j];
      cC[j] = -2.0 * hp[j] * sigp[j] * invW[j];
      cD[j] = -hpp[j] * invW[j];
    }

    buildScriWeights();
    cA[N_] = scriExtrapolate(cA);
    cB[N_] = scriExtrapolate(cB);
    cC[N_] = scriExtrapolate(cC);
    cD[N_] = scriExtrapolate(cD);

    buildGhostWeights();
    buildEdgeStencils();

    // sigma-frame characteristic speeds sigma'/nu (outgoing) and sigma'/mu
    // (ingoing); both ratios have finite scri limits, captured by the
    // extrapolation.
    std::vector<double> sOut(M, 0.0), sIn(M, 0.0);
    for (int j = 0; j < N; ++j) {
      sOut[j] = sigp[j] / nu[j];
      sIn[j] = sigp[j] / mu[j];
    }
    sOut[N] = scriExtrapolate(sOut);
    sIn[N] = scriExtrapolate(sIn);
    vmax_ = 0.0;
    for (int j = 0; j < M; ++j) vmax_ = std::max(vmax_, std::max(sOut[j], sIn[j]));
  }

  int N() const { return N_; }
  double dsigma() const { return dsig_; }
  double scale() const { return map_.scale(); }
  const HeightFunction& height() const { return h_; }
  const CompactMap& cmap() const { return map_; }
  double vmax() const { return vmax_; }

  /// Degree-2 least-squares extrapolation in (1 - sigma) over the outermost
  /// 8 interior nodes, evaluated at scri.
  double scriExtrapolate(const std::vector<double>& f) const {
    double s = 0.0;
    for (int k = 0; k < 8; ++k) s += wScri_[k] * f[N_ - 8 + k];
    return s;
  }

  /// Parity ghost value at sigma = -1/N for a field odd in rho (Psi, Pi):
  /// the reflected radius lands at sigma = 1/(N+2), interpolated from the
  /// innermost five nodes.
  double ghost(const std::vector<double>& f) const {
    double s = 0.0;
    for (int k = 0; k < 5; ++k) s += wGhost_[k] * f[k];
    return -s;
  }

  /// Second parity ghost at sigma = -2/N (reflected radius at sigma = 2/(N+4)).
  double ghost2(const std::vector<double>& f) const {
    double s = 0.0;
    for (int k = 0; k < 5; ++k) s += wGhost2_[k] * f[k];
    return -s;
  }

  // Centered 4th-order first/second derivatives in sigma (interior nodes).
  double d1(const std::vector<double>& f, int j) const {
    return (f[j - 2] - 8.0 * f[j - 1] + 8.0 * f[j + 1] - f[j + 2]) / (12.0 * dsig_);
  }
  double d2(const std::vector<double>& f, int j) const {
    return (-f[j - 2] + 16.0 * f[j - 1] - 30.0 * f[j] + 16.0 * f[j + 1] - f[j + 2]) /
           (12.0 * dsig_ * dsig_);
  }
  // Same at j = 1 using the parity ghost value g = f(-dsigma).
  double d1g(const std::vector<double>& f, double g) const {
    return (g - 8.0 * f[0] + 8.0 * f[2] - f[3]) / (12.0 * dsig_);
  }
  double d2g(const std::vector<double>& f, double g) const {
    return (-g + 16.0 * f[0] - 30.0 * f[1] + 16.0 * f[2] - f[3]) /
           (12.0 * dsig_ * dsig_);
  }
  // Biased 4th-order stencils at j = N-1 (offsets -3..+1).
  double d1edge(const std::vector<double>& f) const {
    double s = 0.0;
    for (int k = 0; k < 5; ++k) s += e1_[k] * f[N_ - 4 + k];
    return s;
  }
  double d2edge(const std::vector<double>& f) const {
    double s = 0.0;
    for (int k = 0; k < 5; ++k) s += e2_[k] * f[N_ - 4 + k];
    return s;
  }
  /// One-sided first derivative at the origin node (offsets 0..4); gives
  /// psi(tau, 0) = d_rho Psi|_0 = sigma'(0) * dsigma Psi|_0.
  double d1origin(const std::vector<double>& f) const {
    double s = 0.0;
    for (int k = 0; k < 5; ++k) s += o1_[k] * f[k];
    return s;
  }

  /// 5-point Lagrange interpolation weights at radius rho_p.
  struct ProbeWeights {
    int start;
    std::array<double, 5> w;
  };
  ProbeWeights probeWeights(double rho_p) const {
    if (!(rho_p >= 0.0)) throw std::invalid_argument("probe radius must be >= 0");
    const double sp = map_.sigma(rho_p);
    int start = static_cast<int>(std::floor(sp * N_)) - 2;
    start = std::max(0, std::min(start, N_ - 5));
    std::vector<double> xs(5);
    for (int k = 0; k < 5; ++k) xs[k] = sigma[start + k];
    const auto w = fdweights(sp, xs, 0);
    ProbeWeights pw;
    pw.start = start;
    for (int k = 0; k < 5; ++k) pw.w[k] = w[k];
    return pw;
  }
  static double applyProbe(const ProbeWeights& pw, const std::vector<double>& f) {
    double s = 0.0;
    for (int k = 0; k < 5; ++k) s += pw.w[k] * f[pw.start + k];
    return s;
  }

  // Per-node caches (index 0..N).
  std::vector<double> sigma, rho, mu, nu, hp, hpp, sigp, sigpp, invW, drho;
  std::vector<double> cA, cB, cC, cD;  // compactified evolution coefficients

private:
  void buildScriWeights() {
    Eigen::MatrixXd X(8, 3);
    for (int k = 0; k < 8; ++k) {
      const double x = 1.0 - sigma[N_ - 8 + k];
      X(k, 0) = 1.0;
      X(k, 1) = x;
      X(k, 2) = x * x;
    }
    const Eigen::MatrixXd G = (X.transpose() * X).inverse() * X.transpose();
    for (int k = 0; k < 8; ++k) wScri_[k] = G(0, k);
  }
  void buildGhostWeights() {
    // sigma(-1/N) maps to rho = -S/(N+1); the reflected radius S/(N+1)
    // sits at sigma* = 1/(N+2) independently of S.
    const double sstar = 1.0 / (N_ + 2.0);
    std::vector<double> xs(5);
    for (int k = 0; k < 5; ++k) xs[k] = sigma[k];
    const auto w = fdweights(sstar, xs, 0);
    for (int k = 0; k < 5; ++k) wGhost_[k] = w[k];
    // sigma(-2/N) maps to rho = -2S/(N+2); reflecting gives sigma = 2/(N+4).
    const auto w2 = fdweights(2.0 / (N_ + 4.0), xs, 0);
    for (int k = 0; k < 5; ++k) wGhost2_[k] = w2[k];
  }
  void buildEdgeStencils() {
    std::vector<double> xs(5);
    for (int k = 0; k < 5; ++k) xs[k] = sigma[N_ - 4 + k];
    const auto w1 = fdweights(sigma[N_ - 1], xs, 1);
    const auto w2 = fdweights(sigma[N_ - 1], xs, 2);
    std::vector<double> x0(5);
    for (int k = 0; k < 5; ++k) x0[k] = sigma[k];
    const auto o1 = fdweights(0.0, x0, 1);
    for (int k = 0; k < 5; ++k) {
      e1_[k] = w1[k];
      e2_[k] = w2[k];
      o1_[k] = o1[k];
    }
  }

  int N_;
  HeightFunction h_;
  CompactMap map_;
  double dsig_;
  double vmax_ = 0.0;
  std::array<double, 8> wScri_{};
  std::array<double, 5> wGhost_{}, wGhost2_{}, e1_{}, e2_{}, o1_{};
};

}  // namespace tailwave
