#pragma once

// Hyperboloidal slicing: the height function h(r), coordinate transforms
// between (t,r), (u,v), (tau,rho), and the compactified grid coordinate.

#include <cmath>
#include <limits>
#include <stdexcept>
#include <utility>
#include <boost/math/quadrature/gauss_kronrod.hpp>

namespace tailwave {

/// Slicing profile tau = t - h(r).  Slices are spacelike (|h'| < 1) and
/// asymptotically null: 1 - h'(r) ~ r^(-1-eta) for large r, eta in (0,1].
class HeightFunction {
public:
  explicit HeightFunction(double eta) : eta_(eta) {
    if (!(eta > 0.0) || eta > 1.0)
      throw std::invalid_argument("HeightFunction: eta must lie in (0,1]");
  }

  double eta() const { return eta_; }

  /// h'(r) = 1 - (1+r^2)^(-(1+eta)/2)
  double hp(double r) const {
    return 1.0 - std::pow(1.0 + r * r, -0.5 * (1.0 + eta_));
  }

  /// h''(r)
  double hpp(double r) const {
    return (1.0 + eta_) * r * std::pow(1.0 + r * r, -0.5 * (3.0 + eta_));
  }

  /// h(r).  Closed form for eta = 1, adaptive quadrature otherwise.
  double h(double r) const {
    if (r == 0.0) return 0.0;
    if (eta_ == 1.0) return r - std::atan(r);
    // h = r - int_0^r <s>^(-1-eta) ds; integrate the decaying part.
    return r - scaleIntegral(0.0, r);
  }

  /// L = lim_{r->inf} (r - h(r)) = int_0^inf <s>^(-1-eta) ds.
  /// Fixes the additive constant between u and tau at scri: u = tau - L.
  double uOffset() const {
    if (eta_ == 1.0) return M_PI / 2.0;
    if (!std::isfinite(u_offset_))
      u_offset_ = scaleIntegral(0.0, 1.0) + tailIntegral();
    return u_offset_;
  }

private:
  double scaleIntegral(double a, double b) const {
    auto f = [this](double s) { return std::pow(1.0 + s * s, -0.5 * (1.0 + eta_)); };
    return boost::math::quadrature::gauss_kronrod<double, 31>::integrate(
        f, a, b, 12, 1e-13);
  }
  // int_1^inf <s>^(-1-eta) ds via substitution s = 1/x.
  double tailIntegral() const {
    auto f = [this](double x) {
      const double s = 1.0 / x;
      return std::pow(1.0 + s * s, -0.5 * (1.0 + eta_)) / (x * x);
    };
    return boost::math::quadrature::gauss_kronrod<double, 31>::integrate(
        f, 1e-300, 1.0, 12, 1e-13);
  }

  double eta_;
  mutable double u_offset_ = std::numeric_limits<double>::quiet_NaN();
};

inline HeightFunction default_height(double eta) { return HeightFunction(eta); }

struct HyperboloidalPoint {
  double tau;
  double rho;
};

inline HyperboloidalPoint to_hyperboloidal(double t, double r, const HeightFunction& h) {
  return {t - h.h(r), r};
}

inline std::pair<double, double> from_hyperboloidal(double tau, double rho,
                                                    const HeightFunction& h) {
  return {tau + h.h(rho), rho};
}

/// Null frame in (tau,rho) coordinates:
///   V = aV d_tau + bV d_rho,   U = aU d_tau + bU d_rho.
struct NullFrameCoeffs {
  double aV, bV, aU, bU;
};

inline NullFrameCoeffs null_frame_coeffs(double rho, const HeightFunction& h) {
  const double hp = h.hp(rho);
  return {1.0 - hp, 1.0, 1.0 + hp, -1.0};
}

/// Radial compactification sigma = rho / (rho + S), sigma in [0,1).
class CompactMap {
public:
  explicit CompactMap(double scale) : s_(scale) {
    if (!(scale > 0.0))
      throw std::invalid_argument("CompactMap: scale must be positive");
  }

  double scale() const { return s_; }

  double sigma(double rho) const { return rho / (rho + s_); }

  double rho(double sigma) const {
    if (sigma >= 1.0) return std::numeric_limits<double>::infinity();
    return s_ * sigma / (1.0 - sigma);
  }

  /// dsigma/drho = S/(rho+S)^2 = (1-sigma)^2/S
  double dsigma_drho(double rho) const {
    const double q = rho + s_;
    return s_ / (q * q);
  }

  /// d^2 sigma / drho^2
  double d2sigma_drho2(double rho) const {
    const double q = rho + s_;
    return -2.0 * s_ / (q * q * q);
  }

  /// drho/dsigma, diverges as sigma -> 1.
  double drho_dsigma(double sigma) const {
    const double om = 1.0 - sigma;
    return s_ / (om * om);
  }

private:
  double s_;
};

}  // namespace tailwave
