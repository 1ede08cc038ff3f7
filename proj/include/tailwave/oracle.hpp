#pragma once

// Independent ground-truth generators: the exact free radial wave, a retarded
// (Kirchhoff/Duhamel) quadrature solver for inhomogeneous waves, the
// semilinear transformation chain, and Richardson convergence estimation.
// Nothing here shares code with the evolver's discretization.

#include <cmath>
#include <functional>
#include <stdexcept>
#include <vector>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "tailwave/util.hpp"

namespace tailwave {

/// Compactly supported profile a (1 - y^2)^8 with y = (x - center)/halfwidth.
/// Polynomial inside the support and C^7 at the edges, so its first several
/// derivatives stay moderate; an exponential bump's high derivatives blow up
/// near the support edge and wreck finite-difference convergence studies.
class ProfileFunction {
public:
  ProfileFunction(double center, double halfwidth, double amplitude = 1.0)
      : c_(center), w_(halfwidth), a_(amplitude) {
    if (!(halfwidth > 0.0)) throw std::invalid_argument("ProfileFunction: halfwidth > 0");
  }
  double operator()(double x) const {
    const double y = (x - c_) / w_;
    if (std::abs(y) >= 1.0) return 0.0;
    const double q = 1.0 - y * y;
    return a_ * pow8(q);
  }
  double d1(double x) const {
    const double y = (x - c_) / w_;
    if (std::abs(y) >= 1.0) return 0.0;
    const double q = 1.0 - y * y;
    return a_ / w_ * (-16.0 * y * pow8(q) / q);
  }
  double d2(double x) const {
    const double y = (x - c_) / w_;
    if (std::abs(y) >= 1.0) return 0.0;
    const double q = 1.0 - y * y;
    const double q6 = pow8(q) / (q * q);
    return a_ / (w_ * w_) * (-16.0 * q * q6 + 224.0 * y * y * q6);
  }
  double supportLo() const { return c_ - w_; }
  double supportHi() const { return c_ + w_; }
  double amplitude() const { return a_; }

private:
  static double pow8(double q) {
    const double q2 = q * q, q4 = q2 * q2;
    return q4 * q4;
  }
  double c_, w_, a_;
};

/// Exact free radial wave psi = (f(t-r) - f(t+r))/r, regular at the origin
/// (Taylor limit psi(t,0) = -2 f'(t)).  Radiation field Psi = f(u) - f(v).
class ExactLinearRadial {
public:
  explicit ExactLinearRadial(ProfileFunction f) : f_(std::move(f)) {}

  double psi(double t, double r) const {
    // below 1e-5 the closed form loses ~5 digits to cancellation; the Taylor
    // form with the r^2 correction is accurate to O(r^4) there
    if (r < 1e-5) {
      // psi = -2f'(t) - (r^2/3) f'''(t) + O(r^4); quadratic term negligible here
      return -2.0 * f_.d1(t) - r * r / 3.0 * third(t);
    }
    return (f_(t - r) - f_(t + r)) / r;
  }
  double Psi(double t, double r) const { return f_(t - r) - f_(t + r); }
  /// d/dt of Psi at fixed r.
  double dtPsi(double t, double r) const { return f_.d1(t - r) - f_.d1(t + r); }
  double UPsi(double t, double r) const { return 2.0 * f_.d1(t - r); }
  double VPsi(double t, double r) const { return -2.0 * f_.d1(t + r); }
  double UUPsi(double t, double r) const { return 4.0 * f_.d2(t - r); }
  double VVPsi(double t, double r) const { return -4.0 * f_.d2(t + r); }
  // UV Psi = 0 identically: the closed form is annihilated by UV.

  const ProfileFunction& profile() const { return f_; }

private:
  double third(double t) const {  // f''' by central difference of f'' (only used at r ~ 0)
    const double h = 1e-4;
    return (f_.d2(t + h) - f_.d2(t - h)) / (2.0 * h);
  }
  ProfileFunction f_;
};

/// Retarded solution of (d_t^2 - Delta) psi = f for radially symmetric
/// f(t, rho), vanishing past: psi(t,x) = (1/4pi) int f(t-|x-y|, y)/|x-y| dy.
/// Radial collapse:
///   r = 0:  psi = int_0^inf rho f(t - rho, rho) d rho
///   r > 0:  psi = (1/2r) int_0^inf rho d rho int_{|r-rho|}^{r+rho} f(t-l, rho) dl.
/// Adaptive Gauss-Kronrod in both layers; the outer integral splits at the
/// |r - rho| kink.
class KirchhoffEvaluator {
public:
  using Source = std::function<double(double t, double r)>;

  KirchhoffEvaluator(Source f, double rho_max, double tol = 1e-8)
      : f_(std::move(f)), rho_max_(rho_max), tol_(tol) {}

  /// Value and the quadrature error estimate.
  std::pair<double, double> evaluate(double t, double r) const {
    using GK = boost::math::quadrature::gauss_kronrod<double, 15>;
    if (r < 1e-12) {
      const double b = std::min(rho_max_, t);
      if (b <= 0.0) return {0.0, 0.0};
      double err = 0.0;
      const double v = GK::integrate(
          [&](double rho) { return rho * f_(t - rho, rho); }, 0.0, b, 15, tol_, &err);
      check(v, err);
      return {v, err};
    }
    auto outer = [&](double rho) {
      const double l0 = std::abs(r - rho), l1 = r + rho;
      double ierr = 0.0;
      const double inner = GK::integrate([&](double l) { return f_(t - l, rho); },
                                         l0, l1, 15, 0.1 * tol_, &ierr);
      return rho * inner;
    };
    const double mid = std::min(r, rho_max_);
    double e1 = 0.0, e2 = 0.0;
    double s = GK::integrate(outer, 0.0, mid, 15, tol_, &e1);
    if (mid < rho_max_) s += GK::integrate(outer, mid, rho_max_, 15, tol_, &e2);
    const double v = s / (2.0 * r), err = (e1 + e2) / (2.0 * r);
    check(v, err);
    return {v, err};
  }

private:
  void check(double v, double err) const {
    if (err > 100.0 * tol_ * std::max(1.0, std::abs(v)))
      throw std::runtime_error("kirchhoff_eval: quadrature did not converge to tol");
  }

  Source f_;
  double rho_max_;
  double tol_;
};

/// psi_(n) = sum_{j=1}^{n+1} (-1)^{j-1} psi^j / j!   (n <= 3).
/// n=1: psi - psi^2/2.  Applied pointwise to stored series or snapshots.
inline double semilinear_transform_value(double psi, int n) {
  if (n < 1 || n > 3) throw std::invalid_argument("semilinear_transform: n in [1,3]");
  double sum = 0.0, term = 1.0;  // term = psi^j / j!
  for (int j = 1; j <= n + 1; ++j) {
    term *= psi / j;
    sum += (j % 2 ? term : -term);
  }
  return sum;
}

inline std::vector<double> semilinear_transform(const std::vector<double>& psi, int n) {
  std::vector<double> out(psi.size());
  for (size_t i = 0; i < psi.size(); ++i) out[i] = semilinear_transform_value(psi[i], n);
  return out;
}

struct RichardsonResult {
  double order;
  double extrapolated;
};

/// Convergence order from values at resolutions N, 2N, 4N:
/// order = log2((v_N - v_2N)/(v_2N - v_4N)); limit by geometric extrapolation.
inline RichardsonResult richardson(double vN, double v2N, double v4N) {
  const double d1 = vN - v2N, d2 = v2N - v4N;
  if (d1 == 0.0 || d2 == 0.0 || d1 * d2 < 0.0)
    throw std::runtime_error("richardson: differences not in asymptotic regime");
  const double order = std::log2(d1 / d2);
  const double q = std::pow(2.0, order);
  return {order, v4N + (v4N - v2N) / (q - 1.0)};
}

}  // namespace tailwave
