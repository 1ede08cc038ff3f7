#pragma once

// Small numerics toolbox shared across modules: finite-difference weight
// generation, polynomial interpolation, least-squares line fits, quadrature
// helpers, smooth bump profiles, and a stable config hash.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace tailwave {

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct NumericalError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct VerificationError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Fornberg's algorithm: weights of the m-th derivative at z for arbitrary
/// nodes x[0..n-1], exact for polynomials of degree n-1.  m = 0 gives
/// Lagrange interpolation weights.
inline std::vector<double> fdweights(double z, const std::vector<double>& x, int m) {
  const int n = static_cast<int>(x.size());
  if (n < m + 1) throw std::invalid_argument("fdweights: too few nodes");
  std::vector<std::vector<double>> c(n, std::vector<double>(m + 1, 0.0));
  double c1 = 1.0, c4 = x[0] - z;
  c[0][0] = 1.0;
  for (int i = 1; i < n; ++i) {
    const int mn = std::min(i, m);
    double c2 = 1.0;
    const double c5 = c4;
    c4 = x[i] - z;
    for (int j = 0; j < i; ++j) {
      const double c3 = x[i] - x[j];
      c2 *= c3;
      if (j == i - 1) {
        for (int k = mn; k >= 1; --k)
          c[i][k] = c1 * (k * c[i - 1][k - 1] - c5 * c[i - 1][k]) / c2;
        c[i][0] = -c1 * c5 * c[i - 1][0] / c2;
      }
      for (int k = mn; k >= 1; --k)
        c[j][k] = (c4 * c[j][k] - k * c[j][k - 1]) / c3;
      c[j][0] = c4 * c[j][0] / c3;
    }
    c1 = c2;
  }
  std::vector<double> w(n);
  for (int i = 0; i < n; ++i) w[i] = c[i][m];
  return w;
}

struct LineFit {
  double slope = 0.0, intercept = 0.0, stderr_slope = 0.0;
};

/// Ordinary least squares y = a + b x.
inline LineFit fit_line(const std::vector<double>& x, const std::vector<double>& y) {
  const size_t n = x.size();
  if (n < 2 || y.size() != n) throw std::invalid_argument("fit_line: need >= 2 samples");
  double sx = 0, sy = 0;
  for (size_t i = 0; i < n; ++i) {
    sx += x[i];
    sy += y[i];
  }
  const double mx = sx / n, my = sy / n;
  double sxx = 0, sxy = 0;
  for (size_t i = 0; i < n; ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  if (sxx == 0.0) throw std::invalid_argument("fit_line: degenerate abscissae");
  LineFit f;
  f.slope = sxy / sxx;
  f.intercept = my - f.slope * mx;
  if (n > 2) {
    double ss = 0;
    for (size_t i = 0; i < n; ++i) {
      const double r = y[i] - (f.intercept + f.slope * x[i]);
      ss += r * r;
    }
    f.stderr_slope = std::sqrt(ss / ((n - 2) * sxx));
  }
  return f;
}

/// Least squares y = a + b * g(x) for a fixed basis function g (two-parameter).
inline std::pair<double, double> fit_affine_in(const std::vector<double>& g,
                                               const std::vector<double>& y) {
  LineFit f = fit_line(g, y);
  return {f.intercept, f.slope};  // a = value at g = 0, b = coefficient
}

inline double trapezoid(const std::vector<double>& x, const std::vector<double>& y) {
  double s = 0.0;
  for (size_t i = 0; i + 1 < x.size(); ++i)
    s += 0.5 * (y[i] + y[i + 1]) * (x[i + 1] - x[i]);
  return s;
}

/// C^inf bump, support (-1,1), normalized to 1 at the center.
inline double bump(double x) {
  if (std::abs(x) >= 1.0) return 0.0;
  return std::exp(1.0 - 1.0 / (1.0 - x * x));
}
inline double bump_d1(double x) {
  if (std::abs(x) >= 1.0) return 0.0;
  const double q = 1.0 - x * x;
  return bump(x) * (-2.0 * x / (q * q));
}
inline double bump_d2(double x) {
  if (std::abs(x) >= 1.0) return 0.0;
  const double q = 1.0 - x * x;
  const double a = -2.0 * x / (q * q);
  const double ap = (-2.0 * q - 8.0 * x * x) / (q * q * q);
  return bump(x) * (a * a + ap);
}

/// C^1 smoothstep: 0 for x <= 0, 1 for x >= 1.
inline double smoothstep(double x) {
  if (x <= 0.0) return 0.0;
  if (x >= 1.0) return 1.0;
  return x * x * (3.0 - 2.0 * x);
}

/// 5-point Gauss-Legendre on [a,b].
template <class F>
double gauss5(F&& f, double a, double b) {
  static const double xs[5] = {-0.9061798459386640, -0.5384693101056831, 0.0,
                               0.5384693101056831, 0.9061798459386640};
  static const double ws[5] = {0.2369268850561891, 0.4786286704993665,
                               0.5688888888888889, 0.4786286704993665,
                               0.2369268850561891};
  const double c = 0.5 * (a + b), h = 0.5 * (b - a);
  double s = 0.0;
  for (int i = 0; i < 5; ++i) s += ws[i] * f(c + h * xs[i]);
  return s * h;
}

/// Gauss-Legendre with n nodes (n arbitrary; nodes by Newton on Legendre P_n).
inline void gauss_nodes(int n, std::vector<double>& x, std::vector<double>& w) {
  x.resize(n);
  w.resize(n);
  for (int i = 0; i < n; ++i) {
    double t = std::cos(M_PI * (i + 0.75) / (n + 0.5));
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = t;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2 * k - 1) * t * p1 - (k - 1) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      const double dp = n * (t * p1 - p0) / (t * t - 1.0);
      const double dt = p1 / dp;
      t -= dt;
      if (std::abs(dt) < 1e-15) break;
    }
    double p0 = 1.0, p1 = t;
    for (int k = 2; k <= n; ++k) {
      const double p2 = ((2 * k - 1) * t * p1 - (k - 1) * p0) / k;
      p0 = p1;
      p1 = p2;
    }
    const double dp = n * (t * p1 - p0) / (t * t - 1.0);
    x[i] = t;
    w[i] = 2.0 / ((1.0 - t * t) * dp * dp);
  }
}

template <class F>
double gaussN(F&& f, double a, double b, int n) {
  std::vector<double> x, w;
  gauss_nodes(n, x, w);
  const double c = 0.5 * (a + b), h = 0.5 * (b - a);
  double s = 0.0;
  for (int i = 0; i < n; ++i) s += w[i] * f(c + h * x[i]);
  return s * h;
}

/// FNV-1a 64-bit over a byte string.
inline std::uint64_t fnv1a(const std::string& s) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

inline double median(std::vector<double> v) {
  if (v.empty()) throw std::invalid_argument("median: empty");
  std::sort(v.begin(), v.end());
  const size_t n = v.size();
  return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

}  // namespace tailwave
