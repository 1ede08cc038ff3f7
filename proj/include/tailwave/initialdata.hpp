#pragma once

// Initial data families on the first slice: compactly supported bumps and the
// noncompact tail family whose outgoing derivative carries a prescribed
// asymptotic constant, |v^2 V Psi - c_init| <= D <r>^(-delta_id).

#include <cmath>
#include <string>
#include <vector>

#include "tailwave/grid.hpp"
#include "tailwave/util.hpp"

namespace tailwave {

struct InitialDataSpec {
  enum class Family { CompactBump, NoncompactTail };
  enum class Mode { TimeSymmetric, Outgoing, Ingoing };

  Family family = Family::CompactBump;
  double epsilon = 0.0;      // bump amplitude (also the perturbation size for
                             // the noncompact family)
  double bump_center = 0.3;  // in sigma
  double bump_width = 0.15;  // half-width in sigma
  Mode mode = Mode::TimeSymmetric;
  double c_init = 0.0;       // noncompact: limit of v^2 V Psi on the slice
  double delta_id = 0.5;     // noncompact: remainder exponent
  double tau0 = 0.0;         // slice time (must be > 0 for the noncompact family)
};

namespace detail {

/// Adds eps * B((sigma - c)/w) with the matching Pi for the requested mode.
inline void addBump(const InitialDataSpec& spec, const Grid& g, GridState& st) {
  const double c = spec.bump_center, w = spec.bump_width, eps = spec.epsilon;
  if (eps == 0.0) return;
  if (!(c - w > 0.0) || !(c + w < 1.0))
    throw ConfigError("compact bump support must lie strictly inside sigma in (0,1)");
  for (int j = 1; j < g.N(); ++j) {
    const double x = (g.sigma[j] - c) / w;
    if (std::abs(x) >= 1.0) continue;
    const double B = eps * bump(x);
    const double Bs = eps * bump_d1(x) / w;  // dsigma derivative
    st.Psi[j] += B;
    switch (spec.mode) {
      case InitialDataSpec::Mode::TimeSymmetric:
        break;
      case InitialDataSpec::Mode::Outgoing:  // V Psi = 0
        st.Pi[j] += -g.sigp[j] * Bs / g.nu[j];
        break;
      case InitialDataSpec::Mode::Ingoing:   // U Psi = 0
        st.Pi[j] += g.sigp[j] * Bs / g.mu[j];
        break;
    }
  }
}

}  // namespace detail

/// V Psi profile of the noncompact family at radius rho on the tau0 slice.
inline double noncompact_VPsi(const InitialDataSpec& spec, const HeightFunction& h,
                              double rho) {
  const double v = spec.tau0 + h.h(rho) + rho;
  return spec.c_init / (v * v) * (1.0 - std::pow(1.0 + rho, -spec.delta_id));
}

inline GridState make_initial_data(const InitialDataSpec& spec, const Grid& g) {
  GridState st;
  st.tau = spec.tau0;
  st.Psi.assign(g.N() + 1, 0.0);
  st.Pi.assign(g.N() + 1, 0.0);

  if (spec.family == InitialDataSpec::Family::NoncompactTail) {
    if (!(spec.tau0 > 0.0))
      throw ConfigError("noncompact_tail requires tau0 > 0 (v must be positive at the origin)");
    if (!(spec.delta_id > 0.0)) throw ConfigError("delta_id must be positive");
    // Pi = 0 and dsigma Psi = V Psi / sigma'; cumulative Gauss-Legendre.
    const auto& cm = g.cmap();
    auto F = [&](double s) {
      const double rho = cm.rho(s);
      return noncompact_VPsi(spec, g.height(), rho) * cm.drho_dsigma(s);
    };
    for (int j = 0; j < g.N(); ++j)
      st.Psi[j + 1] = st.Psi[j] + gauss5(F, g.sigma[j], g.sigma[j + 1]);
  }

  detail::addBump(spec, g, st);
  st.Psi[0] = 0.0;
  st.Pi[0] = 0.0;
  return st;
}

}  // namespace tailwave
