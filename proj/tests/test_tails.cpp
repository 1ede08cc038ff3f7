#include <catch_amalgamated.hpp>

#include <cmath>
#include <vector>

#include "tailwave/config.hpp"
#include "tailwave/run.hpp"
#include "tailwave/tails.hpp"

using namespace tailwave;

TEST_CASE("local power index of an exact power law") {
  std::vector<double> x, y;
  for (double t = 10.0; t <= 1000.0; t *= 1.1) {
    x.push_back(t);
    y.push_back(5.0 * std::pow(t, -2.0));
  }
  const auto lpi = local_power_index(x, y);
  for (size_t i = 1; i + 1 < x.size(); ++i)
    CHECK(lpi[i] == Catch::Approx(-2.0).margin(1e-12));
  CHECK(median_lpi(x, y, 20.0, 900.0) == Catch::Approx(-2.0).margin(1e-12));
}

TEST_CASE("LPI masks sign changes and the noise floor") {
  std::vector<double> x, y;
  for (int i = 0; i < 20; ++i) {
    x.push_back(10.0 + i);
    y.push_back(1.0);
  }
  y[10] = -1.0;  // sign flip
  y[15] = 1e-15; // below floor
  const auto lpi = local_power_index(x, y);
  CHECK(!std::isfinite(lpi[9]));
  CHECK(!std::isfinite(lpi[11]));
  CHECK(!std::isfinite(lpi[14]));
  CHECK(!std::isfinite(lpi[16]));
  CHECK(std::isfinite(lpi[5]));
}

TEST_CASE("scri amplitude of the exact tail profile") {
  std::vector<double> taus, Psi;
  const double L = 1.3, c = 0.4;
  for (double u = 5.0; u <= 100.0; u += 0.5) {
    taus.push_back(u + L);
    Psi.push_back(c / (2.0 * u));
  }
  const auto a = scri_amplitude(taus, Psi, L, 10.0, 90.0);
  CHECK(a.mean == Catch::Approx(c).margin(1e-12));
  CHECK(a.drift < 1e-10);
}

TEST_CASE("c_scri accumulation with tail completion") {
  std::vector<double> taus, g;
  for (double u = 1.0; u <= 100.0; u += 0.01) {
    taus.push_back(u);
    g.push_back(std::pow(u, -2.0));
  }
  const auto est = accumulate_c_scri(taus, g, 0.0);
  // 2 * int_1^inf u^-2 du = 2
  CHECK(est.value == Catch::Approx(2.0).epsilon(0.01));
  CHECK(est.fit_slope == Catch::Approx(-2.0).margin(0.01));
  CHECK_FALSE(est.slow_decay_warning);
  CHECK(est.tail_completion == Catch::Approx(0.02).epsilon(0.05));
}

TEST_CASE("c_init recovery from constructed noncompact data") {
  RunConfig c;
  c.eq = resolve_preset("linear");
  c.data.family = InitialDataSpec::Family::NoncompactTail;
  c.data.c_init = 0.3;
  c.data.delta_id = 0.5;
  c.data.tau0 = 1.0;
  c.N = 1024;
  c.scale = 1.0;
  c.tau_final = 1.0 + 1e-3;  // just the first slice
  c.cadence = 1.0;
  finalize(c);
  const RunArtifact art = evolve(c);
  const CInitFit fit = fit_c_init(art);
  CHECK(fit.c_init == Catch::Approx(0.3).margin(1e-3));

  // linearity: scaling the data scales c_init
  RunConfig c2 = c;
  c2.data.c_init = -0.6;
  finalize(c2);
  const CInitFit fit2 = fit_c_init(evolve(c2));
  CHECK(fit2.c_init == Catch::Approx(-2.0 * fit.c_init).margin(1e-6));

  // compact data -> exactly zero
  RunConfig c3;
  c3.eq = resolve_preset("linear");
  c3.data.epsilon = 1.0;
  c3.N = 128;
  c3.tau_final = 0.5;
  finalize(c3);
  CHECK(fit_c_init(evolve(c3)).c_init == 0.0);
}

TEST_CASE("sensitivity slope helper") {
  const LineFit f = sensitivity({0.1, 0.2, 0.3}, {0.15, 0.25, 0.35});
  CHECK(f.slope == Catch::Approx(1.0).margin(1e-12));
}
