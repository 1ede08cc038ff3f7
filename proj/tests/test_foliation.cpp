#include <catch_amalgamated.hpp>

#include <cmath>

#include "tailwave/foliation.hpp"

using namespace tailwave;

TEST_CASE("height function basics") {
  const HeightFunction h(1.0);
  CHECK(h.hp(0.0) == 0.0);
  CHECK(h.hp(1e6) == Catch::Approx(1.0).margin(1e-11));
  // slices are strictly spacelike: 0 <= h' < 1
  for (double r : {0.0, 0.3, 1.0, 5.0, 50.0}) {
    CHECK(h.hp(r) >= 0.0);
    CHECK(h.hp(r) < 1.0);
  }
  // closed form for the default falloff: h = r - atan(r)
  for (double r : {0.5, 2.0, 10.0})
    CHECK(h.h(r) == Catch::Approx(r - std::atan(r)).epsilon(1e-14));
  CHECK(h.uOffset() == Catch::Approx(M_PI / 2).epsilon(1e-14));
}

TEST_CASE("height derivatives are consistent") {
  for (double eta : {1.0, 0.5}) {
    const HeightFunction h(eta);
    const double r = 1.5, d = 1e-5;
    const double fd = (h.hp(r + d) - h.hp(r - d)) / (2 * d);
    CHECK(h.hpp(r) == Catch::Approx(fd).margin(1e-8));
    const double fdh = (h.h(r + d) - h.h(r - d)) / (2 * d);
    CHECK(h.hp(r) == Catch::Approx(fdh).margin(1e-8));
  }
}

TEST_CASE("slower falloff gives larger u-offset") {
  const HeightFunction slow(0.5);
  CHECK(std::isfinite(slow.uOffset()));
  CHECK(slow.uOffset() > HeightFunction(1.0).uOffset());
}

TEST_CASE("eta outside (0,1] is rejected") {
  CHECK_THROWS_AS(HeightFunction(1.5), std::invalid_argument);
  CHECK_THROWS_AS(HeightFunction(0.0), std::invalid_argument);
  CHECK_THROWS_AS(HeightFunction(-1.0), std::invalid_argument);
}

TEST_CASE("coordinate transform roundtrip") {
  const HeightFunction h(1.0);
  const auto p = to_hyperboloidal(7.0, 2.5, h);
  const auto [t, r] = from_hyperboloidal(p.tau, p.rho, h);
  CHECK(t == Catch::Approx(7.0).epsilon(1e-14));
  CHECK(r == 2.5);
}

TEST_CASE("null frame coefficients") {
  const HeightFunction h(1.0);
  const auto c = null_frame_coeffs(3.0, h);
  CHECK(c.aV == Catch::Approx(1.0 - h.hp(3.0)));
  CHECK(c.bV == 1.0);
  CHECK(c.aU == Catch::Approx(1.0 + h.hp(3.0)));
  CHECK(c.bU == -1.0);
}

TEST_CASE("compactification map") {
  const CompactMap m(10.0);
  for (double s : {0.1, 0.5, 0.9})
    CHECK(m.sigma(m.rho(s)) == Catch::Approx(s).epsilon(1e-14));
  CHECK(m.sigma(0.0) == 0.0);
  CHECK(std::isinf(m.rho(1.0)));
  const double r = 4.0, d = 1e-5;
  CHECK(m.dsigma_drho(r) ==
        Catch::Approx((m.sigma(r + d) - m.sigma(r - d)) / (2 * d)).epsilon(1e-8));
  CHECK(m.d2sigma_drho2(r) ==
        Catch::Approx((m.dsigma_drho(r + d) - m.dsigma_drho(r - d)) / (2 * d))
            .epsilon(1e-7));
  CHECK(m.drho_dsigma(m.sigma(r)) == Catch::Approx(1.0 / m.dsigma_drho(r)).epsilon(1e-12));
  CHECK_THROWS_AS(CompactMap(0.0), std::invalid_argument);
}
