#include <catch_amalgamated.hpp>

#include <cmath>

#include "tailwave/oracle.hpp"

using namespace tailwave;

TEST_CASE("exact free radial wave") {
  const ProfileFunction f(4.0, 1.0);
  const ExactLinearRadial ex(f);

  SECTION("vanishes outside the light cone of the support") {
    CHECK(ex.psi(0.0, 1.0) == 0.0);
    CHECK(ex.psi(20.0, 1.0) == 0.0);
    CHECK(ex.Psi(20.0, 1.0) == 0.0);
  }

  SECTION("origin limit matches the Taylor form") {
    const double lim = ex.psi(4.3, 0.0);
    CHECK(lim == Catch::Approx(-2.0 * f.d1(4.3)).margin(1e-12));
    CHECK(std::abs(ex.psi(4.3, 1e-6) - lim) < 1e-10);
  }

  SECTION("discrete wave operator annihilates it") {
    // box psi = psi_tt - psi_rr - (2/r) psi_r, 2nd-order stencils
    const double t = 4.2, r = 0.7, d = 1e-3;
    auto p = [&](double tt, double rr) { return ex.psi(tt, rr); };
    const double ptt = (p(t + d, r) - 2 * p(t, r) + p(t - d, r)) / (d * d);
    const double prr = (p(t, r + d) - 2 * p(t, r) + p(t, r - d)) / (d * d);
    const double pr = (p(t, r + d) - p(t, r - d)) / (2 * d);
    CHECK(std::abs(ptt - prr - 2.0 / r * pr) < 1e-4);
  }

  SECTION("radiation field identities") {
    const double t = 4.0, r = 1.2, d = 1e-5;
    const double fd = (ex.Psi(t + d, r) - ex.Psi(t - d, r)) / (2 * d);
    CHECK(ex.dtPsi(t, r) == Catch::Approx(fd).margin(1e-8));
    const double Ur = (ex.Psi(t, r - d) - ex.Psi(t, r + d)) / (2 * d) + fd;
    CHECK(ex.UPsi(t, r) == Catch::Approx(Ur).margin(1e-7));
  }
}

TEST_CASE("kirchhoff evaluator") {
  SECTION("zero source") {
    const KirchhoffEvaluator k([](double, double) { return 0.0; }, 10.0);
    CHECK(k.evaluate(5.0, 0.0).first == 0.0);
    CHECK(k.evaluate(5.0, 2.0).first == 0.0);
  }

  SECTION("manufactured solution") {
    const ProfileFunction b(3.0, 1.0);
    auto psi_m = [&](double t, double r) { return b(t) * std::exp(-r * r); };
    auto src = [&](double t, double r) {
      const double e = std::exp(-r * r);
      return b.d2(t) * e - b(t) * e * (4.0 * r * r - 6.0);
    };
    const KirchhoffEvaluator k(src, 12.0, 1e-7);
    for (double r : {0.0, 0.5, 1.5}) {
      const auto [v, err] = k.evaluate(3.5, r);
      CHECK(v == Catch::Approx(psi_m(3.5, r)).margin(1e-6));
      CHECK(err < 1e-5);
    }
  }
}

TEST_CASE("semilinear transformation chain") {
  CHECK(semilinear_transform_value(0.0, 1) == 0.0);
  CHECK(semilinear_transform_value(0.0, 3) == 0.0);
  const double v = 0.3;
  CHECK(semilinear_transform_value(v, 1) ==
        Catch::Approx(v - v * v / 2.0).margin(1e-15));
  CHECK(semilinear_transform_value(v, 2) ==
        Catch::Approx(v - v * v / 2.0 + v * v * v / 6.0).margin(1e-15));
  CHECK_THROWS_AS(semilinear_transform_value(v, 0), std::invalid_argument);
  CHECK_THROWS_AS(semilinear_transform_value(v, 4), std::invalid_argument);
  const auto s = semilinear_transform({0.0, 0.1, -0.2}, 1);
  CHECK(s[0] == 0.0);
  CHECK(s[1] == Catch::Approx(0.1 - 0.005));
  CHECK(s[2] == Catch::Approx(-0.2 - 0.02));
}

TEST_CASE("richardson estimation") {
  const double L = 0.7, C = 2.0;
  const auto r = richardson(L + C * std::pow(256.0, -4), L + C * std::pow(512.0, -4),
                            L + C * std::pow(1024.0, -4));
  CHECK(r.order == Catch::Approx(4.0).margin(1e-6));
  CHECK(r.extrapolated == Catch::Approx(L).margin(1e-12));
  CHECK_THROWS(richardson(1.0, 2.0, 1.5));  // non-monotone
}
