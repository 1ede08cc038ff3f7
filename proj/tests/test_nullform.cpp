#include <catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "tailwave/nullform.hpp"
#include "tailwave/verify.hpp"  // exact span-membership oracle

using namespace tailwave;

namespace {

double rd(const Rat& r) { return boost::rational_cast<double>(r); }

/// Cartesian contraction of P with the derivatives of a closed-form radial
/// field psi(t, x) = g(t) G(|x|^2), g = exp(-t^2/2), G(s) = exp(-s/2).
double cartesian_P(const NullFormTensor& P, double t, const std::array<double, 3>& x) {
  const double s = x[0] * x[0] + x[1] * x[1] + x[2] * x[2];
  const double g = std::exp(-0.5 * t * t), gp = -t * g, gpp = (t * t - 1.0) * g;
  const double G = std::exp(-0.5 * s), Gp = -0.5 * G, Gpp = 0.25 * G;
  double d1[4], d2[4][4];
  d1[0] = gp * G;
  for (int i = 1; i <= 3; ++i) d1[i] = g * Gp * 2.0 * x[i - 1];
  d2[0][0] = gpp * G;
  for (int i = 1; i <= 3; ++i) d2[0][i] = d2[i][0] = gp * Gp * 2.0 * x[i - 1];
  for (int i = 1; i <= 3; ++i)
    for (int j = 1; j <= 3; ++j)
      d2[i][j] = g * (2.0 * (i == j ? 1.0 : 0.0) * Gp + 4.0 * x[i - 1] * x[j - 1] * Gpp);
  double acc = 0.0;
  for (int a = 0; a < 4; ++a)
    for (int b = 0; b < 4; ++b)
      for (int c = 0; c < 4; ++c) {
        const Rat coef = P.at(a, b, c);
        if (coef != Rat(0)) acc += rd(coef) * d1[c] * d2[a][b];
      }
  return acc;
}

/// Same contraction through the radial reduction: first/second (t,r)
/// derivatives rewritten in the (U,V) frame.
double radial_P(const RadialNullForm& f, double t, double r) {
  const double s = r * r;
  const double g = std::exp(-0.5 * t * t), gp = -t * g, gpp = (t * t - 1.0) * g;
  const double G = std::exp(-0.5 * s), Gp = -0.5 * G, Gpp = 0.25 * G;
  const double dt = gp * G, dr = g * Gp * 2.0 * r;
  const double dtt = gpp * G, dtr = gp * Gp * 2.0 * r;
  const double drr = g * (2.0 * Gp + 4.0 * r * r * Gpp);
  const double q = g * Gp * 2.0;  // r^-1 d_r psi
  const double U1 = dt - dr, V1 = dt + dr;
  const double sec[3] = {dtt - 2 * dtr + drr, dtt - drr, dtt + 2 * dtr + drr};
  double acc = 0.0;
  const double first[2] = {U1, V1};
  for (int a = 0; a < 2; ++a) {
    for (int bc = 0; bc < 3; ++bc) acc += f.cd(a, bc) * first[a] * sec[bc];
    acc += f.trd(a) * first[a] * q;
  }
  acc += f.semid() * U1 * V1;
  return acc;
}

}  // namespace

TEST_CASE("all generator groups satisfy the null condition") {
  for (const auto& g : all_generators()) CHECK(validate_null(g));
}

TEST_CASE("non-null tensors are rejected with a named monomial") {
  NullFormTensor T;
  T.at(0, 0, 0) = Rat(1);  // (d_t psi)(d_t^2 psi): P(xi,xi,xi) = -s^3 != 0
  const auto m = null_violation_monomial(T);
  REQUIRE(m.has_value());
  CHECK(m->find("xi0=") != std::string::npos);

  std::mt19937 rng(7);
  std::uniform_int_distribution<int> idx(0, 3), coef(1, 3);
  const auto& gens = all_generators();
  std::uniform_int_distribution<int> gi(0, static_cast<int>(gens.size()) - 1);
  for (int trial = 0; trial < 10; ++trial) {
    NullFormTensor C = gens[gi(rng)];
    C.addTerm(idx(rng), idx(rng), idx(rng), Rat(coef(rng)));
    CHECK_FALSE(validate_null(C));
  }
}

TEST_CASE("golden radial reductions") {
  using R = RadialNullForm;
  SECTION("gradient-square derivative, alpha = 0") {
    const auto f = radial_reduce(p2_generator(0));
    CHECK(f.c[R::U][R::UV] == Rat(-1, 2));
    CHECK(f.c[R::U][R::VV] == Rat(-1, 2));
    CHECK(f.c[R::V][R::UU] == Rat(-1, 2));
    CHECK(f.c[R::V][R::UV] == Rat(-1, 2));
    CHECK(f.tr[0] == Rat(0));
    CHECK(f.tr[1] == Rat(0));
    CHECK(f.semi_uv == Rat(0));
  }
  SECTION("gradient times wave operator, alpha = 0") {
    const auto f = radial_reduce(p1_generator(0));
    CHECK(f.c[R::U][R::UV] == Rat(-1, 2));
    CHECK(f.c[R::U][R::VV] == Rat(0));
    CHECK(f.c[R::V][R::UU] == Rat(0));
    CHECK(f.c[R::V][R::UV] == Rat(-1, 2));
    CHECK(f.tr[0] == Rat(1));
    CHECK(f.tr[1] == Rat(1));
  }
  SECTION("antisymmetric combination, rotation-invariant sum") {
    NullFormTensor t;
    for (int i = 1; i <= 3; ++i) t += p3_generator(0, i, i);
    const auto f = radial_reduce(t);
    CHECK(f.c[R::U][R::UV] == Rat(-1, 4));
    CHECK(f.c[R::U][R::VV] == Rat(1, 4));
    CHECK(f.c[R::V][R::UU] == Rat(1, 4));
    CHECK(f.c[R::V][R::UV] == Rat(-1, 4));
    CHECK(f.tr[0] == Rat(1));
    CHECK(f.tr[1] == Rat(1));
  }
}

TEST_CASE("angle-dependent tensors are not radial-compatible") {
  CHECK_THROWS_AS(radial_reduce(p2_generator(1)), NotRadialCompatible);
  CHECK_THROWS_AS(radial_reduce(p3_generator(0, 1, 2)), NotRadialCompatible);
}

TEST_CASE("radial reduction agrees with the Cartesian contraction") {
  NullFormTensor T = p1_generator(0);
  {
    NullFormTensor t2 = p2_generator(0) * Rat(3, 2);
    T += t2;
    for (int i = 1; i <= 3; ++i) {
      NullFormTensor t3 = p3_generator(0, i, i) * Rat(-2);
      T += t3;
    }
  }
  const auto f = radial_reduce(T);
  std::mt19937 rng(11);
  std::uniform_real_distribution<double> ur(-1.5, 1.5);
  for (int trial = 0; trial < 20; ++trial) {
    const double t = ur(rng);
    std::array<double, 3> x{ur(rng), ur(rng), ur(rng)};
    const double r = std::sqrt(x[0] * x[0] + x[1] * x[1] + x[2] * x[2]);
    if (r < 1e-3) continue;
    CHECK(radial_P(f, t, r) == Catch::Approx(cartesian_P(T, t, x)).margin(1e-10));
  }
}

TEST_CASE("classification against the exact membership oracle") {
  const auto& gens = all_generators();
  for (size_t j = 0; j < gens.size(); ++j) {
    const bool expect = detail::in_span_p1p2_exact(gens[j]);
    const Classification cl = classify(gens[j]);
    INFO("generator " << j);
    CHECK(cl.in_span_p1p2 == expect);
    CHECK(cl.residual_norm < 1e-10);  // generators span themselves
    if (j < 8) CHECK(expect);
  }
  CHECK(classify(p2_generator(0)).predicted_tail_exponent == -2.0);
  CHECK(classify(p3_generator(0, 1, 2)).predicted_tail_exponent == -1.0);
}

TEST_CASE("radial-level classification") {
  const auto span = classify_radial(radial_reduce(p2_generator(0)));
  CHECK(span.in_span_p1p2);
  CHECK(span.predicted_tail_exponent == -2.0);

  RadialNullForm semi;
  semi.semi_uv = Rat(-1);
  CHECK(classify_radial(semi).predicted_tail_exponent == -2.0);

  RadialNullForm gen;
  gen.c[RadialNullForm::V][RadialNullForm::UU] = Rat(1, 2);
  const auto cl = classify_radial(gen);
  CHECK_FALSE(cl.in_span_p1p2);
  CHECK(cl.predicted_tail_exponent == -1.0);
}

TEST_CASE("psi-level chain rule matches direct differentiation") {
  // Psi = r psi with psi = exp(-(r-2)^2) h(t); compare psi_derivs against
  // closed-form psi derivatives at a point.
  const double t = 0.4, r = 1.7;
  auto psi = [](double tt, double rr) {
    return std::exp(-(rr - 2.0) * (rr - 2.0)) * std::cos(tt);
  };
  const double d = 1e-5;
  auto d_t = [&](double tt, double rr) { return (psi(tt + d, rr) - psi(tt - d, rr)) / (2 * d); };
  auto d_r = [&](double tt, double rr) { return (psi(tt, rr + d) - psi(tt, rr - d)) / (2 * d); };
  const double u1 = d_t(t, r) - d_r(t, r);
  const double v1 = d_t(t, r) + d_r(t, r);

  // Psi-level frame derivatives by finite differences of Psi = r psi
  auto Psi = [&](double tt, double rr) { return rr * psi(tt, rr); };
  auto Pt = [&](double tt, double rr) { return (Psi(tt + d, rr) - Psi(tt - d, rr)) / (2 * d); };
  auto Pr = [&](double tt, double rr) { return (Psi(tt, rr + d) - Psi(tt, rr - d)) / (2 * d); };
  const double UPsi = Pt(t, r) - Pr(t, r), VPsi = Pt(t, r) + Pr(t, r);
  const double UUPsi =
      (Pt(t + d, r) - Pt(t - d, r)) / (2 * d) - 2 * (Pt(t, r + d) - Pt(t, r - d)) / (2 * d) +
      (Pr(t, r + d) - Pr(t, r - d)) / (2 * d);
  const double VVPsi =
      (Pt(t + d, r) - Pt(t - d, r)) / (2 * d) + 2 * (Pt(t, r + d) - Pt(t, r - d)) / (2 * d) +
      (Pr(t, r + d) - Pr(t, r - d)) / (2 * d);
  const double UVPsi = (Pt(t + d, r) - Pt(t - d, r)) / (2 * d) -
                       (Pr(t, r + d) - Pr(t, r - d)) / (2 * d);

  const RadialDerivs rd2 = psi_derivs(UPsi, VPsi, UVPsi, UUPsi, VVPsi, Psi(t, r), r);
  CHECK(rd2.u1 == Catch::Approx(u1).margin(1e-7));
  CHECK(rd2.v1 == Catch::Approx(v1).margin(1e-7));
  CHECK(rd2.q == Catch::Approx(d_r(t, r) / r).margin(1e-7));
}
