#include <catch_amalgamated.hpp>

#include <string>

#include "tailwave/config.hpp"
#include "tailwave/io.hpp"
#include "tailwave/run.hpp"

using namespace tailwave;
using nlohmann::json;

TEST_CASE("minimal config gets full defaults") {
  const RunConfig c = parse_config_json(json{{"preset", "semilinear_null"}, {"N", 512}});
  CHECK(c.N == 512);
  CHECK(c.eta == 1.0);
  CHECK(c.cfl == 0.5);
  CHECK(c.delta == 0.1);
  CHECK(c.eq.name == "semilinear_null");
  CHECK(c.eq.radial.semi_uv == Rat(-1));
  CHECK_FALSE(c.hash.empty());
}

TEST_CASE("unknown keys are hard errors") {
  CHECK_THROWS_WITH(parse_config_json(json{{"preset", "linear"}, {"cf1", 0.5}}),
                    Catch::Matchers::ContainsSubstring("unknown config key: cf1"));
}

TEST_CASE("physics violations name the constraint") {
  CHECK_THROWS_WITH(parse_config_json(json{{"preset", "linear"}, {"eta", 1.5}}),
                    Catch::Matchers::ContainsSubstring("slicing"));
  CHECK_THROWS_WITH(parse_config_json(json{{"preset", "linear"}, {"N", 32}}),
                    Catch::Matchers::ContainsSubstring("N must be"));
}

TEST_CASE("explicit non-null tensor is rejected with the surviving monomial") {
  json t = json::array();
  for (int a = 0; a < 4; ++a) {
    json ra = json::array();
    for (int b = 0; b < 4; ++b) {
      json rb = json::array();
      for (int g = 0; g < 4; ++g) rb.push_back(0);
      ra.push_back(rb);
    }
    t.push_back(ra);
  }
  t[0][0][0] = 1;
  CHECK_THROWS_WITH(parse_config_json(json{{"tensor", t}}),
                    Catch::Matchers::ContainsSubstring("null condition violated"));
}

TEST_CASE("direct radial slots") {
  const RunConfig c = parse_config_json(
      json{{"radial", {{"c_v_uu", "1/2"}, {"semi_uv", -1}}}, {"N", 128}});
  CHECK(c.eq.radial.c[RadialNullForm::V][RadialNullForm::UU] == Rat(1, 2));
  CHECK(c.eq.radial.semi_uv == Rat(-1));
  CHECK_THROWS_WITH(parse_config_json(json{{"radial", {{"c_u_uu", 1}}}}),
                    Catch::Matchers::ContainsSubstring("forbidden"));
  CHECK_THROWS(parse_config_json(
      json{{"preset", "linear"}, {"radial", {{"semi_uv", -1}}}}));
}

TEST_CASE("hash is canonical and discriminating") {
  const RunConfig a =
      parse_config_json(json::parse(R"({"preset":"linear","N":256,"cfl":0.4})"));
  const RunConfig b =
      parse_config_json(json::parse(R"({"cfl":0.4,"N":256,"preset":"linear"})"));
  CHECK(a.hash == b.hash);
  const RunConfig c =
      parse_config_json(json::parse(R"({"preset":"linear","N":512,"cfl":0.4})"));
  CHECK(a.hash != c.hash);
}

TEST_CASE("all presets resolve; classify-only ones refuse to evolve") {
  for (const char* p : {"linear", "semilinear_null", "p1_box", "p2_alpha0",
                        "p2_alpha1", "p2_alpha2", "p2_alpha3", "p3_012",
                        "generic_p3", "generic_radial"}) {
    const EquationSpec eq = resolve_preset(p);
    CHECK(eq.name == p);
  }
  CHECK_THROWS_AS(resolve_preset("no_such_preset"), ConfigError);

  RunConfig c;
  c.eq = resolve_preset("p2_alpha1");
  c.N = 128;
  c.tau_final = 1.0;
  finalize(c);
  CHECK_THROWS_AS(evolve(c), ConfigError);
}

TEST_CASE("the rotation-invariant antisymmetric preset sits in the special span") {
  // its radial reduction is a combination of the two reduced generators
  const EquationSpec eq = resolve_preset("generic_p3");
  const auto cl = classify_radial(eq.radial);
  CHECK(cl.in_span_p1p2);
  // while the direct radial preset is genuinely outside
  CHECK_FALSE(classify_radial(resolve_preset("generic_radial").radial).in_span_p1p2);
}

TEST_CASE("artifact roundtrip preserves config and series") {
  RunConfig c;
  c.eq = resolve_preset("generic_radial");
  c.data.epsilon = 0.05;
  c.N = 128;
  c.tau_final = 3.0;
  c.cadence = 0.5;
  c.energy_pairs = {{0, 1.0}};
  finalize(c);
  const RunArtifact art = evolve(c);
  const RunArtifact back = artifact_from_json(to_json(art));
  CHECK(back.cfg.hash == art.cfg.hash);
  REQUIRE(back.taus.size() == art.taus.size());
  CHECK(back.scri_Psi == art.scri_Psi);
  CHECK(back.energies == art.energies);
  CHECK(back.final_state.Psi == art.final_state.Psi);
}

TEST_CASE("diagnostics CSV is byte-identical across reruns") {
  RunConfig c;
  c.eq = resolve_preset("semilinear_null");
  c.data.epsilon = 0.05;
  c.N = 128;
  c.tau_final = 3.0;
  c.cadence = 0.5;
  c.probes = {1.0, 5.0};
  c.energy_pairs = {{0, 1.0}, {1, 2.0}};
  finalize(c);
  const std::string csv1 = diagnostics_csv(evolve(c));
  const std::string csv2 = diagnostics_csv(evolve(c));
  CHECK(csv1 == csv2);
  CHECK(csv1.rfind("tau,probe_rho,psi,Psi_scri,VPsi_scri,r3source_scri", 0) == 0);
}
