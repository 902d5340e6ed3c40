#include <catch2/catch_amalgamated.hpp>

#include <numbers>

#include "gqg/config.hpp"

TEST_CASE("minimal config applies the documented defaults", "[config]") {
  const auto cfg = gqg::parse_config("layers = 3\n");
  CHECK(cfg.layers == 3);
  CHECK(cfg.t0 == 0.55);
  CHECK(cfg.potential_kind == "zero");
  CHECK(cfg.grid_n1 == 128);
  CHECK(cfg.grid_n2 == 128);
  CHECK_THAT(cfg.window_center, Catch::Matchers::WithinAbs(2.0 * std::numbers::pi / 3.0, 1e-15));
  CHECK_THAT(cfg.window_halfwidth, Catch::Matchers::WithinAbs(std::numbers::pi / 4.0, 1e-15));
  CHECK(cfg.window_samples == 257);
  CHECK(cfg.steps == 4096);
  CHECK(cfg.scan_step == 0.05);
}

TEST_CASE("comments, blanks, and whitespace are tolerated", "[config]") {
  const auto cfg = gqg::parse_config(
      "# a comment\n"
      "\n"
      "  layers = 2   # trailing comment\n"
      " t0=0.8\n"
      "grid = 32x16\n");
  CHECK(cfg.layers == 2);
  CHECK(cfg.t0 == 0.8);
  CHECK(cfg.grid_n1 == 32);
  CHECK(cfg.grid_n2 == 16);
}

TEST_CASE("invalid configs aggregate every violation", "[config]") {
  try {
    gqg::parse_config("layers = 5\nt0 = 0\nbogus_key = 1\ngrid = 128\n");
    FAIL("expected ConfigError");
  } catch (const gqg::ConfigError& e) {
    CHECK(e.violations.size() == 4);
  }
}

TEST_CASE("t0 = 0 is rejected", "[config]") {
  CHECK_THROWS_AS(gqg::parse_config("t0 = 0\n"), gqg::ConfigError);
  CHECK_THROWS_AS(gqg::parse_config("t0 = -0.5\n"), gqg::ConfigError);
}

TEST_CASE("unsupported layer count is rejected", "[config]") {
  CHECK_THROWS_AS(gqg::parse_config("layers = 5\n"), gqg::ConfigError);
}

TEST_CASE("non-numeric values are rejected with the offending key named", "[config]") {
  try {
    gqg::parse_config("t0 = fast\n");
    FAIL("expected ConfigError");
  } catch (const gqg::ConfigError& e) {
    REQUIRE(e.violations.size() == 1);
    CHECK(e.violations[0].find("t0") != std::string::npos);
  }
}

TEST_CASE("sampled potentials are validated at parse time", "[config]") {
  const auto good = gqg::parse_config(
      "potential = sampled\npotential_values = 0, 1, 0\n");
  CHECK(good.potential().kind() == gqg::EdgePotential::Kind::SampledEven);

  CHECK_THROWS_AS(gqg::parse_config("potential = sampled\npotential_values = 0, 1, 0.5\n"),
                  gqg::ConfigError);
  CHECK_THROWS_AS(gqg::parse_config("potential = sampled\n"), gqg::ConfigError);
  CHECK_THROWS_AS(gqg::parse_config("potential = gaussian\n"), gqg::ConfigError);
}

TEST_CASE("range and tolerance overrides are validated", "[config]") {
  CHECK_THROWS_AS(gqg::parse_config("lambda_min = 10\nlambda_max = 5\n"), gqg::ConfigError);
  CHECK_THROWS_AS(gqg::parse_config("steps = 32\n"), gqg::ConfigError);
  CHECK_THROWS_AS(gqg::parse_config("window_samples = 10\n"), gqg::ConfigError);
  CHECK_NOTHROW(gqg::parse_config("steps = 128\nscan_step = 0.1\ndirichlet_guard = 1e-7\n"));
}
