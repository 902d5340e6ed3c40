#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <vector>

#include "gqg/potential.hpp"

using gqg::EdgePotential;

TEST_CASE("potential evaluation matches closed forms", "[potential]") {
  CHECK(gqg::evaluate_potential(EdgePotential::zero(), 0.3) == 0.0);
  CHECK_THAT(gqg::evaluate_potential(EdgePotential::cosine(2.0), 0.5),
             Catch::Matchers::WithinAbs(-2.0, 1e-14));
  CHECK_THAT(gqg::evaluate_potential(EdgePotential::cosine(1.0), 0.25),
             Catch::Matchers::WithinAbs(0.0, 1e-12));
}

TEST_CASE("potential evaluation rejects x outside [0,1]", "[potential]") {
  const auto p = EdgePotential::cosine(1.0);
  CHECK_THROWS_AS(p(-0.1), gqg::DomainError);
  CHECK_THROWS_AS(p(1.0000001), gqg::DomainError);
  CHECK_THROWS_AS(p(std::nan("")), gqg::DomainError);
}

TEST_CASE("exact kinds are even to 1e-12", "[potential]") {
  CHECK(EdgePotential::zero().evenness_defect() <= 1e-12);
  CHECK(EdgePotential::cosine(3.0).evenness_defect() <= 1e-12);
  CHECK(EdgePotential::cosine(-7.5).evenness_defect() <= 1e-12);
}

TEST_CASE("sampled potential interpolates linearly and validates", "[potential]") {
  const auto tent = EdgePotential::sampled({0.0, 1.0, 0.0});
  CHECK_THAT(tent(0.25), Catch::Matchers::WithinAbs(0.5, 1e-15));
  CHECK_THAT(tent(0.5), Catch::Matchers::WithinAbs(1.0, 1e-15));
  CHECK_THAT(tent(1.0), Catch::Matchers::WithinAbs(0.0, 1e-15));

  // Asymmetric table fails the evenness check.
  CHECK_THROWS_AS(EdgePotential::sampled({0.0, 1.0, 0.5}), gqg::DomainError);
  // Non-finite sample.
  CHECK_THROWS_AS(EdgePotential::sampled({0.0, std::nan(""), 0.0}), gqg::DomainError);
  // Too short.
  CHECK_THROWS_AS(EdgePotential::sampled({1.0}), gqg::DomainError);

  // A looser tolerance admits a slightly uneven table.
  CHECK_NOTHROW(EdgePotential::sampled({0.0, 1.0, 1e-6}, 1e-5));
}

TEST_CASE("sampled cosine table tracks the exact cosine", "[potential]") {
  std::vector<double> v(201);
  for (std::size_t i = 0; i < v.size(); ++i) {
    v[i] = 3.0 * std::cos(2.0 * std::numbers::pi * static_cast<double>(i) / 200.0);
  }
  const auto p = EdgePotential::sampled(v);
  const auto exact = EdgePotential::cosine(3.0);
  for (int i = 0; i <= 50; ++i) {
    const double x = static_cast<double>(i) / 50.0;
    CHECK_THAT(p(x), Catch::Matchers::WithinAbs(exact(x), 5e-4));
  }
}
