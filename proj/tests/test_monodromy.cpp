#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <numbers>
#include <vector>

#include "gqg/hill.hpp"
#include "gqg/monodromy.hpp"
#include "gqg/potential.hpp"

using gqg::EdgePotential;
using gqg::HillOperator;

namespace {

const double kPi = std::numbers::pi;

EdgePotential sampled_even_potential() {
  std::vector<double> v(201);
  for (std::size_t i = 0; i < v.size(); ++i) {
    const double x = static_cast<double>(i) / 200.0;
    v[i] = 3.0 * std::cos(2.0 * kPi * x) + 0.5 * std::cos(4.0 * kPi * x);
  }
  return EdgePotential::sampled(v);
}

// Free-case discriminant: 2cos(sqrt(lambda)), 2cosh(sqrt(-lambda)) below zero.
double free_discriminant(double lambda) {
  if (lambda >= 0.0) return 2.0 * std::cos(std::sqrt(lambda));
  return 2.0 * std::cosh(std::sqrt(-lambda));
}

}  // namespace

TEST_CASE("free monodromy at lambda=0 is the shear matrix", "[monodromy]") {
  const auto m = gqg::monodromy(0.0, EdgePotential::zero(), 4096);
  CHECK_THAT(m.m11, Catch::Matchers::WithinAbs(1.0, 1e-12));
  CHECK_THAT(m.m12, Catch::Matchers::WithinAbs(1.0, 1e-12));
  CHECK_THAT(m.m21, Catch::Matchers::WithinAbs(0.0, 1e-12));
  CHECK_THAT(m.m22, Catch::Matchers::WithinAbs(1.0, 1e-12));
}

TEST_CASE("free monodromy matches cos/sin solutions", "[monodromy]") {
  // lambda = pi^2: solutions cos(pi x), sin(pi x)/pi at x=1.
  const auto mp = gqg::monodromy(kPi * kPi, EdgePotential::zero(), 4096);
  CHECK_THAT(mp.m11, Catch::Matchers::WithinAbs(-1.0, 1e-8));
  CHECK_THAT(mp.m12, Catch::Matchers::WithinAbs(0.0, 1e-8));
  CHECK_THAT(mp.m21, Catch::Matchers::WithinAbs(0.0, 1e-8));
  CHECK_THAT(mp.m22, Catch::Matchers::WithinAbs(-1.0, 1e-8));

  // lambda = pi^2/4.
  const auto mq = gqg::monodromy(kPi * kPi / 4.0, EdgePotential::zero(), 4096);
  CHECK_THAT(mq.m11, Catch::Matchers::WithinAbs(0.0, 1e-8));
  CHECK_THAT(mq.m12, Catch::Matchers::WithinAbs(2.0 / kPi, 1e-8));
  CHECK_THAT(mq.m21, Catch::Matchers::WithinAbs(-kPi / 2.0, 1e-8));
  CHECK_THAT(mq.m22, Catch::Matchers::WithinAbs(0.0, 1e-8));
}

TEST_CASE("monodromy argument validation", "[monodromy]") {
  CHECK_THROWS_AS(gqg::monodromy(0.0, EdgePotential::zero(), 32), gqg::DomainError);
  CHECK_THROWS_AS(gqg::monodromy(std::nan(""), EdgePotential::zero(), 4096), gqg::DomainError);
}

TEST_CASE("Wronskian and transfer symmetry hold on a lambda grid", "[monodromy]") {
  const std::vector<EdgePotential> kinds = {EdgePotential::zero(), EdgePotential::cosine(3.0),
                                            sampled_even_potential()};
  for (const auto& p : kinds) {
    const HillOperator hill(p);
    for (int i = 0; i < 200; ++i) {
      const double lambda = -10.0 + 110.0 * static_cast<double>(i) / 199.0;
      const auto m = hill.monodromy(lambda);
      CHECK(std::fabs(m.det() - 1.0) <= 1e-9);
      CHECK(std::fabs(m.m11 - m.m22) <= 1e-9);  // even potential
    }
  }
}

TEST_CASE("free-case discriminant matches the closed form on [0,400]", "[monodromy]") {
  const HillOperator hill(EdgePotential::zero());
  double worst = 0.0;
  for (int i = 0; i < 400; ++i) {
    const double lambda = 400.0 * static_cast<double>(i) / 399.0;
    worst = std::max(worst, std::fabs(hill.discriminant(lambda) - free_discriminant(lambda)));
  }
  CHECK(worst <= 1e-8);

  for (double lambda : {-0.5, -2.0, -10.0}) {
    CHECK_THAT(hill.discriminant(lambda), Catch::Matchers::WithinAbs(free_discriminant(lambda), 1e-9));
  }
}

TEST_CASE("discriminant examples", "[monodromy]") {
  const auto zero = EdgePotential::zero();
  CHECK_THAT(gqg::discriminant(0.0, zero), Catch::Matchers::WithinAbs(2.0, 1e-10));
  CHECK_THAT(gqg::discriminant(kPi * kPi, zero), Catch::Matchers::WithinAbs(-2.0, 1e-8));
  CHECK_THAT(gqg::discriminant(4.0 * kPi * kPi, zero), Catch::Matchers::WithinAbs(2.0, 1e-8));
}

TEST_CASE("doubling the step count moves the discriminant below 1e-10", "[monodromy]") {
  for (const auto& p : {EdgePotential::zero(), EdgePotential::cosine(3.0)}) {
    const HillOperator coarse(p, 4096);
    const HillOperator fine(p, 8192);
    for (int i = 0; i <= 24; ++i) {
      const double lambda = -10.0 + 330.0 * static_cast<double>(i) / 24.0;
      CHECK(std::fabs(coarse.discriminant(lambda) - fine.discriminant(lambda)) < 1e-10);
    }
  }
}

TEST_CASE("integrator converges at 4th order near the top of the range", "[monodromy]") {
  // At lambda = 400 the phase-error floor lambda^(5/2)/(120 N^4) leaves the
  // 4096->8192 difference slightly above 1e-10; check the convergence order
  // instead of an absolute bound there.
  const double lambda = 400.0;
  const HillOperator h2048(EdgePotential::zero(), 2048);
  const HillOperator h4096(EdgePotential::zero(), 4096);
  const HillOperator h8192(EdgePotential::zero(), 8192);
  const double d1 = std::fabs(h2048.discriminant(lambda) - h4096.discriminant(lambda));
  const double d2 = std::fabs(h4096.discriminant(lambda) - h8192.discriminant(lambda));
  CHECK(d2 < 3e-10);
  CHECK(d1 / d2 > 12.0);
  CHECK(d1 / d2 < 20.0);
}

TEST_CASE("eta equals half the discriminant away from Dirichlet poles", "[monodromy]") {
  const auto zero = EdgePotential::zero();
  CHECK_THAT(gqg::eta(0.0, zero), Catch::Matchers::WithinAbs(1.0, 1e-10));
  CHECK_THAT(gqg::eta(kPi * kPi / 4.0, zero), Catch::Matchers::WithinAbs(0.0, 1e-8));
  CHECK_THROWS_AS(gqg::eta(kPi * kPi, zero), gqg::PoleError);

  for (const auto& p : {EdgePotential::zero(), EdgePotential::cosine(3.0)}) {
    const HillOperator hill(p);
    for (int i = 0; i < 120; ++i) {
      const double lambda = -5.0 + 90.0 * static_cast<double>(i) / 119.0;
      double e;
      try {
        e = hill.eta(lambda);
      } catch (const gqg::PoleError&) {
        continue;
      }
      CHECK(std::fabs(e - 0.5 * hill.discriminant(lambda)) <= 1e-8);
    }
  }
}
