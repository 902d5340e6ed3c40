#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <complex>
#include <numbers>

#include "gqg/cones.hpp"

using gqg::Branch;
using gqg::StackSpec;
using gqg::TouchClass;

namespace {
const double kPi = std::numbers::pi;
const double kThetaD = gqg::dirac_point_theta1();
}  // namespace

TEST_CASE("diagonal slice validation and structure", "[cones]") {
  const StackSpec s(2, 0.55);
  CHECK_THROWS_AS(gqg::diagonal_slice(s, kThetaD - 0.1, kThetaD + 0.1, 32), gqg::DomainError);
  CHECK_THROWS_AS(gqg::diagonal_slice(s, 0.0, 0.5, 257), gqg::DomainError);  // no D-point inside

  const auto slice = gqg::diagonal_slice(s, kThetaD - kPi / 4.0, kThetaD + kPi / 4.0, 257);
  CHECK(slice.theta1.size() == 257);
  CHECK(slice.branches.size() == 4);

  const auto slice3 = gqg::diagonal_slice(StackSpec(3, 0.55), kThetaD - 0.25, kThetaD + 0.25, 65);
  CHECK(slice3.branches.size() == 6);
}

TEST_CASE("F restricted to the diagonal is real 1+2cos(theta1)", "[cones]") {
  for (int i = 0; i <= 64; ++i) {
    const double t1 = -kPi + 2.0 * kPi * i / 64.0;
    const auto F = gqg::f_theta(gqg::QuasiMomentum(t1, -t1));
    CHECK(std::fabs(F.imag()) <= 1e-12);
    CHECK(std::fabs(F.real() - (1.0 + 2.0 * std::cos(t1))) <= 1e-12);
  }
}

TEST_CASE("touch values at the D-point vanish to 1e-12", "[cones]") {
  for (double t0 : {0.1, 0.25, 0.55, 1.0}) {
    const auto rs2 = gqg::roots_closed_form(StackSpec(2, t0), gqg::dirac_point(+1));
    CHECK(std::fabs(rs2.root(Branch::PlusInner)) <= 1e-12);
    CHECK(std::fabs(rs2.root(Branch::MinusInner)) <= 1e-12);
    const auto rs3 = gqg::roots_closed_form(StackSpec(3, t0), gqg::dirac_point(-1));
    CHECK(std::fabs(rs3.root(Branch::MonoPlus)) <= 1e-12);
    CHECK(std::fabs(rs3.root(Branch::MonoMinus)) <= 1e-12);
  }
}

TEST_CASE("trilayer mono pair classifies as linear with the closed-form slope", "[cones]") {
  for (double t0 : {0.1, 0.25, 0.55, 1.0}) {
    const StackSpec s(3, t0);
    const auto slice = gqg::diagonal_slice(s, kThetaD - 0.25, kThetaD + 0.25, 257);
    const auto rep = gqg::classify_touch(slice, Branch::MonoPlus, Branch::MonoMinus, kThetaD);
    INFO("t0=" << t0);
    CHECK(rep.classification == TouchClass::Linear);
    CHECK(rep.residual_dominance);
    const double ref = std::sqrt(1.0 / s.big_t());
    CHECK(std::fabs(rep.gamma_fit - ref) / ref <= 0.005);
    CHECK(rep.relative_deviation <= 0.005);
    CHECK(std::fabs(rep.gamma_fit) >= 1e-3);
  }
}

TEST_CASE("bilayer touching pair classifies as quadratic with curvature 1/t0^2", "[cones]") {
  for (double t0 : {0.1, 0.25, 0.55, 1.0}) {
    const StackSpec s(2, t0);
    const auto slice = gqg::diagonal_slice(s, kThetaD - 0.25, kThetaD + 0.25, 257);
    const auto rep = gqg::classify_touch(slice, Branch::PlusInner, Branch::MinusInner, kThetaD);
    INFO("t0=" << t0);
    CHECK(rep.classification == TouchClass::Quadratic);
    CHECK(std::fabs(rep.linear_coeff) <= 1e-6);
    const double ref = 1.0 / (t0 * t0);
    CHECK(std::fabs(rep.curvature_fit - ref) / ref <= 0.01);
  }
}

TEST_CASE("bilayer outer pair does not touch", "[cones]") {
  const StackSpec s(2, 0.55);
  const auto slice = gqg::diagonal_slice(s, kThetaD - 0.25, kThetaD + 0.25, 257);
  const auto rep = gqg::classify_touch(slice, Branch::PlusOuter, Branch::MinusOuter, kThetaD);
  CHECK(rep.classification == TouchClass::None);
  CHECK_THAT(rep.touch_gap, Catch::Matchers::WithinRel(2.0 * 0.55 * 0.55 / s.big_t(), 1e-9));
}

TEST_CASE("all four bilayer branches have zero first-order coefficients", "[cones]") {
  for (double t0 : {0.1, 0.25, 0.55, 1.0}) {
    const StackSpec s(2, t0);
    const double wq = std::min(0.05, 1e-3 * t0 * t0);
    for (Branch b : gqg::branches_for(2)) {
      const auto fr = gqg::fit_branch_local(s, b, kThetaD, wq, 65, +1);
      const auto fl = gqg::fit_branch_local(s, b, kThetaD, wq, 65, -1);
      INFO("t0=" << t0 << " branch=" << gqg::to_string(b));
      CHECK(std::max(std::fabs(fr.linear), std::fabs(fl.linear)) <= 1e-6);
    }
  }
}

TEST_CASE("trilayer quartic-family touch is quadratic", "[cones]") {
  const StackSpec s(3, 0.55);
  const auto slice = gqg::diagonal_slice(s, kThetaD - 0.25, kThetaD + 0.25, 257);
  const auto rep = gqg::classify_touch(slice, Branch::PlusInner, Branch::MinusInner, kThetaD);
  CHECK(rep.classification == TouchClass::Quadratic);
  CHECK(std::fabs(rep.linear_coeff) <= 1e-6);
  // Derived curvature reference 1/(sqrt2 t0^2), cross-checked by the fit.
  CHECK(rep.relative_deviation <= 0.01);
}

TEST_CASE("linear classification is scale-free under window halving", "[cones]") {
  const StackSpec s(3, 0.55);
  const auto slice = gqg::diagonal_slice(s, kThetaD - 0.25, kThetaD + 0.25, 257);
  const auto rep = gqg::classify_touch(slice, Branch::MonoPlus, Branch::MonoMinus, kThetaD);
  gqg::TouchFitConfig cfg;
  cfg.linear_window = 0.025;
  const auto rep2 = gqg::classify_touch(slice, Branch::MonoPlus, Branch::MonoMinus, kThetaD, cfg);
  CHECK(std::fabs(rep2.gamma_fit - rep.gamma_fit) / std::fabs(rep.gamma_fit) < 0.002);
}

TEST_CASE("lambda-space slope composes the fit with the discriminant derivative", "[cones]") {
  const gqg::HillOperator hill(gqg::EdgePotential::zero());
  const auto bands = hill.bands(0.0, 40.0);
  const StackSpec s(3, 0.55);
  const auto slice = gqg::diagonal_slice(s, kThetaD - 0.25, kThetaD + 0.25, 257);
  const auto rep = gqg::classify_touch(slice, Branch::MonoPlus, Branch::MonoMinus, kThetaD);

  const double slope = gqg::lambda_space_slope(rep, hill, bands[0]);
  // Free case: lambda(theta_D) = pi^2/4, D' = -2/pi.
  const double expected = 2.0 * std::sqrt(1.0 / s.big_t()) / (-2.0 / kPi);
  CHECK(std::fabs(slope - expected) / std::fabs(expected) <= 0.005);

  // D' by finite difference matches the analytic free form at 50 lambdas.
  double worst = 0.0;
  for (int i = 1; i <= 50; ++i) {
    const double lam = 0.3 + (380.0 - 0.3) * i / 50.0;
    const double exact = -std::sin(std::sqrt(lam)) / std::sqrt(lam);
    worst = std::max(worst, std::fabs(hill.discriminant_derivative(lam) - exact));
  }
  CHECK(worst <= 1e-6);

  // Quadratic reports cannot produce a lambda slope.
  const auto quad = gqg::classify_touch(
      gqg::diagonal_slice(StackSpec(2, 0.55), kThetaD - 0.25, kThetaD + 0.25, 257),
      Branch::PlusInner, Branch::MinusInner, kThetaD);
  CHECK_THROWS_AS(gqg::lambda_space_slope(quad, hill, bands[0]), gqg::DomainError);

  // A touch landing on a band edge degenerates.
  gqg::ConeReport edge = rep;
  edge.touch_value = 1.0;  // 2r = 2 -> lambda at the band floor
  CHECK_THROWS_AS(gqg::lambda_space_slope(edge, hill, bands[0]), gqg::DerivativeDegeneracyError);
}

TEST_CASE("touch locations sit at the D-points for every coupling", "[cones]") {
  const int samples = 1024;
  const double cell = 2.0 * kPi / (samples - 1);
  for (int n : {2, 3}) {
    for (double t0 : {0.1, 0.25, 0.55, 1.0}) {
      const StackSpec s(n, t0);
      const Branch up = (n == 2) ? Branch::PlusInner : Branch::MonoPlus;
      const Branch lo = (n == 2) ? Branch::MinusInner : Branch::MonoMinus;
      const auto minima = gqg::locate_touch_points(s, up, lo, samples);
      REQUIRE(minima.size() >= 2);
      INFO("n=" << n << " t0=" << t0);
      CHECK(std::fabs(std::fabs(minima[0].theta1) - kThetaD) <= cell);
      CHECK(std::fabs(std::fabs(minima[1].theta1) - kThetaD) <= cell);
      CHECK(minima[0].theta1 * minima[1].theta1 < 0.0);  // one at each D-point
    }
  }
}
