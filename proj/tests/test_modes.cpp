#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <complex>
#include <cstring>
#include <numbers>

#include "gqg/modes.hpp"
#include "gqg/random.hpp"

using gqg::Branch;
using gqg::QuasiMomentum;
using gqg::StackSpec;

namespace {
const double kPi = std::numbers::pi;
}

TEST_CASE("mode solving at a root yields a tiny residual", "[modes]") {
  const StackSpec s(2, 1.0);
  const auto mc = gqg::solve_mode(s, QuasiMomentum(0.0, 0.0), Branch::PlusInner);
  CHECK(mc.eta_value == 0.75);
  CHECK(mc.residual <= 1e-10);
  double norm = 0.0;
  for (const auto& v : mc.x) norm += std::norm(v);
  CHECK_THAT(norm, Catch::Matchers::WithinAbs(1.0, 1e-12));
}

TEST_CASE("non-roots have no null space", "[modes]") {
  const StackSpec s(2, 1.0);
  CHECK_THROWS_AS(gqg::solve_mode_at(s, QuasiMomentum(0.0, 0.0), 0.5), gqg::NoModeError);
}

TEST_CASE("a mode exists at the D-point for the touching branch", "[modes]") {
  const StackSpec s(2, 0.55);
  const auto mc = gqg::solve_mode(s, gqg::dirac_point(+1), Branch::PlusInner);
  CHECK(mc.residual <= 1e-10);
}

TEST_CASE("phase fixing is deterministic and gauge covariant", "[modes]") {
  const StackSpec s(3, 0.55);
  const QuasiMomentum q(0.8, -0.3);
  const auto a = gqg::solve_mode(s, q, Branch::MonoPlus);
  const auto b = gqg::solve_mode(s, q, Branch::MonoPlus);
  REQUIRE(a.x.size() == b.x.size());
  for (std::size_t i = 0; i < a.x.size(); ++i) {
    CHECK(std::memcmp(&a.x[i], &b.x[i], sizeof(a.x[i])) == 0);  // bitwise identical
  }
  // First significant component is real positive.
  for (const auto& v : a.x) {
    if (std::abs(v) > 1e-12) {
      CHECK(std::fabs(v.imag()) <= 1e-15);
      CHECK(v.real() > 0.0);
      break;
    }
  }

  const gqg::HillOperator hill(gqg::EdgePotential::zero());
  const auto bands = hill.bands(0.0, 40.0);
  const double lambda = hill.invert_discriminant(bands[0], 2.0 * a.eta_value, 1e-12);
  const auto funcs = gqg::build_edge_functions(s, a, hill, lambda);
  const auto base = gqg::verify_vertex_conditions(funcs, s, q);

  gqg::Rng rng(0x9a6eu);
  for (int k = 0; k < 8; ++k) {
    gqg::ModeCoefficients phased = a;
    const std::complex<double> phase = std::polar(1.0, rng.uniform(0.0, 2.0 * kPi));
    for (auto& v : phased.x) v *= phase;
    const auto funcs2 = gqg::build_edge_functions(s, phased, hill, lambda);
    const auto rep = gqg::verify_vertex_conditions(funcs2, s, q);
    CHECK(std::fabs(rep.continuity - base.continuity) <= 1e-12);
    CHECK(std::fabs(rep.kirchhoff - base.kirchhoff) <= 1e-12);
    CHECK(std::fabs(rep.floquet - base.floquet) <= 1e-12);
  }
}

TEST_CASE("edge representation carries phases and coupling weights", "[modes]") {
  const StackSpec s(2, 0.55);
  const QuasiMomentum q(0.9, -1.2);
  const auto mc = gqg::solve_mode(s, q, Branch::PlusOuter);

  const gqg::HillOperator hill(gqg::EdgePotential::cosine(1.0));
  const auto bands = hill.bands(-5.0, 40.0);  // unclipped first band (it dips below 0)
  const double lambda = hill.invert_discriminant(bands[0], 2.0 * mc.eta_value, 1e-12);
  const auto funcs = gqg::build_edge_functions(s, mc, hill, lambda);

  auto find = [&](const std::string& label) {
    for (const auto& f : funcs) {
      if (f.label == label) return f;
    }
    throw std::runtime_error("missing " + label);
  };
  const auto a11 = find("a11");
  const auto a12 = find("a12");
  const auto a13 = find("a13");
  const auto f1 = find("f1");
  CHECK(a11.c0 == mc.alpha(0));
  CHECK(a11.c1 == mc.beta(0));
  CHECK(std::abs(a12.c1 - std::polar(1.0, -q.theta1) * mc.beta(0)) <= 1e-15);
  CHECK(std::abs(a13.c1 - std::polar(1.0, -q.theta2) * mc.beta(0)) <= 1e-15);
  CHECK(std::abs(f1.c0 - 0.55 * mc.alpha(0)) <= 1e-15);
  CHECK(std::abs(f1.c1 - 0.55 * mc.beta(1)) <= 1e-15);
  CHECK(f1.connector);

  // Boundary values reproduce (c0, c1).
  for (const auto& f : funcs) {
    CHECK(std::abs(f.value_at0 - f.c0) <= 1e-10);
    CHECK(std::abs(f.value_at1 - f.c1) <= 1e-10);
  }

  // At theta = (0,0) the three layer edges share coefficients.
  const auto mc0 = gqg::solve_mode(s, QuasiMomentum(0.0, 0.0), Branch::PlusOuter);
  const double l0 = hill.invert_discriminant(bands[0], 2.0 * mc0.eta_value, 1e-12);
  const auto funcs0 = gqg::build_edge_functions(s, mc0, hill, l0);
  CHECK(funcs0[0].c1 == funcs0[1].c1);
  CHECK(funcs0[0].c1 == funcs0[2].c1);
}

TEST_CASE("edge functions validate their inputs", "[modes]") {
  const StackSpec s(2, 1.0);
  const auto mc = gqg::solve_mode(s, QuasiMomentum(0.4, 0.4), Branch::PlusOuter);
  const gqg::HillOperator hill(gqg::EdgePotential::zero());
  // Wrong lambda: eta mismatch.
  CHECK_THROWS_AS(gqg::build_edge_functions(s, mc, hill, 1.2345), gqg::DomainError);
  // Layer mismatch.
  CHECK_THROWS_AS(gqg::build_edge_functions(StackSpec(3, 1.0), mc, hill, 1.0), gqg::ShapeError);
}

TEST_CASE("random modes satisfy all vertex conditions to 1e-7", "[modes]") {
  const gqg::HillOperator hill(gqg::EdgePotential::cosine(2.0));
  const auto bands = hill.bands(0.0, 60.0);
  gqg::Rng rng(0x600df00du);
  int solved = 0;
  while (solved < 40) {
    const int n = (rng.next_u64() & 1u) ? 2 : 3;
    const StackSpec s(n, rng.uniform(0.1, 1.0));
    const QuasiMomentum q(rng.uniform(-kPi, kPi), rng.uniform(-kPi, kPi));
    const auto branches = gqg::branches_for(n);
    const Branch b = branches[rng.next_u64() % branches.size()];
    const double r = gqg::roots_closed_form(s, q).root(b);
    if (std::fabs(2.0 * r) > 1.98) continue;  // stay clear of band edges
    const auto& band = bands[rng.next_u64() % 2];
    double lambda;
    try {
      lambda = hill.invert_discriminant(band, 2.0 * r, 1e-12);
    } catch (const gqg::DomainError&) {
      continue;
    }
    if (std::fabs(hill.monodromy(lambda).m12) < 1e-2) continue;  // Dirichlet guard margin
    const auto mc = gqg::solve_mode(s, q, b);
    CHECK(mc.residual <= 1e-8);
    const auto funcs = gqg::build_edge_functions(s, mc, hill, lambda);
    const auto rep = gqg::verify_vertex_conditions(funcs, s, q);
    INFO("n=" << n << " t0=" << s.t0 << " branch=" << gqg::to_string(b) << " lambda=" << lambda);
    CHECK(rep.continuity <= 1e-7);
    CHECK(rep.kirchhoff <= 1e-7);
    CHECK(rep.floquet <= 1e-7);
    ++solved;
  }
}

TEST_CASE("perturbed coefficients trip the Kirchhoff detector", "[modes]") {
  const StackSpec s(2, 0.55);
  const QuasiMomentum q(0.7, 0.2);
  auto mc = gqg::solve_mode(s, q, Branch::PlusOuter);
  const gqg::HillOperator hill(gqg::EdgePotential::zero());
  const auto bands = hill.bands(0.0, 40.0);
  const double lambda = hill.invert_discriminant(bands[0], 2.0 * mc.eta_value, 1e-12);

  mc.x[0] += 1e-3;
  const auto funcs = gqg::build_edge_functions(s, mc, hill, lambda);
  const auto rep = gqg::verify_vertex_conditions(funcs, s, q);
  CHECK(rep.kirchhoff >= 1e-4);
}
