#pragma once

#include <cmath>
#include <complex>
#include <string>
#include <vector>

#include "gqg/dispersion.hpp"
#include "gqg/hill.hpp"
#include "gqg/lattice.hpp"
#include "gqg/linalg.hpp"

namespace gqg {

/// Null-space coefficients of the spectral matrix: X = [alpha_1, beta_1, ...],
/// unit norm, first significant component real positive.
struct ModeCoefficients {
  int layers = 0;
  QuasiMomentum theta;
  double eta_value = 0.0;
  ComplexVec x;  // length 2n, interleaved (alpha_i, beta_i)
  double residual = 0.0;

  std::complex<double> alpha(int i) const { return x[static_cast<std::size_t>(2 * i)]; }
  std::complex<double> beta(int i) const { return x[static_cast<std::size_t>(2 * i + 1)]; }
};

/// Solve M_n(eta, theta) X = 0 at an explicit eta value.
inline ModeCoefficients solve_mode_at(const StackSpec& spec, const QuasiMomentum& theta,
                                      double eta) {
  const ComplexMat m = build_spectral_matrix(spec, eta, theta);
  auto x = null_vector(m, 1e-10);
  if (!x) throw NoModeError("solve_mode: spectral matrix has full numerical rank (det != 0)");
  ModeCoefficients mc;
  mc.layers = spec.layers;
  mc.theta = theta;
  mc.eta_value = eta;
  mc.x = std::move(*x);
  mc.residual = residual_norm(m, mc.x);
  if (mc.residual > 1e-8) throw NoModeError("solve_mode: null vector residual exceeds 1e-8");
  return mc;
}

/// Solve at the given root branch, eta = r(theta).
inline ModeCoefficients solve_mode(const StackSpec& spec, const QuasiMomentum& theta, Branch b) {
  return solve_mode_at(spec, theta, roots_closed_form(spec, theta).root(b));
}

/// Per-edge representation u = c0 phi_{lambda,0} + c1 phi_{lambda,1} with
/// boundary data; Floquet phases and t0 weights are folded into (c0, c1).
struct EdgeFunction {
  std::string label;
  bool connector = false;
  std::complex<double> c0, c1;
  std::vector<double> x;
  std::vector<std::complex<double>> values;
  std::complex<double> value_at0, value_at1;
  std::complex<double> deriv_at0, deriv_at1;  // d/dx at the endpoints
};

inline std::vector<EdgeFunction> build_edge_functions(const StackSpec& spec,
                                                      const ModeCoefficients& mc,
                                                      const HillOperator& hill, double lambda,
                                                      int samples = 32) {
  if (spec.layers != mc.layers) {
    throw ShapeError("build_edge_functions: stack layers and coefficient layers differ");
  }
  const double eta_of_lambda = 0.5 * hill.discriminant(lambda);
  if (std::fabs(eta_of_lambda - mc.eta_value) > 1e-8) {
    throw DomainError("build_edge_functions: lambda inconsistent with eta (D(lambda)/2 != eta)");
  }
  const auto basis = hill.edge_basis(lambda, samples);  // PoleError inside the Dirichlet guard

  const std::complex<double> ph1 = std::polar(1.0, -mc.theta.theta1);
  const std::complex<double> ph2 = std::polar(1.0, -mc.theta.theta2);

  std::vector<EdgeFunction> out;
  auto add = [&](const std::string& label, bool connector, std::complex<double> c0,
                 std::complex<double> c1) {
    EdgeFunction f;
    f.label = label;
    f.connector = connector;
    f.c0 = c0;
    f.c1 = c1;
    f.x = basis.x;
    f.values.resize(basis.x.size());
    for (std::size_t k = 0; k < basis.x.size(); ++k) {
      f.values[k] = c0 * basis.phi0[k] + c1 * basis.phi1[k];
    }
    f.value_at0 = f.values.front();
    f.value_at1 = f.values.back();
    f.deriv_at0 = c0 * basis.dphi0_at0 + c1 * basis.dphi1_at0;
    f.deriv_at1 = c0 * basis.dphi0_at1 + c1 * basis.dphi1_at1;
    out.push_back(std::move(f));
  };

  for (int i = 0; i < mc.layers; ++i) {
    const std::string tag = std::to_string(i + 1);
    add("a" + tag + "1", false, mc.alpha(i), mc.beta(i));
    add("a" + tag + "2", false, mc.alpha(i), ph1 * mc.beta(i));
    add("a" + tag + "3", false, mc.alpha(i), ph2 * mc.beta(i));
  }
  const double t0 = spec.t0;
  add("f1", true, t0 * mc.alpha(0), t0 * mc.beta(1));
  if (spec.layers == 3) add("f2", true, t0 * mc.alpha(2), t0 * mc.beta(1));
  return out;
}

struct VertexCheckReport {
  double continuity = 0.0;  // max weighted-continuity violation
  double kirchhoff = 0.0;   // max weighted flux-sum violation
  double floquet = 0.0;     // max Floquet phase-relation violation

  bool within(double tol) const {
    return continuity <= tol && kirchhoff <= tol && floquet <= tol;
  }
};

inline VertexCheckReport verify_vertex_conditions(const std::vector<EdgeFunction>& funcs,
                                                  const StackSpec& spec,
                                                  const QuasiMomentum& theta) {
  auto find = [&](const std::string& label) -> const EdgeFunction& {
    for (const auto& f : funcs) {
      if (f.label == label) return f;
    }
    throw DomainError("verify_vertex_conditions: missing edge " + label);
  };

  const std::complex<double> e1 = std::polar(1.0, theta.theta1);
  const std::complex<double> e2 = std::polar(1.0, theta.theta2);
  const double t0 = spec.t0;
  VertexCheckReport rep;
  auto bump = [](double& slot, std::complex<double> v) { slot = std::max(slot, std::abs(v)); };

  for (int i = 1; i <= spec.layers; ++i) {
    const auto& a1 = find("a" + std::to_string(i) + "1");
    const auto& a2 = find("a" + std::to_string(i) + "2");
    const auto& a3 = find("a" + std::to_string(i) + "3");
    // Tail-side continuity.
    bump(rep.continuity, a1.value_at0 - a2.value_at0);
    bump(rep.continuity, a2.value_at0 - a3.value_at0);
    // Floquet phase relations at the head.
    bump(rep.floquet, a1.value_at1 - e1 * a2.value_at1);
    bump(rep.floquet, a1.value_at1 - e2 * a3.value_at1);
  }

  // Connector continuity: weighted by 1/t0 at both endpoints.
  {
    const auto& f1 = find("f1");
    bump(rep.continuity, find("a11").value_at0 - f1.value_at0 / t0);
    bump(rep.continuity, find("a21").value_at1 - f1.value_at1 / t0);
    if (spec.layers == 3) {
      const auto& f2 = find("f2");
      bump(rep.continuity, find("a21").value_at1 - f2.value_at1 / t0);
      bump(rep.continuity, find("a31").value_at0 - f2.value_at0 / t0);
    }
  }

  // Weighted Kirchhoff sums per vertex of the fundamental domain.
  auto tail_sum = [&](int i) {
    return find("a" + std::to_string(i) + "1").deriv_at0 +
           find("a" + std::to_string(i) + "2").deriv_at0 +
           find("a" + std::to_string(i) + "3").deriv_at0;
  };
  auto head_sum = [&](int i) {
    return find("a" + std::to_string(i) + "1").deriv_at1 +
           e1 * find("a" + std::to_string(i) + "2").deriv_at1 +
           e2 * find("a" + std::to_string(i) + "3").deriv_at1;
  };

  if (spec.layers == 2) {
    const auto& f1 = find("f1");
    bump(rep.kirchhoff, tail_sum(1) + t0 * f1.deriv_at0);
    bump(rep.kirchhoff, head_sum(1));
    bump(rep.kirchhoff, tail_sum(2));
    bump(rep.kirchhoff, head_sum(2) + t0 * f1.deriv_at1);
  } else {
    const auto& f1 = find("f1");
    const auto& f2 = find("f2");
    bump(rep.kirchhoff, tail_sum(1) + t0 * f1.deriv_at0);
    bump(rep.kirchhoff, head_sum(1));
    bump(rep.kirchhoff, tail_sum(2));
    bump(rep.kirchhoff, head_sum(2) + t0 * f1.deriv_at1 + t0 * f2.deriv_at1);
    bump(rep.kirchhoff, tail_sum(3) + t0 * f2.deriv_at0);
    bump(rep.kirchhoff, head_sum(3));
  }
  return rep;
}

}  // namespace gqg
