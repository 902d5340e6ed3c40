#pragma once

#include <cmath>
#include <complex>
#include <numbers>
#include <string>
#include <vector>

#include "gqg/errors.hpp"
#include "gqg/linalg.hpp"

namespace gqg {

/// Bernal stack description: number of layers and interlayer coupling weight.
struct StackSpec {
  int layers = 2;
  double t0 = 0.55;

  StackSpec() = default;
  StackSpec(int n, double coupling) : layers(n), t0(coupling) {
    if (layers != 2 && layers != 3) throw UnsupportedError("stack: layers must be 2 or 3");
    if (!(t0 > 0.0) || !std::isfinite(t0)) throw DomainError("stack: t0 must be positive");
  }

  double big_t() const { return 3.0 + t0 * t0; }         // T0
  double big_t_tilde() const { return 3.0 + 2.0 * t0 * t0; }  // T0~ (trilayer middle vertex)

  // The model intends 0 < t0 <= 1; the spectral results hold for any t0 > 0.
  bool outside_model_range() const { return t0 > 1.0; }
};

/// Quasimomentum on the Brillouin torus, components wrapped into [-pi, pi].
struct QuasiMomentum {
  double theta1 = 0.0, theta2 = 0.0;

  QuasiMomentum() = default;
  QuasiMomentum(double t1, double t2) : theta1(wrap(t1)), theta2(wrap(t2)) {}

  static double wrap(double t) {
    const double two_pi = 2.0 * std::numbers::pi;
    double x = std::remainder(t, two_pi);
    if (x < -std::numbers::pi) x += two_pi;
    return x;
  }

  QuasiMomentum negated() const { return QuasiMomentum(-theta1, -theta2); }
};

// Structure function F(theta) = 1 + e^{i theta1} + e^{i theta2}.
inline std::complex<double> f_theta(const QuasiMomentum& q) {
  return 1.0 + std::polar(1.0, q.theta1) + std::polar(1.0, q.theta2);
}

// |F|^2 by the trigonometric closed form.
inline double f_abs_squared(const QuasiMomentum& q) {
  return 1.0 + 8.0 * std::cos(0.5 * (q.theta1 - q.theta2)) * std::cos(0.5 * q.theta1) *
                   std::cos(0.5 * q.theta2);
}

inline double dirac_point_theta1() { return 2.0 * std::numbers::pi / 3.0; }

inline QuasiMomentum dirac_point(int sign) {
  const double t = dirac_point_theta1();
  return sign >= 0 ? QuasiMomentum(t, -t) : QuasiMomentum(-t, t);
}

/// Vertex condition pair (A, B): A u = B u' at the vertex, edges ordered
/// layer edges first, then connectors.
struct VertexConditionPair {
  std::string vertex_class;
  int degree = 0;
  int layer_edges = 0;
  int connector_edges = 0;
  RealMat A, B;
};

struct SelfAdjointnessReport {
  bool ok = false;
  int rank_ab = 0;          // rank of [A B]
  double symmetry_defect = 0.0;  // max |(AB^T)_{ij} - (AB^T)_{ji}|
  double ab_t_max_abs = 0.0;     // max |(AB^T)_{ij}|
};

struct EdgeDescriptor {
  std::string label;
  bool connector = false;
  std::string tail;  // vertex at x=0
  std::string head;  // vertex at x=1
};

struct VertexClassInfo {
  std::string vertex_class;
  std::string vertex;  // representative slot in the fundamental domain
  int degree = 0;      // degree in the full graph
  int layer_edges = 0;
  int connector_edges = 0;
};

/// Edge/vertex inventory of the fundamental domain: 3n layer edges, n-1
/// connector representatives. Full-graph vertex degrees are carried for the
/// vertex-condition matrices (connected vertices have 3 connectors per
/// attached neighbouring layer).
struct FundamentalDomain {
  int layers = 0;
  std::vector<EdgeDescriptor> edges;
  std::vector<VertexClassInfo> vertex_classes;

  int layer_edge_count() const {
    int c = 0;
    for (const auto& e : edges) c += e.connector ? 0 : 1;
    return c;
  }
  int connector_edge_count() const {
    int c = 0;
    for (const auto& e : edges) c += e.connector ? 1 : 0;
    return c;
  }
};

inline FundamentalDomain build_fundamental_domain(const StackSpec& spec) {
  FundamentalDomain d;
  d.layers = spec.layers;
  for (int i = 1; i <= spec.layers; ++i) {
    const std::string vi1 = "v" + std::to_string(i) + "1";
    const std::string vi2 = "v" + std::to_string(i) + "2";
    for (int j = 1; j <= 3; ++j) {
      d.edges.push_back({"a" + std::to_string(i) + std::to_string(j), false, vi1, vi2});
    }
  }
  if (spec.layers == 2) {
    d.edges.push_back({"f1", true, "v11", "v22"});
    d.vertex_classes = {
        {"A-layer1-connected", "v11", 6, 3, 3},
        {"B-layer1-unconnected", "v12", 3, 3, 0},
        {"A-layer2-unconnected", "v21", 3, 3, 0},
        {"B-layer2-connected", "v22", 6, 3, 3},
    };
  } else {
    d.edges.push_back({"f1", true, "v11", "v22"});
    d.edges.push_back({"f2", true, "v31", "v22"});
    d.vertex_classes = {
        {"A-layer1-connected", "v11", 6, 3, 3},
        {"B-layer1-unconnected", "v12", 3, 3, 0},
        {"A-layer2-unconnected", "v21", 3, 3, 0},
        {"B-layer2-doubly-connected", "v22", 9, 3, 6},
        {"A-layer3-connected", "v31", 6, 3, 3},
        {"B-layer3-unconnected", "v32", 3, 3, 0},
    };
  }
  return d;
}

/// Weighted continuity chain (d-1 rows of A) plus the weighted Kirchhoff row
/// (last row of B). Layer-edge values are equal; connector values carry the
/// t0 weight; the flux row weighs connector derivatives by t0.
inline VertexConditionPair make_vertex_conditions(const std::string& vertex_class, int layer_edges,
                                                  int connector_edges, double t0) {
  const int d = layer_edges + connector_edges;
  VertexConditionPair pair;
  pair.vertex_class = vertex_class;
  pair.degree = d;
  pair.layer_edges = layer_edges;
  pair.connector_edges = connector_edges;
  pair.A = RealMat(d, d);
  pair.B = RealMat(d, d);

  int row = 0;
  for (int j = 0; j + 1 < layer_edges; ++j, ++row) {
    pair.A(row, j) = 1.0;
    pair.A(row, j + 1) = -1.0;
  }
  if (connector_edges > 0) {
    // t0 * u_layer - u_connector = 0
    pair.A(row, layer_edges - 1) = t0;
    pair.A(row, layer_edges) = -1.0;
    ++row;
    for (int j = layer_edges; j + 1 < d; ++j, ++row) {
      pair.A(row, j) = t0;
      pair.A(row, j + 1) = -t0;
    }
  }
  for (int j = 0; j < layer_edges; ++j) pair.B(d - 1, j) = 1.0;
  for (int j = layer_edges; j < d; ++j) pair.B(d - 1, j) = t0;
  return pair;
}

inline std::vector<VertexConditionPair> build_vertex_conditions(const StackSpec& spec) {
  const FundamentalDomain d = build_fundamental_domain(spec);
  std::vector<VertexConditionPair> out;
  out.reserve(d.vertex_classes.size());
  for (const auto& vc : d.vertex_classes) {
    out.push_back(make_vertex_conditions(vc.vertex_class, vc.layer_edges, vc.connector_edges, spec.t0));
  }
  return out;
}

inline SelfAdjointnessReport check_self_adjointness(const VertexConditionPair& pair) {
  const int d = pair.A.rows;
  if (pair.A.rows != pair.A.cols || pair.B.rows != pair.B.cols || pair.A.rows != pair.B.rows) {
    throw ShapeError("check_self_adjointness: A and B must be square and equally sized");
  }
  RealMat ab(d, 2 * d);
  for (int i = 0; i < d; ++i) {
    for (int j = 0; j < d; ++j) {
      ab(i, j) = pair.A(i, j);
      ab(i, d + j) = pair.B(i, j);
    }
  }
  SelfAdjointnessReport rep;
  rep.rank_ab = matrix_rank(ab, 1e-12);

  // AB^T (real matrices, so B* = B^T).
  RealMat prod(d, d);
  for (int i = 0; i < d; ++i) {
    for (int j = 0; j < d; ++j) {
      double sum = 0.0;
      for (int k = 0; k < d; ++k) sum += pair.A(i, k) * pair.B(j, k);
      prod(i, j) = sum;
    }
  }
  for (int i = 0; i < d; ++i) {
    for (int j = 0; j < d; ++j) {
      rep.symmetry_defect = std::max(rep.symmetry_defect, std::fabs(prod(i, j) - prod(j, i)));
      rep.ab_t_max_abs = std::max(rep.ab_t_max_abs, std::fabs(prod(i, j)));
    }
  }
  rep.ok = (rep.rank_ab == d) && (rep.symmetry_defect <= 1e-12);
  return rep;
}

}  // namespace gqg
