#pragma once

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

#include "gqg/errors.hpp"
#include "gqg/lattice.hpp"

namespace gqg {

/// Product grid over the Brillouin zone [-pi,pi]^2. The symmetry points
/// (0 and +/-2pi/3 on each axis) are force-included so that root extrema and
/// the D-points are sampled exactly.
struct ThetaGrid {
  std::vector<double> axis1, axis2;

  std::size_t size() const { return axis1.size() * axis2.size(); }

  static ThetaGrid uniform(int n1, int n2, bool force_symmetry_points = true) {
    if (n1 < 2 || n2 < 2) throw DomainError("theta grid: need at least 2x2 nodes");
    ThetaGrid g;
    g.axis1 = axis(n1, force_symmetry_points);
    g.axis2 = axis(n2, force_symmetry_points);
    return g;
  }

 private:
  static std::vector<double> axis(int n, bool force) {
    std::vector<double> v;
    v.reserve(static_cast<std::size_t>(n) + 3);
    const double pi = std::numbers::pi;
    for (int i = 0; i < n; ++i) {
      v.push_back(-pi + 2.0 * pi * static_cast<double>(i) / static_cast<double>(n - 1));
    }
    if (force) {
      for (double s : {0.0, dirac_point_theta1(), -dirac_point_theta1()}) v.push_back(s);
    }
    std::sort(v.begin(), v.end());
    std::vector<double> out;
    for (double x : v) {
      if (out.empty() || x - out.back() > 1e-12) out.push_back(x);
    }
    return out;
  }
};

}  // namespace gqg
