#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <limits>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "gqg/errors.hpp"
#include "gqg/lattice.hpp"
#include "gqg/linalg.hpp"
#include "gqg/theta_grid.hpp"

namespace gqg {

/// Dispersion branch labels. The quartic family comes in outer/inner pairs on
/// each side of zero; the trilayer adds the monolayer-like pair from the
/// 2x2 block of the spectral matrix. Pointwise ordering is
/// minus_outer <= mono_minus <= minus_inner <= plus_inner <= mono_plus <= plus_outer.
enum class Branch {
  MinusOuter,
  MonoMinus,
  MinusInner,
  PlusInner,
  MonoPlus,
  PlusOuter,
};

inline const char* to_string(Branch b) {
  switch (b) {
    case Branch::MinusOuter: return "minus_outer";
    case Branch::MonoMinus: return "mono_minus";
    case Branch::MinusInner: return "minus_inner";
    case Branch::PlusInner: return "plus_inner";
    case Branch::MonoPlus: return "mono_plus";
    case Branch::PlusOuter: return "plus_outer";
  }
  return "?";
}

inline std::vector<Branch> branches_for(int layers) {
  if (layers == 2) {
    return {Branch::MinusOuter, Branch::MinusInner, Branch::PlusInner, Branch::PlusOuter};
  }
  if (layers == 3) {
    return {Branch::MinusOuter, Branch::MonoMinus, Branch::MinusInner,
            Branch::PlusInner,  Branch::MonoPlus,  Branch::PlusOuter};
  }
  throw UnsupportedError("branches: layers must be 2 or 3");
}

/// The 2n x 2n spectral matrix M_n(eta, theta) whose vanishing determinant
/// characterizes the non-flat dispersion relation.
inline ComplexMat build_spectral_matrix(const StackSpec& spec, double eta,
                                        const QuasiMomentum& theta) {
  const std::complex<double> F = f_theta(theta);
  const std::complex<double> Fc = std::conj(F);
  const double T = spec.big_t();
  const double t2 = spec.t0 * spec.t0;
  if (spec.layers == 2) {
    ComplexMat m(4, 4);
    m(0, 0) = -T * eta; m(0, 1) = Fc;          m(0, 3) = t2;
    m(1, 0) = F;        m(1, 1) = -3.0 * eta;
    m(2, 2) = -3.0 * eta; m(2, 3) = Fc;
    m(3, 0) = t2;       m(3, 2) = F;           m(3, 3) = -T * eta;
    return m;
  }
  const double Tt = spec.big_t_tilde();
  ComplexMat m(6, 6);
  // Upper-left 4x4 block: like the bilayer matrix with Tt in the corner.
  m(0, 0) = -T * eta; m(0, 1) = Fc;          m(0, 3) = t2;
  m(1, 0) = F;        m(1, 1) = -3.0 * eta;
  m(2, 2) = -3.0 * eta; m(2, 3) = Fc;
  m(3, 0) = t2;       m(3, 2) = F;           m(3, 3) = -Tt * eta;
  // Coupling blocks and the monolayer-like 2x2 corner.
  m(3, 4) = t2;
  m(4, 3) = t2;
  m(4, 4) = -T * eta; m(4, 5) = Fc;
  m(5, 4) = F;        m(5, 5) = -3.0 * eta;
  return m;
}

/// det M_n as a polynomial in eta; coefficient k multiplies eta^k. All odd
/// coefficients vanish.
struct DetPolynomial {
  std::vector<double> coeffs;

  double eval(double eta) const {
    double acc = 0.0;
    for (std::size_t k = coeffs.size(); k-- > 0;) acc = acc * eta + coeffs[k];
    return acc;
  }

  // Scale used for relative residual checks.
  double scale(double eta) const {
    double acc = 0.0;
    const double e = std::max(1.0, std::fabs(eta));
    for (std::size_t k = coeffs.size(); k-- > 0;) acc = acc * e + std::fabs(coeffs[k]);
    return acc;
  }
};

inline DetPolynomial det_polynomial(const StackSpec& spec, const QuasiMomentum& theta) {
  const double u = f_abs_squared(theta);
  const double T = spec.big_t();
  const double t4 = spec.t0 * spec.t0 * spec.t0 * spec.t0;
  DetPolynomial p;
  if (spec.layers == 2) {
    p.coeffs = {u * u, 0.0, -(9.0 * t4 + 6.0 * T * u), 0.0, 9.0 * T * T};
  } else {
    const double Tt = spec.big_t_tilde();
    p.coeffs = {-u * u * u,
                0.0,
                18.0 * t4 * u + 3.0 * (2.0 * T + Tt) * u * u,
                0.0,
                -(54.0 * T * t4 + 9.0 * (T * T + 2.0 * T * Tt) * u),
                0.0,
                27.0 * T * T * Tt};
  }
  return p;
}

/// The 2n real roots of det M_n in eta at one quasimomentum, sorted
/// ascending with branch labels attached.
struct RootSet {
  QuasiMomentum theta;
  int layers = 0;
  std::vector<Branch> branches;  // parallel to values, ascending by value
  std::vector<double> values;

  double root(Branch b) const {
    for (std::size_t i = 0; i < branches.size(); ++i) {
      if (branches[i] == b) return values[i];
    }
    throw DomainError("root set: branch not present for this layer count");
  }
};

namespace detail {

// Inner discriminant of the quadratic (in s = eta^2) family; analytically
// nonnegative for t0 > 0.
inline double inner_discriminant(const StackSpec& spec, double u) {
  const double t4 = spec.t0 * spec.t0 * spec.t0 * spec.t0;
  const double T = spec.big_t();
  if (spec.layers == 2) {
    const double g = 9.0 * t4 + 6.0 * T * u;
    return g * g - 36.0 * T * T * u * u;
  }
  const double Tt = spec.big_t_tilde();
  const double g = 18.0 * t4 + 3.0 * (T + Tt) * u;
  return g * g - 36.0 * T * Tt * u * u;
}

// Same quantity with the cancellation factored out:
//   n=2: G^2 - 36 T^2 u^2   = 27 t^4 (3 t^4 + 4 T u)
//   n=3: G^2 - 36 T Tt u^2 = 9 t^4 (36 t^4 + 12 (T+Tt) u + u^2)
// Exact for u >= 0, and free of the G^2-dominated subtraction.
inline double inner_discriminant_stable(const StackSpec& spec, double u) {
  const double t4 = spec.t0 * spec.t0 * spec.t0 * spec.t0;
  const double T = spec.big_t();
  if (spec.layers == 2) return 27.0 * t4 * (3.0 * t4 + 4.0 * T * u);
  const double Tt = spec.big_t_tilde();
  return 9.0 * t4 * (36.0 * t4 + 12.0 * (T + Tt) * u + u * u);
}

inline double checked_sqrt_inner(double inner, double scale) {
  if (inner < 0.0) {
    if (inner < -1e-12 * std::max(1.0, scale)) {
      std::ostringstream os;
      os << "roots: inner discriminant " << inner << " negative beyond tolerance";
      throw ConvergenceError(os.str());
    }
    inner = 0.0;
  }
  return std::sqrt(inner);
}

}  // namespace detail

inline double inner_discriminant(const StackSpec& spec, const QuasiMomentum& theta) {
  return detail::inner_discriminant(spec, f_abs_squared(theta));
}

inline RootSet roots_closed_form(const StackSpec& spec, const QuasiMomentum& theta) {
  const double u = std::max(0.0, f_abs_squared(theta));
  const double t4 = spec.t0 * spec.t0 * spec.t0 * spec.t0;
  const double T = spec.big_t();
  RootSet rs;
  rs.theta = theta;
  rs.layers = spec.layers;
  if (spec.layers == 2) {
    const double g = 9.0 * t4 + 6.0 * T * u;
    const double sq = detail::checked_sqrt_inner(detail::inner_discriminant_stable(spec, u), g * g);
    const double s_plus = (g + sq) / (18.0 * T * T);
    // Product form of the small root; avoids the g - sq cancellation.
    const double s_minus = (u * u) / (9.0 * T * T * s_plus);
    const double ro = std::sqrt(s_plus), ri = std::sqrt(s_minus);
    rs.branches = {Branch::MinusOuter, Branch::MinusInner, Branch::PlusInner, Branch::PlusOuter};
    rs.values = {-ro, -ri, ri, ro};
    return rs;
  }
  const double Tt = spec.big_t_tilde();
  const double g = 18.0 * t4 + 3.0 * (T + Tt) * u;
  const double sq = detail::checked_sqrt_inner(detail::inner_discriminant_stable(spec, u), g * g);
  const double s_plus = (g + sq) / (18.0 * T * Tt);
  const double s_minus = (u * u) / (9.0 * T * Tt * s_plus);
  const double ro = std::sqrt(s_plus), ri = std::sqrt(s_minus);
  const double rm = std::sqrt(u / (3.0 * T));
  rs.branches = {Branch::MinusOuter, Branch::MonoMinus, Branch::MinusInner,
                 Branch::PlusInner,  Branch::MonoPlus,  Branch::PlusOuter};
  rs.values = {-ro, -rm, -ri, ri, rm, ro};
  return rs;
}

namespace detail {

// Roots of A*s^2 + B*s + C (two real roots expected). Extended precision
// plus the q-splitting keeps near-double roots resolvable at 1e-10. A
// negative computed discriminant clamps to a double root at the vertex;
// the caller's residual check is the error gate.
inline std::array<long double, 2> quadratic_roots_l(long double A, long double B, long double C) {
  long double disc = B * B - 4.0L * A * C;
  if (disc < 0.0L) disc = 0.0L;
  const long double sq = sqrtl(disc);
  const long double q = (B >= 0.0L) ? -0.5L * (B + sq) : -0.5L * (B - sq);
  long double r1, r2;
  if (q != 0.0L) {
    r1 = q / A;
    r2 = C / q;
  } else {
    r1 = r2 = 0.0L;
  }
  if (r1 > r2) std::swap(r1, r2);
  return {r1, r2};
}

inline std::array<double, 2> quadratic_roots(double a, double b, double c) {
  const auto r = quadratic_roots_l(a, b, c);
  return {static_cast<double>(r[0]), static_cast<double>(r[1])};
}

// Three real roots of the monic cubic s^3 + a2 s^2 + a1 s + a0. The
// trigonometric form seeds Newton; the most isolated root is then deflated
// out and the remaining (possibly near-double) pair is solved as a
// quadratic, all in extended precision.
inline std::array<double, 3> cubic_roots(double a2d, double a1d, double a0d) {
  const long double a2 = a2d, a1 = a1d, a0 = a0d;
  const auto f = [&](long double x) { return ((x + a2) * x + a1) * x + a0; };
  const auto df = [&](long double x) { return (3.0L * x + 2.0L * a2) * x + a1; };

  const long double p = a1 - a2 * a2 / 3.0L;
  const long double q = 2.0L * a2 * a2 * a2 / 27.0L - a2 * a1 / 3.0L + a0;
  std::array<long double, 3> s{};
  if (p >= 0.0L) {
    // Only reachable when p underflows to ~0 in the all-real-roots regime.
    const long double r = cbrtl(-q) - a2 / 3.0L;
    s = {r, r, r};
  } else {
    const long double m = 2.0L * sqrtl(-p / 3.0L);
    long double arg = 3.0L * q / (p * m);
    arg = std::clamp(arg, -1.0L, 1.0L);
    const long double phi = acosl(arg) / 3.0L;
    for (int k = 0; k < 3; ++k) {
      s[static_cast<std::size_t>(k)] =
          m * cosl(phi - 2.0L * std::numbers::pi_v<long double> * static_cast<long double>(k) /
                             3.0L) -
          a2 / 3.0L;
    }
  }

  // Most isolated root: largest distance to its nearest sibling.
  int far = 0;
  long double best = -1.0L;
  for (int k = 0; k < 3; ++k) {
    long double nearest = 1e300L;
    for (int j = 0; j < 3; ++j) {
      if (j != k) nearest = std::min(nearest, fabsl(s[static_cast<std::size_t>(k)] - s[static_cast<std::size_t>(j)]));
    }
    if (nearest > best) {
      best = nearest;
      far = k;
    }
  }

  long double rho = s[static_cast<std::size_t>(far)];
  long double fr = fabsl(f(rho));
  for (int it = 0; it < 8 && fr > 0.0L; ++it) {
    const long double d = df(rho);
    if (d == 0.0L) break;
    const long double candidate = rho - f(rho) / d;
    const long double fc = fabsl(f(candidate));
    if (!(fc < fr)) break;  // keep the last improving iterate
    rho = candidate;
    fr = fc;
  }

  // Synthetic division by (s - rho).
  const long double qb = a2 + rho;
  const long double qc = a1 + rho * qb;
  const auto pair = quadratic_roots_l(1.0L, qb, qc);

  std::array<double, 3> out = {static_cast<double>(rho), static_cast<double>(pair[0]),
                               static_cast<double>(pair[1])};
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace detail

/// Independent root oracle: solves det_polynomial as a polynomial in
/// s = eta^2 with generic quadratic/cubic machinery, then takes +/- sqrt(s).
inline RootSet roots_numeric(const StackSpec& spec, const QuasiMomentum& theta) {
  const DetPolynomial poly = det_polynomial(spec, theta);
  std::vector<double> s_roots;
  if (spec.layers == 2) {
    const auto r = detail::quadratic_roots(poly.coeffs[4], poly.coeffs[2], poly.coeffs[0]);
    s_roots = {r[0], r[1]};
  } else {
    const double lead = poly.coeffs[6];
    const auto r =
        detail::cubic_roots(poly.coeffs[4] / lead, poly.coeffs[2] / lead, poly.coeffs[0] / lead);
    s_roots = {r[0], r[1], r[2]};
  }
  RootSet rs;
  rs.theta = theta;
  rs.layers = spec.layers;
  std::vector<double> etas;
  for (double s : s_roots) {
    if (s < 0.0) {
      if (s < -1e-10) throw ConvergenceError("roots_numeric: negative eta^2 root");
      s = 0.0;
    }
    const double e = std::sqrt(s);
    etas.push_back(-e);
    etas.push_back(e);
  }
  std::sort(etas.begin(), etas.end());
  for (double e : etas) {
    const double resid = std::fabs(poly.eval(e));
    if (resid > 1e-8 * poly.scale(e)) {
      std::ostringstream os;
      os << "roots_numeric: residual " << resid << " at eta=" << e << " exceeds tolerance";
      throw ConvergenceError(os.str());
    }
  }
  rs.values = etas;
  // Positional labels: the interlacing s_inner <= u/(3 T0) <= s_outer holds
  // pointwise, so ascending order fixes the branch identity. branches_for
  // lists branches in ascending pointwise order already.
  rs.branches = branches_for(spec.layers);
  return rs;
}

/// Exact per-branch root range for the bilayer (closed-form extremal values;
/// maxima at theta=(0,0), minima at the D-points, mirrored for the negative
/// branches).
struct RootRange {
  double min = 0.0, max = 0.0;
};

inline RootRange bilayer_root_range(const StackSpec& spec, Branch b) {
  if (spec.layers != 2) throw UnsupportedError("bilayer_root_range: layers must be 2");
  const double T = spec.big_t();
  const double t2 = spec.t0 * spec.t0;
  switch (b) {
    case Branch::PlusOuter: return {t2 / T, 1.0};
    case Branch::PlusInner: return {0.0, 3.0 / T};
    case Branch::MinusInner: return {-3.0 / T, 0.0};
    case Branch::MinusOuter: return {-1.0, -t2 / T};
    default: throw DomainError("bilayer_root_range: mono branches absent for n=2");
  }
}

inline RootRange root_range_on_grid(const StackSpec& spec, Branch b, const ThetaGrid& grid) {
  RootRange r{std::numeric_limits<double>::infinity(), -std::numeric_limits<double>::infinity()};
  for (double t1 : grid.axis1) {
    for (double t2 : grid.axis2) {
      const double v = roots_closed_form(spec, QuasiMomentum(t1, t2)).root(b);
      r.min = std::min(r.min, v);
      r.max = std::max(r.max, v);
    }
  }
  return r;
}

}  // namespace gqg
