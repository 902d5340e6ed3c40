#pragma once

#include <cmath>
#include <limits>
#include <numbers>
#include <string>
#include <vector>

#include "gqg/dispersion.hpp"
#include "gqg/hill.hpp"

namespace gqg {

/// Root branches restricted to the Brillouin-zone diagonal theta2 = -theta1,
/// where F is real (1 + 2 cos theta1) and the touch points live.
struct DiagonalSlice {
  StackSpec spec;
  std::vector<double> theta1;
  std::vector<Branch> branches;
  std::vector<std::vector<double>> r;  // r[branch][sample]

  const std::vector<double>& branch_values(Branch b) const {
    for (std::size_t i = 0; i < branches.size(); ++i) {
      if (branches[i] == b) return r[i];
    }
    throw DomainError("diagonal slice: branch not present");
  }
};

inline DiagonalSlice diagonal_slice(const StackSpec& spec, double window_lo, double window_hi,
                                    int samples) {
  if (samples < 64) throw DomainError("diagonal_slice: samples must be >= 64");
  if (!(window_lo < window_hi)) throw DomainError("diagonal_slice: empty window");
  const double d = dirac_point_theta1();
  if (!((window_lo <= d && d <= window_hi) || (window_lo <= -d && -d <= window_hi))) {
    throw DomainError("diagonal_slice: window must contain a D-point candidate (+/-2pi/3)");
  }
  DiagonalSlice s{spec, {}, branches_for(spec.layers), {}};
  s.theta1.reserve(static_cast<std::size_t>(samples));
  for (int i = 0; i < samples; ++i) {
    s.theta1.push_back(window_lo + (window_hi - window_lo) * static_cast<double>(i) /
                                       static_cast<double>(samples - 1));
  }
  s.r.assign(s.branches.size(), {});
  for (auto& row : s.r) row.reserve(s.theta1.size());
  for (double t1 : s.theta1) {
    const RootSet rs = roots_closed_form(spec, QuasiMomentum(t1, -t1));
    for (std::size_t bi = 0; bi < s.branches.size(); ++bi) {
      s.r[bi].push_back(rs.root(s.branches[bi]));
    }
  }
  return s;
}

enum class TouchClass { Linear, Quadratic, None };

inline const char* to_string(TouchClass c) {
  switch (c) {
    case TouchClass::Linear: return "linear";
    case TouchClass::Quadratic: return "quadratic";
    case TouchClass::None: return "none";
  }
  return "?";
}

struct TouchFitConfig {
  double linear_window = 0.05;  // half-width for slope fits
  int samples = 65;             // one-sided sample count
  double slope_floor = 1e-3;
  double linear_ceiling = 1e-6;
  // Quadratic refits shrink the window to quad_window_scale * t0^2 so the
  // cubic term cannot contaminate the first-order coefficient.
  double quad_window_scale = 1e-3;
  double touch_tol = 1e-9;
};

/// One-sided least-squares fit r(thetaD + s*delta) - r(thetaD) =
/// linear*delta + quadratic*delta^2, delta in side*(0, window].
struct LocalFit {
  double linear = 0.0;
  double quadratic = 0.0;
  double rms = 0.0;           // of the two-term fit
  double rms_quad_only = 0.0; // of the quadratic-only fit
};

inline LocalFit fit_branch_local(const StackSpec& spec, Branch b, double theta_d, double window,
                                 int samples, int side) {
  const double r0 = roots_closed_form(spec, QuasiMomentum(theta_d, -theta_d)).root(b);
  // Normalized basis (delta/w, (delta/w)^2) keeps the normal equations well
  // conditioned at tiny windows.
  double s11 = 0.0, s12 = 0.0, s22 = 0.0, b1 = 0.0, b2 = 0.0, syy = 0.0;
  for (int j = 1; j <= samples; ++j) {
    const double frac = static_cast<double>(j) / static_cast<double>(samples);
    const double delta = side * window * frac;
    const double t1 = theta_d + delta;
    const double y = roots_closed_form(spec, QuasiMomentum(t1, -t1)).root(b) - r0;
    const double u1 = delta / window;
    const double u2 = u1 * u1;
    s11 += u1 * u1;
    s12 += u1 * u2;
    s22 += u2 * u2;
    b1 += u1 * y;
    b2 += u2 * y;
    syy += y * y;
  }
  const double det = s11 * s22 - s12 * s12;
  LocalFit fit;
  const double a_n = (b1 * s22 - b2 * s12) / det;
  const double c_n = (s11 * b2 - s12 * b1) / det;
  fit.linear = a_n / window;
  fit.quadratic = c_n / (window * window);
  const double n = static_cast<double>(samples);
  fit.rms = std::sqrt(std::max(0.0, syy - a_n * b1 - c_n * b2) / n);
  const double c_only = b2 / s22;
  fit.rms_quad_only = std::sqrt(std::max(0.0, syy - 2.0 * c_only * b2 + c_only * c_only * s22) / n);
  return fit;
}

/// Classification of a band touch with fitted constants and, where the model
/// supplies one, the closed-form reference value.
struct ConeReport {
  int layers = 0;
  double t0 = 0.0;
  double theta_d = 0.0;
  Branch upper = Branch::PlusInner, lower = Branch::MinusInner;
  TouchClass classification = TouchClass::None;
  double touch_gap = 0.0;    // |r_upper - r_lower| at theta_d
  double touch_value = 0.0;  // r at the touch point (upper branch)
  double gamma_fit = std::numeric_limits<double>::quiet_NaN();
  double linear_coeff = std::numeric_limits<double>::quiet_NaN();  // from the shrunk-window fit
  double curvature_fit = std::numeric_limits<double>::quiet_NaN();
  double reference = std::numeric_limits<double>::quiet_NaN();
  double relative_deviation = std::numeric_limits<double>::quiet_NaN();
  double fit_window_linear = 0.0;
  double fit_window_quadratic = 0.0;
  int fit_samples = 0;
  bool residual_dominance = false;
};

namespace detail {

inline double reference_constant(const StackSpec& spec, Branch upper, Branch lower,
                                 TouchClass cls) {
  const double t2 = spec.t0 * spec.t0;
  if (cls == TouchClass::Linear && spec.layers == 3 && upper == Branch::MonoPlus &&
      lower == Branch::MonoMinus) {
    return std::sqrt(1.0 / spec.big_t());
  }
  if (cls == TouchClass::Quadratic && upper == Branch::PlusInner && lower == Branch::MinusInner) {
    if (spec.layers == 2) return 1.0 / t2;
    return 1.0 / (std::numbers::sqrt2 * t2);  // trilayer quartic-family touch
  }
  return std::numeric_limits<double>::quiet_NaN();
}

}  // namespace detail

inline ConeReport classify_touch(const DiagonalSlice& slice, Branch upper, Branch lower,
                                 double theta_d, const TouchFitConfig& cfg = {}) {
  const StackSpec& spec = slice.spec;
  ConeReport rep;
  rep.layers = spec.layers;
  rep.t0 = spec.t0;
  rep.theta_d = theta_d;
  rep.upper = upper;
  rep.lower = lower;
  rep.fit_window_linear = cfg.linear_window;
  rep.fit_samples = cfg.samples;

  const RootSet at_d = roots_closed_form(spec, QuasiMomentum(theta_d, -theta_d));
  const double r_up = at_d.root(upper);
  const double r_lo = at_d.root(lower);
  rep.touch_gap = std::fabs(r_up - r_lo);
  rep.touch_value = r_up;
  if (rep.touch_gap > cfg.touch_tol) {
    rep.classification = TouchClass::None;
    return rep;
  }

  // Decide the class at a window far below the parabola's own scale (~t0^2):
  // a cone keeps its slope there, a quadratic touch loses it entirely.
  const double wq = std::min(cfg.linear_window, cfg.quad_window_scale * spec.t0 * spec.t0);
  rep.fit_window_quadratic = wq;
  const LocalFit qr = fit_branch_local(spec, upper, theta_d, wq, cfg.samples, +1);
  const LocalFit ql = fit_branch_local(spec, upper, theta_d, wq, cfg.samples, -1);
  const double a_small = std::max(std::fabs(qr.linear), std::fabs(ql.linear));

  if (a_small >= cfg.slope_floor) {
    // Slope survives at vanishing scale: linear touch. Report the slope from
    // the standard window.
    const LocalFit fr = fit_branch_local(spec, upper, theta_d, cfg.linear_window, cfg.samples, +1);
    const LocalFit fl = fit_branch_local(spec, upper, theta_d, cfg.linear_window, cfg.samples, -1);
    rep.classification = TouchClass::Linear;
    rep.gamma_fit = 0.5 * (fr.linear - fl.linear);
    rep.linear_coeff = rep.gamma_fit;
    rep.residual_dominance = fr.rms < fr.rms_quad_only && fl.rms < fl.rms_quad_only;
  } else if (a_small <= cfg.linear_ceiling) {
    rep.classification = TouchClass::Quadratic;
    rep.linear_coeff = a_small;
    rep.curvature_fit = 0.5 * (qr.quadratic + ql.quadratic);
    rep.residual_dominance = false;
  } else {
    rep.classification = TouchClass::None;
    rep.linear_coeff = a_small;
    return rep;
  }

  rep.reference = detail::reference_constant(spec, upper, lower, rep.classification);
  if (std::isfinite(rep.reference)) {
    const double fitted =
        rep.classification == TouchClass::Linear ? rep.gamma_fit : rep.curvature_fit;
    rep.relative_deviation = std::fabs(fitted - rep.reference) / std::fabs(rep.reference);
  }
  return rep;
}

/// Slope of the touch in lambda space: gamma = 2*gamma_fit / D'(lambda(theta_D)).
inline double lambda_space_slope(const ConeReport& rep, const HillOperator& hill,
                                 const HillBand& band) {
  if (rep.classification != TouchClass::Linear) {
    throw DomainError("lambda_space_slope: report does not describe a linear touch");
  }
  const double lambda_d = hill.invert_discriminant(band, 2.0 * rep.touch_value);
  const double width = band.lambda_hi - band.lambda_lo;
  if (lambda_d - band.lambda_lo < 1e-9 * width || band.lambda_hi - lambda_d < 1e-9 * width) {
    throw DerivativeDegeneracyError("lambda_space_slope: lambda(theta_D) sits at a band edge");
  }
  const double dprime = hill.discriminant_derivative(lambda_d);
  if (std::fabs(dprime) < 1e-6) {
    throw DerivativeDegeneracyError("lambda_space_slope: discriminant derivative vanishes");
  }
  return 2.0 * rep.gamma_fit / dprime;
}

/// Local minima of the gap between two branches along the full diagonal,
/// sorted by gap size; used to verify that touch locations sit at the
/// D-points independently of t0.
struct TouchLocation {
  double theta1 = 0.0;
  double gap = 0.0;
};

inline std::vector<TouchLocation> locate_touch_points(const StackSpec& spec, Branch upper,
                                                      Branch lower, int samples) {
  if (samples < 64) throw DomainError("locate_touch_points: samples must be >= 64");
  std::vector<double> ts, gaps;
  ts.reserve(static_cast<std::size_t>(samples));
  const double pi = std::numbers::pi;
  for (int i = 0; i < samples; ++i) {
    const double t1 = -pi + 2.0 * pi * static_cast<double>(i) / static_cast<double>(samples - 1);
    const RootSet rs = roots_closed_form(spec, QuasiMomentum(t1, -t1));
    ts.push_back(t1);
    gaps.push_back(rs.root(upper) - rs.root(lower));
  }
  std::vector<TouchLocation> minima;
  for (std::size_t i = 1; i + 1 < ts.size(); ++i) {
    if (gaps[i] <= gaps[i - 1] && gaps[i] <= gaps[i + 1]) {
      minima.push_back({ts[i], gaps[i]});
    }
  }
  std::sort(minima.begin(), minima.end(),
            [](const TouchLocation& a, const TouchLocation& b) { return a.gap < b.gap; });
  return minima;
}

}  // namespace gqg
