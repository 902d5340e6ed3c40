#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <optional>
#include <sstream>
#include <vector>

#include "gqg/errors.hpp"
#include "gqg/monodromy.hpp"
#include "gqg/potential.hpp"

namespace gqg {

/// Maximal lambda-interval on which |D| <= 2 and D is monotone. Touching
/// bands are reported separately and share an endpoint.
struct HillBand {
  int index = 0;  // 1-based within the queried range
  double lambda_lo = 0.0;
  double lambda_hi = 0.0;
  int direction = 0;  // sign of D' on the band
  bool clipped_lo = false;
  bool clipped_hi = false;
};

struct DirichletSpectrum {
  std::vector<double> eigenvalues;  // strictly increasing
};

/// One-dimensional Hill operator numerics for a single edge: discriminant,
/// eta, Dirichlet spectrum, bands, and discriminant inversion. Immutable
/// after construction, so instances can be shared across threads.
class HillOperator {
 public:
  explicit HillOperator(EdgePotential p, int steps = kDefaultSteps, double scan_step = 0.05,
                        double dirichlet_guard = 1e-8)
      : integ_(std::move(p), steps), scan_step_(scan_step), guard_(dirichlet_guard) {
    if (scan_step_ <= 0.0) throw DomainError("hill: scan step must be positive");
  }

  const EdgePotential& potential() const { return integ_.potential(); }
  int steps() const { return integ_.steps(); }
  double dirichlet_guard() const { return guard_; }
  const EdgeIntegrator& integrator() const { return integ_; }

  MonodromyMatrix monodromy(double lambda) const { return integ_.monodromy(lambda); }

  double discriminant(double lambda) const { return integ_.monodromy(lambda).trace(); }

  // Central difference with one Richardson step; h chosen for a ~1e-10
  // absolute error floor at discriminant scale O(1).
  double discriminant_derivative(double lambda, double h = 1e-6) const {
    const auto slope = [&](double step) {
      return (discriminant(lambda + step) - discriminant(lambda - step)) / (2.0 * step);
    };
    const double dh = slope(h);
    const double dh2 = slope(0.5 * h);
    return (4.0 * dh2 - dh) / 3.0;
  }

  // eta(lambda) = phi'_{lambda,1}(1)/phi'_{lambda,1}(0) = m22. Undefined within
  // the guard distance of a Dirichlet eigenvalue (|m12| small).
  double eta(double lambda) const {
    const MonodromyMatrix m = monodromy(lambda);
    if (std::fabs(m.m12) < guard_) {
      std::ostringstream os;
      os << "eta: lambda=" << lambda << " is within the Dirichlet guard (|m12|=" << std::fabs(m.m12)
         << " < " << guard_ << ")";
      throw PoleError(os.str());
    }
    return m.m22;
  }

  // Zeros of lambda -> m12(lambda): sign-change scan plus bisection.
  DirichletSpectrum dirichlet_eigenvalues(double lo, double hi) const {
    DirichletSpectrum out;
    if (!(lo < hi)) return out;
    const auto f = [&](double x) { return monodromy(x).m12; };
    double xa = lo;
    double fa = f(xa);
    const int cells = static_cast<int>(std::ceil((hi - lo) / scan_step_));
    for (int i = 1; i <= cells; ++i) {
      const double xb = std::min(lo + scan_step_ * i, hi);
      const double fb = f(xb);
      if (fa == 0.0) {
        push_unique(out.eigenvalues, xa);
      } else if (fa * fb < 0.0) {
        push_unique(out.eigenvalues, bisect(f, xa, xb, fa, fb, 1e-12));
      }
      xa = xb;
      fa = fb;
    }
    if (fa == 0.0) push_unique(out.eigenvalues, xa);
    return out;
  }

  std::vector<HillBand> bands(double lo, double hi) const {
    std::vector<HillBand> out;
    if (!(lo < hi)) return out;

    std::vector<double> edges = band_edge_candidates(lo, hi);

    std::vector<double> points;
    points.push_back(lo);
    for (double e : edges) {
      if (e > lo + 1e-12 && e < hi - 1e-12) points.push_back(e);
    }
    points.push_back(hi);
    std::sort(points.begin(), points.end());

    for (std::size_t i = 0; i + 1 < points.size(); ++i) {
      const double a = points[i], b = points[i + 1];
      if (b - a < 1e-12) continue;
      const double mid = 0.5 * (a + b);
      if (std::fabs(discriminant(mid)) >= 2.0) continue;
      HillBand band;
      band.index = static_cast<int>(out.size()) + 1;
      band.lambda_lo = a;
      band.lambda_hi = b;
      const double da = discriminant(a), db = discriminant(b);
      band.direction = (db > da) ? 1 : -1;
      band.clipped_lo = (i == 0) && std::fabs(da) < 2.0 - 1e-9;
      band.clipped_hi = (i + 2 == points.size()) && std::fabs(db) < 2.0 - 1e-9;
      out.push_back(band);
    }
    return out;
  }

  // Unique lambda in the band with D(lambda) = target, by monotone bisection.
  double invert_discriminant(const HillBand& band, double target, double tol = 1e-10) const {
    if (!(target >= -2.0 && target <= 2.0)) {
      throw DomainError("invert_discriminant: target outside [-2,2]");
    }
    double a = band.lambda_lo, b = band.lambda_hi;
    double fa = discriminant(a) - target;
    double fb = discriminant(b) - target;
    // Endpoint targets resolve to the stored edges. Bisecting instead would
    // chase integration noise around the tangency at a touch point.
    if (std::fabs(fa) <= 1e-9) return a;
    if (std::fabs(fb) <= 1e-9) return b;
    if (fa * fb > 0.0) {
      // Attained only up to root-finding tolerance at an edge, or not at all
      // (clipped band).
      if (std::fabs(fa) <= 1e-8) return a;
      if (std::fabs(fb) <= 1e-8) return b;
      throw DomainError("invert_discriminant: target not attained on this band");
    }
    while (b - a > tol) {
      const double mid = 0.5 * (a + b);
      const double fm = discriminant(mid) - target;
      if (fm == 0.0) return mid;
      if (fa * fm < 0.0) {
        b = mid;
        fb = fm;
      } else {
        a = mid;
        fa = fm;
      }
    }
    return 0.5 * (a + b);
  }

  /// Values of the basis pair phi_{lambda,0} (1 at x=0, 0 at x=1) and
  /// phi_{lambda,1} (0 at x=0, 1 at x=1) with endpoint derivatives. Undefined
  /// at Dirichlet eigenvalues.
  struct BasisPair {
    double lambda = 0.0;
    std::vector<double> x, phi0, phi1;
    double dphi0_at0 = 0.0, dphi0_at1 = 0.0;
    double dphi1_at0 = 0.0, dphi1_at1 = 0.0;
  };

  BasisPair edge_basis(double lambda, int samples = 32) const {
    const auto traj = integ_.trajectory(lambda, samples);
    const MonodromyMatrix& m = traj.end;
    if (std::fabs(m.m12) < guard_) {
      throw PoleError("edge_basis: lambda is within the Dirichlet guard");
    }
    BasisPair b;
    b.lambda = lambda;
    b.x = traj.x;
    b.phi0.resize(traj.x.size());
    b.phi1.resize(traj.x.size());
    const double ratio = m.m11 / m.m12;
    for (std::size_t i = 0; i < traj.x.size(); ++i) {
      b.phi0[i] = traj.c[i] - ratio * traj.s[i];
      b.phi1[i] = traj.s[i] / m.m12;
    }
    b.dphi0_at0 = -m.m11 / m.m12;
    b.dphi0_at1 = -1.0 / m.m12;
    b.dphi1_at0 = 1.0 / m.m12;
    b.dphi1_at1 = m.m22 / m.m12;
    return b;
  }

 private:
  static void push_unique(std::vector<double>& v, double x, double tol = 1e-10) {
    if (v.empty() || std::fabs(v.back() - x) > tol) v.push_back(x);
  }

  template <class F>
  static double bisect(const F& f, double a, double b, double fa, double fb, double tol) {
    (void)fb;
    while (b - a > tol) {
      const double mid = 0.5 * (a + b);
      const double fm = f(mid);
      if (fm == 0.0) return mid;
      if (fa * fm < 0.0) {
        b = mid;
      } else {
        a = mid;
        fa = fm;
      }
    }
    return 0.5 * (a + b);
  }

  // Band edges: simple crossings of D = +/-2 (sign-change scan + bisection)
  // and closed-gap touch points. For even potentials every band edge has
  // m12*m21 = 0, and a closed gap coincides with a Dirichlet eigenvalue, so
  // touch points are refined through the Dirichlet finder instead of the
  // sign scan (|D|-2 has a double root there and never changes sign).
  // A closed gap whose computed D dips a few ulps past +/-2 shows up as a
  // pair of crossings bracketing a noise-level micro-gap; the merge pass
  // collapses such pairs back into one touch point.
  std::vector<double> band_edge_candidates(double lo, double hi) const {
    // |D|-2 overshoots below this are integrator noise, not open gaps.
    constexpr double kTouchTol = 1e-9;
    std::vector<double> edges;
    const auto fplus = [&](double x) { return discriminant(x) - 2.0; };
    const auto fminus = [&](double x) { return discriminant(x) + 2.0; };

    double xa = lo;
    double fpa = fplus(xa), fma = fminus(xa);
    const int cells = static_cast<int>(std::ceil((hi - lo) / scan_step_));
    for (int i = 1; i <= cells; ++i) {
      const double xb = std::min(lo + scan_step_ * i, hi);
      const double fpb = fplus(xb), fmb = fminus(xb);
      if (fpa == 0.0) edges.push_back(xa);
      if (fma == 0.0) edges.push_back(xa);
      if (fpa * fpb < 0.0) edges.push_back(bisect(fplus, xa, xb, fpa, fpb, 1e-12));
      if (fma * fmb < 0.0) edges.push_back(bisect(fminus, xa, xb, fma, fmb, 1e-12));
      xa = xb;
      fpa = fpb;
      fma = fmb;
    }
    if (fpa == 0.0) edges.push_back(xa);
    if (fma == 0.0) edges.push_back(xa);

    const auto dirichlet = dirichlet_eigenvalues(lo, hi);
    for (double mu : dirichlet.eigenvalues) {
      const double overshoot = std::fabs(discriminant(mu)) - 2.0;
      if (overshoot < -kTouchTol) continue;  // strictly inside a band: not an edge
      if (overshoot > kTouchTol) {
        // mu sits inside a decisively open gap; if the coarse scan missed its
        // edges (narrow gap), recover them by a fine local scan. Duplicates
        // of coarse-scan crossings fall out in the dedupe; when the gap is
        // wider than the scan radius the fallback point lands mid-gap where
        // it cannot create a band.
        const double side = (discriminant(mu) > 0.0) ? 2.0 : -2.0;
        const auto g = [&](double x) { return discriminant(x) - side; };
        if (!fine_scan_pair(g, mu, scan_step_, edges)) edges.push_back(mu);
      } else {
        edges.push_back(mu);  // touch point (closed gap)
      }
    }

    std::sort(edges.begin(), edges.end());
    std::vector<double> unique;
    for (double e : edges) push_unique(unique, e, 1e-9);

    // Merge crossing pairs whose interior never rises decisively above
    // |D| = 2: one touch point, placed at the Dirichlet eigenvalue when one
    // is present.
    std::vector<double> merged;
    std::size_t i = 0;
    while (i < unique.size()) {
      if (i + 1 < unique.size() && unique[i + 1] - unique[i] < 1e-3) {
        const double a = unique[i], b = unique[i + 1];
        const double mid_over = std::fabs(discriminant(0.5 * (a + b))) - 2.0;
        if (mid_over >= -kTouchTol && mid_over <= kTouchTol) {
          double touch = 0.5 * (a + b);
          for (double mu : dirichlet.eigenvalues) {
            if (mu >= a - 1e-6 && mu <= b + 1e-6) {
              touch = mu;
              break;
            }
          }
          merged.push_back(touch);
          i += 2;
          continue;
        }
      }
      merged.push_back(unique[i]);
      ++i;
    }
    std::vector<double> out;
    for (double e : merged) push_unique(out, e, 1e-9);
    return out;
  }

  template <class F>
  static bool fine_scan_pair(const F& g, double center, double radius, std::vector<double>& edges) {
    bool found = false;
    const int sub = 256;
    for (int dir : {-1, +1}) {
      double xa = center;
      double ga = g(xa);
      for (int j = 1; j <= sub; ++j) {
        const double xb = center + dir * radius * static_cast<double>(j) / sub;
        const double gb = g(xb);
        if (ga * gb < 0.0) {
          const double left = std::min(xa, xb), right = std::max(xa, xb);
          edges.push_back(bisect(g, left, right, g(left), g(right), 1e-12));
          found = true;
          break;
        }
        xa = xb;
        ga = gb;
      }
    }
    return found;
  }

  EdgeIntegrator integ_;
  double scan_step_;
  double guard_;
};

// Operation-level wrappers.
inline double discriminant(double lambda, const EdgePotential& p) {
  return HillOperator(p).discriminant(lambda);
}

inline double eta(double lambda, const EdgePotential& p) { return HillOperator(p).eta(lambda); }

inline DirichletSpectrum dirichlet_eigenvalues(const EdgePotential& p, double lo, double hi) {
  return HillOperator(p).dirichlet_eigenvalues(lo, hi);
}

inline std::vector<HillBand> hill_bands(const EdgePotential& p, double lo, double hi) {
  return HillOperator(p).bands(lo, hi);
}

inline double invert_discriminant(const HillBand& band, const EdgePotential& p, double target) {
  return HillOperator(p).invert_discriminant(band, target);
}

}  // namespace gqg
