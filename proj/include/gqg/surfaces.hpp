#pragma once

#include <cmath>
#include <limits>
#include <string>
#include <thread>
#include <vector>

#include "gqg/dispersion.hpp"
#include "gqg/hill.hpp"
#include "gqg/theta_grid.hpp"

namespace gqg {

struct SurfaceSample {
  double theta1 = 0.0, theta2 = 0.0, lambda = 0.0;
};

namespace detail {

/// Precomputed lambda -> D table on one band. Inversion stays monotone
/// bisection on the true discriminant; the table only supplies the
/// bracketing cell (its entries are true evaluations, so the bracket signs
/// are exact).
class BandDiscriminantTable {
 public:
  BandDiscriminantTable(const HillOperator& hill, const HillBand& band, int cells = 4096)
      : hill_(hill), band_(band), lam_(static_cast<std::size_t>(cells) + 1),
        d_(static_cast<std::size_t>(cells) + 1) {
    for (std::size_t i = 0; i < lam_.size(); ++i) {
      lam_[i] = band.lambda_lo + (band.lambda_hi - band.lambda_lo) * static_cast<double>(i) /
                                     static_cast<double>(cells);
      d_[i] = hill.discriminant(lam_[i]);
    }
    increasing_ = d_.back() > d_.front();
  }

  double d_min() const { return std::min(d_.front(), d_.back()); }
  double d_max() const { return std::max(d_.front(), d_.back()); }

  double invert(double target, double tol = 1e-10) const {
    if (std::fabs(d_.front() - target) <= 1e-9) return lam_.front();
    if (std::fabs(d_.back() - target) <= 1e-9) return lam_.back();
    if (target < d_min() || target > d_max()) {
      throw DomainError("invert_discriminant: target not attained on this band");
    }
    // Bracketing cell by binary search over the (monotone up to noise) table.
    std::size_t lo = 0, hi = d_.size() - 1;
    while (hi - lo > 1) {
      const std::size_t mid = (lo + hi) / 2;
      const bool go_left = increasing_ ? (d_[mid] > target) : (d_[mid] < target);
      if (go_left) {
        hi = mid;
      } else {
        lo = mid;
      }
    }
    // The table can be locally non-monotone at noise level near touch
    // edges; widen until the cell genuinely brackets.
    while ((d_[lo] - target) * (d_[hi] - target) > 0.0) {
      if (lo > 0) {
        --lo;
      } else if (hi + 1 < d_.size()) {
        ++hi;
      } else {
        break;
      }
      if ((d_[lo] - target) * (d_[hi] - target) > 0.0 && lo > 0 && hi + 1 < d_.size()) {
        ++hi;
      }
    }
    double a = lam_[lo], b = lam_[hi];
    double fa = d_[lo] - target;
    if (fa == 0.0) return a;
    while (b - a > tol) {
      const double mid = 0.5 * (a + b);
      const double fm = hill_.discriminant(mid) - target;
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

 private:
  const HillOperator& hill_;
  const HillBand& band_;
  std::vector<double> lam_, d_;
  bool increasing_ = true;
};

// Deterministic parallel map over [0, n): each index is computed
// independently and written to its own slot, so the result does not depend
// on the thread schedule.
template <class F>
void parallel_for(std::size_t n, const F& body) {
  const unsigned hw = std::thread::hardware_concurrency();
  const unsigned workers =
      std::min<unsigned>(std::max(1u, hw), static_cast<unsigned>(std::max<std::size_t>(n, 1)));
  if (workers <= 1 || n < 2) {
    for (std::size_t i = 0; i < n; ++i) body(i);
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (unsigned w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      for (std::size_t i = w; i < n; i += workers) body(i);
    });
  }
  for (auto& t : pool) t.join();
}

}  // namespace detail

/// One dispersion sheet over the theta grid: either a root branch mapped
/// through the discriminant inverse on one Hill band, or a flat Dirichlet
/// sheet. `clipped` counts grid nodes where 2r(theta) left the attainable
/// discriminant range of the band.
struct DispersionSurface {
  int band_index = 0;
  std::string branch;  // branch label, or "flat" for Dirichlet sheets
  bool flat = false;
  double flat_lambda = 0.0;  // only for flat sheets
  int clipped = 0;
  std::vector<SurfaceSample> samples;
};

inline std::vector<DispersionSurface> dispersion_surface(const StackSpec& spec,
                                                         const HillOperator& hill,
                                                         const ThetaGrid& grid,
                                                         const HillBand& band) {
  if (grid.axis1.size() < 2 || grid.axis2.size() < 2) {
    throw DomainError("dispersion_surface: grid must be at least 2x2");
  }
  std::vector<DispersionSurface> out;
  const auto branches = branches_for(spec.layers);

  const detail::BandDiscriminantTable table(hill, band);
  // Attainable discriminant range on this band (narrower than [-2,2] only
  // when the band was clipped by the requested lambda range).
  const double d_min = table.d_min();
  const double d_max = table.d_max();

  const std::size_t n1 = grid.axis1.size();
  const std::size_t n2 = grid.axis2.size();
  for (Branch b : branches) {
    DispersionSurface surf;
    surf.band_index = band.index;
    surf.branch = to_string(b);

    // Grid rows are independent; lambda values land in per-slot storage, so
    // the assembly below is schedule-independent.
    std::vector<double> lambdas(n1 * n2, std::numeric_limits<double>::quiet_NaN());
    detail::parallel_for(n1, [&](std::size_t i1) {
      const double t1 = grid.axis1[i1];
      for (std::size_t i2 = 0; i2 < n2; ++i2) {
        const QuasiMomentum theta(t1, grid.axis2[i2]);
        const double target = 2.0 * roots_closed_form(spec, theta).root(b);
        if (target < d_min - 1e-12 || target > d_max + 1e-12) continue;
        const double clamped = std::clamp(std::clamp(target, d_min, d_max), -2.0, 2.0);
        lambdas[i1 * n2 + i2] = table.invert(clamped);
      }
    });

    surf.samples.reserve(n1 * n2);
    for (std::size_t i1 = 0; i1 < n1; ++i1) {
      for (std::size_t i2 = 0; i2 < n2; ++i2) {
        const double lambda = lambdas[i1 * n2 + i2];
        if (std::isnan(lambda)) {
          ++surf.clipped;
        } else {
          surf.samples.push_back({grid.axis1[i1], grid.axis2[i2], lambda});
        }
      }
    }
    out.push_back(std::move(surf));
  }

  // One flat sheet per Dirichlet eigenvalue in the band closure.
  const auto dirichlet = hill.dirichlet_eigenvalues(band.lambda_lo - 1e-9, band.lambda_hi + 1e-9);
  for (double mu : dirichlet.eigenvalues) {
    if (mu < band.lambda_lo - 1e-9 || mu > band.lambda_hi + 1e-9) continue;
    DispersionSurface surf;
    surf.band_index = band.index;
    surf.branch = "flat";
    surf.flat = true;
    surf.flat_lambda = mu;
    surf.samples.reserve(grid.size());
    for (double t1 : grid.axis1) {
      for (double t2 : grid.axis2) surf.samples.push_back({t1, t2, mu});
    }
    out.push_back(std::move(surf));
  }
  return out;
}

}  // namespace gqg
