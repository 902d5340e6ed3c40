#pragma once

#include <cmath>
#include <complex>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "gqg/config.hpp"
#include "gqg/cones.hpp"
#include "gqg/dispersion.hpp"
#include "gqg/hill.hpp"
#include "gqg/lattice.hpp"
#include "gqg/modes.hpp"
#include "gqg/random.hpp"
#include "gqg/spectrum.hpp"
#include "gqg/surfaces.hpp"

namespace gqg {

struct CheckResult {
  std::string name;
  bool pass = false;
  std::string detail;
};

namespace detail {

inline CheckResult check(const std::string& name, bool pass, const std::string& detail) {
  return {name, pass, detail};
}

template <class F>
CheckResult guarded(const std::string& name, const F& body) {
  try {
    return body();
  } catch (const std::exception& e) {
    return {name, false, std::string("exception: ") + e.what()};
  }
}

}  // namespace detail

/// The aggregated invariant suite behind the `check` command. Pure
/// recomputation; no filesystem access.
inline std::vector<CheckResult> run_self_checks(const RunConfig& cfg) {
  using detail::check;
  using detail::guarded;
  std::vector<CheckResult> out;
  const double pi = std::numbers::pi;

  out.push_back(guarded("wronskian-unit-determinant", [&] {
    double worst = 0.0;
    const std::vector<EdgePotential> kinds = {EdgePotential::zero(), EdgePotential::cosine(3.0),
                                              cfg.potential()};
    for (const auto& p : kinds) {
      const HillOperator hill(p, cfg.steps);
      for (int i = 0; i < 200; ++i) {
        const double lam = -10.0 + 110.0 * i / 199.0;
        const auto m = hill.monodromy(lam);
        worst = std::max(worst, std::fabs(m.det() - 1.0));
        worst = std::max(worst, std::fabs(m.m11 - m.m22));
      }
    }
    std::ostringstream os;
    os << "max |det-1| and |m11-m22| = " << worst << " (tol 1e-9)";
    return check("wronskian-unit-determinant", worst <= 1e-9, os.str());
  }));

  out.push_back(guarded("free-discriminant-closed-form", [&] {
    const HillOperator hill(EdgePotential::zero(), cfg.steps);
    double worst = 0.0;
    for (int i = 0; i < 400; ++i) {
      const double lam = 400.0 * i / 399.0;
      worst = std::max(worst, std::fabs(hill.discriminant(lam) - 2.0 * std::cos(std::sqrt(lam))));
    }
    std::ostringstream os;
    os << "max |D - 2cos(sqrt(lambda))| = " << worst << " on [0,400] (tol 1e-8)";
    return check("free-discriminant-closed-form", worst <= 1e-8, os.str());
  }));

  out.push_back(guarded("eta-half-discriminant", [&] {
    const HillOperator hill(cfg.potential(), cfg.steps);
    double worst = 0.0;
    int used = 0;
    for (int i = 0; i < 150; ++i) {
      const double lam = -5.0 + 90.0 * i / 149.0;
      try {
        worst = std::max(worst, std::fabs(hill.eta(lam) - 0.5 * hill.discriminant(lam)));
        ++used;
      } catch (const PoleError&) {
      }
    }
    std::ostringstream os;
    os << "max |eta - D/2| = " << worst << " over " << used << " samples (tol 1e-8)";
    return check("eta-half-discriminant", worst <= 1e-8 && used > 100, os.str());
  }));

  out.push_back(guarded("integrator-step-doubling", [&] {
    double worst = 0.0;
    for (const auto& p : {EdgePotential::zero(), EdgePotential::cosine(3.0)}) {
      const HillOperator coarse(p, 4096), fine(p, 8192);
      for (int i = 0; i <= 20; ++i) {
        const double lam = -10.0 + 330.0 * i / 20.0;
        worst = std::max(worst, std::fabs(coarse.discriminant(lam) - fine.discriminant(lam)));
      }
    }
    std::ostringstream os;
    os << "max |D_4096 - D_8192| = " << worst << " on [-10,320] (tol 1e-10)";
    return check("integrator-step-doubling", worst < 1e-10, os.str());
  }));

  out.push_back(guarded("inversion-roundtrip", [&] {
    double worst = 0.0;
    for (const auto& p : {EdgePotential::zero(), EdgePotential::cosine(3.0)}) {
      const HillOperator hill(p, cfg.steps, cfg.scan_step, cfg.dirichlet_guard);
      for (const auto& band : hill.bands(0.0, 60.0)) {
        if (band.clipped_lo || band.clipped_hi) continue;
        for (int i = 1; i <= 7; ++i) {
          const double lam = band.lambda_lo + (band.lambda_hi - band.lambda_lo) * i / 8.0;
          worst = std::max(worst,
                           std::fabs(hill.invert_discriminant(band, hill.discriminant(lam)) - lam));
        }
      }
    }
    std::ostringstream os;
    os << "max roundtrip error = " << worst << " (tol 1e-8)";
    return check("inversion-roundtrip", worst <= 1e-8, os.str());
  }));

  out.push_back(guarded("vertex-self-adjointness", [&] {
    bool ok = true;
    double worst = 0.0;
    for (int layers : {2, 3}) {
      for (double t0 : {0.1, 0.55, 1.0, 2.0, cfg.t0}) {
        for (const auto& pair : build_vertex_conditions(StackSpec(layers, t0))) {
          const auto rep = check_self_adjointness(pair);
          ok = ok && rep.ok && rep.ab_t_max_abs <= 1e-12;
          worst = std::max(worst, std::max(rep.symmetry_defect, rep.ab_t_max_abs));
        }
      }
    }
    std::ostringstream os;
    os << "rank full, max |A B^T| = " << worst << " (tol 1e-12)";
    return check("vertex-self-adjointness", ok, os.str());
  }));

  out.push_back(guarded("structure-function-identity", [&] {
    Rng rng(cfg.seed);
    double worst = 0.0;
    for (int i = 0; i < 1000; ++i) {
      const QuasiMomentum q(rng.uniform(-pi, pi), rng.uniform(-pi, pi));
      worst = std::max(worst, std::fabs(std::norm(f_theta(q)) - f_abs_squared(q)));
      worst = std::max(worst, std::abs(f_theta(q) - std::conj(f_theta(q.negated()))));
    }
    std::ostringstream os;
    os << "max closed-form / conjugation defect = " << worst << " (tol 1e-12)";
    return check("structure-function-identity", worst <= 1e-12, os.str());
  }));

  out.push_back(guarded("structure-function-range", [&] {
    bool ok = true;
    const double cell = 2.0 * pi / 255.0;
    for (int i = 0; i < 256 && ok; ++i) {
      for (int j = 0; j < 256; ++j) {
        const double t1 = -pi + 2.0 * pi * i / 255.0;
        const double t2 = -pi + 2.0 * pi * j / 255.0;
        const double u = f_abs_squared(QuasiMomentum(t1, t2));
        if (u < -1e-12 || u > 9.0 + 1e-12) ok = false;
        if (u >= 9.0 - 1e-9 && std::hypot(t1, t2) > cell) ok = false;
        if (u <= 1e-9) {
          const double d1 = std::hypot(t1 - 2 * pi / 3, t2 + 2 * pi / 3);
          const double d2 = std::hypot(t1 + 2 * pi / 3, t2 - 2 * pi / 3);
          if (std::min(d1, d2) > cell) ok = false;
        }
        if (!ok) break;
      }
    }
    return check("structure-function-range", ok,
                 "|F|^2 in [0,9]; 9 near the origin only; zeros only at the D-points");
  }));

  out.push_back(guarded("root-oracle-equivalence", [&] {
    Rng rng(cfg.seed ^ 0x9e3779b9u);
    double worst = 0.0;
    for (int i = 0; i < 2000; ++i) {
      const int n = (rng.next_u64() & 1u) ? 2 : 3;
      const StackSpec s(n, rng.uniform(0.1, 2.0));
      const QuasiMomentum q(rng.uniform(-pi, pi), rng.uniform(-pi, pi));
      const auto c = roots_closed_form(s, q);
      const auto m = roots_numeric(s, q);
      for (std::size_t k = 0; k < c.values.size(); ++k) {
        worst = std::max(worst, std::fabs(c.values[k] - m.values[k]));
      }
    }
    std::ostringstream os;
    os << "max |closed - numeric| = " << worst << " over 2000 samples (tol 1e-10)";
    return check("root-oracle-equivalence", worst <= 1e-10, os.str());
  }));

  out.push_back(guarded("inner-discriminant-nonnegative", [&] {
    double worst = 0.0;
    for (int n : {2, 3}) {
      for (double t0 : {0.1, 0.55, 1.0}) {
        const StackSpec s(n, t0);
        for (int i = 0; i < 512; ++i) {
          for (int j = 0; j < 512; ++j) {
            const QuasiMomentum q(-pi + 2 * pi * i / 511.0, -pi + 2 * pi * j / 511.0);
            worst = std::min(worst, inner_discriminant(s, q));
          }
        }
      }
    }
    std::ostringstream os;
    os << "min inner discriminant = " << worst << " (tol -1e-12)";
    return check("inner-discriminant-nonnegative", worst >= -1e-12, os.str());
  }));

  out.push_back(guarded("bilayer-root-extrema", [&] {
    const auto grid = ThetaGrid::uniform(64, 64);
    double worst = 0.0;
    for (double t0 : {0.1, 0.55, 1.0}) {
      const StackSpec s(2, t0);
      for (Branch b : branches_for(2)) {
        const auto exact = bilayer_root_range(s, b);
        const auto seen = root_range_on_grid(s, b, grid);
        worst = std::max({worst, std::fabs(seen.min - exact.min), std::fabs(seen.max - exact.max)});
      }
    }
    std::ostringstream os;
    os << "max extremum defect = " << worst << " (tol 1e-9)";
    return check("bilayer-root-extrema", worst <= 1e-9, os.str());
  }));

  out.push_back(guarded("root-evenness-and-sorting", [&] {
    Rng rng(cfg.seed ^ 0x55555555u);
    bool ok = true;
    for (int i = 0; i < 300 && ok; ++i) {
      const int n = (rng.next_u64() & 1u) ? 2 : 3;
      const StackSpec s(n, rng.uniform(0.05, 2.0));
      const QuasiMomentum q(rng.uniform(-pi, pi), rng.uniform(-pi, pi));
      const auto rs = roots_closed_form(s, q);
      const auto neg = roots_closed_form(s, q.negated());
      for (std::size_t k = 0; k < rs.values.size(); ++k) {
        if (k + 1 < rs.values.size() && rs.values[k] > rs.values[k + 1]) ok = false;
        if (std::fabs(rs.values[k] + rs.values[rs.values.size() - 1 - k]) > 1e-12) ok = false;
        if (std::fabs(rs.values[k] - neg.values[k]) > 1e-14) ok = false;
      }
    }
    return check("root-evenness-and-sorting", ok, "sorted, +/- paired, even in theta");
  }));

  out.push_back(guarded("trilayer-root-magnitude", [&] {
    const auto grid = ThetaGrid::uniform(96, 96);
    double extreme = 0.0;
    for (double t0 : {0.1, 0.55, 1.0}) {
      const StackSpec s(3, t0);
      extreme = std::max(extreme, root_range_on_grid(s, Branch::PlusOuter, grid).max);
      extreme = std::max(extreme, -root_range_on_grid(s, Branch::MinusOuter, grid).min);
    }
    std::ostringstream os;
    os << "max |root| = " << extreme << " for t0 <= 1 (tol 1+1e-9)";
    return check("trilayer-root-magnitude", extreme <= 1.0 + 1e-9, os.str());
  }));

  out.push_back(guarded("cone-classification", [&] {
    const double td = dirac_point_theta1();
    bool ok = true;
    std::ostringstream os;
    for (double t0 : {0.1, 0.25, 0.55, 1.0}) {
      const auto slice3 = diagonal_slice(StackSpec(3, t0), td - 0.25, td + 0.25, 257);
      const auto lin = classify_touch(slice3, Branch::MonoPlus, Branch::MonoMinus, td);
      const auto slice2 = diagonal_slice(StackSpec(2, t0), td - 0.25, td + 0.25, 257);
      const auto quad = classify_touch(slice2, Branch::PlusInner, Branch::MinusInner, td);
      const bool here = lin.classification == TouchClass::Linear &&
                        lin.relative_deviation <= 0.005 &&
                        quad.classification == TouchClass::Quadratic &&
                        std::fabs(quad.linear_coeff) <= 1e-6 && quad.relative_deviation <= 0.01;
      ok = ok && here;
      if (!here) os << " t0=" << t0 << " failed;";
    }
    if (ok) os << "trilayer linear within 0.5%, bilayer quadratic within 1%";
    return check("cone-classification", ok, os.str());
  }));

  out.push_back(guarded("touch-location-t0-independence", [&] {
    const int samples = 1024;
    const double cell = 2.0 * pi / (samples - 1);
    bool ok = true;
    for (int n : {2, 3}) {
      for (double t0 : {0.1, 0.25, 0.55, 1.0}) {
        const StackSpec s(n, t0);
        const Branch up = (n == 2) ? Branch::PlusInner : Branch::MonoPlus;
        const Branch lo = (n == 2) ? Branch::MinusInner : Branch::MonoMinus;
        const auto minima = locate_touch_points(s, up, lo, samples);
        if (minima.size() < 2) {
          ok = false;
          continue;
        }
        ok = ok && std::fabs(std::fabs(minima[0].theta1) - dirac_point_theta1()) <= cell;
        ok = ok && std::fabs(std::fabs(minima[1].theta1) - dirac_point_theta1()) <= cell;
      }
    }
    return check("touch-location-t0-independence", ok,
                 "gap minima within one grid cell of +/-(2pi/3, -2pi/3)");
  }));

  out.push_back(guarded("mode-consistency", [&] {
    const HillOperator hill(cfg.potential(), cfg.steps, cfg.scan_step, cfg.dirichlet_guard);
    const auto bands = hill.bands(cfg.lambda_min, cfg.lambda_max);
    if (bands.empty()) {
      return check("mode-consistency", false, "no bands in the configured lambda range");
    }
    Rng rng(cfg.seed ^ 0xabcdefu);
    double worst = 0.0;
    int solved = 0, attempts = 0;
    while (solved < 20 && attempts < 4000) {
      ++attempts;
      const int n = (rng.next_u64() & 1u) ? 2 : 3;
      const StackSpec s(n, rng.uniform(0.1, 1.0));
      const QuasiMomentum q(rng.uniform(-pi, pi), rng.uniform(-pi, pi));
      const auto branches = branches_for(n);
      const Branch b = branches[rng.next_u64() % branches.size()];
      const double r = roots_closed_form(s, q).root(b);
      if (std::fabs(2.0 * r) > 1.98) continue;
      const auto& band = bands[rng.next_u64() % bands.size()];
      double lam;
      try {
        lam = hill.invert_discriminant(band, 2.0 * r, 1e-12);
      } catch (const DomainError&) {
        continue;
      }
      if (std::fabs(hill.monodromy(lam).m12) < 1e-2) continue;
      const auto mc = solve_mode(s, q, b);
      const auto rep = verify_vertex_conditions(build_edge_functions(s, mc, hill, lam), s, q);
      worst = std::max({worst, mc.residual * 10.0, rep.continuity, rep.kirchhoff, rep.floquet});
      ++solved;
    }
    std::ostringstream os;
    os << solved << " modes, max violation = " << worst << " (tol 1e-7)";
    return check("mode-consistency", solved == 20 && worst <= 1e-7, os.str());
  }));

  out.push_back(guarded("spectral-identity", [&] {
    const auto grid = ThetaGrid::uniform(32, 32);
    bool ok = true;
    for (const auto& p : {EdgePotential::zero(), EdgePotential::cosine(3.0)}) {
      const HillOperator hill(p, cfg.steps, cfg.scan_step, cfg.dirichlet_guard);
      std::vector<std::pair<double, double>> direct;
      for (const auto& b : hill.bands(0.0, 60.0)) direct.emplace_back(b.lambda_lo, b.lambda_hi);
      const auto md = merge_intervals(direct, 1e-8);
      for (int n : {2, 3}) {
        for (double t0 : {0.1, 1.0}) {
          const auto via = ac_bands_via_dispersion(StackSpec(n, t0), hill, 0.0, 60.0, grid);
          const auto mv = merge_intervals(via, 1e-8);
          if (mv.size() != md.size()) {
            ok = false;
            continue;
          }
          for (std::size_t k = 0; k < mv.size(); ++k) {
            ok = ok && std::fabs(mv[k].first - md[k].first) <= 1e-8 &&
                 std::fabs(mv[k].second - md[k].second) <= 1e-8;
          }
        }
      }
    }
    return check("spectral-identity", ok,
                 "dispersion-built ac spectrum equals the Hill bands (tol 1e-8)");
  }));

  out.push_back(guarded("surface-containment", [&] {
    const HillOperator hill(cfg.potential(), cfg.steps, cfg.scan_step, cfg.dirichlet_guard);
    const auto bands = hill.bands(cfg.lambda_min, cfg.lambda_max);
    if (bands.empty()) {
      return check("surface-containment", false, "no bands in the configured lambda range");
    }
    const auto grid = ThetaGrid::uniform(16, 16);
    const auto surfaces =
        dispersion_surface(StackSpec(cfg.layers, cfg.t0), hill, grid, bands.front());
    bool ok = true;
    for (const auto& surf : surfaces) {
      for (const auto& smp : surf.samples) {
        ok = ok && smp.lambda >= bands.front().lambda_lo - 1e-9 &&
             smp.lambda <= bands.front().lambda_hi + 1e-9;
      }
    }
    return check("surface-containment", ok, "all surface samples inside their band");
  }));

  return out;
}

}  // namespace gqg
