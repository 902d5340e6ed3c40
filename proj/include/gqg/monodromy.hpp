#pragma once

#include <cmath>
#include <utility>
#include <vector>

#include "gqg/errors.hpp"
#include "gqg/potential.hpp"

namespace gqg {

inline constexpr int kDefaultSteps = 4096;

/// Transfer matrix of -phi'' + q0 phi = lambda phi across [0,1]:
/// columns are the solutions with initial data (1,0) and (0,1).
struct MonodromyMatrix {
  double m11 = 1.0, m12 = 0.0, m21 = 0.0, m22 = 1.0;
  double lambda = 0.0;
  int steps = 0;

  double det() const { return m11 * m22 - m12 * m21; }
  double trace() const { return m11 + m22; }
};

/// Fixed-step classical 4th-order integrator for the edge ODE. The potential
/// is tabulated once at all stage abscissae (k/(2*steps)); every subsequent
/// monodromy evaluation is a pure function of lambda.
class EdgeIntegrator {
 public:
  explicit EdgeIntegrator(EdgePotential p, int steps = kDefaultSteps)
      : potential_(std::move(p)), steps_(steps) {
    if (steps_ < 64) throw DomainError("integrator: steps must be >= 64");
    q_.resize(2 * static_cast<std::size_t>(steps_) + 1);
    for (std::size_t k = 0; k < q_.size(); ++k) {
      q_[k] = potential_(static_cast<double>(k) / static_cast<double>(2 * steps_));
    }
  }

  const EdgePotential& potential() const { return potential_; }
  int steps() const { return steps_; }

  MonodromyMatrix monodromy(double lambda) const {
    if (!std::isfinite(lambda)) throw DomainError("monodromy: non-finite lambda");
    double c = 1.0, dc = 0.0;  // phi(0)=1, phi'(0)=0
    double s = 0.0, ds = 1.0;  // phi(0)=0, phi'(0)=1
    const double h = 1.0 / static_cast<double>(steps_);
    for (int i = 0; i < steps_; ++i) {
      const double w0 = q_[2 * static_cast<std::size_t>(i)] - lambda;
      const double wm = q_[2 * static_cast<std::size_t>(i) + 1] - lambda;
      const double w1 = q_[2 * static_cast<std::size_t>(i) + 2] - lambda;
      rk4_step(c, dc, h, w0, wm, w1);
      rk4_step(s, ds, h, w0, wm, w1);
    }
    MonodromyMatrix m;
    m.m11 = c;
    m.m12 = s;
    m.m21 = dc;
    m.m22 = ds;
    m.lambda = lambda;
    m.steps = steps_;
    return m;
  }

  /// Fundamental solutions recorded on a near-uniform grid of `samples`+1
  /// points (record positions snap to integration steps).
  struct Trajectory {
    std::vector<double> x, c, dc, s, ds;
    MonodromyMatrix end;
  };

  Trajectory trajectory(double lambda, int samples) const {
    if (!std::isfinite(lambda)) throw DomainError("trajectory: non-finite lambda");
    if (samples < 1) throw DomainError("trajectory: samples must be >= 1");
    Trajectory t;
    double c = 1.0, dc = 0.0, s = 0.0, ds = 1.0;
    const double h = 1.0 / static_cast<double>(steps_);
    int next_record = 0;
    auto record = [&](int step_index) {
      t.x.push_back(static_cast<double>(step_index) * h);
      t.c.push_back(c);
      t.dc.push_back(dc);
      t.s.push_back(s);
      t.ds.push_back(ds);
    };
    for (int i = 0; i < steps_; ++i) {
      if (i * samples >= next_record * steps_) {
        record(i);
        ++next_record;
      }
      const double w0 = q_[2 * static_cast<std::size_t>(i)] - lambda;
      const double wm = q_[2 * static_cast<std::size_t>(i) + 1] - lambda;
      const double w1 = q_[2 * static_cast<std::size_t>(i) + 2] - lambda;
      rk4_step(c, dc, h, w0, wm, w1);
      rk4_step(s, ds, h, w0, wm, w1);
    }
    record(steps_);
    t.end.m11 = c;
    t.end.m12 = s;
    t.end.m21 = dc;
    t.end.m22 = ds;
    t.end.lambda = lambda;
    t.end.steps = steps_;
    return t;
  }

 private:
  // One RK4 step for y'' = w(x) y with w sampled at x, x+h/2, x+h.
  static void rk4_step(double& y, double& v, double h, double w0, double wm, double w1) {
    const double k1y = v;
    const double k1v = w0 * y;
    const double k2y = v + 0.5 * h * k1v;
    const double k2v = wm * (y + 0.5 * h * k1y);
    const double k3y = v + 0.5 * h * k2v;
    const double k3v = wm * (y + 0.5 * h * k2y);
    const double k4y = v + h * k3v;
    const double k4v = w1 * (y + h * k3y);
    y += h / 6.0 * (k1y + 2.0 * k2y + 2.0 * k3y + k4y);
    v += h / 6.0 * (k1v + 2.0 * k2v + 2.0 * k3v + k4v);
  }

  EdgePotential potential_;
  int steps_;
  std::vector<double> q_;
};

/// One-shot variant matching the operation signature.
inline MonodromyMatrix monodromy(double lambda, const EdgePotential& p, int steps = kDefaultSteps) {
  return EdgeIntegrator(p, steps).monodromy(lambda);
}

}  // namespace gqg
