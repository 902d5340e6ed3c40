#pragma once

#include <cmath>
#include <numbers>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "gqg/errors.hpp"

namespace gqg {

/// Edge potential q0 on [0,1]. Only even-by-construction kinds are supported,
/// plus a sampled table that is validated for evenness at construction.
class EdgePotential {
 public:
  enum class Kind { Zero, CosineEven, SampledEven };

  static EdgePotential zero() { return EdgePotential(Kind::Zero, 0.0, {}, 0.0); }

  // q0(x) = amplitude * cos(2*pi*x)
  static EdgePotential cosine(double amplitude) {
    if (!std::isfinite(amplitude)) throw DomainError("cosine potential: non-finite amplitude");
    return EdgePotential(Kind::CosineEven, amplitude, {}, 0.0);
  }

  // Values on a uniform grid over [0,1] (endpoints included), linear
  // interpolation in between. Evenness q0(x)=q0(1-x) is checked against tol.
  static EdgePotential sampled(std::vector<double> values, double evenness_tol = 1e-9) {
    if (values.size() < 2) throw DomainError("sampled potential: need at least 2 samples");
    for (double v : values) {
      if (!std::isfinite(v)) throw DomainError("sampled potential: non-finite sample");
    }
    EdgePotential p(Kind::SampledEven, 0.0, std::move(values), evenness_tol);
    const double defect = p.evenness_defect();
    if (defect > evenness_tol) {
      std::ostringstream os;
      os << "sampled potential: evenness defect " << defect << " exceeds tolerance " << evenness_tol;
      throw DomainError(os.str());
    }
    return p;
  }

  Kind kind() const { return kind_; }
  double amplitude() const { return amplitude_; }
  const std::vector<double>& samples() const { return samples_; }

  // q0(x); x must lie in [0,1].
  double operator()(double x) const {
    if (!(x >= 0.0 && x <= 1.0)) throw DomainError("potential evaluation outside [0,1]");
    switch (kind_) {
      case Kind::Zero:
        return 0.0;
      case Kind::CosineEven:
        return amplitude_ * std::cos(2.0 * std::numbers::pi * x);
      case Kind::SampledEven: {
        const double pos = x * static_cast<double>(samples_.size() - 1);
        auto i = static_cast<std::size_t>(pos);
        if (i >= samples_.size() - 1) return samples_.back();
        const double frac = pos - static_cast<double>(i);
        return samples_[i] + frac * (samples_[i + 1] - samples_[i]);
      }
    }
    throw DomainError("potential: unknown kind");
  }

  // max |q0(x) - q0(1-x)| over a 101-point uniform grid.
  double evenness_defect() const {
    double worst = 0.0;
    for (int i = 0; i <= 100; ++i) {
      const double x = static_cast<double>(i) / 100.0;
      worst = std::max(worst, std::fabs((*this)(x) - (*this)(1.0 - x)));
    }
    return worst;
  }

  std::string describe() const {
    switch (kind_) {
      case Kind::Zero:
        return "zero";
      case Kind::CosineEven: {
        std::ostringstream os;
        os << "cosine(amplitude=" << amplitude_ << ")";
        return os.str();
      }
      case Kind::SampledEven: {
        std::ostringstream os;
        os << "sampled(n=" << samples_.size() << ")";
        return os.str();
      }
    }
    return "?";
  }

  bool operator==(const EdgePotential& o) const {
    return kind_ == o.kind_ && amplitude_ == o.amplitude_ && samples_ == o.samples_;
  }

 private:
  EdgePotential(Kind kind, double amplitude, std::vector<double> samples, double tol)
      : kind_(kind), amplitude_(amplitude), samples_(std::move(samples)), evenness_tol_(tol) {}

  Kind kind_;
  double amplitude_;
  std::vector<double> samples_;
  double evenness_tol_;
};

// Spec-level convenience wrapper.
inline double evaluate_potential(const EdgePotential& p, double x) { return p(x); }

}  // namespace gqg
