// Verification instruments: finite-difference oracles, the Zoutendijk series
// ledger, the descent-ratio audit from the convergence analysis, and an
// empirical probe for the curvature bound along retraction rays.
#ifndef RCG_DIAGNOSTICS_HPP
#define RCG_DIAGNOSTICS_HPP

#include <cmath>
#include <random>
#include <vector>

#include "rcg/cg.hpp"
#include "rcg/core.hpp"

namespace rcg {

/// Central finite difference of a scalar curve. order 1 gives
/// (f(a+h) - f(a-h)) / 2h, order 2 gives (f(a+h) - 2 f(a) + f(a-h)) / h^2.
/// Domain violations inside the curve propagate as the curve's own error.
template <class F>
double fd_directional(F&& f_curve, double alpha, int order, double h) {
  detail::require(order == 1 || order == 2, "fd_directional: order is 1 or 2");
  detail::require(h > 0.0, "fd_directional: h > 0");
  if (order == 1) {
    return (f_curve(alpha + h) - f_curve(alpha - h)) / (2.0 * h);
  }
  return (f_curve(alpha + h) - 2.0 * f_curve(alpha) + f_curve(alpha - h)) /
         (h * h);
}

/// Default step balancing truncation against roundoff at double precision.
inline double fd_default_h(int order, double alpha = 0.0) {
  return order == 1 ? 1e-6 * (1.0 + std::abs(alpha)) : 1e-4;
}

/// cos of the angle between the steepest descent direction -grad and eta:
///   cos(theta) = -<grad, eta> / (||grad|| ||eta||).
template <manifold M>
double cos_theta(const M& m, const typename M::Point& x,
                 const typename M::Tangent& grad,
                 const typename M::Tangent& eta) {
  const double gn = m.norm(x, grad);
  const double en = m.norm(x, eta);
  if (gn == 0.0 || en == 0.0) {
    throw undefined_angle_error("cos_theta: zero gradient or direction");
  }
  return -m.inner(x, grad, eta) / (gn * en);
}

/// Running record of the series sum cos^2(theta_k) ||grad f(x_k)||^2 whose
/// convergence underpins the global-convergence argument.
struct ZoutendijkLedger {
  std::vector<double> terms;
  std::vector<double> partial_sums;

  void accumulate(double cos_theta_k, double grad_norm_k) {
    const double term =
        cos_theta_k * cos_theta_k * grad_norm_k * grad_norm_k;
    terms.push_back(term);
    partial_sums.push_back(total() + term);
  }
  double total() const {
    return partial_sums.empty() ? 0.0 : partial_sums.back();
  }

  /// Growth of the partial sums over the final fraction of the run,
  /// relative to the total. Small values mean the series has plateaued.
  double tail_growth(double fraction = 0.1) const {
    if (partial_sums.empty() || total() <= 0.0) return 0.0;
    const auto n = partial_sums.size();
    auto cut = static_cast<size_t>(static_cast<double>(n) * (1.0 - fraction));
    if (cut >= n) cut = n - 1;
    return (total() - partial_sums[cut]) / total();
  }
};

template <manifold M>
void zoutendijk_accumulate(ZoutendijkLedger& ledger, const M& m,
                           const CgState<M>& s) {
  const double en = m.norm(s.x, s.eta);
  if (s.grad_norm == 0.0 || en == 0.0) {
    ledger.accumulate(0.0, 0.0);
    return;
  }
  ledger.accumulate(-s.dg / (s.grad_norm * en), s.grad_norm);
}

// ---------------------------------------------------------------------------
// Descent-ratio audit
//
// Along the scaled variant, <grad, eta> / ||grad||^2 stays within
// [-1/(1-c2), (2 c2 - 1)/(1 - c2)]; the first iterate sits at exactly -1.

struct LemmaAudit {
  double ratio = 0.0;
  bool within = false;
};

inline LemmaAudit lemma_ratio_audit(double dg, double grad_norm, double c2,
                                    double slack = 1e-10) {
  detail::require(grad_norm > 0.0, "lemma_ratio_audit: zero gradient");
  LemmaAudit a;
  a.ratio = dg / (grad_norm * grad_norm);
  const double lo = -1.0 / (1.0 - c2);
  const double hi = (2.0 * c2 - 1.0) / (1.0 - c2);
  a.within = a.ratio >= lo - slack && a.ratio <= hi + slack;
  return a;
}

/// State-level audit. The denominator is recomputed through the metric so
/// that the first iterate (eta = -grad) evaluates to exactly -1.
template <manifold M>
LemmaAudit lemma_ratio_audit(const M& m, const CgState<M>& s, double c2,
                             double slack = 1e-10) {
  const double gg = m.inner(s.x, s.grad, s.grad);
  detail::require(gg > 0.0, "lemma_ratio_audit: zero gradient");
  LemmaAudit a;
  a.ratio = s.dg / gg;
  const double lo = -1.0 / (1.0 - c2);
  const double hi = (2.0 * c2 - 1.0) / (1.0 - c2);
  a.within = a.ratio >= lo - slack && a.ratio <= hi + slack;
  return a;
}

// ---------------------------------------------------------------------------
// Curvature probe along retraction rays
//
// Estimates |d^2/dt^2 (f o R_x)(t eta)| over random unit directions and a
// grid of ray parameters. The analysis shows the quantity is bounded and
// decays to zero along each ray; the probe reports, it never asserts a
// specific bound.

struct LipschitzProbeReport {
  struct Ray {
    std::vector<double> t;
    std::vector<double> second_derivative;  // |d^2/dt^2| estimates
  };
  std::vector<Ray> samples;
  double max_observed = 0.0;

  bool all_finite() const {
    for (const auto& ray : samples) {
      for (double v : ray.second_derivative) {
        if (!std::isfinite(v)) return false;
      }
    }
    return true;
  }

  /// Fraction of rays whose estimate at the last grid point is at most
  /// `factor` times the estimate at t = 0.
  double decayed_fraction(double factor = 0.1) const {
    if (samples.empty()) return 1.0;
    size_t ok = 0;
    for (const auto& ray : samples) {
      if (ray.second_derivative.back() <=
          factor * ray.second_derivative.front()) {
        ++ok;
      }
    }
    return static_cast<double>(ok) / static_cast<double>(samples.size());
  }
};

inline std::vector<double> default_probe_grid() {
  return {0.0, 0.5, 1.0, 2.0, 5.0, 10.0, 50.0};
}

template <manifold M, problem_for<M> P>
LipschitzProbeReport lipschitz_probe(const M& m, const P& p, int n_samples,
                                     std::mt19937_64& rng,
                                     std::vector<double> grid = {}) {
  if (grid.empty()) grid = default_probe_grid();
  const double h = fd_default_h(2);
  LipschitzProbeReport report;
  report.samples.reserve(n_samples);
  for (int s = 0; s < n_samples; ++s) {
    const typename M::Point x = m.random_point(rng);
    typename M::Tangent eta = m.random_tangent(rng, x);
    const double en = m.norm(x, eta);
    if (en == 0.0) continue;
    eta *= 1.0 / en;  // unit metric norm
    const auto curve = [&](double t) { return p.value(m.retract(x, t * eta)); };
    LipschitzProbeReport::Ray ray;
    for (double t : grid) {
      const double d2 = std::abs(fd_directional(curve, t, 2, h));
      ray.t.push_back(t);
      ray.second_derivative.push_back(d2);
      if (d2 > report.max_observed) report.max_observed = d2;
    }
    report.samples.push_back(std::move(ray));
  }
  return report;
}

}  // namespace rcg

#endif  // RCG_DIAGNOSTICS_HPP
