// Strong Wolfe step-size search along the retraction curve
// phi(alpha) = f(R_x(alpha * eta)), with the curvature condition evaluated
// through the differentiated retraction:
//   phi'(alpha) = < grad f(R_x(alpha eta)), T^R_{alpha eta}(eta) >.
// Bracket-then-zoom structure with guarded cubic interpolation.
#ifndef RCG_LINESEARCH_HPP
#define RCG_LINESEARCH_HPP

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>

#include "rcg/core.hpp"

namespace rcg {

struct WolfeConfig {
  double c1 = 1e-4;
  double c2 = 0.1;  // 0 < c1 < c2 < 1/2
  double alpha_init = 1.0;
  double growth = 2.0;  // bracket expansion factor, > 1
  int max_bracket = 60;
  int max_zoom = 60;
  std::optional<double> alpha_cap;  // exclusive bound on trial steps

  void validate() const {
    detail::require(c1 > 0.0 && c1 < c2 && c2 < 0.5,
                    "WolfeConfig: need 0 < c1 < c2 < 1/2");
    detail::require(alpha_init > 0.0 && growth > 1.0,
                    "WolfeConfig: need alpha_init > 0, growth > 1");
    detail::require(max_bracket >= 1 && max_zoom >= 0,
                    "WolfeConfig: need positive budgets");
  }
};

struct WolfeResult {
  double alpha = 0.0;
  double phi_alpha = 0.0;
  double dphi_alpha = 0.0;
  int evaluations = 0;
};

/// One evaluation of the search curve, with the geometry the solver reuses:
/// the retracted point, its Riemannian gradient, and T^R_{alpha eta}(eta).
template <manifold M>
struct CurveEval {
  double alpha = 0.0;
  typename M::Point y;
  typename M::Tangent grad_y;
  typename M::Tangent dir_transport;
  double phi = 0.0;
  double dphi = 0.0;
};

/// phi and phi' evaluator for a fixed (x, eta). alpha = 0 short-circuits to
/// the cached data at x, so the Wolfe conditions see f(x) and grad f(x)
/// bit-identical to the solver state.
template <manifold M, problem_for<M> P>
class LineCurve {
 public:
  LineCurve(const M& m, const P& p, const typename M::Point& x,
            const typename M::Tangent& eta, double f_x,
            const typename M::Tangent& grad_x)
      : m_(m), p_(p), x_(x), eta_(eta), f_x_(f_x), grad_x_(grad_x) {}

  CurveEval<M> eval(double alpha) const {
    CurveEval<M> e;
    e.alpha = alpha;
    if (alpha == 0.0) {
      e.y = x_;
      e.grad_y = grad_x_;
      e.dir_transport = eta_;
      e.phi = f_x_;
      e.dphi = m_.inner(x_, grad_x_, eta_);
      return e;
    }
    const typename M::Tangent step = alpha * eta_;
    e.y = m_.retract(x_, step);
    e.phi = p_.value(e.y);
    e.grad_y = m_.egrad_to_rgrad(e.y, p_.euclid_grad(e.y));
    e.dir_transport = m_.transport_diff(x_, step, eta_);
    e.dphi = m_.inner(e.y, e.grad_y, e.dir_transport);
    return e;
  }

 private:
  const M& m_;
  const P& p_;
  const typename M::Point& x_;
  const typename M::Tangent& eta_;
  double f_x_;
  const typename M::Tangent& grad_x_;
};

/// Objective along the search curve.
template <manifold M, problem_for<M> P>
double phi(const P& p, const M& m, const typename M::Point& x,
           const typename M::Tangent& eta, double alpha) {
  if (alpha == 0.0) return p.value(x);
  return p.value(m.retract(x, alpha * eta));
}

/// Exact derivative of phi via the differentiated retraction.
template <manifold M, problem_for<M> P>
double phi_prime(const P& p, const M& m, const typename M::Point& x,
                 const typename M::Tangent& eta, double alpha) {
  if (alpha == 0.0) {
    return m.inner(x, m.egrad_to_rgrad(x, p.euclid_grad(x)), eta);
  }
  const typename M::Tangent step = alpha * eta;
  const typename M::Point y = m.retract(x, step);
  return m.inner(y, m.egrad_to_rgrad(y, p.euclid_grad(y)),
                 m.transport_diff(x, step, eta));
}

template <manifold M>
struct SearchOutcome {
  WolfeResult result;
  CurveEval<M> accepted;
};

namespace detail {

// Minimizer of the cubic Hermite interpolant of (a0, f0, g0), (a1, f1, g1).
// Returns nullopt when the data does not pin down an interior minimizer.
inline std::optional<double> cubic_minimizer(double a0, double f0, double g0,
                                             double a1, double f1, double g1) {
  const double d1 = g0 + g1 - 3.0 * (f0 - f1) / (a0 - a1);
  const double disc = d1 * d1 - g0 * g1;
  if (!(disc >= 0.0)) return std::nullopt;
  const double d2 = std::copysign(std::sqrt(disc), a1 - a0);
  const double denom = g1 - g0 + 2.0 * d2;
  if (denom == 0.0) return std::nullopt;
  const double cand = a1 - (a1 - a0) * (g1 + d2 - d1) / denom;
  if (!std::isfinite(cand)) return std::nullopt;
  return cand;
}

}  // namespace detail

/// Finds alpha > 0 satisfying
///   phi(alpha) <= phi(0) + c1 alpha phi'(0)   and
///   |phi'(alpha)| <= c2 |phi'(0)|.
/// Requires phi'(0) < 0 (not_descent_error otherwise). When the bracket/zoom
/// budget runs out, throws linesearch_error carrying the best
/// sufficient-decrease step seen. Trial steps never reach alpha_cap.
template <manifold M, problem_for<M> P>
SearchOutcome<M> strong_wolfe_search(const M& m, const P& p,
                                     const typename M::Point& x,
                                     const typename M::Tangent& eta,
                                     double f_x,
                                     const typename M::Tangent& grad_x,
                                     const WolfeConfig& cfg) {
  cfg.validate();
  const LineCurve<M, P> curve(m, p, x, eta, f_x, grad_x);
  const double phi0 = f_x;
  const double dphi0 = m.inner(x, grad_x, eta);
  if (!(dphi0 < 0.0)) {
    throw not_descent_error("strong_wolfe_search: phi'(0) >= 0");
  }
  const double cap =
      cfg.alpha_cap ? *cfg.alpha_cap : std::numeric_limits<double>::infinity();
  detail::require(cap > 0.0, "strong_wolfe_search: alpha_cap must be > 0");

  int evals = 0;
  double best_sd_alpha = 0.0;  // best alpha passing sufficient decrease
  double best_sd_phi = phi0;

  const auto sufficient_decrease = [&](double a, double fa) {
    return fa <= phi0 + cfg.c1 * a * dphi0;
  };
  const auto curvature_ok = [&](double da) {
    return std::abs(da) <= -cfg.c2 * dphi0;
  };
  const auto track_best = [&](double a, double fa) {
    if (sufficient_decrease(a, fa) && fa <= best_sd_phi) {
      best_sd_phi = fa;
      best_sd_alpha = a;
    }
  };
  const auto accept = [&](const CurveEval<M>& e) {
    SearchOutcome<M> out;
    out.result = {e.alpha, e.phi, e.dphi, evals};
    out.accepted = e;
    return out;
  };
  const auto fail = [&](const char* why) -> SearchOutcome<M> {
    throw linesearch_error(why, best_sd_alpha, best_sd_alpha > 0.0);
  };

  // Zoom on a bracket [lo, hi] (not necessarily ordered) maintaining the
  // usual invariants: lo passes sufficient decrease with the lowest phi seen,
  // and phi'(lo) * (hi - lo) < 0.
  const auto zoom = [&](CurveEval<M> lo, CurveEval<M> hi) -> SearchOutcome<M> {
    for (int j = 0; j < cfg.max_zoom; ++j) {
      const double width = hi.alpha - lo.alpha;
      if (std::abs(width) <= 1e-18 * (1.0 + std::abs(lo.alpha))) break;
      double a = 0.0;
      const auto cubic = detail::cubic_minimizer(lo.alpha, lo.phi, lo.dphi,
                                                 hi.alpha, hi.phi, hi.dphi);
      const double margin = 0.05 * std::abs(width);
      const double inner_lo = std::min(lo.alpha, hi.alpha) + margin;
      const double inner_hi = std::max(lo.alpha, hi.alpha) - margin;
      if (cubic && *cubic >= inner_lo && *cubic <= inner_hi) {
        a = *cubic;
      } else {
        a = lo.alpha + 0.5 * width;
      }
      CurveEval<M> e = curve.eval(a);
      ++evals;
      track_best(a, e.phi);
      if (!sufficient_decrease(a, e.phi) || e.phi >= lo.phi) {
        hi = std::move(e);
        continue;
      }
      if (curvature_ok(e.dphi)) return accept(e);
      if (e.dphi * (hi.alpha - lo.alpha) >= 0.0) hi = lo;
      lo = std::move(e);
    }
    return fail("strong_wolfe_search: zoom budget exhausted");
  };

  CurveEval<M> prev = curve.eval(0.0);
  double alpha = cfg.alpha_init;
  if (alpha >= cap) alpha = 0.5 * cap;
  for (int i = 0; i < cfg.max_bracket; ++i) {
    CurveEval<M> e = curve.eval(alpha);
    ++evals;
    track_best(alpha, e.phi);
    if (!sufficient_decrease(alpha, e.phi) || (i > 0 && e.phi >= prev.phi)) {
      return zoom(std::move(prev), std::move(e));
    }
    if (curvature_ok(e.dphi)) return accept(e);
    if (e.dphi >= 0.0) {
      return zoom(std::move(e), std::move(prev));
    }
    prev = std::move(e);
    // Expand, approaching (never reaching) the cap when one is set.
    const double next = alpha * cfg.growth;
    alpha = next < cap ? next : 0.5 * (alpha + cap);
  }
  return fail("strong_wolfe_search: bracket budget exhausted");
}

/// Convenience overload computing f and grad at x internally.
template <manifold M, problem_for<M> P>
SearchOutcome<M> strong_wolfe_search(const M& m, const P& p,
                                     const typename M::Point& x,
                                     const typename M::Tangent& eta,
                                     const WolfeConfig& cfg) {
  const double f_x = p.value(x);
  const typename M::Tangent grad_x = m.egrad_to_rgrad(x, p.euclid_grad(x));
  return strong_wolfe_search(m, p, x, eta, f_x, grad_x, cfg);
}

}  // namespace rcg

#endif  // RCG_LINESEARCH_HPP
