// Fletcher-Reeves conjugate gradient on a Riemannian manifold, in two
// variants: the standard method transports the previous direction with the
// differentiated retraction T^R; the scaled method switches to the
// norm-preserving scaled transport whenever T^R increased the norm.
#ifndef RCG_CG_HPP
#define RCG_CG_HPP

#include <cmath>
#include <optional>
#include <utility>
#include <vector>

#include "rcg/core.hpp"
#include "rcg/linesearch.hpp"

namespace rcg {

enum class CgVariant {
  Standard,  // eta_{k+1} = -grad + beta T^R(eta_k)
  Scaled,    // eta_{k+1} = -grad + beta T^(k)(eta_k)
};

enum class LsFailurePolicy {
  Fallback,  // take the best sufficient-decrease step, flag the iteration
  Stop,      // terminate the run with status LinesearchFailed
};

struct CgConfig {
  CgVariant variant = CgVariant::Scaled;
  WolfeConfig wolfe;
  int max_iter = 1000;
  double grad_tol = 1e-8;
  std::optional<int> restart_period;  // force beta = 0 every N steps
  bool record_trace = true;
  int trace_stride = 1;
  LsFailurePolicy on_ls_failure = LsFailurePolicy::Fallback;

  void validate() const {
    detail::require(max_iter >= 1, "CgConfig: max_iter >= 1");
    detail::require(grad_tol > 0.0, "CgConfig: grad_tol > 0");
    detail::require(!restart_period || *restart_period >= 1,
                    "CgConfig: restart period >= 1");
    detail::require(trace_stride >= 1, "CgConfig: trace_stride >= 1");
    wolfe.validate();
  }
};

/// Per-iteration record. beta is the coefficient that formed eta at this
/// iterate; alpha, ratio, scaled, dphi describe the outgoing step and are
/// filled in by cg_step (they stay at their defaults on the terminal state).
template <manifold M>
struct CgState {
  int k = 0;
  typename M::Point x;
  typename M::Tangent eta;
  typename M::Tangent grad;
  double f = 0.0;
  double grad_norm = 0.0;
  double beta = 0.0;
  double dg = 0.0;  // <grad, eta after eta>_x = phi'(0) of the outgoing search
  // Outgoing-step data:
  double alpha = 0.0;
  double dphi = 0.0;   // phi'(alpha) at the accepted step
  double ratio = 1.0;  // ||T^R_{alpha eta}(eta)||_{x+} / ||eta||_x
  bool scaled = false;
  bool ls_fallback = false;
  int ls_evaluations = 0;
};

enum class CgStatus { Converged, MaxIter, LinesearchFailed };

template <manifold M>
struct CgResult {
  CgState<M> final_state;
  std::vector<CgState<M>> trace;
  CgStatus status = CgStatus::MaxIter;
  int iterations = 0;
};

/// Fletcher-Reeves coefficient from gradient norms.
inline double beta_fr(double grad_next_norm, double grad_curr_norm) {
  detail::require(grad_curr_norm > 0.0, "beta_fr: current gradient is zero");
  const double r = grad_next_norm / grad_curr_norm;
  return r * r;
}

template <manifold M>
double beta_fr(const M& m, const typename M::Point& x_next,
               const typename M::Tangent& grad_next,
               const typename M::Point& x_curr,
               const typename M::Tangent& grad_curr) {
  return beta_fr(m.norm(x_next, grad_next), m.norm(x_curr, grad_curr));
}

namespace detail {

template <manifold M, problem_for<M> P>
CgState<M> make_state(const M& m, const P& p, const typename M::Point& x,
                      int k) {
  CgState<M> s;
  s.k = k;
  s.x = x;
  s.f = p.value(x);
  s.grad = m.egrad_to_rgrad(x, p.euclid_grad(x));
  s.grad_norm = m.norm(x, s.grad);
  s.eta = -s.grad;
  s.dg = m.inner(x, s.grad, s.eta);
  return s;
}

}  // namespace detail

/// One iteration: Wolfe step along eta, retract, transport the direction,
/// form the next search direction. Fills the outgoing-step fields of `state`
/// and returns the new state. Throws linesearch_error when the search fails
/// and the policy is Stop (or no sufficient-decrease step exists).
template <manifold M, problem_for<M> P>
CgState<M> cg_step(const M& m, const P& p, CgState<M>& state,
                   const CgConfig& cfg) {
  WolfeConfig wolfe = cfg.wolfe;
  const double radius = m.retraction_radius();
  const double eta_norm = m.norm(state.x, state.eta);
  if (std::isfinite(radius)) {
    // Keep every trial strictly inside the retraction's domain.
    wolfe.alpha_cap = 0.99 * radius / eta_norm;
  }

  SearchOutcome<M> search;
  try {
    search =
        strong_wolfe_search(m, p, state.x, state.eta, state.f, state.grad, wolfe);
  } catch (const linesearch_error& err) {
    if (cfg.on_ls_failure == LsFailurePolicy::Stop ||
        !err.has_sufficient_decrease) {
      throw;
    }
    const LineCurve<M, P> curve(m, p, state.x, state.eta, state.f, state.grad);
    search.accepted = curve.eval(err.best_alpha);
    search.result = {err.best_alpha, search.accepted.phi,
                     search.accepted.dphi, 0};
    state.ls_fallback = true;
  }

  const CurveEval<M>& acc = search.accepted;
  state.alpha = acc.alpha;
  state.dphi = acc.dphi;
  state.ls_evaluations = search.result.evaluations;

  CgState<M> next;
  next.k = state.k + 1;
  next.x = acc.y;
  next.f = acc.phi;
  next.grad = acc.grad_y;
  next.grad_norm = m.norm(next.x, next.grad);

  // acc.dir_transport is T^R_{alpha eta}(eta), already computed by the
  // curvature check of the line search.
  typename M::Tangent transported = acc.dir_transport;
  const double t_norm = m.norm(next.x, transported);
  state.ratio = eta_norm > 0.0 ? t_norm / eta_norm : 1.0;
  state.scaled = false;
  if (cfg.variant == CgVariant::Scaled && t_norm > eta_norm) {
    transported *= eta_norm / t_norm;
    state.scaled = true;
  }

  double beta = 0.0;
  if (next.grad_norm > 0.0) {
    const double r = next.grad_norm / state.grad_norm;
    beta = r * r;
  }
  if (cfg.restart_period && next.k % *cfg.restart_period == 0) beta = 0.0;
  next.beta = beta;
  next.eta = -next.grad + beta * transported;
  next.dg = m.inner(next.x, next.grad, next.eta);
  return next;
}

/// Runs the solver from x0 until the gradient norm drops to grad_tol, the
/// iteration budget runs out, or the line search fails terminally. The trace
/// holds every trace_stride-th state plus the terminal one.
template <manifold M, problem_for<M> P>
CgResult<M> cg_solve(const M& m, const P& p, const typename M::Point& x0,
                     const CgConfig& cfg) {
  cfg.validate();
  if (m.feasibility_residual(x0) > kFeasTol) {
    throw feasibility_error("cg_solve: infeasible starting point");
  }

  CgResult<M> result;
  CgState<M> s = detail::make_state(m, p, x0, 0);
  const auto record = [&](const CgState<M>& st, bool force) {
    if (cfg.record_trace && (force || st.k % cfg.trace_stride == 0)) {
      result.trace.push_back(st);
    }
  };

  while (true) {
    if (s.grad_norm <= cfg.grad_tol) {
      result.status = CgStatus::Converged;
      break;
    }
    if (s.k >= cfg.max_iter) {
      result.status = CgStatus::MaxIter;
      break;
    }
    try {
      CgState<M> next = cg_step(m, p, s, cfg);
      record(s, false);
      s = std::move(next);
    } catch (const linesearch_error&) {
      result.status = CgStatus::LinesearchFailed;
      break;
    }
  }
  record(s, true);
  result.final_state = std::move(s);
  result.iterations = result.final_state.k;
  return result;
}

}  // namespace rcg

#endif  // RCG_CG_HPP
