// Invariant suites over randomized instances of every manifold, runnable
// from the CLI (`check` subcommand) and reused by the test binaries. Each
// group reports pass/fail plus the worst observed value.
#ifndef RCG_CHECKS_HPP
#define RCG_CHECKS_HPP

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "rcg/cg.hpp"
#include "rcg/core.hpp"
#include "rcg/diagnostics.hpp"
#include "rcg/experiments.hpp"
#include "rcg/linesearch.hpp"
#include "rcg/manifolds/product.hpp"
#include "rcg/manifolds/sphere.hpp"
#include "rcg/manifolds/stiefel.hpp"
#include "rcg/problems.hpp"
#include "rcg/transports.hpp"

namespace rcg {

struct CheckResult {
  std::string group;
  bool pass = false;
  std::string detail;
};

namespace checks {

inline Matrix random_matrix(std::mt19937_64& rng, int rows, int cols) {
  std::normal_distribution<double> g;
  Matrix a(rows, cols);
  for (int j = 0; j < cols; ++j)
    for (int i = 0; i < rows; ++i) a(i, j) = g(rng);
  return a;
}

inline Matrix random_symmetric(std::mt19937_64& rng, int n) {
  const Matrix a = random_matrix(rng, n, n);
  return 0.5 * (a + a.transpose());
}

inline double euclid_dot(const Vector& a, const Vector& b) { return a.dot(b); }
inline double euclid_dot(const Matrix& a, const Matrix& b) {
  return (a.array() * b.array()).sum();
}
inline double euclid_dot(const MatrixPair& a, const MatrixPair& b) {
  return euclid_dot(a.first, b.first) + euclid_dot(a.second, b.second);
}

inline double ambient_dist(const Vector& a, const Vector& b) {
  return (a - b).norm();
}
inline double ambient_dist(const Matrix& a, const Matrix& b) {
  return (a - b).norm();
}
inline double ambient_dist(const MatrixPair& a, const MatrixPair& b) {
  return std::hypot((a.first - b.first).norm(),
                    (a.second - b.second).norm());
}

/// Tracks the worst (largest) violation seen by a check group.
struct Worst {
  double value = 0.0;
  void update(double v) {
    if (v > value) value = v;
  }
};

// --- per-manifold property sweeps --------------------------------------

template <manifold M>
void metric_symmetry(const M& m, int trials, std::mt19937_64& rng, Worst& w) {
  for (int i = 0; i < trials; ++i) {
    const auto x = m.random_point(rng);
    const auto u = m.random_tangent(rng, x);
    const auto v = m.random_tangent(rng, x);
    w.update(std::abs(m.inner(x, u, v) - m.inner(x, v, u)));
    if (m.inner(x, u, u) < 0.0) w.update(1.0);
  }
}

template <manifold M>
void projection_idempotence(const M& m, int trials, std::mt19937_64& rng,
                            Worst& w) {
  for (int i = 0; i < trials; ++i) {
    const auto x = m.random_point(rng);
    const auto v = m.random_tangent(rng, x);
    const auto pv = m.project(x, v);
    w.update(ambient_dist(m.project(x, pv), pv));
  }
}

template <manifold M>
void retraction_zero(const M& m, int trials, std::mt19937_64& rng, Worst& w) {
  for (int i = 0; i < trials; ++i) {
    const auto x = m.random_point(rng);
    typename M::Tangent zero = m.random_tangent(rng, x);
    zero *= 0.0;
    w.update(ambient_dist(m.retract(x, zero), x));
  }
}

// ||R_x(t eta) - x - t eta|| / t^2 stays bounded by a constant across
// t = 1e-2, 1e-3, 1e-4 (slope-2 behaviour in log-log). Reports the spread
// of the three quotients as a multiple of the smallest.
template <manifold M>
void retraction_rigidity(const M& m, int trials, std::mt19937_64& rng,
                         Worst& w) {
  const double ts[3] = {1e-2, 1e-3, 1e-4};
  for (int i = 0; i < trials; ++i) {
    const auto x = m.random_point(rng);
    typename M::Tangent eta = m.random_tangent(rng, x);
    const double en = m.norm(x, eta);
    if (en == 0.0) continue;
    eta *= 0.5 / en;
    double q[3];
    for (int j = 0; j < 3; ++j) {
      const typename M::Tangent step = ts[j] * eta;
      const typename M::Point lin = x + step;
      q[j] = ambient_dist(m.retract(x, step), lin) / (ts[j] * ts[j]);
    }
    const double qmax = std::max({q[0], q[1], q[2]});
    const double qmin = std::min({q[0], q[1], q[2]});
    if (qmax > 1e-12) w.update(qmax / std::max(qmin, 1e-300));
  }
}

template <manifold M>
void feasibility_after_retraction(const M& m, int trials, std::mt19937_64& rng,
                                  Worst& w, double tangent_scale) {
  for (int i = 0; i < trials; ++i) {
    const auto x = m.random_point(rng);
    typename M::Tangent eta = m.random_tangent(rng, x);
    const double en = m.norm(x, eta);
    if (en == 0.0) continue;
    eta *= tangent_scale / en;
    w.update(m.feasibility_residual(m.retract(x, eta)));
  }
}

template <manifold M>
void scaled_norm_identity(const M& m, int trials, std::mt19937_64& rng,
                          Worst& w, double tangent_scale) {
  for (int i = 0; i < trials; ++i) {
    const auto x = m.random_point(rng);
    typename M::Tangent eta = m.random_tangent(rng, x);
    typename M::Tangent xi = m.random_tangent(rng, x);
    const double en = m.norm(x, eta);
    const double xn = m.norm(x, xi);
    if (en == 0.0 || xn == 0.0) continue;
    eta *= tangent_scale / en;
    xi *= tangent_scale / xn;
    const typename M::Tangent t0 = transport_scaled(m, x, eta, xi);
    const auto y = m.retract(x, eta);
    w.update(std::abs(m.norm(y, t0) - m.norm(x, xi)));
  }
}

// Switching transport: norm never increases; scaled output keeps the T^R
// direction; |<g, T^(k)>| <= |<g, T^R>| for random tangents g at the target.
template <manifold M>
void switch_properties(const M& m, int trials, std::mt19937_64& rng, Worst& w,
                       double tangent_scale) {
  for (int i = 0; i < trials; ++i) {
    const auto x = m.random_point(rng);
    typename M::Tangent eta = m.random_tangent(rng, x);
    typename M::Tangent xi = m.random_tangent(rng, x);
    const double en = m.norm(x, eta);
    const double xn = m.norm(x, xi);
    if (en == 0.0 || xn == 0.0) continue;
    eta *= tangent_scale / en;
    xi *= tangent_scale / xn;
    const auto out = transport_switch(m, x, eta, xi);
    const auto y = m.retract(x, eta);
    const typename M::Tangent tr = m.transport_diff(x, eta, xi);
    w.update(m.norm(y, out.vector) / m.norm(x, xi) - (1.0 + 1e-12));
    const double tn = m.norm(y, tr);
    const double on = m.norm(y, out.vector);
    if (tn > 0.0 && on > 0.0) {
      // cosine between switched and unscaled outputs must be 1
      w.update(1.0 - m.inner(y, out.vector, tr) / (tn * on));
    }
    const auto g = m.random_tangent(rng, y);
    const double lhs = std::abs(m.inner(y, g, out.vector));
    const double rhs = std::abs(m.inner(y, g, tr));
    w.update((lhs - rhs) / std::max(rhs, 1e-300) - 1e-12);
  }
}

template <manifold M>
void transport_fd_agreement(const M& m, int trials, std::mt19937_64& rng,
                            Worst& w, double h, double tangent_scale) {
  for (int i = 0; i < trials; ++i) {
    const auto x = m.random_point(rng);
    typename M::Tangent eta = m.random_tangent(rng, x);
    typename M::Tangent xi = m.random_tangent(rng, x);
    const double en = m.norm(x, eta);
    const double xn = m.norm(x, xi);
    if (en == 0.0 || xn == 0.0) continue;
    eta *= tangent_scale / en;
    xi *= tangent_scale / xn;
    const typename M::Tangent analytic = m.transport_diff(x, eta, xi);
    const typename M::Tangent hxi = h * xi;
    const typename M::Point plus = m.retract(x, eta + hxi);
    const typename M::Point minus = m.retract(x, eta - hxi);
    const typename M::Tangent fd = (1.0 / (2.0 * h)) * (plus - minus);
    w.update(ambient_dist(analytic, fd));
  }
}

template <manifold M, problem_for<M> P>
void gradient_duality(const M& m, const P& p, int points, int probes,
                      std::mt19937_64& rng, Worst& w, Worst& tangency) {
  for (int i = 0; i < points; ++i) {
    const auto x = m.random_point(rng);
    const typename M::Tangent eg = p.euclid_grad(x);
    const typename M::Tangent g = m.egrad_to_rgrad(x, eg);
    tangency.update(m.tangency_residual(x, g));
    const double scale = 1.0 + std::sqrt(euclid_dot(eg, eg));
    for (int j = 0; j < probes; ++j) {
      const auto zeta = m.random_tangent(rng, x);
      w.update(std::abs(m.inner(x, g, zeta) - euclid_dot(eg, zeta)) / scale);
    }
  }
}

template <manifold M, problem_for<M> P>
void gradient_fd_agreement(const M& m, const P& p, int trials,
                           std::mt19937_64& rng, Worst& w) {
  for (int i = 0; i < trials; ++i) {
    const auto x = m.random_point(rng);
    typename M::Tangent eta = m.random_tangent(rng, x);
    const double en = m.norm(x, eta);
    if (en == 0.0) continue;
    eta *= 1.0 / en;
    const double analytic = phi_prime(p, m, x, eta, 0.0);
    const auto curve = [&](double a) { return phi(p, m, x, eta, a); };
    const double fd = fd_directional(curve, 0.0, 1, fd_default_h(1));
    w.update(std::abs(analytic - fd) / (1.0 + std::abs(analytic)));
  }
}

}  // namespace checks

// ---------------------------------------------------------------------------
// Check registry

namespace detail {

struct SuiteBuilder {
  std::vector<CheckResult> results;
  unsigned long seed;

  void report(const std::string& group, bool pass, const std::string& detail) {
    results.push_back({group, pass, detail});
  }
  void bounded(const std::string& group, double worst, double bound) {
    std::ostringstream os;
    os.precision(4);
    os << "worst " << worst << " (bound " << bound << ")";
    report(group, worst <= bound, os.str());
  }
};

inline void run_core_checks(SuiteBuilder& b) {
  std::mt19937_64 rng(b.seed);
  const SphereStandard sq(20);
  const SphereStandard so(20, SphereRetraction::Orthographic);
  const SpherePeculiar sp(20);
  const Stiefel st(6, 3);
  const ProductStiefel pr(5, 4, 2);

  checks::Worst sym;
  checks::metric_symmetry(sq, 100, rng, sym);
  checks::metric_symmetry(so, 100, rng, sym);
  checks::metric_symmetry(sp, 100, rng, sym);
  checks::metric_symmetry(st, 100, rng, sym);
  checks::metric_symmetry(pr, 100, rng, sym);
  b.bounded("core.metric_symmetry", sym.value, 1e-12);

  checks::Worst idem;
  checks::projection_idempotence(sq, 100, rng, idem);
  checks::projection_idempotence(sp, 100, rng, idem);
  checks::projection_idempotence(st, 100, rng, idem);
  checks::projection_idempotence(pr, 100, rng, idem);
  b.bounded("core.projection_idempotence", idem.value, 1e-12);

  checks::Worst zero;
  checks::retraction_zero(sq, 50, rng, zero);
  checks::retraction_zero(so, 50, rng, zero);
  checks::retraction_zero(sp, 50, rng, zero);
  checks::retraction_zero(st, 50, rng, zero);
  checks::retraction_zero(pr, 50, rng, zero);
  b.bounded("core.retraction_zero", zero.value, 1e-14);

  checks::Worst rig;
  checks::retraction_rigidity(sq, 50, rng, rig);
  checks::retraction_rigidity(so, 50, rng, rig);
  checks::retraction_rigidity(sp, 50, rng, rig);
  checks::retraction_rigidity(st, 50, rng, rig);
  checks::retraction_rigidity(pr, 50, rng, rig);
  b.bounded("core.retraction_rigidity_spread", rig.value, 4.0);

  checks::Worst feas;
  checks::feasibility_after_retraction(sq, 100, rng, feas, 2.0);
  checks::feasibility_after_retraction(so, 100, rng, feas, 0.7);
  checks::feasibility_after_retraction(sp, 100, rng, feas, 2.0);
  checks::feasibility_after_retraction(st, 100, rng, feas, 2.0);
  checks::feasibility_after_retraction(pr, 100, rng, feas, 2.0);
  b.bounded("core.retraction_feasibility", feas.value, 1e-12);
}

inline void run_manifold_checks(SuiteBuilder& b) {
  std::mt19937_64 rng(b.seed + 1);
  checks::Worst dual, tang;
  {
    const SphereStandard m(20);
    const RayleighProblem p(preset_matrix("diag-1-20"));
    checks::gradient_duality(m, p, 10, 50, rng, dual, tang);
  }
  {
    const SpherePeculiar m(20);
    const RayleighProblem p(preset_matrix("diag-1-20"));
    checks::gradient_duality(m, p, 10, 50, rng, dual, tang);
  }
  {
    const Stiefel m(6, 3);
    Vector mu(3);
    mu << 1, 2, 3;
    const BrockettProblem p(checks::random_symmetric(rng, 6), mu);
    checks::gradient_duality(m, p, 10, 50, rng, dual, tang);
  }
  {
    const ProductStiefel m(5, 4, 2);
    Vector mu(2);
    mu << 2, 1;
    const SvdProblem p(checks::random_matrix(rng, 5, 4), mu,
                       SvdProblem::Sense::Maximize);
    checks::gradient_duality(m, p, 10, 50, rng, dual, tang);
  }
  b.bounded("manifolds.gradient_duality", dual.value, 1e-10);
  b.bounded("manifolds.gradient_tangency", tang.value, 1e-10);
}

inline void run_transport_checks(SuiteBuilder& b) {
  std::mt19937_64 rng(b.seed + 2);
  const SphereStandard sq(20);
  const SphereStandard so(30, SphereRetraction::Orthographic);
  const SpherePeculiar sp(20);
  const Stiefel st(6, 3);
  const ProductStiefel pr(5, 4, 2);

  checks::Worst ident;
  checks::scaled_norm_identity(sq, 400, rng, ident, 1.0);
  checks::scaled_norm_identity(so, 400, rng, ident, 0.6);
  checks::scaled_norm_identity(sp, 400, rng, ident, 1.0);
  checks::scaled_norm_identity(st, 400, rng, ident, 1.0);
  checks::scaled_norm_identity(pr, 400, rng, ident, 1.0);
  b.bounded("transports.scaled_norm_identity", ident.value, 1e-12);

  checks::Worst sw;
  checks::switch_properties(sq, 200, rng, sw, 1.0);
  checks::switch_properties(so, 200, rng, sw, 0.6);
  checks::switch_properties(sp, 200, rng, sw, 1.0);
  checks::switch_properties(st, 200, rng, sw, 1.0);
  checks::switch_properties(pr, 200, rng, sw, 1.0);
  b.bounded("transports.switch_properties", sw.value, 1e-12);

  checks::Worst fd;
  checks::transport_fd_agreement(sq, 100, rng, fd, 1e-6, 1.0);
  checks::transport_fd_agreement(so, 100, rng, fd, 1e-6, 0.6);
  checks::transport_fd_agreement(sp, 100, rng, fd, 1e-6, 1.0);
  checks::transport_fd_agreement(st, 100, rng, fd, 1e-6, 1.0);
  checks::transport_fd_agreement(pr, 100, rng, fd, 1e-6, 1.0);
  b.bounded("transports.fd_agreement", fd.value, 1e-6);
}

inline void audit_preset_run(SuiteBuilder& b, const std::string& preset,
                             CgVariant variant, int max_iter,
                             const std::string& tag) {
  const bool peculiar = preset == "peculiar-sphere-20";
  CgConfig cfg;
  cfg.variant = variant;
  cfg.max_iter = max_iter;
  const RayleighProblem prob(
      preset_matrix(peculiar ? "diag-1-20" : "diag-1-100-scaled"));

  const auto audit = [&](const auto& m, const Vector& x0) {
    const auto run = cg_solve(m, prob, x0, cfg);
    checks::Worst wolfe, lemma, monotone, recurrence, norm_incr;
    double k0_ratio = 0.0;
    const double c = (1.0 + cfg.wolfe.c2) / (1.0 - cfg.wolfe.c2);
    for (size_t i = 0; i < run.trace.size(); ++i) {
      const auto& s = run.trace[i];
      if (s.grad_norm > 0.0) {
        const auto a = lemma_ratio_audit(m, s, cfg.wolfe.c2);
        if (s.k == 0) k0_ratio = a.ratio;
        if (variant == CgVariant::Scaled && !a.within) lemma.update(1.0);
      }
      if (i + 1 < run.trace.size()) {
        const auto& nx = run.trace[i + 1];
        // strong Wolfe with 1e-12 slack
        wolfe.update(nx.f - (s.f + cfg.wolfe.c1 * s.alpha * s.dg) - 1e-12);
        wolfe.update(std::abs(s.dphi) - cfg.wolfe.c2 * std::abs(s.dg) - 1e-12);
        monotone.update(nx.f - s.f);
        // ||eta_{k+1}||^2 <= c ||g_{k+1}||^2 + beta^2 ||eta_k||^2
        if (variant == CgVariant::Scaled) {
          const double eta_next_sq = m.inner(nx.x, nx.eta, nx.eta);
          const double eta_sq = m.inner(s.x, s.eta, s.eta);
          const double bound =
              c * nx.grad_norm * nx.grad_norm + nx.beta * nx.beta * eta_sq;
          recurrence.update((eta_next_sq - bound) / (1.0 + bound) - 1e-10);
          const double effective_ratio = s.scaled ? 1.0 : s.ratio;
          norm_incr.update(effective_ratio - (1.0 + 1e-12));
        }
      }
    }
    b.bounded("linesearch.wolfe_audit." + tag, wolfe.value, 0.0);
    b.bounded("cg.monotone_objective." + tag, monotone.value, 0.0);
    if (variant == CgVariant::Scaled) {
      b.bounded("cg.lemma_bound." + tag, lemma.value, 0.0);
      b.report("cg.lemma_k0_ratio." + tag, k0_ratio == -1.0,
               "ratio at k=0 is " + std::to_string(k0_ratio));
      b.bounded("cg.transport_norm_nonincrease." + tag, norm_incr.value, 0.0);
      b.bounded("cg.recurrence_bound." + tag, recurrence.value, 0.0);
    }
  };

  if (peculiar) {
    const SpherePeculiar m(20);
    audit(m, Vector::Ones(20) / (2.0 * std::sqrt(5.0)));
  } else {
    const SphereStandard m(100, SphereRetraction::Orthographic);
    audit(m, Vector::Ones(100) / 10.0);
  }
}

inline void run_solver_checks(SuiteBuilder& b) {
  audit_preset_run(b, "peculiar-sphere-20", CgVariant::Scaled, 2000,
                   "peculiar.scaled");
  audit_preset_run(b, "peculiar-sphere-20", CgVariant::Standard, 500,
                   "peculiar.standard");
  audit_preset_run(b, "ortho-sphere-100", CgVariant::Scaled, 2000,
                   "ortho.scaled");
  audit_preset_run(b, "ortho-sphere-100", CgVariant::Standard, 500,
                   "ortho.standard");
}

inline void run_problem_checks(SuiteBuilder& b) {
  std::mt19937_64 rng(b.seed + 3);
  checks::Worst fd;
  {
    const SphereStandard m(20);
    const RayleighProblem p(preset_matrix("diag-1-20"));
    checks::gradient_fd_agreement(m, p, 20, rng, fd);
  }
  {
    const SpherePeculiar m(20);
    const RayleighProblem p(preset_matrix("diag-1-20"));
    checks::gradient_fd_agreement(m, p, 20, rng, fd);
  }
  {
    const Stiefel m(6, 3);
    Vector mu(3);
    mu << 1, 2, 3;
    const BrockettProblem p(checks::random_symmetric(rng, 6), mu);
    checks::gradient_fd_agreement(m, p, 20, rng, fd);
  }
  {
    const ProductStiefel m(5, 4, 2);
    Vector mu(2);
    mu << 2, 1;
    const SvdProblem p(checks::random_matrix(rng, 5, 4), mu,
                       SvdProblem::Sense::Maximize);
    checks::gradient_fd_agreement(m, p, 20, rng, fd);
  }
  b.bounded("problems.gradient_fd_agreement", fd.value, 1e-6);

  checks::Worst bounds;
  {
    const SphereStandard m(20);
    const RayleighProblem p(preset_matrix("diag-1-20"));
    for (int i = 0; i < 100; ++i) {
      const Vector x = m.random_point(rng);
      const double f = p.value(x);
      bounds.update(1.0 - f - 1e-12);
      bounds.update(f - 20.0 - 1e-12);
    }
  }
  b.bounded("problems.rayleigh_bounds", bounds.value, 0.0);
}

inline void run_diagnostic_checks(SuiteBuilder& b) {
  std::mt19937_64 rng(b.seed + 4);
  {
    ExperimentSpec spec;
    spec.preset = "peculiar-sphere-20";
    spec.variant = CgVariant::Scaled;
    spec.max_iter = 5000;
    const auto res = run_experiment(spec);
    const bool converged = res.status == CgStatus::Converged;
    ZoutendijkLedger ledger;
    for (const TraceRow& r : res.rows) {
      ledger.partial_sums.push_back(r.zoutendijk_partial);
    }
    const double growth = ledger.tail_growth(0.1);
    std::ostringstream os;
    os.precision(4);
    os << "tail growth " << growth << (converged ? " (converged)" : " (!)");
    b.report("diagnostics.zoutendijk_plateau", converged && growth <= 1e-6,
             os.str());
  }
  {
    Vector mu(2);
    mu << 1, 2;
    const BrockettProblem p(checks::random_symmetric(rng, 4), mu);
    const Stiefel m(4, 2);
    const auto report = lipschitz_probe(m, p, 50, rng);
    const double frac = report.decayed_fraction(0.1);
    std::ostringstream os;
    os.precision(4);
    os << "decayed fraction " << frac << ", max " << report.max_observed;
    b.report("diagnostics.lipschitz_decay", report.all_finite() && frac >= 0.9,
             os.str());
  }
}

}  // namespace detail

/// Runs the requested invariant groups. `scope` is "all" or a
/// comma-separated list of module names (core, manifolds, transports,
/// linesearch, cg, problems, diagnostics).
inline std::vector<CheckResult> run_checks(const std::string& scope,
                                           unsigned long seed = 20130527) {
  detail::SuiteBuilder b;
  b.seed = seed;
  const auto wants = [&](const std::string& name) {
    if (scope == "all" || scope.empty()) return true;
    std::stringstream ss(scope);
    std::string item;
    while (std::getline(ss, item, ',')) {
      if (item == name) return true;
    }
    return false;
  };
  if (wants("core")) detail::run_core_checks(b);
  if (wants("manifolds")) detail::run_manifold_checks(b);
  if (wants("transports")) detail::run_transport_checks(b);
  if (wants("linesearch") || wants("cg")) detail::run_solver_checks(b);
  if (wants("problems")) detail::run_problem_checks(b);
  if (wants("diagnostics")) detail::run_diagnostic_checks(b);
  return b.results;
}

}  // namespace rcg

#endif  // RCG_CHECKS_HPP
