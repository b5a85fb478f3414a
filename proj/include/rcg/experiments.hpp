// Experiment harness: named presets for the sphere experiments, a runner
// that produces trace files, and the restart sweep.
#ifndef RCG_EXPERIMENTS_HPP
#define RCG_EXPERIMENTS_HPP

#include <cmath>
#include <fstream>
#include <future>
#include <map>
#include <optional>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "rcg/cg.hpp"
#include "rcg/core.hpp"
#include "rcg/diagnostics.hpp"
#include "rcg/manifolds/sphere.hpp"
#include "rcg/problems.hpp"
#include "rcg/trace.hpp"

namespace rcg {

/// Raised for unresolvable preset names or malformed x0 specs.
struct usage_error : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct ExperimentSpec {
  std::string preset;  // "peculiar-sphere-20" or "ortho-sphere-100"
  CgVariant variant = CgVariant::Scaled;
  std::optional<int> restart;
  int max_iter = 10000;
  double grad_tol = 1e-8;
  double c1 = 1e-4;
  double c2 = 0.1;
  std::string x0 = "paper";  // "paper" or "random:<seed>"
  std::string out_path;      // empty: no file written
  TraceFormat format = TraceFormat::Csv;
};

struct ExperimentResult {
  std::vector<TraceRow> rows;
  CgStatus status = CgStatus::MaxIter;
  int iterations = 0;
  double final_f = 0.0;
  double final_dist = 0.0;
  double final_grad_norm = 0.0;
  int scaling_events = 0;
  bool any_ls_fallback = false;

  /// Smallest k whose recorded dist is <= threshold; nullopt if never hit.
  std::optional<long> first_hit(double dist_threshold) const {
    for (const TraceRow& r : rows) {
      if (r.dist <= dist_threshold) return r.k;
    }
    return std::nullopt;
  }
};

namespace detail {

inline std::pair<Vector, std::optional<unsigned long>> resolve_x0(
    const std::string& spec, int n, double norm_target) {
  if (spec == "paper") {
    Vector x0 = Vector::Ones(n) / norm_target;
    return {x0, std::nullopt};
  }
  const std::string prefix = "random:";
  if (spec.rfind(prefix, 0) == 0) {
    unsigned long seed = 0;
    try {
      seed = std::stoul(spec.substr(prefix.size()));
    } catch (const std::exception&) {
      throw usage_error("x0 spec: expected random:<seed>");
    }
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> g;
    Vector x0(n);
    for (int i = 0; i < n; ++i) x0(i) = g(rng);
    x0.normalize();
    return {x0, seed};
  }
  throw usage_error("x0 spec: expected 'paper' or 'random:<seed>'");
}

template <manifold M>
ExperimentResult run_sphere_experiment(const M& m, const RayleighProblem& prob,
                                       const Vector& x0,
                                       const Vector& x_star,
                                       const ExperimentSpec& spec) {
  CgConfig cfg;
  cfg.variant = spec.variant;
  cfg.wolfe.c1 = spec.c1;
  cfg.wolfe.c2 = spec.c2;
  cfg.max_iter = spec.max_iter;
  cfg.grad_tol = spec.grad_tol;
  cfg.restart_period = spec.restart;
  cfg.record_trace = true;

  const CgResult<M> run = cg_solve(m, prob, x0, cfg);

  ExperimentResult res;
  res.status = run.status;
  res.iterations = run.iterations;
  ZoutendijkLedger ledger;
  res.rows.reserve(run.trace.size());
  for (const CgState<M>& s : run.trace) {
    zoutendijk_accumulate(ledger, m, s);
    TraceRow r;
    r.k = s.k;
    r.f = s.f;
    r.grad_norm = s.grad_norm;
    r.alpha = s.alpha;
    r.beta = s.beta;
    r.ratio = s.ratio;
    r.scaled = s.scaled;
    r.x1 = s.x(0);
    r.dist = (s.x - x_star).norm();
    r.zoutendijk_partial = ledger.total();
    res.rows.push_back(r);
    if (s.scaled) ++res.scaling_events;
    if (s.ls_fallback) res.any_ls_fallback = true;
  }
  if (!res.rows.empty()) {
    res.final_f = res.rows.back().f;
    res.final_dist = res.rows.back().dist;
    res.final_grad_norm = res.rows.back().grad_norm;
  }
  return res;
}

}  // namespace detail

inline std::vector<std::string> experiment_preset_names() {
  return {"peculiar-sphere-20", "ortho-sphere-100"};
}

/// Runs one experiment preset. Writes the trace file when out_path is set
/// (also on solver failure, preserving the partial trace).
inline ExperimentResult run_experiment(const ExperimentSpec& spec) {
  ExperimentResult res;
  std::optional<unsigned long> seed;
  if (spec.preset == "peculiar-sphere-20") {
    // Rayleigh quotient with A = diag(1..20) on the sphere with the
    // inflating metric; x0 = (1,...,1)^T / (2 sqrt(5)).
    const int n = 20;
    const SpherePeculiar m(n);
    const RayleighProblem prob(preset_matrix("diag-1-20"));
    auto [x0, s] = detail::resolve_x0(spec.x0, n, 2.0 * std::sqrt(5.0));
    seed = s;
    Vector x_star = Vector::Zero(n);
    x_star(0) = x0(0) >= 0.0 ? 1.0 : -1.0;
    res = detail::run_sphere_experiment(m, prob, x0, x_star, spec);
  } else if (spec.preset == "ortho-sphere-100") {
    // Rayleigh quotient with A = diag(1..100)/100, standard metric,
    // orthographic retraction; x0 is the normalized all-ones vector.
    const int n = 100;
    const SphereStandard m(n, SphereRetraction::Orthographic);
    const RayleighProblem prob(preset_matrix("diag-1-100-scaled"));
    auto [x0, s] = detail::resolve_x0(spec.x0, n, 10.0);
    seed = s;
    Vector x_star = Vector::Zero(n);
    x_star(0) = x0(0) >= 0.0 ? 1.0 : -1.0;
    res = detail::run_sphere_experiment(m, prob, x0, x_star, spec);
  } else {
    throw usage_error("unknown preset '" + spec.preset + "'");
  }

  if (!spec.out_path.empty()) {
    std::ofstream out(spec.out_path);
    if (!out) throw usage_error("cannot open output path " + spec.out_path);
    std::map<std::string, std::string> meta;
    meta["preset"] = spec.preset;
    meta["variant"] = spec.variant == CgVariant::Scaled ? "scaled-fr" : "fr";
    meta["x0"] = spec.x0;
    if (seed) meta["seed"] = std::to_string(*seed);
    if (spec.restart) meta["restart"] = std::to_string(*spec.restart);
    if (spec.format == TraceFormat::Csv) {
      write_trace_csv(out, res.rows, meta);
    } else {
      write_trace_jsonl(out, res.rows, meta);
    }
  }
  return res;
}

struct SweepEntry {
  std::optional<int> period;  // nullopt: no restart
  ExperimentResult result;
};

/// Runs the base spec once per restart period (plus the no-restart run when
/// requested via nullopt in `periods`). Runs execute in parallel; each run
/// owns its state and output file.
inline std::vector<SweepEntry> run_restart_sweep(
    const ExperimentSpec& base, const std::vector<std::optional<int>>& periods) {
  std::vector<ExperimentSpec> specs;
  specs.reserve(periods.size());
  for (const auto& period : periods) {
    ExperimentSpec s = base;
    s.restart = period;
    if (!s.out_path.empty()) {
      const std::string tag =
          period ? "restart" + std::to_string(*period) : "norestart";
      const auto dot = s.out_path.rfind('.');
      if (dot == std::string::npos) {
        s.out_path += "-" + tag;
      } else {
        s.out_path.insert(dot, "-" + tag);
      }
    }
    specs.push_back(std::move(s));
  }
  std::vector<std::future<ExperimentResult>> futures;
  futures.reserve(specs.size());
  for (const ExperimentSpec& s : specs) {
    futures.push_back(
        std::async(std::launch::async, [&s] { return run_experiment(s); }));
  }
  std::vector<SweepEntry> out;
  out.reserve(specs.size());
  for (size_t i = 0; i < specs.size(); ++i) {
    out.push_back({periods[i], futures[i].get()});
  }
  return out;
}

}  // namespace rcg

#endif  // RCG_EXPERIMENTS_HPP
