// Core vocabulary for Riemannian conjugate gradient solvers: point/tangent
// representations in ambient coordinates, the manifold concept every other
// module programs against, and the shared error types.
#ifndef RCG_CORE_HPP
#define RCG_CORE_HPP

#include <Eigen/Dense>

#include <cmath>
#include <concepts>
#include <random>
#include <stdexcept>
#include <string>
#include <utility>

namespace rcg {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

/// Feasibility tolerance shared by all manifolds. Iterates whose constraint
/// residual exceeds this are re-projected after a retraction to counter
/// floating-point drift on long runs.
inline constexpr double kFeasTol = 1e-10;

// ---------------------------------------------------------------------------
// Errors

/// Mismatched array shapes passed to a manifold or problem operation.
struct shape_error : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

/// A point (or tangent) violates its manifold constraint beyond kFeasTol.
struct feasibility_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Input outside a retraction's domain (orthographic needs ||xi|| < 1).
struct retraction_domain_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Rank-deficient input to the Q-factor computation.
struct rank_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Scaled transport applied to a vector whose transported image vanishes.
struct degenerate_transport_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// cos(theta) requested for a zero gradient or zero direction.
struct undefined_angle_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Line search started along a non-descent direction.
struct not_descent_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Bracket/zoom budget exhausted. Carries the best sufficient-decrease step
/// found so the caller can decide whether to fall back or abort.
struct linesearch_error : std::runtime_error {
  linesearch_error(const std::string& what, double best, bool has_decrease)
      : std::runtime_error(what),
        best_alpha(best),
        has_sufficient_decrease(has_decrease) {}
  double best_alpha;
  bool has_sufficient_decrease;
};

// ---------------------------------------------------------------------------
// Point / tangent representations
//
// Points and tangents live in ambient coordinates: a length-n vector on the
// sphere, an n x p matrix on the Stiefel manifold, a matrix pair on a product
// of Stiefels. Tangents use the same array shape as their base point; the
// base is passed explicitly to every operation that needs it.

/// Ambient representation for points/tangents on a product of two matrix
/// manifolds. Supports the linear operations generic solver code relies on.
struct MatrixPair {
  Matrix first;
  Matrix second;

  MatrixPair() = default;
  MatrixPair(Matrix a, Matrix b) : first(std::move(a)), second(std::move(b)) {}

  MatrixPair operator+(const MatrixPair& o) const {
    return {first + o.first, second + o.second};
  }
  MatrixPair operator-(const MatrixPair& o) const {
    return {first - o.first, second - o.second};
  }
  MatrixPair operator-() const { return {-first, -second}; }
  MatrixPair& operator+=(const MatrixPair& o) {
    first += o.first;
    second += o.second;
    return *this;
  }
  MatrixPair& operator*=(double s) {
    first *= s;
    second *= s;
    return *this;
  }
  friend MatrixPair operator*(double s, const MatrixPair& v) {
    return {s * v.first, s * v.second};
  }
  friend MatrixPair operator*(const MatrixPair& v, double s) { return s * v; }
};

// ---------------------------------------------------------------------------
// Manifold contract

/// One manifold instance bundles its metric, tangency test/projection,
/// retraction and differentiated-retraction transport. All operations are
/// pure; instances are immutable and safe to share across threads.
template <class M>
concept manifold = requires(const M& m, const typename M::Point& x,
                            const typename M::Tangent& u,
                            const typename M::Tangent& v) {
  typename M::Point;
  typename M::Tangent;
  { m.dimension() } -> std::convertible_to<int>;
  { m.inner(x, u, v) } -> std::convertible_to<double>;
  { m.norm(x, u) } -> std::convertible_to<double>;
  { m.project(x, u) } -> std::convertible_to<typename M::Tangent>;
  { m.retract(x, u) } -> std::convertible_to<typename M::Point>;
  { m.transport_diff(x, u, v) } -> std::convertible_to<typename M::Tangent>;
  { m.egrad_to_rgrad(x, u) } -> std::convertible_to<typename M::Tangent>;
  { m.feasibility_residual(x) } -> std::convertible_to<double>;
  { m.tangency_residual(x, u) } -> std::convertible_to<double>;
  { m.retraction_radius() } -> std::convertible_to<double>;
};

/// Objective with a Euclidean gradient, evaluated at ambient coordinates of
/// points on M. The Riemannian gradient is obtained through the manifold's
/// egrad_to_rgrad.
template <class P, class M>
concept problem_for = requires(const P& p, const typename M::Point& x) {
  { p.value(x) } -> std::convertible_to<double>;
  { p.euclid_grad(x) } -> std::convertible_to<typename M::Tangent>;
};

// ---------------------------------------------------------------------------
// Checked wrappers around the contract

/// Riemannian inner product with tangency validation. Shape mismatches raise
/// shape_error; inputs whose tangency residual exceeds kFeasTol raise
/// feasibility_error. Solver internals call m.inner directly.
template <manifold M>
double inner(const M& m, const typename M::Point& x,
             const typename M::Tangent& u, const typename M::Tangent& v) {
  if (m.tangency_residual(x, u) > kFeasTol ||
      m.tangency_residual(x, v) > kFeasTol) {
    throw feasibility_error("inner: argument is not tangent at x");
  }
  return m.inner(x, u, v);
}

struct FeasibilityReport {
  bool feasible;
  double residual;
};

template <manifold M>
FeasibilityReport check_feasibility(const M& m, const typename M::Point& x) {
  const double r = m.feasibility_residual(x);
  return {r <= kFeasTol, r};
}

/// Converts a Euclidean gradient into the Riemannian gradient for the
/// manifold's metric: the result xi satisfies metric(x, xi, zeta) =
/// euclid_grad . zeta for every tangent zeta.
template <manifold M>
typename M::Tangent riemannian_gradient_conversion(
    const M& m, const typename M::Point& x,
    const typename M::Tangent& euclid_grad) {
  return m.egrad_to_rgrad(x, euclid_grad);
}

namespace detail {

inline void require(bool ok, const char* msg) {
  if (!ok) throw shape_error(msg);
}

}  // namespace detail

}  // namespace rcg

#endif  // RCG_CORE_HPP
