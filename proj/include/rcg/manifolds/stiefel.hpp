// Stiefel manifold St(p,n) = {X in R^{n x p} | X^T X = I_p} with the induced
// metric tr(xi^T eta) and the QR retraction R_X(xi) = qf(X + xi).
#ifndef RCG_MANIFOLDS_STIEFEL_HPP
#define RCG_MANIFOLDS_STIEFEL_HPP

#include <cmath>
#include <limits>
#include <random>

#include "rcg/core.hpp"

namespace rcg {

/// Q-factor of the QR decomposition of a full-rank matrix, with the R factor
/// normalized to a positive diagonal. Computed by modified Gram-Schmidt with
/// a second reorthogonalization pass; deterministic for identical input bits.
/// Columns whose pivot falls below 1e-12 times the column norm raise
/// rank_error.
inline Matrix qf(const Matrix& b, Matrix* r_out = nullptr) {
  const Eigen::Index n = b.rows();
  const Eigen::Index p = b.cols();
  detail::require(n >= p && p >= 1, "qf: need n >= p >= 1");
  Matrix q(n, p);
  Matrix r = Matrix::Zero(p, p);
  for (Eigen::Index k = 0; k < p; ++k) {
    Vector v = b.col(k);
    const double col_norm = v.norm();
    for (int pass = 0; pass < 2; ++pass) {
      for (Eigen::Index i = 0; i < k; ++i) {
        const double c = q.col(i).dot(v);
        v -= c * q.col(i);
        r(i, k) += c;
      }
    }
    const double pivot = v.norm();
    if (pivot <= 1e-12 * col_norm) {
      throw rank_error("qf: rank-deficient input");
    }
    r(k, k) = pivot;
    q.col(k) = v / pivot;
  }
  if (r_out) *r_out = r;
  return q;
}

class Stiefel {
 public:
  using Point = Matrix;
  using Tangent = Matrix;

  /// Differentiated-retraction evaluation mode. Analytic differentiates the
  /// Q-factor exactly (triangular solve plus a skew/strictly-lower split);
  /// FiniteDifference is a fallback kept for cross-checking.
  enum class DiffMode { Analytic, FiniteDifference };

  Stiefel(int n, int p, DiffMode mode = DiffMode::Analytic)
      : n_(n), p_(p), mode_(mode) {
    detail::require(n >= p && p >= 1, "Stiefel: need n >= p >= 1");
  }

  int rows() const { return n_; }
  int cols() const { return p_; }
  int dimension() const { return n_ * p_ - p_ * (p_ + 1) / 2; }

  double inner(const Point& x, const Tangent& u, const Tangent& v) const {
    check_shape(x);
    check_shape(u);
    check_shape(v);
    return (u.array() * v.array()).sum();
  }
  double norm(const Point& x, const Tangent& u) const {
    return std::sqrt(inner(x, u, u));
  }

  /// Projection for the induced metric: V - X sym(X^T V).
  Tangent project(const Point& x, const Matrix& ambient) const {
    check_shape(x);
    check_shape(ambient);
    const Matrix xtv = x.transpose() * ambient;
    return ambient - x * (0.5 * (xtv + xtv.transpose()));
  }

  Point retract(const Point& x, const Tangent& v) const {
    check_shape(x);
    check_shape(v);
    Point y = qf(x + v);
    if (feasibility_residual(y) > kFeasTol) y = qf(y);
    return y;
  }

  Tangent transport_diff(const Point& x, const Tangent& eta,
                         const Tangent& xi) const {
    check_shape(x);
    check_shape(eta);
    check_shape(xi);
    return mode_ == DiffMode::Analytic ? transport_analytic(x, eta, xi)
                                       : transport_fd(x, eta, xi);
  }

  Tangent egrad_to_rgrad(const Point& x, const Matrix& egrad) const {
    return project(x, egrad);
  }

  double feasibility_residual(const Point& x) const {
    check_shape(x);
    return (x.transpose() * x - Matrix::Identity(p_, p_)).norm();
  }
  double tangency_residual(const Point& x, const Tangent& v) const {
    check_shape(x);
    check_shape(v);
    const Matrix xtv = x.transpose() * v;
    return (xtv + xtv.transpose()).norm();
  }

  double retraction_radius() const {
    return std::numeric_limits<double>::infinity();
  }

  Point random_point(std::mt19937_64& rng) const {
    std::normal_distribution<double> g;
    Matrix b(n_, p_);
    for (int j = 0; j < p_; ++j)
      for (int i = 0; i < n_; ++i) b(i, j) = g(rng);
    return qf(b);
  }
  Tangent random_tangent(std::mt19937_64& rng, const Point& x) const {
    std::normal_distribution<double> g;
    Matrix b(n_, p_);
    for (int j = 0; j < p_; ++j)
      for (int i = 0; i < n_; ++i) b(i, j) = g(rng);
    return project(x, b);
  }

 private:
  // D qf(B)[xi] at B = X + eta, B = QR:
  //   Q rho(Q^T xi R^{-1}) + (I - Q Q^T) xi R^{-1},
  // where rho(A) = tril(A) - tril(A)^T takes the strictly lower triangle.
  Tangent transport_analytic(const Point& x, const Tangent& eta,
                             const Tangent& xi) const {
    Matrix r;
    const Matrix q = qf(x + eta, &r);
    const Matrix c = q.transpose() * xi;  // p x p
    // Solve A R = C  =>  R^T A^T = C^T with R^T lower triangular.
    const Matrix a = r.transpose()
                         .triangularView<Eigen::Lower>()
                         .solve(c.transpose())
                         .transpose();
    Matrix rho = a.triangularView<Eigen::StrictlyLower>();
    rho -= Matrix(rho.transpose());
    const Matrix w = xi - q * c;  // (I - Q Q^T) xi
    const Matrix w_rinv = r.transpose()
                              .triangularView<Eigen::Lower>()
                              .solve(w.transpose())
                              .transpose();
    return q * rho + w_rinv;
  }

  Tangent transport_fd(const Point& x, const Tangent& eta,
                       const Tangent& xi) const {
    const double scale = std::max(1.0, xi.norm());
    const double h = 1e-6 / scale;
    const Matrix plus = qf(x + eta + h * xi);
    const Matrix minus = qf(x + eta - h * xi);
    return (plus - minus) / (2.0 * h);
  }

  void check_shape(const Matrix& m) const {
    detail::require(m.rows() == n_ && m.cols() == p_,
                    "Stiefel: wrong matrix shape");
  }

  int n_, p_;
  DiffMode mode_;
};

}  // namespace rcg

#endif  // RCG_MANIFOLDS_STIEFEL_HPP
