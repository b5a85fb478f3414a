// Objective functions with Euclidean gradients: the Rayleigh quotient on the
// sphere, the Brockett cost on the Stiefel manifold, and the SVD trace
// objective on a product of Stiefels. All evaluations are pure; Riemannian
// gradients come from the owning manifold's egrad_to_rgrad.
#ifndef RCG_PROBLEMS_HPP
#define RCG_PROBLEMS_HPP

#include <cmath>
#include <istream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "rcg/core.hpp"

namespace rcg {

/// f(x) = x^T A x on the sphere; minimizers are unit eigenvectors of the
/// smallest eigenvalue.
class RayleighProblem {
 public:
  explicit RayleighProblem(Matrix a) : a_(std::move(a)) {
    detail::require(a_.rows() == a_.cols(), "RayleighProblem: A must be square");
    if ((a_ - a_.transpose()).norm() > 1e-12) {
      throw shape_error("RayleighProblem: A must be symmetric to 1e-12");
    }
  }

  const Matrix& matrix() const { return a_; }

  double value(const Vector& x) const {
    check(x);
    return x.dot(a_ * x);
  }
  Vector euclid_grad(const Vector& x) const {
    check(x);
    return 2.0 * (a_ * x);
  }

 private:
  void check(const Vector& x) const {
    detail::require(x.size() == a_.rows(), "RayleighProblem: wrong dimension");
  }
  Matrix a_;
};

/// Brockett cost f(X) = tr(X^T A X N) on St(p,n) with
/// N = diag(mu_1, ..., mu_p), 0 < mu_1 < ... < mu_p.
class BrockettProblem {
 public:
  BrockettProblem(Matrix a, Vector mu) : a_(std::move(a)), mu_(std::move(mu)) {
    detail::require(a_.rows() == a_.cols(), "BrockettProblem: A must be square");
    if ((a_ - a_.transpose()).norm() > 1e-12) {
      throw shape_error("BrockettProblem: A must be symmetric to 1e-12");
    }
    detail::require(mu_.size() >= 1 && mu_(0) > 0.0,
                    "BrockettProblem: mu must be positive");
    for (Eigen::Index i = 1; i < mu_.size(); ++i) {
      detail::require(mu_(i) > mu_(i - 1),
                      "BrockettProblem: mu must be strictly increasing");
    }
  }

  const Matrix& matrix() const { return a_; }
  const Vector& mu() const { return mu_; }

  double value(const Matrix& x) const {
    check(x);
    const Matrix ax = a_ * x;
    double f = 0.0;
    for (Eigen::Index j = 0; j < x.cols(); ++j) {
      f += mu_(j) * x.col(j).dot(ax.col(j));
    }
    return f;
  }
  Matrix euclid_grad(const Matrix& x) const {
    check(x);
    return 2.0 * (a_ * x) * mu_.asDiagonal();
  }

 private:
  void check(const Matrix& x) const {
    detail::require(x.rows() == a_.rows() && x.cols() == mu_.size(),
                    "BrockettProblem: wrong shape");
  }
  Matrix a_;
  Vector mu_;
};

/// F(U,V) = tr(U^T A V N) on St(p,m) x St(p,n) with mu_1 > ... > mu_p > 0.
/// Maximizing F recovers the dominant singular triplets of A; the solver
/// minimizes, so sense Maximize negates value and gradients.
class SvdProblem {
 public:
  enum class Sense { Minimize, Maximize };

  SvdProblem(Matrix a, Vector mu, Sense sense)
      : a_(std::move(a)), mu_(std::move(mu)), sign_(sense == Sense::Maximize ? -1.0 : 1.0) {
    detail::require(a_.rows() >= a_.cols(), "SvdProblem: need m >= n");
    detail::require(mu_.size() >= 1 && mu_.size() <= a_.cols(),
                    "SvdProblem: need n >= p");
    detail::require(mu_(mu_.size() - 1) > 0.0, "SvdProblem: mu must be positive");
    for (Eigen::Index i = 1; i < mu_.size(); ++i) {
      detail::require(mu_(i) < mu_(i - 1),
                      "SvdProblem: mu must be strictly decreasing");
    }
  }

  const Matrix& matrix() const { return a_; }
  const Vector& mu() const { return mu_; }

  /// Value as seen by the (minimizing) solver: -F for sense Maximize.
  double value(const MatrixPair& uv) const {
    check(uv);
    const Matrix av = a_ * uv.second;
    double f = 0.0;
    for (Eigen::Index j = 0; j < mu_.size(); ++j) {
      f += mu_(j) * uv.first.col(j).dot(av.col(j));
    }
    return sign_ * f;
  }
  MatrixPair euclid_grad(const MatrixPair& uv) const {
    check(uv);
    return {sign_ * (a_ * uv.second) * mu_.asDiagonal(),
            sign_ * (a_.transpose() * uv.first) * mu_.asDiagonal()};
  }

  /// Singular-value estimates sigma_j = u_j^T A v_j at the current iterate.
  Vector singular_value_estimates(const MatrixPair& uv) const {
    check(uv);
    const Matrix av = a_ * uv.second;
    Vector s(mu_.size());
    for (Eigen::Index j = 0; j < mu_.size(); ++j) {
      s(j) = uv.first.col(j).dot(av.col(j));
    }
    return s;
  }

 private:
  void check(const MatrixPair& uv) const {
    detail::require(uv.first.rows() == a_.rows() &&
                        uv.first.cols() == mu_.size() &&
                        uv.second.rows() == a_.cols() &&
                        uv.second.cols() == mu_.size(),
                    "SvdProblem: wrong shapes");
  }
  Matrix a_;
  Vector mu_;
  double sign_;
};

// ---------------------------------------------------------------------------
// Matrix ingestion: rows of whitespace-separated decimals.

struct DenseMatrixInput {
  Matrix matrix;
  bool symmetrized = false;  // true when asymmetry beyond 1e-12 was averaged
};

inline Matrix read_dense_matrix(std::istream& in) {
  std::vector<std::vector<double>> rows;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::istringstream ls(line);
    std::vector<double> row;
    double v = 0.0;
    while (ls >> v) row.push_back(v);
    if (!ls.eof()) throw shape_error("read_dense_matrix: malformed number");
    if (!row.empty()) rows.push_back(std::move(row));
  }
  if (rows.empty()) throw shape_error("read_dense_matrix: empty input");
  const Eigen::Index n = static_cast<Eigen::Index>(rows.size());
  const Eigen::Index m = static_cast<Eigen::Index>(rows[0].size());
  Matrix out(n, m);
  for (Eigen::Index i = 0; i < n; ++i) {
    if (static_cast<Eigen::Index>(rows[i].size()) != m) {
      throw shape_error("read_dense_matrix: ragged rows");
    }
    for (Eigen::Index j = 0; j < m; ++j) out(i, j) = rows[i][j];
  }
  return out;
}

/// Reads a square matrix and symmetrizes it as (A + A^T)/2 when its
/// asymmetry exceeds 1e-12, reporting that in the returned flag.
inline DenseMatrixInput read_symmetric_matrix(std::istream& in) {
  DenseMatrixInput r;
  r.matrix = read_dense_matrix(in);
  detail::require(r.matrix.rows() == r.matrix.cols(),
                  "read_symmetric_matrix: matrix is not square");
  if ((r.matrix - r.matrix.transpose()).norm() > 1e-12) {
    r.matrix = 0.5 * (r.matrix + r.matrix.transpose()).eval();
    r.symmetrized = true;
  }
  return r;
}

/// Named A-matrix presets used by the reference experiments.
inline Matrix preset_matrix(const std::string& name) {
  if (name == "diag-1-20") {
    Vector d(20);
    for (int i = 0; i < 20; ++i) d(i) = i + 1;
    return d.asDiagonal();
  }
  if (name == "diag-1-100-scaled") {
    Vector d(100);
    for (int i = 0; i < 100; ++i) d(i) = (i + 1) / 100.0;
    return d.asDiagonal();
  }
  throw shape_error("preset_matrix: unknown preset '" + name + "'");
}

}  // namespace rcg

#endif  // RCG_PROBLEMS_HPP
