// Unit sphere S^{n-1} = {x in R^n | x^T x = 1} with two retractions
// (normalization and orthographic) and two metrics (the induced Euclidean
// one and a diagonal metric whose first entry blows up near +-e1).
#ifndef RCG_MANIFOLDS_SPHERE_HPP
#define RCG_MANIFOLDS_SPHERE_HPP

#include <cmath>
#include <limits>
#include <random>

#include "rcg/core.hpp"

namespace rcg {

enum class SphereRetraction {
  QrNormalize,   // R_x(xi) = (x + xi) / ||x + xi||
  Orthographic,  // R_x(xi) = sqrt(1 - xi^T xi) x + xi, ||xi|| < 1
};

namespace detail {

inline Vector sphere_retract_qr(const Vector& x, const Vector& v) {
  const Vector w = x + v;
  const double s = w.squaredNorm();
  // For tangent v we have ||x+v||^2 = ||x||^2 + ||v||^2 >= 1; guarded anyway.
  if (s == 0.0) throw retraction_domain_error("qr retraction: x + xi = 0");
  Vector y = w / std::sqrt(s);
  if (std::abs(y.squaredNorm() - 1.0) > kFeasTol) y.normalize();
  return y;
}

inline Vector sphere_retract_orthographic(const Vector& x, const Vector& v) {
  const double s = v.squaredNorm();
  if (s >= 1.0) {
    throw retraction_domain_error("orthographic retraction: ||xi|| >= 1");
  }
  return std::sqrt(1.0 - s) * x + v;
}

// Differential of the normalization retraction:
//   (1/||x+eta||) (I - (x+eta)(x+eta)^T / ||x+eta||^2) xi.
inline Vector sphere_transport_qr(const Vector& x, const Vector& eta,
                                  const Vector& xi) {
  const Vector w = x + eta;
  const double s = w.squaredNorm();
  if (s == 0.0) throw retraction_domain_error("qr transport: x + eta = 0");
  return (xi - w * (w.dot(xi) / s)) / std::sqrt(s);
}

// Differential of the orthographic retraction:
//   xi - (eta^T xi / sqrt(1 - eta^T eta)) x.
inline Vector sphere_transport_orthographic(const Vector& x, const Vector& eta,
                                            const Vector& xi) {
  const double s = eta.squaredNorm();
  if (s >= 1.0) {
    throw retraction_domain_error("orthographic transport: ||eta|| >= 1");
  }
  return xi - (eta.dot(xi) / std::sqrt(1.0 - s)) * x;
}

}  // namespace detail

/// Sphere with the metric induced from the natural inner product on R^n.
class SphereStandard {
 public:
  using Point = Vector;
  using Tangent = Vector;

  explicit SphereStandard(int n,
                          SphereRetraction kind = SphereRetraction::QrNormalize)
      : n_(n), kind_(kind) {
    detail::require(n >= 2, "SphereStandard: n >= 2 required");
  }

  int ambient_dim() const { return n_; }
  int dimension() const { return n_ - 1; }
  SphereRetraction retraction_kind() const { return kind_; }

  double inner(const Point& x, const Tangent& u, const Tangent& v) const {
    check_shape(x);
    check_shape(u);
    check_shape(v);
    return u.dot(v);
  }
  double norm(const Point& x, const Tangent& u) const {
    return std::sqrt(inner(x, u, u));
  }

  /// Orthogonal projection (I - x x^T) v onto the tangent space.
  Tangent project(const Point& x, const Vector& ambient) const {
    check_shape(x);
    check_shape(ambient);
    return ambient - x * x.dot(ambient);
  }

  Point retract(const Point& x, const Tangent& v) const {
    check_shape(x);
    check_shape(v);
    return kind_ == SphereRetraction::QrNormalize
               ? detail::sphere_retract_qr(x, v)
               : detail::sphere_retract_orthographic(x, v);
  }

  Tangent transport_diff(const Point& x, const Tangent& eta,
                         const Tangent& xi) const {
    check_shape(x);
    check_shape(eta);
    check_shape(xi);
    return kind_ == SphereRetraction::QrNormalize
               ? detail::sphere_transport_qr(x, eta, xi)
               : detail::sphere_transport_orthographic(x, eta, xi);
  }

  Tangent egrad_to_rgrad(const Point& x, const Vector& egrad) const {
    return project(x, egrad);
  }

  double feasibility_residual(const Point& x) const {
    check_shape(x);
    return std::abs(x.squaredNorm() - 1.0);
  }
  double tangency_residual(const Point& x, const Tangent& v) const {
    check_shape(x);
    check_shape(v);
    return std::abs(x.dot(v));
  }

  /// Metric-norm radius of the retraction's domain (infinite when the
  /// retraction is defined on the whole tangent space).
  double retraction_radius() const {
    return kind_ == SphereRetraction::Orthographic
               ? 1.0
               : std::numeric_limits<double>::infinity();
  }

  Point random_point(std::mt19937_64& rng) const {
    std::normal_distribution<double> g;
    Vector v(n_);
    for (int i = 0; i < n_; ++i) v(i) = g(rng);
    v.normalize();
    return v;
  }
  Tangent random_tangent(std::mt19937_64& rng, const Point& x) const {
    std::normal_distribution<double> g;
    Vector v(n_);
    for (int i = 0; i < n_; ++i) v(i) = g(rng);
    return project(x, v);
  }

 private:
  void check_shape(const Vector& v) const {
    detail::require(v.size() == n_, "SphereStandard: wrong ambient dimension");
  }

  int n_;
  SphereRetraction kind_;
};

/// Sphere endowed with the metric g_x(u, v) = u^T G_x v where
/// G_x = diag(c * x1^2 + 1, 1, ..., 1). The large first entry (c = 10000 in
/// the reference experiments) inflates tangent norms near +-e1. Uses the
/// normalization retraction; G_x^{-1} is applied analytically.
class SpherePeculiar {
 public:
  using Point = Vector;
  using Tangent = Vector;

  explicit SpherePeculiar(int n, double metric_coefficient = 10000.0)
      : n_(n), coeff_(metric_coefficient) {
    detail::require(n >= 2, "SpherePeculiar: n >= 2 required");
    detail::require(metric_coefficient >= 0.0,
                    "SpherePeculiar: coefficient >= 0 required");
  }

  int ambient_dim() const { return n_; }
  int dimension() const { return n_ - 1; }
  double metric_coefficient() const { return coeff_; }

  double inner(const Point& x, const Tangent& u, const Tangent& v) const {
    check_shape(x);
    check_shape(u);
    check_shape(v);
    return u.dot(v) + coeff_ * x(0) * x(0) * u(0) * v(0);
  }
  double norm(const Point& x, const Tangent& u) const {
    return std::sqrt(inner(x, u, u));
  }

  /// Metric-orthogonal projection v - G_x^{-1} x (x^T v) / (x^T G_x^{-1} x).
  /// The image satisfies x^T (P v) = 0, so it lands in the tangent space.
  Tangent project(const Point& x, const Vector& ambient) const {
    check_shape(x);
    check_shape(ambient);
    const Vector ginv_x = apply_ginv(x, x);
    return ambient - ginv_x * (x.dot(ambient) / x.dot(ginv_x));
  }

  Point retract(const Point& x, const Tangent& v) const {
    check_shape(x);
    check_shape(v);
    return detail::sphere_retract_qr(x, v);
  }

  Tangent transport_diff(const Point& x, const Tangent& eta,
                         const Tangent& xi) const {
    check_shape(x);
    check_shape(eta);
    check_shape(xi);
    return detail::sphere_transport_qr(x, eta, xi);
  }

  /// grad f(x) = P_x G_x^{-1} (euclidean gradient); for f(x) = x^T A x this
  /// reproduces 2 (I - G^{-1} x x^T / (x^T G^{-1} x)) G^{-1} A x.
  Tangent egrad_to_rgrad(const Point& x, const Vector& egrad) const {
    check_shape(x);
    check_shape(egrad);
    return project(x, apply_ginv(x, egrad));
  }

  double feasibility_residual(const Point& x) const {
    check_shape(x);
    return std::abs(x.squaredNorm() - 1.0);
  }
  double tangency_residual(const Point& x, const Tangent& v) const {
    check_shape(x);
    check_shape(v);
    return std::abs(x.dot(v));
  }

  double retraction_radius() const {
    return std::numeric_limits<double>::infinity();
  }

  Point random_point(std::mt19937_64& rng) const {
    std::normal_distribution<double> g;
    Vector v(n_);
    for (int i = 0; i < n_; ++i) v(i) = g(rng);
    v.normalize();
    return v;
  }
  Tangent random_tangent(std::mt19937_64& rng, const Point& x) const {
    std::normal_distribution<double> g;
    Vector v(n_);
    for (int i = 0; i < n_; ++i) v(i) = g(rng);
    return project(x, v);
  }

 private:
  Vector apply_ginv(const Point& x, const Vector& v) const {
    Vector out = v;
    out(0) /= coeff_ * x(0) * x(0) + 1.0;
    return out;
  }
  void check_shape(const Vector& v) const {
    detail::require(v.size() == n_, "SpherePeculiar: wrong ambient dimension");
  }

  int n_;
  double coeff_;
};

}  // namespace rcg

#endif  // RCG_MANIFOLDS_SPHERE_HPP
