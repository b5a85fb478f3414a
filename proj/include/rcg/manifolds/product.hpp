// Product of two Stiefel manifolds St(p,m) x St(p,n) with the componentwise
// sum metric and the factorwise QR retraction.
#ifndef RCG_MANIFOLDS_PRODUCT_HPP
#define RCG_MANIFOLDS_PRODUCT_HPP

#include <cmath>
#include <limits>
#include <random>

#include "rcg/core.hpp"
#include "rcg/manifolds/stiefel.hpp"

namespace rcg {

class ProductStiefel {
 public:
  using Point = MatrixPair;
  using Tangent = MatrixPair;

  ProductStiefel(int m, int n, int p,
                 Stiefel::DiffMode mode = Stiefel::DiffMode::Analytic)
      : first_(m, p, mode), second_(n, p, mode) {
    detail::require(m >= n && n >= p, "ProductStiefel: need m >= n >= p");
  }

  const Stiefel& first() const { return first_; }
  const Stiefel& second() const { return second_; }
  int dimension() const { return first_.dimension() + second_.dimension(); }

  double inner(const Point& x, const Tangent& u, const Tangent& v) const {
    return first_.inner(x.first, u.first, v.first) +
           second_.inner(x.second, u.second, v.second);
  }
  double norm(const Point& x, const Tangent& u) const {
    return std::sqrt(inner(x, u, u));
  }

  Tangent project(const Point& x, const Tangent& ambient) const {
    return {first_.project(x.first, ambient.first),
            second_.project(x.second, ambient.second)};
  }
  Point retract(const Point& x, const Tangent& v) const {
    return {first_.retract(x.first, v.first),
            second_.retract(x.second, v.second)};
  }
  Tangent transport_diff(const Point& x, const Tangent& eta,
                         const Tangent& xi) const {
    return {first_.transport_diff(x.first, eta.first, xi.first),
            second_.transport_diff(x.second, eta.second, xi.second)};
  }
  Tangent egrad_to_rgrad(const Point& x, const Tangent& egrad) const {
    return project(x, egrad);
  }

  double feasibility_residual(const Point& x) const {
    return std::hypot(first_.feasibility_residual(x.first),
                      second_.feasibility_residual(x.second));
  }
  double tangency_residual(const Point& x, const Tangent& v) const {
    return std::hypot(first_.tangency_residual(x.first, v.first),
                      second_.tangency_residual(x.second, v.second));
  }

  double retraction_radius() const {
    return std::numeric_limits<double>::infinity();
  }

  Point random_point(std::mt19937_64& rng) const {
    Matrix a = first_.random_point(rng);
    Matrix b = second_.random_point(rng);
    return {std::move(a), std::move(b)};
  }
  Tangent random_tangent(std::mt19937_64& rng, const Point& x) const {
    Matrix a = first_.random_tangent(rng, x.first);
    Matrix b = second_.random_tangent(rng, x.second);
    return {std::move(a), std::move(b)};
  }

 private:
  Stiefel first_, second_;
};

}  // namespace rcg

#endif  // RCG_MANIFOLDS_PRODUCT_HPP
