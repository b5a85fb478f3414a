// Scaled and switching vector transports built on top of a manifold's
// differentiated retraction. The switching transport keeps the transported
// direction but rescales it back to the source norm whenever the
// differentiated retraction increased it.
#ifndef RCG_TRANSPORTS_HPP
#define RCG_TRANSPORTS_HPP

#include <cmath>

#include "rcg/core.hpp"

namespace rcg {

template <manifold M>
struct TransportOutcome {
  typename M::Tangent vector;  // tangent at retract(x, eta)
  double ratio;                // ||T^R_eta(xi)|| / ||xi||, 1 when xi = 0
  bool scaled;                 // true iff the scaled transport was applied
};

/// Scaled transport: T^R_eta(xi) rescaled to the source norm ||xi||_x.
/// Returns 0 for xi = 0 (the continuous extension of the 0/0 formula).
template <manifold M>
typename M::Tangent transport_scaled(const M& m, const typename M::Point& x,
                                     const typename M::Tangent& eta,
                                     const typename M::Tangent& xi) {
  const double xi_norm = m.norm(x, xi);
  if (xi_norm == 0.0) return xi;
  typename M::Tangent t = m.transport_diff(x, eta, xi);
  const typename M::Point y = m.retract(x, eta);
  const double t_norm = m.norm(y, t);
  if (t_norm <= 1e-300) {
    throw degenerate_transport_error(
        "transport_scaled: transported vector vanishes");
  }
  t *= xi_norm / t_norm;
  return t;
}

/// Switching transport: the differentiated retraction when it does not
/// increase the norm (ties included), the scaled transport otherwise.
template <manifold M>
TransportOutcome<M> transport_switch(const M& m, const typename M::Point& x,
                                     const typename M::Tangent& eta,
                                     const typename M::Tangent& xi) {
  typename M::Tangent t = m.transport_diff(x, eta, xi);
  const typename M::Point y = m.retract(x, eta);
  const double xi_norm = m.norm(x, xi);
  const double t_norm = m.norm(y, t);
  const double ratio = xi_norm > 0.0 ? t_norm / xi_norm : 1.0;
  if (t_norm <= xi_norm) {
    return {std::move(t), ratio, false};
  }
  t *= xi_norm / t_norm;
  return {std::move(t), ratio, true};
}

}  // namespace rcg

#endif  // RCG_TRANSPORTS_HPP
