#ifndef TBEAM_RIEMANN_TRANSFORM_HPP
#define TBEAM_RIEMANN_TRANSFORM_HPP

#include <string>
#include <vector>

#include "tbeam/beam_model.hpp"

namespace tbeam {

/// Characteristic variables (p, phi, q, psi) stored on cell midpoints, where
/// the discrete derivative of the nodal state lives:
///   p   = -c1 u_x + u_t     q   =  c1 u_x + u_t
///   phi = -c2 v_x + v_t     psi =  c2 v_x + v_t
/// The two scalars pq_left / phipsi_left carry the boundary trace values
/// (p+q)(0) and (phi+psi)(0), which the midpoint arrays cannot represent.
struct RiemannState {
  Grid grid;
  std::vector<double> p, phi, q, psi;  // size grid.n each
  double pq_left = 0.0;
  double phipsi_left = 0.0;

  static RiemannState zero(const Grid& g);
  void validate() const;
};

/// L2-type state norm: sqrt( h * sum(p^2 + phi^2 + q^2 + psi^2) ).
double x_norm(const RiemannState& w);

/// Values of the two mean-value constraint functionals
///   r1 = int (p - q) dx,  r2 = int (phi - psi) dx
/// (midpoint quadrature; their common null space is the admissible subspace).
struct ConstraintValues {
  double r1, r2;
};

ConstraintValues constraint_values(const RiemannState& w);

RiemannState forward_transform(const SecondOrderState& y, const BeamParams& params);

/// Reconstructs the nodal state by cumulative integration. Requires the
/// constraint values to vanish (relative gate 1e-8), otherwise the
/// reconstructed u, v cannot return to zero at x = l.
SecondOrderState inverse_transform(const RiemannState& w, const BeamParams& params);

/// Orthogonal projection onto the zero-mean subspace: subtracts the
/// components along the two unit constraint directions
///   e1 = (1,0,-1,0)/sqrt(2l),  e2 = (0,1,0,-1)/sqrt(2l).
RiemannState project_X0(const RiemannState& w);

/// Unit constraint directions as states on the given grid.
RiemannState basis_e1(const Grid& g);
RiemannState basis_e2(const Grid& g);

struct DomainCheckResult {
  bool pass;
  std::vector<std::string> reasons;
};

/// Nodal-side membership proxy: u, v, u_t, v_t all vanish at both ends.
DomainCheckResult domain_check(const SecondOrderState& y);
/// Characteristic-side membership: boundary sums (p+q), (phi+psi) vanish at
/// both ends and the constraint values vanish.
DomainCheckResult domain_check(const RiemannState& w);

}  // namespace tbeam

#endif
