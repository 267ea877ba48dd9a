#include "tbeam/riemann_transform.hpp"

#include <cmath>
#include <sstream>

#include "tbeam/errors.hpp"

namespace tbeam {

RiemannState RiemannState::zero(const Grid& g) {
  RiemannState w;
  w.grid = g;
  w.p.assign(g.n, 0.0);
  w.phi.assign(g.n, 0.0);
  w.q.assign(g.n, 0.0);
  w.psi.assign(g.n, 0.0);
  return w;
}

void RiemannState::validate() const {
  const std::size_t m = static_cast<std::size_t>(grid.n);
  if (p.size() != m || phi.size() != m || q.size() != m || psi.size() != m)
    throw ValidationError("riemann state arrays do not match the grid");
}

double x_norm(const RiemannState& w) {
  double s = 0.0;
  for (int k = 0; k < w.grid.n; ++k)
    s += w.p[k] * w.p[k] + w.phi[k] * w.phi[k] + w.q[k] * w.q[k] + w.psi[k] * w.psi[k];
  return std::sqrt(w.grid.h * s);
}

ConstraintValues constraint_values(const RiemannState& w) {
  w.validate();
  double r1 = 0.0, r2 = 0.0;
  for (int k = 0; k < w.grid.n; ++k) {
    r1 += w.p[k] - w.q[k];
    r2 += w.phi[k] - w.psi[k];
  }
  return {w.grid.h * r1, w.grid.h * r2};
}

RiemannState forward_transform(const SecondOrderState& y, const BeamParams& params) {
  y.validate();
  params.validate();
  const Grid& g = y.grid;
  const double c1 = params.c1();
  const double c2 = params.c2();

  RiemannState w = RiemannState::zero(g);
  for (int k = 0; k < g.n; ++k) {
    const double ux = (y.u[k + 1] - y.u[k]) / g.h;
    const double vx = (y.v[k + 1] - y.v[k]) / g.h;
    const double um = 0.5 * (y.u2[k] + y.u2[k + 1]);
    const double vm = 0.5 * (y.v2[k] + y.v2[k + 1]);
    w.p[k] = -c1 * ux + um;
    w.q[k] = c1 * ux + um;
    w.phi[k] = -c2 * vx + vm;
    w.psi[k] = c2 * vx + vm;
  }
  w.pq_left = 2.0 * y.u2.front();
  w.phipsi_left = 2.0 * y.v2.front();
  return w;
}

SecondOrderState inverse_transform(const RiemannState& w, const BeamParams& params) {
  w.validate();
  params.validate();
  const Grid& g = w.grid;
  const double c1 = params.c1();
  const double c2 = params.c2();

  const ConstraintValues cv = constraint_values(w);
  const double gate = 1e-8 * std::max(x_norm(w), 1e-300);
  if (std::abs(cv.r1) > gate || std::abs(cv.r2) > gate) {
    std::ostringstream os;
    os << "inverse_transform: state violates the zero-mean constraints (r1=" << cv.r1
       << ", r2=" << cv.r2 << ", gate=" << gate << ")";
    throw ValidationError(os.str());
  }

  SecondOrderState y = SecondOrderState::zero(g);
  // u from cumulative sums of the midpoint derivative (exact inverse of the
  // forward difference), velocities by inverting the midpoint average with
  // the stored boundary trace as seed.
  y.u2[0] = 0.5 * w.pq_left;
  y.v2[0] = 0.5 * w.phipsi_left;
  for (int k = 0; k < g.n; ++k) {
    const double ux = (w.q[k] - w.p[k]) / (2.0 * c1);
    const double vx = (w.psi[k] - w.phi[k]) / (2.0 * c2);
    y.u[k + 1] = y.u[k] + g.h * ux;
    y.v[k + 1] = y.v[k] + g.h * vx;
    y.u2[k + 1] = (w.p[k] + w.q[k]) - y.u2[k];
    y.v2[k + 1] = (w.phi[k] + w.psi[k]) - y.v2[k];
  }
  return y;
}

RiemannState basis_e1(const Grid& g) {
  RiemannState e = RiemannState::zero(g);
  const double a = 1.0 / std::sqrt(2.0 * g.l);
  for (int k = 0; k < g.n; ++k) {
    e.p[k] = a;
    e.q[k] = -a;
  }
  return e;
}

RiemannState basis_e2(const Grid& g) {
  RiemannState e = RiemannState::zero(g);
  const double a = 1.0 / std::sqrt(2.0 * g.l);
  for (int k = 0; k < g.n; ++k) {
    e.phi[k] = a;
    e.psi[k] = -a;
  }
  return e;
}

RiemannState project_X0(const RiemannState& w) {
  w.validate();
  const ConstraintValues cv = constraint_values(w);
  // <w, e1> e1 shifts p and q by -+ r1/(2l); boundary sums are untouched.
  const double s1 = cv.r1 / (2.0 * w.grid.l);
  const double s2 = cv.r2 / (2.0 * w.grid.l);
  RiemannState out = w;
  for (int k = 0; k < w.grid.n; ++k) {
    out.p[k] -= s1;
    out.q[k] += s1;
    out.phi[k] -= s2;
    out.psi[k] += s2;
  }
  return out;
}

DomainCheckResult domain_check(const SecondOrderState& y) {
  DomainCheckResult r{true, {}};
  const std::size_t m = static_cast<std::size_t>(y.grid.num_nodes());
  if (y.u.size() != m || y.u2.size() != m || y.v.size() != m || y.v2.size() != m)
    throw ValidationError("domain_check: arrays do not match the grid");
  const double tol = 1e-12;
  auto check = [&](double a, double b, const char* name) {
    if (std::abs(a) > tol || std::abs(b) > tol) {
      r.pass = false;
      r.reasons.push_back(std::string(name) + " boundary");
    }
  };
  check(y.u.front(), y.u.back(), "u");
  check(y.u2.front(), y.u2.back(), "u2");
  check(y.v.front(), y.v.back(), "v");
  check(y.v2.front(), y.v2.back(), "v2");
  return r;
}

DomainCheckResult domain_check(const RiemannState& w) {
  w.validate();
  DomainCheckResult r{true, {}};
  double scale = 1.0;
  for (int k = 0; k < w.grid.n; ++k)
    scale = std::max({scale, std::abs(w.p[k]) + std::abs(w.q[k]),
                      std::abs(w.phi[k]) + std::abs(w.psi[k])});
  const double tol = 1e-12 * scale;

  if (std::abs(w.pq_left) > tol) {
    r.pass = false;
    r.reasons.push_back("(p+q)(0) boundary sum");
  }
  if (std::abs(w.phipsi_left) > tol) {
    r.pass = false;
    r.reasons.push_back("(phi+psi)(0) boundary sum");
  }
  // Right-end boundary sums via the midpoint-average inversion.
  double u2 = 0.5 * w.pq_left, v2 = 0.5 * w.phipsi_left;
  for (int k = 0; k < w.grid.n; ++k) {
    u2 = (w.p[k] + w.q[k]) - u2;
    v2 = (w.phi[k] + w.psi[k]) - v2;
  }
  if (std::abs(2.0 * u2) > tol) {
    r.pass = false;
    r.reasons.push_back("(p+q)(l) boundary sum");
  }
  if (std::abs(2.0 * v2) > tol) {
    r.pass = false;
    r.reasons.push_back("(phi+psi)(l) boundary sum");
  }

  const ConstraintValues cv = constraint_values(w);
  const double ctol = 1e-12 * std::max(x_norm(w), 1e-300);
  if (std::abs(cv.r1) > ctol) {
    r.pass = false;
    r.reasons.push_back("constraint r1");
  }
  if (std::abs(cv.r2) > ctol) {
    r.pass = false;
    r.reasons.push_back("constraint r2");
  }
  return r;
}

}  // namespace tbeam
