#include "tbeam/semigroup_sim.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "tbeam/errors.hpp"

namespace tbeam {

namespace {

int interior_dofs(const Grid& g) { return 4 * (g.n - 1); }

void require_sim_grid(const Grid& g) {
  if (g.n < 8) throw ValidationError("simulation/eigensolve grids need n >= 8");
}

}  // namespace

void pack_state(const SecondOrderState& y, linalg::Vec& dof) {
  const int n = y.grid.n;
  dof.assign(interior_dofs(y.grid), 0.0);
  for (int j = 1; j < n; ++j) {
    const int base = 4 * (j - 1);
    dof[base] = y.u[j];
    dof[base + 1] = y.u2[j];
    dof[base + 2] = y.v[j];
    dof[base + 3] = y.v2[j];
  }
}

void unpack_state(const linalg::Vec& dof, SecondOrderState& y) {
  const int n = y.grid.n;
  for (int j = 1; j < n; ++j) {
    const int base = 4 * (j - 1);
    y.u[j] = dof[base];
    y.u2[j] = dof[base + 1];
    y.v[j] = dof[base + 2];
    y.v2[j] = dof[base + 3];
  }
  y.u[0] = y.u[n] = y.u2[0] = y.u2[n] = 0.0;
  y.v[0] = y.v[n] = y.v2[0] = y.v2[n] = 0.0;
}

void second_order_rhs(const BeamParams& params, const DampingProfile& damping, const Grid& grid,
                      SecondOrderVariant variant, const linalg::Vec& dof, linalg::Vec& out) {
  const int n = grid.n;
  if (static_cast<int>(dof.size()) != interior_dofs(grid))
    throw ValidationError("second_order_rhs: dof size mismatch");
  out.assign(dof.size(), 0.0);

  const double h = grid.h;
  const double kr = params.K / params.rho;
  const double inv_irho = 1.0 / params.I_rho;
  const bool full = (variant == SecondOrderVariant::Full);

  auto u_at = [&](int j) -> double { return (j <= 0 || j >= n) ? 0.0 : dof[4 * (j - 1)]; };
  auto v_at = [&](int j) -> double { return (j <= 0 || j >= n) ? 0.0 : dof[4 * (j - 1) + 2]; };

  for (int j = 1; j < n; ++j) {
    const int base = 4 * (j - 1);
    const double um = u_at(j - 1), u0 = u_at(j), up = u_at(j + 1);
    const double vm = v_at(j - 1), v0 = v_at(j), vp = v_at(j + 1);
    const double u2 = dof[base + 1];
    const double v2 = dof[base + 3];
    const double b = damping(grid.node(j));

    out[base] = u2;
    out[base + 1] = kr * ((up - 2.0 * u0 + um) / (h * h) - (vp - vm) / (2.0 * h));
    out[base + 2] = v2;
    const double vxx = (vp - 2.0 * v0 + vm) / (h * h);
    const double ux_c = (up - um) / (2.0 * h);
    double shear;
    if (full) {
      shear = ux_c - (vm + 2.0 * v0 + vp) / 4.0;  // midpoint-strain average
    } else {
      shear = ux_c;
    }
    out[base + 3] = inv_irho * (params.EI * vxx + params.K * shear - b * v2);
  }
}

SecondOrderStepper::SecondOrderStepper(const BeamParams& params, const DampingProfile& damping,
                                       const Grid& grid, double dt, SecondOrderVariant variant)
    : params_(params), damping_(damping), grid_(grid), dt_(dt), variant_(variant) {
  params_.validate();
  damping_.validate(params_.l);
  require_sim_grid(grid_);
  if (!(dt > 0.0)) throw ValidationError("stepper needs dt > 0");

  const int nd = interior_dofs(grid_);
  // assemble I - dt/2 A column by column through the rhs
  linalg::Matrix m(nd, nd);
  linalg::Vec e(nd, 0.0), col;
  for (int j = 0; j < nd; ++j) {
    e[j] = 1.0;
    second_order_rhs(params_, damping_, grid_, variant_, e, col);
    for (int i = 0; i < nd; ++i) m(i, j) = (i == j ? 1.0 : 0.0) - 0.5 * dt_ * col[i];
    e[j] = 0.0;
  }
  factor_ = linalg::lu_factor(std::move(m));

  damping_nodes_.assign(grid_.n + 1, 0.0);
  for (int j = 0; j <= grid_.n; ++j) damping_nodes_[j] = damping_(grid_.node(j));
}

void SecondOrderStepper::step(SecondOrderState& y) {
  pack_state(y, dof_);
  mid_ = linalg::lu_solve(factor_, dof_);

  double diss = 0.0;
  for (int j = 1; j < grid_.n; ++j) {
    const double v2mid = mid_[4 * (j - 1) + 3];
    diss += grid_.h * damping_nodes_[j] * v2mid * v2mid;
  }
  last_dissipation_ = dt_ * diss;

  for (std::size_t i = 0; i < dof_.size(); ++i) dof_[i] = 2.0 * mid_[i] - dof_[i];
  unpack_state(dof_, y);
}

RiemannStepper::RiemannStepper(const BeamParams& params, const DampingProfile& damping,
                               const Grid& grid, double dt, CouplingVariant variant)
    : params_(params), damping_(damping), grid_(grid), dt_(dt), variant_(variant) {
  params_.validate();
  damping_.validate(params_.l);
  require_sim_grid(grid_);
  const double cmax = std::max(params_.c1(), params_.c2());
  if (!(dt > 0.0) || dt > grid_.h / cmax * (1.0 + 1e-12))
    throw ValidationError("riemann stepper violates the CFL bound dt <= h / max speed");
}

void RiemannStepper::step(RiemannState& w) {
  packed_ = pack_riemann(w);
  riemann_apply<double>(params_, damping_, grid_, variant_, packed_, rhs_);
  for (std::size_t i = 0; i < packed_.size(); ++i) packed_[i] += dt_ * rhs_[i];
  const double pq_left = w.pq_left, phipsi_left = w.phipsi_left;
  w = unpack_riemann(packed_, grid_);
  // boundary sums are pinned weakly through the ghost closure
  w.pq_left = pq_left;
  w.phipsi_left = phipsi_left;
}

SecondOrderState mode_initial_state(const Grid& g, int k) {
  if (k < 1) throw ValidationError("mode index must be >= 1");
  SecondOrderState y = SecondOrderState::zero(g);
  for (int j = 0; j <= g.n; ++j) y.u[j] = std::sin(k * M_PI * g.node(j) / g.l);
  y.u[0] = y.u[g.n] = 0.0;
  return y;
}

namespace {

double l1_energy(const SecondOrderState& y) {
  // squared state-space norm (gradient + velocity components), halved
  const Grid& g = y.grid;
  double acc = 0.0;
  for (int k = 0; k < g.n; ++k) {
    const double ux = (y.u[k + 1] - y.u[k]) / g.h;
    const double vx = (y.v[k + 1] - y.v[k]) / g.h;
    acc += g.h * (ux * ux + vx * vx);
  }
  for (int j = 0; j <= g.n; ++j) {
    const double w = (j == 0 || j == g.n) ? 0.5 * g.h : g.h;
    acc += w * (y.u2[j] * y.u2[j] + y.v2[j] * y.v2[j]);
  }
  return 0.5 * acc;
}

}  // namespace

SimulationRun run_simulation(const BeamParams& params, const DampingProfile& damping,
                             const RunOptions& options, const SimulationRequest& request) {
  params.validate();
  damping.validate(params.l);
  if (!(options.t_final > 0.0)) throw ValidationError("t_final must be > 0");
  if (!(request.cfl > 0.0 && request.cfl <= 1.0))
    throw ValidationError("cfl must lie in (0, 1]");

  const Grid grid = Grid::uniform(params.l, options.n);
  require_sim_grid(grid);

  SecondOrderState y0 = request.init ? *request.init : mode_initial_state(grid, request.mode);
  if (y0.grid.n != grid.n) throw ValidationError("initial state grid does not match n");

  const double cmax = std::max(params.c1(), params.c2());
  double dt = options.dt > 0.0 ? options.dt : request.cfl * grid.h / cmax;
  const int steps = std::max(1, static_cast<int>(std::ceil(options.t_final / dt - 1e-12)));
  dt = options.t_final / steps;

  SimulationRun run;
  run.formulation = request.formulation;
  run.grid = grid;
  run.dt = dt;
  run.t_final = options.t_final;

  const int stride = std::max(1, steps / std::max(1, request.max_samples));
  auto want_snapshot = [&](double t0, double t1) {
    for (double ts : request.snapshot_times)
      if (ts > t0 && ts <= t1 + 1e-12) return true;
    return false;
  };

  if (request.formulation == Formulation::Riemann) {
    RiemannStepper stepper(params, damping, grid, dt);
    RiemannState w = forward_transform(y0, params);
    const ConstraintValues cv0 = constraint_values(w);
    auto energy = [&](const RiemannState& s) {
      const double nx = x_norm(s);
      return 0.5 * nx * nx;
    };
    run.times.push_back(0.0);
    run.energies.push_back(energy(w));
    for (int m = 1; m <= steps; ++m) {
      stepper.step(w);
      const ConstraintValues cv = constraint_values(w);
      run.max_constraint_value =
          std::max({run.max_constraint_value, std::abs(cv.r1), std::abs(cv.r2)});
      run.max_constraint_drift = std::max({run.max_constraint_drift, std::abs(cv.r1 - cv0.r1),
                                           std::abs(cv.r2 - cv0.r2)});
      if (m % stride == 0 || m == steps) {
        run.times.push_back(m * dt);
        run.energies.push_back(energy(w));
      }
    }
    run.final_riemann = std::move(w);
    return run;
  }

  const SecondOrderVariant variant = (request.formulation == Formulation::SecondOrder)
                                         ? SecondOrderVariant::Full
                                         : SecondOrderVariant::L1;
  SecondOrderStepper stepper(params, damping, grid, dt, variant);
  SecondOrderState y = y0;
  auto energy = [&](const SecondOrderState& s) {
    return variant == SecondOrderVariant::Full ? energy_norm(s, params) : l1_energy(s);
  };
  run.times.push_back(0.0);
  run.energies.push_back(energy(y));
  for (int m = 1; m <= steps; ++m) {
    const double t0 = (m - 1) * dt, t1 = m * dt;
    stepper.step(y);
    if (m % stride == 0 || m == steps) {
      run.times.push_back(t1);
      run.energies.push_back(energy(y));
    }
    if (!request.snapshot_times.empty() && want_snapshot(t0, t1))
      run.snapshots.emplace_back(t1, y);
  }
  run.final_state = std::move(y);
  return run;
}

double conjugacy_test(const SecondOrderState& y0, const BeamParams& params,
                      const DampingProfile& damping, double t_final) {
  params.validate();
  if (!(t_final > 0.0)) throw ValidationError("conjugacy_test: t_final must be > 0");
  const auto dc = domain_check(y0);
  if (!dc.pass) throw ValidationError("conjugacy_test: initial state fails the domain check");

  const Grid grid = y0.grid;
  require_sim_grid(grid);
  const double cmax = std::max(params.c1(), params.c2());

  const int samples = 16;
  const double t_sample = t_final / samples;
  const double dt0 = 0.9 * grid.h / cmax;
  const int sub = std::max(1, static_cast<int>(std::ceil(t_sample / dt0 - 1e-12)));
  const double dt = t_sample / sub;

  SecondOrderStepper l1(params, damping, grid, dt, SecondOrderVariant::L1);
  RiemannStepper tr(params, damping, grid, dt);

  SecondOrderState y = y0;
  RiemannState w = forward_transform(y0, params);

  double sup = 0.0;
  for (int s = 0; s < samples; ++s) {
    for (int m = 0; m < sub; ++m) {
      l1.step(y);
      tr.step(w);
    }
    const RiemannState wy = forward_transform(y, params);
    double acc = 0.0;
    for (int k = 0; k < grid.n; ++k) {
      const double dp = wy.p[k] - w.p[k];
      const double df = wy.phi[k] - w.phi[k];
      const double dq = wy.q[k] - w.q[k];
      const double ds = wy.psi[k] - w.psi[k];
      acc += dp * dp + df * df + dq * dq + ds * ds;
    }
    sup = std::max(sup, std::sqrt(grid.h * acc));
  }
  return sup;
}

std::vector<double> conjugacy_refinement(const BeamParams& params, const DampingProfile& damping,
                                         int mode, double t_final, int n0, int levels) {
  std::vector<double> out;
  int n = n0;
  for (int level = 0; level < levels; ++level, n *= 2) {
    const Grid g = Grid::uniform(params.l, n);
    out.push_back(conjugacy_test(mode_initial_state(g, mode), params, damping, t_final));
  }
  return out;
}

DecayReport decay_report(const SimulationRun& run) {
  if (run.energies.empty()) throw ValidationError("decay_report: empty run");
  DecayReport r;
  r.e0 = run.energies.front();
  r.et = run.energies.back();
  r.t_half = std::numeric_limits<double>::infinity();
  r.monotone = true;

  const double half = 0.5 * r.e0;
  for (std::size_t i = 1; i < run.energies.size(); ++i) {
    if (run.energies[i] > run.energies[i - 1] + 1e-12 * std::max(r.e0, 1.0)) r.monotone = false;
    if (!std::isfinite(r.t_half) && run.energies[i] <= half && r.e0 > 0.0) {
      const double e_prev = run.energies[i - 1], e_cur = run.energies[i];
      const double t_prev = run.times[i - 1], t_cur = run.times[i];
      const double frac = (e_prev > e_cur) ? (e_prev - half) / (e_prev - e_cur) : 1.0;
      r.t_half = t_prev + frac * (t_cur - t_prev);
    }
  }
  return r;
}

}  // namespace tbeam
