#ifndef TBEAM_SEMIGROUP_SIM_HPP
#define TBEAM_SEMIGROUP_SIM_HPP

#include <optional>
#include <utility>
#include <vector>

#include "tbeam/beam_model.hpp"
#include "tbeam/linalg.hpp"
#include "tbeam/riemann_transform.hpp"
#include "tbeam/transport_operator.hpp"

namespace tbeam {

enum class Formulation { SecondOrder, SecondOrderL1, Riemann };

/// Which zero-order terms act in the second-order right-hand side: the full
/// system keeps the shear restoring term K(u_x - v) in the v equation, the
/// reduced variant replaces it by K u_x (the compact difference is dropped).
enum class SecondOrderVariant { Full, L1 };

/// Interleaved interior degrees of freedom (u, u_t, v, v_t) per node.
void pack_state(const SecondOrderState& y, linalg::Vec& dof);
void unpack_state(const linalg::Vec& dof, SecondOrderState& y);

/// Semi-discrete right-hand side of the second-order system on interior
/// nodes: staggered shear strain on midpoints, centered second differences,
/// damping sampled at nodes.
void second_order_rhs(const BeamParams& params, const DampingProfile& damping, const Grid& grid,
                      SecondOrderVariant variant, const linalg::Vec& dof, linalg::Vec& out);

/// One implicit-midpoint step; the factorization of (I - dt/2 A) is built
/// once. For b = 0 the discrete energy is a conserved quadratic invariant of
/// this scheme; for b >= 0 every step satisfies
///   E(t+dt) - E(t) = -dt * sum_j h b_j v_t,mid(j)^2
/// to solver accuracy.
class SecondOrderStepper {
 public:
  SecondOrderStepper(const BeamParams& params, const DampingProfile& damping, const Grid& grid,
                     double dt, SecondOrderVariant variant);

  void step(SecondOrderState& y);
  /// dt * sum_j h b_j v_t,mid(j)^2 of the most recent step.
  double last_dissipation() const { return last_dissipation_; }
  double dt() const { return dt_; }

 private:
  BeamParams params_;
  DampingProfile damping_;
  Grid grid_;
  double dt_;
  SecondOrderVariant variant_;
  linalg::LuDecomp<double> factor_;
  std::vector<double> damping_nodes_;
  double last_dissipation_ = 0.0;
  linalg::Vec dof_, mid_;
};

/// Explicit Euler with first-order upwind transport at CFL <= 1.
class RiemannStepper {
 public:
  RiemannStepper(const BeamParams& params, const DampingProfile& damping, const Grid& grid,
                 double dt, CouplingVariant variant = CouplingVariant::Full);

  void step(RiemannState& w);
  double dt() const { return dt_; }

 private:
  BeamParams params_;
  DampingProfile damping_;
  Grid grid_;
  double dt_;
  CouplingVariant variant_;
  std::vector<double> packed_, rhs_;
};

/// u = sin(k pi x / l), all other fields zero.
SecondOrderState mode_initial_state(const Grid& g, int k);

struct SimulationRequest {
  Formulation formulation = Formulation::SecondOrder;
  int mode = 1;
  std::optional<SecondOrderState> init;
  double cfl = 0.9;
  int max_samples = 800;
  std::vector<double> snapshot_times;
};

struct SimulationRun {
  Formulation formulation;
  Grid grid;
  double dt;
  double t_final;
  std::vector<double> times;
  std::vector<double> energies;
  std::optional<SecondOrderState> final_state;
  std::optional<RiemannState> final_riemann;
  std::vector<std::pair<double, SecondOrderState>> snapshots;
  // constraint bookkeeping for characteristic runs
  double max_constraint_value = 0.0;  // max over time of max(|r1|, |r2|)
  double max_constraint_drift = 0.0;  // max over time of max |r_i(t) - r_i(0)|
};

SimulationRun run_simulation(const BeamParams& params, const DampingProfile& damping,
                             const RunOptions& options, const SimulationRequest& request);

/// Evolves the reduced second-order system and the characteristic system from
/// the transformed initial state; returns the sampled sup discrepancy in the
/// characteristic norm.
double conjugacy_test(const SecondOrderState& y0, const BeamParams& params,
                      const DampingProfile& damping, double t_final);

/// Discrepancies of conjugacy_test over `levels` simultaneous (h, dt)
/// halvings starting from n0 cells, mode-k data.
std::vector<double> conjugacy_refinement(const BeamParams& params, const DampingProfile& damping,
                                         int mode, double t_final, int n0, int levels);

struct DecayReport {
  double e0;
  double et;
  double t_half;  // +inf when the energy never halves
  bool monotone;
};

DecayReport decay_report(const SimulationRun& run);

}  // namespace tbeam

#endif
