#ifndef TBEAM_BEAM_MODEL_HPP
#define TBEAM_BEAM_MODEL_HPP

#include <string>
#include <vector>

namespace tbeam {

/// Physical constants of the beam. All strictly positive.
struct BeamParams {
  double rho;    // mass density
  double K;      // shear stiffness
  double I_rho;  // rotary inertia
  double EI;     // flexural rigidity
  double l;      // beam length

  /// Wave speed of the displacement equation, sqrt(K/rho).
  double c1() const;
  /// Wave speed of the shear-angle equation, sqrt(EI/I_rho).
  double c2() const;
  /// True when the two propagation speeds coincide (relative tolerance 1e-12).
  bool equal_speeds() const;

  /// Throws ValidationError unless all five constants are finite and > 0.
  void validate() const;
};

/// Nonnegative damping coefficient b(x) acting on the shear-angle equation.
class DampingProfile {
 public:
  enum class Kind { Zero, Constant, Localized, Tabulated };

  DampingProfile() = default;  // the zero profile

  static DampingProfile zero();
  static DampingProfile constant(double value);
  /// b = value on [b0, b1], 0 elsewhere. Requires 0 <= b0 < b1 and value > 0.
  static DampingProfile localized(double value, double b0, double b1);
  /// Piecewise-linear through equispaced samples over [0, length].
  static DampingProfile tabulated(std::vector<double> samples, double length);

  Kind kind() const { return kind_; }
  double value() const { return value_; }
  double b0() const { return b0_; }
  double b1() const { return b1_; }

  /// Evaluates b(x). x is clamped to the profile's support conventions.
  double operator()(double x) const;

  /// Integral of b over [0, l]; closed form except for tabulated profiles
  /// (trapezoid there).
  double integral(double l) const;
  /// Integral of b over [0, x].
  double partial_integral(double x) const;

  /// Consistency with a beam of length l (localized bounds inside [0, l],
  /// tabulated length match). Throws ValidationError.
  void validate(double l) const;

 private:
  Kind kind_ = Kind::Zero;
  double value_ = 0.0;
  double b0_ = 0.0;
  double b1_ = 0.0;
  double length_ = 0.0;
  std::vector<double> samples_;
};

/// Uniform grid on [0, l] with n cells, nodes x_j = j*h, midpoints (j+1/2)*h.
struct Grid {
  int n;
  double h;
  double l;

  static Grid uniform(double l, int n);

  int num_nodes() const { return n + 1; }
  double node(int j) const { return j * h; }
  double midpoint(int k) const { return (k + 0.5) * h; }
};

/// Nodal state (u, u_t, v, v_t) with homogeneous Dirichlet u, v at both ends.
struct SecondOrderState {
  Grid grid;
  std::vector<double> u, u2, v, v2;  // size grid.n + 1 each

  static SecondOrderState zero(const Grid& g);
  void validate() const;  // sizes and Dirichlet values
};

/// Run options parsed from a config file alongside the physics.
struct RunOptions {
  int n = 200;
  double dt = 0.0;  // 0 means: choose automatically from the CFL bound
  double t_final = 10.0;
};

/// Total mechanical energy
///   E = 1/2 \int rho |u_t|^2 + K |u_x - v|^2 + I_rho |v_t|^2 + EI |v_x|^2 dx
/// discretized with strain terms on cell midpoints and velocity terms on
/// nodes, so that the implicit-midpoint time stepper conserves it exactly
/// when b = 0.
double energy_norm(const SecondOrderState& state, const BeamParams& params);

/// Parses a key=value config file. Keys: rho, K, I_rho, EI, l, b, n, dt,
/// t_final. '#' starts a comment. Unknown keys are rejected.
struct Config {
  BeamParams params;
  DampingProfile damping;
  RunOptions options;
};

Config load_config(const std::string& path);

}  // namespace tbeam

#endif
