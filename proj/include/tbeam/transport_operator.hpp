#ifndef TBEAM_TRANSPORT_OPERATOR_HPP
#define TBEAM_TRANSPORT_OPERATOR_HPP

#include <array>
#include <complex>
#include <utility>
#include <vector>

#include "tbeam/beam_model.hpp"
#include "tbeam/riemann_transform.hpp"

namespace tbeam {

/// Constant matrices of the first-order characteristic system
///   Z_t + Khat Z_x + C Z = 0,  Z = (p, phi, q, psi),
/// with the dynamic-boundary block matrices D, Ehat, F, G.
struct TransportMatrices {
  std::array<double, 4> khat_diag;          // (c1, c2, -c1, -c2)
  std::array<std::array<double, 4>, 4> c;   // full coupling, b-dependent rows
  std::array<std::array<double, 4>, 4> c0;  // diagonal part: diag(0, b/2I, 0, b/2I)
  std::array<std::array<double, 2>, 2> d, ehat, f, g;
  bool distinct_speeds;
};

TransportMatrices build_matrices(const BeamParams& params, const DampingProfile& damping,
                                 double x);

/// Spectrum of the decoupled (diagonal-coupling) transport operator:
///   branch 1: i k pi c1 / l
///   branch 2: -(1/(2 l I_rho)) int b + i k pi c2 / l,   k in [-kmax, kmax].
struct AnalyticSpectrum {
  std::vector<std::pair<int, std::complex<double>>> branch1, branch2;
  double branch2_real;
  double spectral_bound;  // sup of real parts; 0 whenever b >= 0
};

AnalyticSpectrum analytic_spectrum(const BeamParams& params, const DampingProfile& damping,
                                   int kmax);

/// Which zero-order coupling acts in the discrete operator.
enum class CouplingVariant { Full, DiagonalOnly };

/// Applies the upwind discretization of -(Khat d/dx + C) to a packed state
/// [p | phi | q | psi] of 4n midpoint values. Inflow ghost values enforce the
/// coupled boundary sums (p+q and phi+psi pinned at both ends).
template <typename Scalar>
void riemann_apply(const BeamParams& params, const DampingProfile& damping, const Grid& grid,
                   CouplingVariant variant, const std::vector<Scalar>& w,
                   std::vector<Scalar>& out);

std::vector<double> pack_riemann(const RiemannState& w);
RiemannState unpack_riemann(const std::vector<double>& packed, const Grid& grid);

/// Solves (lambda I - S) U = Z for the diagonal-coupling operator by exact
/// integrating factors per component; boundary constants from the 2x2
/// solvability system. Throws NumericalError when lambda is within margin of
/// the analytic spectrum (either exponent condition within 1e-6 of
/// degeneracy).
std::vector<std::complex<double>> resolvent_apply(std::complex<double> lambda,
                                                  const std::vector<std::complex<double>>& z,
                                                  const BeamParams& params,
                                                  const DampingProfile& damping, const Grid& grid);

/// Relative residual || (lambda I - S_h) U - Z || / || Z || of the resolvent
/// candidate U measured with the discrete upwind operator.
double resolvent_residual(std::complex<double> lambda, const std::vector<std::complex<double>>& u,
                          const std::vector<std::complex<double>>& z, const BeamParams& params,
                          const DampingProfile& damping, const Grid& grid);

/// State of the augmented system with the frozen boundary memory vector z.
struct AugmentedState {
  RiemannState w;
  std::array<double, 2> z;
};

/// Whether z matches the boundary trace v(l) - D u(l) (last-midpoint proxy).
bool augmented_in_domain(const AugmentedState& s, double tol);

/// Twin-run check of the augmented-system identity: evolving (W0, 0) under
/// the augmented dynamics (z' = 0 since F = G = 0) must match the plain
/// evolution of W0, with z identically zero.
struct AugmentedConsistency {
  double max_state_deviation;
  double max_z_norm;
};

AugmentedConsistency augmented_step_consistency(const RiemannState& w0,
                                                const std::array<double, 2>& z0,
                                                const BeamParams& params,
                                                const DampingProfile& damping, double t_final);

}  // namespace tbeam

#endif
