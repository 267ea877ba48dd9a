#ifndef TBEAM_SPECTRAL_TOOLS_HPP
#define TBEAM_SPECTRAL_TOOLS_HPP

#include <complex>
#include <cstdint>
#include <vector>

#include "tbeam/beam_model.hpp"
#include "tbeam/linalg.hpp"
#include "tbeam/transport_operator.hpp"

namespace tbeam {

enum class OperatorKind { L, L1, S1C, S1C0 };

std::string to_string(OperatorKind k);

/// Dense discretization of one of the four generators, together with the
/// SPD Gram matrix of the discrete inner product of its state space.
/// Boundary conditions are built in: Dirichlet rows are eliminated for the
/// second-order kinds, the characteristic kinds close the transport stencil
/// with the coupled boundary sums.
struct DiscreteOperator {
  OperatorKind kind;
  Grid grid;
  BeamParams params;
  DampingProfile damping;
  linalg::Matrix a;
  linalg::Matrix gram;
};

DiscreteOperator assemble_operator(OperatorKind kind, const BeamParams& params,
                                   const DampingProfile& damping, const Grid& grid);

/// || A + A* ||_F / || A ||_F with the adjoint taken in the operator's Gram
/// inner product. Zero (to rounding) for the undamped full generator.
double skew_defect(const DiscreteOperator& op);

struct SpectrumReport {
  std::vector<std::complex<double>> eigenvalues;  // sorted by (Re, Im)
  double max_real_part;
  double min_abs_real_part_over_nonzero;
  double pairing_defect;       // conjugation symmetry of the computed set
  double max_sampled_residual;  // ||Av - lambda v|| / ||A||_F over sampled pairs
};

/// Full eigenvalue set of the dense operator (grid budget n <= 400). When
/// residual_samples > 0, that many eigenpairs are verified by inverse
/// iteration and the worst relative residual is reported.
SpectrumReport discrete_spectrum(const DiscreteOperator& op, int residual_samples = 0);

/// Eigenpair (eigenvector by inverse iteration) for a computed eigenvalue.
linalg::CVec eigenvector_for(const DiscreteOperator& op, std::complex<double> lambda);

struct BranchMatch {
  int branch;  // 1 or 2
  int k;
  std::complex<double> analytic;
  std::complex<double> discrete;
  double distance;
};

/// Matches analytic eigenvalues (k = kmin..kmax per branch, positive
/// frequencies) to the nearest computed eigenvalues.
std::vector<BranchMatch> match_analytic(const SpectrumReport& report,
                                        const AnalyticSpectrum& spectrum, int kmin, int kmax);

struct TrialReport {
  int trials;
  int failures;
  double max_deviation;
};

/// Spectrum is invariant under similarity: eigenvalues of J^-1 R J match
/// eigenvalues of R for random R and random well-conditioned J.
TrialReport similarity_spectrum_invariance(int trials, int dim, std::uint64_t seed = 12345);

/// For R mapping a subspace G0 into itself and P the orthogonal projection
/// onto G0: (R P)^k = R^k P for k = 1..5, and the nonzero eigenvalues of R P
/// agree with those of the restriction of R to G0.
TrialReport projection_multiplication_invariance(int trials, int dim, int subdim,
                                                 std::uint64_t seed = 9876);

/// min over sample times of log ||exp(t A)|| / t in the Gram-weighted
/// operator norm (grid budget n <= 200).
double growth_bound_estimate(const DiscreteOperator& op, const std::vector<double>& t_samples);
double growth_bound_estimate(const linalg::Matrix& a, const linalg::Matrix& gram,
                             const std::vector<double>& t_samples);

struct AccumulationRow {
  int n;
  double line_re;
  double max_distance;
};

/// For increasing n, distance of the top-frequency third of the spectrum of
/// the full generator to the two predicted vertical lines Re = 0 and
/// Re = -int(b)/(2 l I_rho). Requires distinct propagation speeds.
std::vector<AccumulationRow> essential_accumulation_diagnostic(const BeamParams& params,
                                                               const DampingProfile& damping,
                                                               const std::vector<int>& n_list);

}  // namespace tbeam

#endif
