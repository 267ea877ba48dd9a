#ifndef TBEAM_MODAL_ANALYSIS_HPP
#define TBEAM_MODAL_ANALYSIS_HPP

#include <complex>
#include <functional>
#include <string>
#include <vector>

#include "tbeam/beam_model.hpp"

namespace tbeam {

/// Candidate time-harmonic eigenproblem at frequency omega != 0.
struct ModalProblem {
  BeamParams params;
  DampingProfile damping;
  double omega;
};

enum class QuarticRegime { GammaGtBeta, GammaLtBeta, GammaEqBeta };

std::string to_string(QuarticRegime r);

/// Closed-form structure of the fourth-order displacement equation
///   u'''' + (alpha2 + beta2) u'' + alpha2 (beta2 - gamma2) u = 0.
/// Xminus/Xplus are the two roots of the associated quadratic in r^2.
struct QuarticSolution {
  double alpha2, gamma2, beta2;
  double Xminus;  // always < 0
  double Xplus;   // sign matches sign(gamma2 - beta2)
  QuarticRegime regime;
  std::vector<std::complex<double>> roots;  // the four characteristic roots
};

/// (alpha2, gamma2, beta2) = (rho omega^2 / K, K / EI, I_rho omega^2 / EI).
struct QuarticCoefficients {
  double alpha2, gamma2, beta2;
};

QuarticCoefficients quartic_coefficients(const ModalProblem& problem);

QuarticSolution quartic_roots(double alpha2, double gamma2, double beta2);

/// The four fundamental solutions on [0, l]:
/// cos(sqrt|X-| x), sin(sqrt|X-| x), plus a regime-dependent pair
/// (exponentials / trigonometric pair / {x, 1}).
std::vector<std::function<double(double)>> general_solution_basis(const QuarticSolution& q);

/// Residual of the fourth-order equation at x, by Richardson-extrapolated
/// central differences. Used as an independent check on the basis.
double quartic_ode_residual(const QuarticSolution& q, const std::function<double(double)>& g,
                            double x);

/// Rank certificate: a solution vanishing on (b0, b1) must vanish everywhere
/// exactly when the collocation matrix of the basis on [b0, b1] has full
/// column rank.
struct UCVerdict {
  bool rank_ok;
  double smallest_singular_ratio;
  double b0, b1;
};

UCVerdict unique_continuation_check(const QuarticSolution& q, double b0, double b1, int samples);

/// Discrete L2 residuals of the two time-harmonic equations
///   K u'' - K v' + rho omega^2 u = 0
///   EI v'' + K u' - K v - i b omega v + I_rho omega^2 v = 0
/// by centered differences at interior nodes.
struct ModalResidual {
  double res1, res2;
};

ModalResidual modal_residual(const ModalProblem& problem,
                             const std::vector<std::complex<double>>& u,
                             const std::vector<std::complex<double>>& v, const Grid& grid);

/// Imaginary and real part of the integrated eigenvalue identity:
///   im_part = omega * int b |v|^2
///   re_part = K int|u'|^2 + EI int|v'|^2 + 2K int Re(conj(u) v')
///             - rho omega^2 int|u|^2 + int (K - I_rho omega^2)|v|^2
/// Both vanish for genuine imaginary-axis eigenpairs.
struct WeakIdentities {
  double im_part, re_part;
};

WeakIdentities weak_identities_check(const ModalProblem& problem,
                                     const std::vector<std::complex<double>>& u,
                                     const std::vector<std::complex<double>>& v, const Grid& grid);

}  // namespace tbeam

#endif
