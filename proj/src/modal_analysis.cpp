#include "tbeam/modal_analysis.hpp"

#include <algorithm>
#include <cmath>

#include "tbeam/errors.hpp"
#include "tbeam/linalg.hpp"

namespace tbeam {

std::string to_string(QuarticRegime r) {
  switch (r) {
    case QuarticRegime::GammaGtBeta:
      return "gamma_gt_beta";
    case QuarticRegime::GammaLtBeta:
      return "gamma_lt_beta";
    case QuarticRegime::GammaEqBeta:
      return "gamma_eq_beta";
  }
  return "?";
}

QuarticCoefficients quartic_coefficients(const ModalProblem& problem) {
  problem.params.validate();
  if (problem.omega == 0.0) throw ValidationError("modal frequency omega must be nonzero");
  const BeamParams& p = problem.params;
  const double w2 = problem.omega * problem.omega;
  return {p.rho * w2 / p.K, p.K / p.EI, p.I_rho * w2 / p.EI};
}

QuarticSolution quartic_roots(double alpha2, double gamma2, double beta2) {
  if (!(alpha2 > 0.0 && gamma2 > 0.0 && beta2 > 0.0))
    throw ValidationError("quartic_roots: coefficients must be > 0");

  const double sum = alpha2 + beta2;
  const double diff = alpha2 - beta2;
  const double disc = std::sqrt(diff * diff + 4.0 * alpha2 * gamma2);

  QuarticSolution q;
  q.alpha2 = alpha2;
  q.gamma2 = gamma2;
  q.beta2 = beta2;
  q.Xminus = -0.5 * (sum + disc);
  // quotient form keeps full accuracy when gamma2 ~ beta2
  q.Xplus = 2.0 * alpha2 * (gamma2 - beta2) / (sum + disc);

  if (std::abs(gamma2 - beta2) <= 1e-12 * (gamma2 + beta2))
    q.regime = QuarticRegime::GammaEqBeta;
  else if (gamma2 > beta2)
    q.regime = QuarticRegime::GammaGtBeta;
  else
    q.regime = QuarticRegime::GammaLtBeta;

  const double rm = std::sqrt(-q.Xminus);
  q.roots.assign(4, {0.0, 0.0});
  q.roots[0] = {0.0, -rm};
  q.roots[1] = {0.0, rm};
  switch (q.regime) {
    case QuarticRegime::GammaGtBeta: {
      const double rp = std::sqrt(q.Xplus);
      q.roots[2] = {-rp, 0.0};
      q.roots[3] = {rp, 0.0};
      break;
    }
    case QuarticRegime::GammaLtBeta: {
      const double rp = std::sqrt(-q.Xplus);
      q.roots[2] = {0.0, -rp};
      q.roots[3] = {0.0, rp};
      break;
    }
    case QuarticRegime::GammaEqBeta:
      q.roots[2] = q.roots[3] = {0.0, 0.0};
      break;
  }
  return q;
}

std::vector<std::function<double(double)>> general_solution_basis(const QuarticSolution& q) {
  const double rm = std::sqrt(-q.Xminus);
  std::vector<std::function<double(double)>> basis;
  basis.emplace_back([rm](double x) { return std::cos(rm * x); });
  basis.emplace_back([rm](double x) { return std::sin(rm * x); });
  switch (q.regime) {
    case QuarticRegime::GammaGtBeta: {
      const double rp = std::sqrt(q.Xplus);
      basis.emplace_back([rp](double x) { return std::exp(rp * x); });
      basis.emplace_back([rp](double x) { return std::exp(-rp * x); });
      break;
    }
    case QuarticRegime::GammaLtBeta: {
      const double rp = std::sqrt(-q.Xplus);
      basis.emplace_back([rp](double x) { return std::cos(rp * x); });
      basis.emplace_back([rp](double x) { return std::sin(rp * x); });
      break;
    }
    case QuarticRegime::GammaEqBeta:
      basis.emplace_back([](double x) { return x; });
      basis.emplace_back([](double) { return 1.0; });
      break;
  }
  return basis;
}

double quartic_ode_residual(const QuarticSolution& q, const std::function<double(double)>& g,
                            double x) {
  const double a = q.alpha2 + q.beta2;
  const double b = q.alpha2 * (q.beta2 - q.gamma2);

  // Residual at step h; even error expansion in h^2, so Neville extrapolation
  // over four halvings removes the leading terms. Differences accumulated in
  // long double to push the rounding floor down. The step scale follows the
  // fastest oscillation or growth rate among the four characteristic roots.
  const double rate = std::max({1.0, std::sqrt(-q.Xminus), std::sqrt(std::abs(q.Xplus))});
  const double h0 = 0.4 / rate;
  auto raw = [&](double h) -> long double {
    const long double gm2 = g(x - 2 * h), gm1 = g(x - h), g0 = g(x), gp1 = g(x + h),
                      gp2 = g(x + 2 * h);
    const long double h2 = static_cast<long double>(h) * h;
    const long double d4 = (gm2 - 4 * gm1 + 6 * g0 - 4 * gp1 + gp2) / (h2 * h2);
    const long double d2 = (gm1 - 2 * g0 + gp1) / h2;
    return d4 + static_cast<long double>(a) * d2 + static_cast<long double>(b) * g0;
  };

  constexpr int levels = 4;
  long double tab[levels];
  for (int i = 0; i < levels; ++i) tab[i] = raw(h0 / std::pow(2.0, i));
  for (int k = 1; k < levels; ++k) {
    const long double f = std::pow(4.0L, k);
    for (int i = levels - 1; i >= k; --i) tab[i] = (f * tab[i] - tab[i - 1]) / (f - 1.0L);
  }
  return static_cast<double>(std::abs(tab[levels - 1]));
}

UCVerdict unique_continuation_check(const QuarticSolution& q, double b0, double b1, int samples) {
  if (!(b0 >= 0.0 && b0 < b1))
    throw ValidationError("unique_continuation_check: requires 0 <= b0 < b1");
  // With fewer than 4 sample spacings the interval cannot support a rank-4
  // collocation test; a single point is still allowed and yields rank 1.
  if (samples >= 2 && samples <= 4)
    throw ValidationError("unique_continuation_check: interval too small (fewer than 4 sample spacings)");
  if (samples < 1) throw ValidationError("unique_continuation_check: samples must be >= 1");

  const auto basis = general_solution_basis(q);
  linalg::Matrix m(samples, 4);
  for (int i = 0; i < samples; ++i) {
    const double x = (samples == 1) ? 0.5 * (b0 + b1) : b0 + (b1 - b0) * i / (samples - 1);
    for (int j = 0; j < 4; ++j) m(i, j) = basis[j](x);
  }
  // Column scaling keeps the rank test meaningful when the exponential pair
  // dwarfs the trigonometric pair.
  for (int j = 0; j < 4; ++j) {
    double s = 0.0;
    for (int i = 0; i < samples; ++i) s += m(i, j) * m(i, j);
    s = std::sqrt(s);
    if (s > 0.0)
      for (int i = 0; i < samples; ++i) m(i, j) /= s;
  }
  const auto sv = linalg::singular_values(m);
  double ratio = 0.0;
  if (samples >= 4 && sv.front() > 0.0) ratio = sv.back() / sv.front();

  UCVerdict v;
  v.smallest_singular_ratio = ratio;
  v.rank_ok = ratio > 1e-8;
  v.b0 = b0;
  v.b1 = b1;
  return v;
}

ModalResidual modal_residual(const ModalProblem& problem,
                             const std::vector<std::complex<double>>& u,
                             const std::vector<std::complex<double>>& v, const Grid& grid) {
  const std::size_t m = static_cast<std::size_t>(grid.num_nodes());
  if (u.size() != m || v.size() != m)
    throw ValidationError("modal_residual: arrays do not match the grid");
  const BeamParams& p = problem.params;
  const double w = problem.omega;
  const double h = grid.h;

  double acc1 = 0.0, acc2 = 0.0;
  for (int j = 1; j < grid.n; ++j) {
    const std::complex<double> uxx = (u[j + 1] - 2.0 * u[j] + u[j - 1]) / (h * h);
    const std::complex<double> vxx = (v[j + 1] - 2.0 * v[j] + v[j - 1]) / (h * h);
    const std::complex<double> ux = (u[j + 1] - u[j - 1]) / (2.0 * h);
    const std::complex<double> vx = (v[j + 1] - v[j - 1]) / (2.0 * h);
    const double b = problem.damping(grid.node(j));

    const std::complex<double> r1 = p.K * uxx - p.K * vx + p.rho * w * w * u[j];
    const std::complex<double> r2 = p.EI * vxx + p.K * ux - p.K * v[j] -
                                    std::complex<double>(0.0, 1.0) * b * w * v[j] +
                                    p.I_rho * w * w * v[j];
    acc1 += std::norm(r1);
    acc2 += std::norm(r2);
  }
  return {std::sqrt(h * acc1), std::sqrt(h * acc2)};
}

WeakIdentities weak_identities_check(const ModalProblem& problem,
                                     const std::vector<std::complex<double>>& u,
                                     const std::vector<std::complex<double>>& v,
                                     const Grid& grid) {
  const std::size_t m = static_cast<std::size_t>(grid.num_nodes());
  if (u.size() != m || v.size() != m)
    throw ValidationError("weak_identities_check: arrays do not match the grid");
  const BeamParams& p = problem.params;
  const double w = problem.omega;
  const double h = grid.h;

  // nodal trapezoid pieces
  double int_b_v2 = 0.0, int_u2 = 0.0, int_v2 = 0.0;
  for (int j = 0; j <= grid.n; ++j) {
    const double wt = (j == 0 || j == grid.n) ? 0.5 * h : h;
    int_b_v2 += wt * problem.damping(grid.node(j)) * std::norm(v[j]);
    int_u2 += wt * std::norm(u[j]);
    int_v2 += wt * std::norm(v[j]);
  }
  // derivative pieces on midpoints, shear-angle averaged to midpoints; this is
  // the calculus in which the identity closes exactly for discrete eigenpairs
  double int_ux2 = 0.0, int_vx2 = 0.0, int_vmid2 = 0.0, cross = 0.0;
  for (int k = 0; k < grid.n; ++k) {
    const std::complex<double> ux = (u[k + 1] - u[k]) / h;
    const std::complex<double> vx = (v[k + 1] - v[k]) / h;
    const std::complex<double> vm = 0.5 * (v[k] + v[k + 1]);
    int_ux2 += h * std::norm(ux);
    int_vx2 += h * std::norm(vx);
    int_vmid2 += h * std::norm(vm);
    // 2 Re(conj(u) v') = -2 Re(conj(u') v) after integration by parts
    cross += h * (std::conj(ux) * vm).real();
  }

  WeakIdentities out;
  out.im_part = w * int_b_v2;
  out.re_part = p.K * int_ux2 + p.EI * int_vx2 - 2.0 * p.K * cross - p.rho * w * w * int_u2 +
                p.K * int_vmid2 - p.I_rho * w * w * int_v2;
  return out;
}

}  // namespace tbeam
