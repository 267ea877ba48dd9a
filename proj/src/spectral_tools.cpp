#include "tbeam/spectral_tools.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "tbeam/errors.hpp"
#include "tbeam/semigroup_sim.hpp"

namespace tbeam {

namespace {

using linalg::CVec;
using linalg::Matrix;
using linalg::Vec;

int dof_index_u(int j) { return 4 * (j - 1); }
int dof_index_u2(int j) { return 4 * (j - 1) + 1; }
int dof_index_v(int j) { return 4 * (j - 1) + 2; }
int dof_index_v2(int j) { return 4 * (j - 1) + 3; }

Matrix second_order_gram(const BeamParams& p, const Grid& g, SecondOrderVariant variant) {
  const int n = g.n;
  const int nd = 4 * (n - 1);
  Matrix s(nd, nd);
  const double h = g.h;

  // nodal velocity terms (interior trapezoid weight h)
  for (int j = 1; j < n; ++j) {
    const double wu = (variant == SecondOrderVariant::Full) ? p.rho : 1.0;
    const double wv = (variant == SecondOrderVariant::Full) ? p.I_rho : 1.0;
    s(dof_index_u2(j), dof_index_u2(j)) += wu * h;
    s(dof_index_v2(j), dof_index_v2(j)) += wv * h;
  }

  // cell terms: scatter the outer products of the per-cell linear forms
  auto scatter = [&](const std::vector<std::pair<int, double>>& row, double weight) {
    for (const auto& [i, ci] : row)
      for (const auto& [j, cj] : row) s(i, j) += weight * ci * cj;
  };
  for (int k = 0; k < n; ++k) {
    std::vector<std::pair<int, double>> ux_row, vx_row, strain_row;
    if (k >= 1) {
      ux_row.emplace_back(dof_index_u(k), -1.0 / h);
      vx_row.emplace_back(dof_index_v(k), -1.0 / h);
      strain_row.emplace_back(dof_index_u(k), -1.0 / h);
      strain_row.emplace_back(dof_index_v(k), -0.5);
    }
    if (k + 1 <= n - 1) {
      ux_row.emplace_back(dof_index_u(k + 1), 1.0 / h);
      vx_row.emplace_back(dof_index_v(k + 1), 1.0 / h);
      strain_row.emplace_back(dof_index_u(k + 1), 1.0 / h);
      strain_row.emplace_back(dof_index_v(k + 1), -0.5);
    }
    if (variant == SecondOrderVariant::Full) {
      scatter(strain_row, p.K * h);
      scatter(vx_row, p.EI * h);
    } else {
      scatter(ux_row, h);
      scatter(vx_row, h);
    }
  }
  return s;
}

}  // namespace

std::string to_string(OperatorKind k) {
  switch (k) {
    case OperatorKind::L:
      return "L";
    case OperatorKind::L1:
      return "L1";
    case OperatorKind::S1C:
      return "S1C";
    case OperatorKind::S1C0:
      return "S1C0";
  }
  return "?";
}

DiscreteOperator assemble_operator(OperatorKind kind, const BeamParams& params,
                                   const DampingProfile& damping, const Grid& grid) {
  params.validate();
  damping.validate(params.l);
  if (grid.n < 8) throw ValidationError("assemble_operator: grids need n >= 8");

  DiscreteOperator op;
  op.kind = kind;
  op.grid = grid;
  op.params = params;
  op.damping = damping;

  if (kind == OperatorKind::L || kind == OperatorKind::L1) {
    const SecondOrderVariant variant =
        (kind == OperatorKind::L) ? SecondOrderVariant::Full : SecondOrderVariant::L1;
    const int nd = 4 * (grid.n - 1);
    op.a = Matrix(nd, nd);
    Vec e(nd, 0.0), col;
    for (int j = 0; j < nd; ++j) {
      e[j] = 1.0;
      second_order_rhs(params, damping, grid, variant, e, col);
      for (int i = 0; i < nd; ++i) op.a(i, j) = col[i];
      e[j] = 0.0;
    }
    op.gram = second_order_gram(params, grid, variant);
  } else {
    const CouplingVariant variant =
        (kind == OperatorKind::S1C) ? CouplingVariant::Full : CouplingVariant::DiagonalOnly;
    const int nd = 4 * grid.n;
    op.a = Matrix(nd, nd);
    Vec e(nd, 0.0), col;
    for (int j = 0; j < nd; ++j) {
      e[j] = 1.0;
      riemann_apply<double>(params, damping, grid, variant, e, col);
      for (int i = 0; i < nd; ++i) op.a(i, j) = col[i];
      e[j] = 0.0;
    }
    op.gram = linalg::scale(Matrix::identity(nd), grid.h);
  }
  return op;
}

double skew_defect(const DiscreteOperator& op) {
  // A* = G^{-1} A^T G in the Gram inner product
  const Matrix at_g = linalg::matmul(linalg::transpose(op.a), op.gram);
  const Matrix chol = linalg::cholesky_lower(op.gram);
  const int nd = op.a.rows();
  Matrix adj(nd, nd);
  Vec col(nd);
  for (int j = 0; j < nd; ++j) {
    for (int i = 0; i < nd; ++i) col[i] = at_g(i, j);
    Vec x = linalg::cholesky_solve(chol, col);
    for (int i = 0; i < nd; ++i) adj(i, j) = x[i];
  }
  return linalg::frobenius(linalg::add(op.a, adj)) / linalg::frobenius(op.a);
}

SpectrumReport discrete_spectrum(const DiscreteOperator& op, int residual_samples) {
  if (op.grid.n > 400)
    throw ValidationError("discrete_spectrum: dense eigensolve budget is n <= 400");

  SpectrumReport rep;
  rep.eigenvalues = linalg::eigenvalues(op.a);

  rep.max_real_part = -std::numeric_limits<double>::infinity();
  rep.min_abs_real_part_over_nonzero = std::numeric_limits<double>::infinity();
  double scale = 0.0;
  for (const auto& ev : rep.eigenvalues) scale = std::max(scale, std::abs(ev));
  for (const auto& ev : rep.eigenvalues) {
    rep.max_real_part = std::max(rep.max_real_part, ev.real());
    if (std::abs(ev) > 1e-9 * std::max(scale, 1.0))
      rep.min_abs_real_part_over_nonzero =
          std::min(rep.min_abs_real_part_over_nonzero, std::abs(ev.real()));
  }

  rep.pairing_defect = 0.0;
  for (const auto& ev : rep.eigenvalues) {
    if (std::abs(ev.imag()) <= 1e-14 * std::max(scale, 1.0)) continue;
    double best = std::numeric_limits<double>::infinity();
    for (const auto& other : rep.eigenvalues)
      best = std::min(best, std::abs(std::conj(ev) - other));
    rep.pairing_defect = std::max(rep.pairing_defect, best);
  }

  rep.max_sampled_residual = 0.0;
  if (residual_samples > 0) {
    const double anorm = linalg::frobenius(op.a);
    const int m = static_cast<int>(rep.eigenvalues.size());
    const int count = std::min(residual_samples, m);
    for (int s = 0; s < count; ++s) {
      const int idx = static_cast<int>((static_cast<long>(s) * m) / count);
      const auto lambda = rep.eigenvalues[idx];
      const CVec v = linalg::inverse_iteration(op.a, lambda);
      CVec av = linalg::matvec(op.a, v);
      double num = 0.0;
      for (std::size_t i = 0; i < v.size(); ++i) num += std::norm(av[i] - lambda * v[i]);
      rep.max_sampled_residual =
          std::max(rep.max_sampled_residual, std::sqrt(num) / std::max(anorm, 1e-300));
    }
  }
  return rep;
}

linalg::CVec eigenvector_for(const DiscreteOperator& op, std::complex<double> lambda) {
  return linalg::inverse_iteration(op.a, lambda);
}

std::vector<BranchMatch> match_analytic(const SpectrumReport& report,
                                        const AnalyticSpectrum& spectrum, int kmin, int kmax) {
  std::vector<BranchMatch> out;
  auto nearest = [&](std::complex<double> target) {
    std::complex<double> best{};
    double dist = std::numeric_limits<double>::infinity();
    for (const auto& ev : report.eigenvalues) {
      const double d = std::abs(ev - target);
      if (d < dist) {
        dist = d;
        best = ev;
      }
    }
    return std::make_pair(best, dist);
  };
  for (const auto& [k, lambda] : spectrum.branch1) {
    if (k < kmin || k > kmax) continue;
    const auto [ev, d] = nearest(lambda);
    out.push_back({1, k, lambda, ev, d});
  }
  for (const auto& [k, lambda] : spectrum.branch2) {
    if (k < kmin || k > kmax) continue;
    const auto [ev, d] = nearest(lambda);
    out.push_back({2, k, lambda, ev, d});
  }
  return out;
}

namespace {

double hausdorff(const CVec& a, const CVec& b) {
  double worst = 0.0;
  auto one_sided = [&](const CVec& x, const CVec& y) {
    for (const auto& xv : x) {
      double best = std::numeric_limits<double>::infinity();
      for (const auto& yv : y) best = std::min(best, std::abs(xv - yv));
      worst = std::max(worst, best);
    }
  };
  one_sided(a, b);
  one_sided(b, a);
  return worst;
}

}  // namespace

TrialReport similarity_spectrum_invariance(int trials, int dim, std::uint64_t seed) {
  if (dim < 2 || dim > 50) throw ValidationError("similarity suite: dim must be in [2, 50]");
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);

  TrialReport rep{trials, 0, 0.0};
  const double sd = 1.0 / std::sqrt(static_cast<double>(dim));
  for (int t = 0; t < trials; ++t) {
    Matrix r(dim, dim), j(dim, dim);
    for (int a = 0; a < dim; ++a)
      for (int b = 0; b < dim; ++b) {
        r(a, b) = gauss(rng) * sd;
        j(a, b) = (a == b ? 1.0 : 0.0) + 0.3 * sd * gauss(rng);
      }
    const Matrix jinv = linalg::inverse(j);
    const Matrix s = linalg::matmul(jinv, linalg::matmul(r, j));
    const double d = hausdorff(linalg::eigenvalues(r), linalg::eigenvalues(s));
    rep.max_deviation = std::max(rep.max_deviation, d);
    if (d > 1e-6 * std::max(linalg::frobenius(r), 1e-300)) ++rep.failures;
  }
  return rep;
}

TrialReport projection_multiplication_invariance(int trials, int dim, int subdim,
                                                 std::uint64_t seed) {
  if (!(subdim >= 1 && subdim < dim && dim <= 50))
    throw ValidationError("projection suite: requires 1 <= subdim < dim <= 50");
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);

  TrialReport rep{trials, 0, 0.0};
  for (int t = 0; t < trials; ++t) {
    // orthonormal basis of the subspace (modified Gram-Schmidt, twice)
    Matrix qb(dim, subdim);
    for (int i = 0; i < dim; ++i)
      for (int j = 0; j < subdim; ++j) qb(i, j) = gauss(rng);
    for (int pass = 0; pass < 2; ++pass) {
      for (int j = 0; j < subdim; ++j) {
        for (int k = 0; k < j; ++k) {
          double dot = 0.0;
          for (int i = 0; i < dim; ++i) dot += qb(i, j) * qb(i, k);
          for (int i = 0; i < dim; ++i) qb(i, j) -= dot * qb(i, k);
        }
        double nrm = 0.0;
        for (int i = 0; i < dim; ++i) nrm += qb(i, j) * qb(i, j);
        nrm = std::sqrt(nrm);
        for (int i = 0; i < dim; ++i) qb(i, j) /= nrm;
      }
    }

    Matrix r0(subdim, subdim);
    const double sd = 0.5 / std::sqrt(static_cast<double>(subdim));
    for (int a = 0; a < subdim; ++a)
      for (int b = 0; b < subdim; ++b) r0(a, b) = gauss(rng) * sd;

    const Matrix qt = linalg::transpose(qb);
    const Matrix r = linalg::matmul(qb, linalg::matmul(r0, qt));  // embeds R0 in the big space
    const Matrix p = linalg::matmul(qb, qt);                      // orthogonal projection
    const Matrix rp = linalg::matmul(r, p);

    // (R P)^k = R^k P, k = 1..5
    Matrix lhs = rp;
    Matrix rk = r;
    double worst = linalg::max_abs(linalg::sub(lhs, linalg::matmul(rk, p)));
    for (int k = 2; k <= 5; ++k) {
      lhs = linalg::matmul(lhs, rp);
      rk = linalg::matmul(rk, r);
      worst = std::max(worst, linalg::max_abs(linalg::sub(lhs, linalg::matmul(rk, p))));
    }
    bool fail = worst > 1e-10;

    // nonzero spectrum of R P vs spectrum of the restriction R0
    CVec big = linalg::eigenvalues(rp);
    CVec small = linalg::eigenvalues(r0);
    CVec big_nz;
    for (const auto& ev : big)
      if (std::abs(ev) > 1e-8) big_nz.push_back(ev);
    std::vector<bool> used(small.size(), false);
    double eig_dev = 0.0;
    for (const auto& ev : big_nz) {
      double best = std::numeric_limits<double>::infinity();
      int best_i = -1;
      for (std::size_t i = 0; i < small.size(); ++i) {
        if (used[i]) continue;
        const double d = std::abs(ev - small[i]);
        if (d < best) {
          best = d;
          best_i = static_cast<int>(i);
        }
      }
      if (best_i >= 0) used[best_i] = true;
      eig_dev = std::max(eig_dev, best);
    }
    if (eig_dev > 1e-6) fail = true;
    rep.max_deviation = std::max({rep.max_deviation, worst, eig_dev});
    if (fail) ++rep.failures;
  }
  return rep;
}

double growth_bound_estimate(const linalg::Matrix& a, const linalg::Matrix& gram,
                             const std::vector<double>& t_samples) {
  if (t_samples.empty()) throw ValidationError("growth_bound_estimate: no sample times");

  const Matrix chol = linalg::cholesky_lower(gram);
  const Matrix r_upper = linalg::transpose(chol);

  double best = std::numeric_limits<double>::infinity();
  for (double t : t_samples) {
    if (!(t > 0.0)) throw ValidationError("growth_bound_estimate: sample times must be > 0");
    const Matrix et = linalg::expm(linalg::scale(a, t));
    const Matrix weighted = linalg::right_solve_upper(linalg::matmul(r_upper, et), r_upper);
    const double nrm = linalg::spectral_norm(weighted);
    if (!(nrm > 0.0)) throw NumericalError("growth_bound_estimate: vanished exponential norm");
    best = std::min(best, std::log(nrm) / t);
  }
  return best;
}

double growth_bound_estimate(const DiscreteOperator& op, const std::vector<double>& t_samples) {
  if (op.grid.n > 200)
    throw ValidationError("growth_bound_estimate: matrix exponential budget is n <= 200");
  return growth_bound_estimate(op.a, op.gram, t_samples);
}

std::vector<AccumulationRow> essential_accumulation_diagnostic(const BeamParams& params,
                                                               const DampingProfile& damping,
                                                               const std::vector<int>& n_list) {
  params.validate();
  if (params.equal_speeds())
    throw ValidationError(
        "essential_accumulation_diagnostic: requires distinct propagation speeds");
  if (n_list.empty()) throw ValidationError("essential_accumulation_diagnostic: empty n list");
  for (std::size_t i = 1; i < n_list.size(); ++i)
    if (n_list[i] <= n_list[i - 1])
      throw ValidationError("essential_accumulation_diagnostic: n list must increase");

  const double line0 = 0.0;
  const double line1 = -damping.integral(params.l) / (2.0 * params.l * params.I_rho);

  // The reference band is the top-frequency third of the coarsest grid in the
  // list; every finer grid resolves that same physical band better, so the
  // distances to the predicted lines shrink as n grows. Tying the band to each
  // grid's own cutoff would keep re-sampling unresolved grid-scale modes.
  double band_lo = 0.0, band_hi = 0.0;

  std::vector<AccumulationRow> rows;
  for (std::size_t idx = 0; idx < n_list.size(); ++idx) {
    const Grid grid = Grid::uniform(params.l, n_list[idx]);
    const DiscreteOperator op = assemble_operator(OperatorKind::L, params, damping, grid);
    const SpectrumReport rep = discrete_spectrum(op);

    if (idx == 0) {
      for (const auto& ev : rep.eigenvalues) band_hi = std::max(band_hi, std::abs(ev.imag()));
      band_lo = (2.0 / 3.0) * band_hi;
    }

    double d0 = 0.0, d1 = 0.0;
    for (const auto& ev : rep.eigenvalues) {
      const double im = std::abs(ev.imag());
      if (im < band_lo || im > band_hi) continue;
      const double to0 = std::abs(ev.real() - line0);
      const double to1 = std::abs(ev.real() - line1);
      if (to0 <= to1)
        d0 = std::max(d0, to0);
      else
        d1 = std::max(d1, to1);
    }
    rows.push_back({n_list[idx], line0, d0});
    rows.push_back({n_list[idx], line1, d1});
  }
  return rows;
}

}  // namespace tbeam
