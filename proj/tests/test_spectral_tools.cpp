#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <complex>

#include "tbeam/errors.hpp"
#include "tbeam/spectral_tools.hpp"
#include "tbeam/transport_operator.hpp"

using namespace tbeam;
using C = std::complex<double>;

namespace {

const BeamParams kUnit{1.0, 1.0, 1.0, 1.0, 1.0};
const BeamParams kSplit{1.0, 1.0, 1.0, 4.0, M_PI};

}  // namespace

TEST_CASE("undamped full generator is skew in the energy inner product") {
  const Grid g = Grid::uniform(1.0, 40);
  auto op = assemble_operator(OperatorKind::L, kUnit, DampingProfile::zero(), g);
  CHECK(skew_defect(op) < 1e-10);

  // adding damping breaks skewness
  auto opd = assemble_operator(OperatorKind::L, kUnit, DampingProfile::constant(1.0), g);
  CHECK(skew_defect(opd) > 1e-5);
}

TEST_CASE("undamped spectrum sits on the imaginary axis") {
  const Grid g = Grid::uniform(1.0, 60);
  auto op = assemble_operator(OperatorKind::L, kUnit, DampingProfile::zero(), g);
  auto rep = discrete_spectrum(op, 10);
  for (const auto& ev : rep.eigenvalues) CHECK(std::abs(ev.real()) < 1e-8);
  CHECK(rep.max_sampled_residual < 1e-8);
  CHECK(rep.pairing_defect < 1e-10 * linalg::frobenius(op.a));
}

TEST_CASE("localized damping pushes every eigenvalue strictly left") {
  const Grid g = Grid::uniform(1.0, 100);
  auto damping = DampingProfile::localized(1.0, 0.3, 0.6);
  auto op = assemble_operator(OperatorKind::L, kUnit, damping, g);
  auto rep = discrete_spectrum(op);
  CHECK(rep.max_real_part < 0.0);
  CHECK(rep.min_abs_real_part_over_nonzero > 1e-10);
}

TEST_CASE("diagonal-coupling transport spectrum matches the analytic branches") {
  auto damping = DampingProfile::constant(1.0);
  const Grid g = Grid::uniform(kSplit.l, 100);
  auto op = assemble_operator(OperatorKind::S1C0, kSplit, damping, g);
  auto rep = discrete_spectrum(op);
  auto analytic = analytic_spectrum(kSplit, damping, 12);
  auto matches = match_analytic(rep, analytic, 1, 10);
  REQUIRE(matches.size() == 20);
  for (const auto& m : matches) {
    const double tol = 5.0 * g.h * (1.0 + std::abs(m.analytic.imag()));
    CHECK(m.distance < tol);
  }
  // the two analytic real parts are 0 and the damped offset
  CHECK(analytic.branch2_real == doctest::Approx(-0.5));
  CHECK(analytic.spectral_bound == 0.0);
}

TEST_CASE("assembled operator reproduces the matrix-free apply") {
  const Grid g = Grid::uniform(1.0, 24);
  auto damping = DampingProfile::constant(0.7);
  auto op = assemble_operator(OperatorKind::S1C, kUnit, damping, g);
  auto e1 = pack_riemann(basis_e1(g));
  std::vector<double> direct;
  riemann_apply<double>(kUnit, damping, g, CouplingVariant::Full, e1, direct);
  auto via_matrix = linalg::matvec(op.a, e1);
  for (std::size_t i = 0; i < direct.size(); ++i)
    CHECK(via_matrix[i] == doctest::Approx(direct[i]).epsilon(1e-14));
}

TEST_CASE("similarity leaves the spectrum invariant across random trials") {
  auto rep = similarity_spectrum_invariance(200, 20);
  CHECK(rep.trials == 200);
  CHECK(rep.failures == 0);

  // J = identity reduces to the same matrix, R = identity has spectrum {1}
  auto tiny = similarity_spectrum_invariance(5, 3, 999);
  CHECK(tiny.failures == 0);
}

TEST_CASE("projection-multiplication identities hold across random trials") {
  auto rep = projection_multiplication_invariance(200, 24, 10);
  CHECK(rep.trials == 200);
  CHECK(rep.failures == 0);
  CHECK(rep.max_deviation < 1e-6);

  CHECK_THROWS_AS(projection_multiplication_invariance(1, 24, 24), ValidationError);
}

TEST_CASE("growth bound: scalar decay, conservative and damped generators") {
  // A = -I in the euclidean product decays at exactly rate 1
  const int m = 6;
  auto a = linalg::scale(linalg::Matrix::identity(m), -1.0);
  const double est = growth_bound_estimate(a, linalg::Matrix::identity(m), {0.5, 1.0, 2.0});
  CHECK(est == doctest::Approx(-1.0).epsilon(1e-10));

  // undamped beam generator: the energy norm of the flow is exactly 1
  const Grid g = Grid::uniform(1.0, 32);
  auto op0 = assemble_operator(OperatorKind::L, kUnit, DampingProfile::zero(), g);
  const double est0 = growth_bound_estimate(op0, {1.0, 2.0});
  CHECK(std::abs(est0) <= 1e-8);

  // damped: contractive, and never below the spectral abscissa
  auto damping = DampingProfile::localized(1.0, 0.3, 0.6);
  auto opd = assemble_operator(OperatorKind::L, kUnit, damping, g);
  const double estd = growth_bound_estimate(opd, {1.0, 2.0, 5.0, 10.0});
  auto repd = discrete_spectrum(opd);
  CHECK(estd <= 1e-8);
  CHECK(estd >= repd.max_real_part - 1e-6);
}

TEST_CASE("accumulation diagnostic: skew case, trend, and the speed guard") {
  // distinct speeds with b = 0: everything stays on the imaginary axis
  auto rows0 = essential_accumulation_diagnostic(kSplit, DampingProfile::zero(), {40, 80});
  for (const auto& r : rows0) CHECK(r.max_distance < 1e-8);

  // localized damping: top-frequency distances to the two lines shrink with n
  auto damping = DampingProfile::localized(1.0, 0.3 * kSplit.l, 0.6 * kSplit.l);
  auto rows = essential_accumulation_diagnostic(kSplit, damping, {60, 120});
  REQUIRE(rows.size() == 4);
  const double first = std::max(rows[0].max_distance, rows[1].max_distance);
  const double last = std::max(rows[2].max_distance, rows[3].max_distance);
  CHECK(last < first);
  // predicted damped line: -int b / (2 l I_rho) = -0.15 for this profile
  CHECK(rows[1].line_re == doctest::Approx(-0.15));

  CHECK_THROWS_AS(essential_accumulation_diagnostic(kUnit, damping, {40, 80}), ValidationError);
}

TEST_CASE("budget guards") {
  const Grid g = Grid::uniform(1.0, 500);
  CHECK_THROWS_AS(assemble_operator(OperatorKind::L, kUnit, DampingProfile::zero(),
                                    Grid::uniform(1.0, 4)),
                  ValidationError);
  auto op = DiscreteOperator{OperatorKind::L, g, kUnit, DampingProfile::zero(),
                             linalg::Matrix(4, 4), linalg::Matrix::identity(4)};
  CHECK_THROWS_AS(discrete_spectrum(op), ValidationError);
  CHECK_THROWS_AS(growth_bound_estimate(op, {1.0}), ValidationError);
}
