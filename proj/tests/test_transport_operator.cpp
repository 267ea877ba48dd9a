#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <complex>
#include <random>

#include "tbeam/errors.hpp"
#include "tbeam/transport_operator.hpp"

using namespace tbeam;
using C = std::complex<double>;

namespace {

const BeamParams kUnit{1.0, 1.0, 1.0, 1.0, 1.0};

}  // namespace

TEST_CASE("matrices at unit parameters") {
  auto m = build_matrices(kUnit, DampingProfile::zero(), 0.5);
  CHECK(m.khat_diag[0] == doctest::Approx(1.0));
  CHECK(m.khat_diag[1] == doctest::Approx(1.0));
  CHECK(m.khat_diag[2] == doctest::Approx(-1.0));
  CHECK(m.khat_diag[3] == doctest::Approx(-1.0));
  CHECK_FALSE(m.distinct_speeds);

  // coupling rows: (0, -1/2, 0, 1/2) and (1/2, b/2, -1/2, b/2) with b = 0
  const double a1 = 0.5, a2 = 0.5;
  for (int r : {0, 2}) {
    CHECK(m.c[r][0] == 0.0);
    CHECK(m.c[r][1] == doctest::Approx(-a1));
    CHECK(m.c[r][2] == 0.0);
    CHECK(m.c[r][3] == doctest::Approx(a1));
  }
  for (int r : {1, 3}) {
    CHECK(m.c[r][0] == doctest::Approx(a2));
    CHECK(m.c[r][1] == 0.0);
    CHECK(m.c[r][2] == doctest::Approx(-a2));
    CHECK(m.c[r][3] == 0.0);
  }
  // boundary blocks
  CHECK(m.d[0][0] == -1.0);
  CHECK(m.ehat[1][1] == -1.0);
  CHECK(m.f[0][0] == 0.0);
  CHECK(m.g[1][1] == 0.0);
}

TEST_CASE("eigenvalue ordering of the transport speeds and the diagonal damping block") {
  BeamParams p{1.0, 1.0, 1.0, 4.0, 1.0};  // c1 = 1, c2 = 2
  auto m = build_matrices(p, DampingProfile::constant(2.0 * p.I_rho), 0.3);
  CHECK(m.distinct_speeds);
  CHECK(m.khat_diag[0] > 0.0);
  CHECK(m.khat_diag[1] > 0.0);
  CHECK(m.khat_diag[2] < 0.0);
  CHECK(m.khat_diag[3] < 0.0);

  // c0 = diag(0, 1, 0, 1) for b = 2 I_rho
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) {
      const double expected = (i == j && (i == 1 || i == 3)) ? 1.0 : 0.0;
      CHECK(m.c0[i][j] == doctest::Approx(expected));
    }
  // the diagonal of C - C0 vanishes
  for (int i = 0; i < 4; ++i) CHECK(m.c[i][i] - m.c0[i][i] == doctest::Approx(0.0));
}

TEST_CASE("analytic spectrum of the decoupled operator") {
  // l = pi, c1 = 1, c2 = 2, I_rho = 1, b = 1: branches ik and -1/2 + 2ik
  BeamParams p{1.0, 1.0, 1.0, 4.0, M_PI};
  auto s = analytic_spectrum(p, DampingProfile::constant(1.0), 10);
  CHECK(s.branch1.size() == 21);
  CHECK(s.branch2.size() == 21);
  CHECK(s.branch2_real == doctest::Approx(-0.5).epsilon(1e-15));
  CHECK(s.spectral_bound == doctest::Approx(0.0));
  for (const auto& [k, lambda] : s.branch1) {
    CHECK(lambda.real() == 0.0);
    CHECK(lambda.imag() == doctest::Approx(static_cast<double>(k)).epsilon(1e-14));
  }
  for (const auto& [k, lambda] : s.branch2) {
    CHECK(lambda.real() == doctest::Approx(-0.5));
    CHECK(lambda.imag() == doctest::Approx(2.0 * k).epsilon(1e-14));
  }

  auto s0 = analytic_spectrum(p, DampingProfile::zero(), 3);
  for (const auto& [k, lambda] : s0.branch2) CHECK(lambda.real() == 0.0);
  CHECK(s0.spectral_bound == 0.0);

  // distinct speeds with a positive damping integral: the branches are disjoint
  for (const auto& [k1, l1] : s.branch1)
    for (const auto& [k2, l2] : s.branch2) CHECK(std::abs(l1 - l2) > 0.1);
}

TEST_CASE("upwind apply annihilates the constant constraint direction (diagonal coupling)") {
  const Grid g = Grid::uniform(1.0, 32);
  auto e1 = basis_e1(g);
  auto packed = pack_riemann(e1);
  std::vector<double> out;
  riemann_apply<double>(kUnit, DampingProfile::constant(1.0), g, CouplingVariant::DiagonalOnly,
                        packed, out);
  for (double v : out) CHECK(std::abs(v) < 1e-14);
}

TEST_CASE("pack/unpack round trip") {
  const Grid g = Grid::uniform(1.0, 16);
  std::mt19937_64 rng(4);
  std::normal_distribution<double> gauss;
  RiemannState w = RiemannState::zero(g);
  for (int k = 0; k < g.n; ++k) {
    w.p[k] = gauss(rng);
    w.phi[k] = gauss(rng);
    w.q[k] = gauss(rng);
    w.psi[k] = gauss(rng);
  }
  auto packed = pack_riemann(w);
  auto back = unpack_riemann(packed, g);
  for (int k = 0; k < g.n; ++k) {
    CHECK(back.p[k] == w.p[k]);
    CHECK(back.psi[k] == w.psi[k]);
  }
}

TEST_CASE("resolvent: linearity, zero data, spectrum guard") {
  const Grid g = Grid::uniform(1.0, 64);
  const auto damping = DampingProfile::constant(1.0);
  std::vector<C> zero(4 * g.n, C(0.0, 0.0));
  auto u0 = resolvent_apply(C(1.0, 0.0), zero, kUnit, damping, g);
  for (const auto& v : u0) CHECK(std::abs(v) < 1e-15);

  // lambda exactly on the first undamped branch point: i pi c1 / l
  CHECK_THROWS_AS(resolvent_apply(C(0.0, M_PI), zero, kUnit, damping, g), NumericalError);
  // lambda = 0 sits on the k = 0 branch point
  CHECK_THROWS_AS(resolvent_apply(C(0.0, 0.0), zero, kUnit, damping, g), NumericalError);
}

TEST_CASE("resolvent: constant data residual is first order and halves under refinement") {
  const auto damping = DampingProfile::constant(1.0);
  const C lambda(1.0, 0.0);
  auto residual_at = [&](int n) {
    const Grid g = Grid::uniform(1.0, n);
    std::vector<C> z(4 * g.n, C(0.0, 0.0));
    for (int k = 0; k < g.n; ++k) z[k] = 1.0;  // Z = (1, 0, 0, 0)
    auto u = resolvent_apply(lambda, z, kUnit, damping, g);
    return resolvent_residual(lambda, u, z, kUnit, damping, g);
  };
  const double r200 = residual_at(200);
  const double r400 = residual_at(400);
  CHECK(r200 < 5.0 / 200.0);
  const double ratio = r200 / r400;
  CHECK(ratio > 1.4);
  CHECK(ratio < 2.75);
}

TEST_CASE("augmented evolution: frozen z stays zero and matches the plain run") {
  const Grid g = Grid::uniform(1.0, 48);
  std::mt19937_64 rng(6);
  std::normal_distribution<double> gauss;
  RiemannState w0 = RiemannState::zero(g);
  for (int k = 0; k < g.n; ++k) {
    w0.p[k] = gauss(rng);
    w0.phi[k] = gauss(rng);
    w0.q[k] = gauss(rng);
    w0.psi[k] = gauss(rng);
  }
  auto res = augmented_step_consistency(w0, {5.0, -3.0}, kUnit, DampingProfile::constant(0.5), 2.0);
  CHECK(res.max_state_deviation < 1e-10);
  CHECK(res.max_z_norm == 0.0);

  auto zero_res = augmented_step_consistency(RiemannState::zero(g), {0.0, 0.0}, kUnit,
                                             DampingProfile::zero(), 1.0);
  CHECK(zero_res.max_state_deviation == 0.0);
  CHECK(zero_res.max_z_norm == 0.0);
}

TEST_CASE("augmented in-domain flag") {
  const Grid g = Grid::uniform(1.0, 16);
  RiemannState w = RiemannState::zero(g);
  w.p[g.n - 1] = 0.4;
  w.q[g.n - 1] = 0.1;
  AugmentedState s{w, {0.5, 0.0}};
  CHECK(augmented_in_domain(s, 1e-12));
  s.z[0] = 0.2;
  CHECK_FALSE(augmented_in_domain(s, 1e-12));
}
