#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <random>
#include <string>

#include "tbeam/beam_model.hpp"
#include "tbeam/errors.hpp"

using namespace tbeam;

namespace {

const BeamParams kUnit{1.0, 1.0, 1.0, 1.0, 1.0};

SecondOrderState sine_state(const Grid& g, double l) {
  SecondOrderState y = SecondOrderState::zero(g);
  for (int j = 0; j <= g.n; ++j) y.u[j] = std::sin(M_PI * g.node(j) / l);
  y.u[0] = y.u[g.n] = 0.0;
  return y;
}

std::string write_temp_config(const std::string& body, const char* name) {
  std::string path = std::string("/tmp/") + name;
  std::ofstream out(path);
  out << body;
  return path;
}

}  // namespace

TEST_CASE("params validation and speeds") {
  BeamParams p{1.0, 2.0, 4.0, 8.0, 3.0};
  p.validate();
  CHECK(p.c1() == doctest::Approx(std::sqrt(2.0)));
  CHECK(p.c2() == doctest::Approx(std::sqrt(2.0)));
  CHECK(p.equal_speeds());
  p.EI = 9.0;
  CHECK_FALSE(p.equal_speeds());
  p.rho = -1.0;
  CHECK_THROWS_AS(p.validate(), ValidationError);
}

TEST_CASE("energy of the zero state is zero and zero only there") {
  const Grid g = Grid::uniform(1.0, 64);
  SecondOrderState y = SecondOrderState::zero(g);
  CHECK(energy_norm(y, kUnit) == 0.0);
  y.v2[10] = 1e-3;
  CHECK(energy_norm(y, kUnit) > 0.0);
}

TEST_CASE("energy of the first sine mode matches the analytic integral") {
  // u = sin(pi x), unit constants, l = 1:
  // E = 1/2 K int_0^1 (u_x)^2 dx = 1/2 * pi^2 * 1/2 = pi^2 / 4
  const double exact = M_PI * M_PI / 4.0;  // 2.4674011002723395
  CHECK(exact == doctest::Approx(2.4674011002723395).epsilon(1e-15));

  const Grid g = Grid::uniform(1.0, 128);
  const double e = energy_norm(sine_state(g, 1.0), kUnit);
  CHECK(std::abs(e - exact) < 1e-3);  // O(h^2)

  // quadrature converges at second order: halving h cuts the error ~4x
  const Grid g2 = Grid::uniform(1.0, 256);
  const double e2 = energy_norm(sine_state(g2, 1.0), kUnit);
  const double ratio = std::abs(e - exact) / std::abs(e2 - exact);
  CHECK(ratio > 4.0 * 0.7);
  CHECK(ratio < 4.0 * 1.3);
}

TEST_CASE("energy is a quadratic form") {
  const Grid g = Grid::uniform(2.0, 32);
  std::mt19937_64 rng(17);
  std::normal_distribution<double> gauss(0.0, 1.0);
  SecondOrderState y = SecondOrderState::zero(g);
  for (int j = 1; j < g.n; ++j) {
    y.u[j] = gauss(rng);
    y.u2[j] = gauss(rng);
    y.v[j] = gauss(rng);
    y.v2[j] = gauss(rng);
  }
  const BeamParams p{1.3, 0.7, 2.1, 0.9, 2.0};
  const double e = energy_norm(y, p);
  for (double alpha : {2.0, -3.0, 0.5}) {
    SecondOrderState ys = y;
    for (int j = 0; j <= g.n; ++j) {
      ys.u[j] *= alpha;
      ys.u2[j] *= alpha;
      ys.v[j] *= alpha;
      ys.v2[j] *= alpha;
    }
    CHECK(energy_norm(ys, p) == doctest::Approx(alpha * alpha * e).epsilon(1e-13));
  }
}

TEST_CASE("energy rejects mismatched arrays") {
  const Grid g = Grid::uniform(1.0, 16);
  SecondOrderState y = SecondOrderState::zero(g);
  y.v2.pop_back();
  CHECK_THROWS_AS(energy_norm(y, kUnit), ValidationError);
}

TEST_CASE("damping profiles evaluate and integrate") {
  auto z = DampingProfile::zero();
  CHECK(z(0.3) == 0.0);
  CHECK(z.integral(2.0) == 0.0);

  auto c = DampingProfile::constant(1.5);
  CHECK(c(0.9) == 1.5);
  CHECK(c.integral(2.0) == doctest::Approx(3.0));
  CHECK(c.partial_integral(0.5) == doctest::Approx(0.75));

  auto loc = DampingProfile::localized(2.0, 0.25, 0.75);
  CHECK(loc(0.1) == 0.0);
  CHECK(loc(0.5) == 2.0);
  CHECK(loc(0.8) == 0.0);
  CHECK(loc.integral(1.0) == doctest::Approx(1.0));
  CHECK(loc.partial_integral(0.5) == doctest::Approx(0.5));
  CHECK(loc.partial_integral(1.0) == doctest::Approx(1.0));
  CHECK_THROWS_AS(loc.validate(0.6), ValidationError);  // interval leaves the beam

  auto tab = DampingProfile::tabulated({0.0, 1.0, 0.0}, 1.0);
  CHECK(tab(0.5) == doctest::Approx(1.0));
  CHECK(tab(0.25) == doctest::Approx(0.5));
  CHECK(tab.integral(1.0) == doctest::Approx(0.5));
  CHECK_THROWS_AS(DampingProfile::tabulated({-1.0, 0.0}, 1.0), ValidationError);
  CHECK_THROWS_AS(DampingProfile::localized(0.0, 0.1, 0.2), ValidationError);
}

TEST_CASE("config: round trip of a valid file") {
  const auto path = write_temp_config(
      "# beam configuration\n"
      "rho = 1\n"
      "K = 1\n"
      "I_rho = 1\n"
      "EI = 1\n"
      "l = 3.141592653589793\n"
      "b = localized:1.0:0.9:1.9\n"
      "n = 64\n"
      "dt = 0.001\n"
      "t_final = 2.5\n",
      "beam_ok.cfg");
  Config cfg = load_config(path);
  CHECK(cfg.params.rho == 1.0);
  CHECK(cfg.params.l == doctest::Approx(M_PI));
  CHECK(cfg.damping.kind() == DampingProfile::Kind::Localized);
  CHECK(cfg.damping.value() == 1.0);
  CHECK(cfg.damping.b0() == 0.9);
  CHECK(cfg.damping.b1() == 1.9);
  CHECK(cfg.options.n == 64);
  CHECK(cfg.options.dt == 0.001);
  CHECK(cfg.options.t_final == 2.5);
}

TEST_CASE("config: rejects bad physics, missing keys, unknown keys") {
  const auto bad_sign = write_temp_config("rho=-1\nK=1\nI_rho=1\nEI=1\nl=1\n", "beam_neg.cfg");
  CHECK_THROWS_AS(load_config(bad_sign), ValidationError);

  const auto missing = write_temp_config("rho=1\nK=1\nI_rho=1\nEI=1\n", "beam_missing.cfg");
  CHECK_THROWS_WITH_AS(load_config(missing), doctest::Contains("missing required config key 'l'"),
                       ValidationError);

  const auto unknown = write_temp_config("rho=1\nK=1\nI_rho=1\nEI=1\nl=1\nfoo=1\n",
                                         "beam_unknown.cfg");
  CHECK_THROWS_AS(load_config(unknown), ValidationError);

  const auto bad_interval =
      write_temp_config("rho=1\nK=1\nI_rho=1\nEI=1\nl=1\nb=localized:1.0:0.8:0.2\n",
                        "beam_interval.cfg");
  CHECK_THROWS_AS(load_config(bad_interval), ValidationError);

  const auto dup = write_temp_config("rho=1\nrho=2\nK=1\nI_rho=1\nEI=1\nl=1\n", "beam_dup.cfg");
  CHECK_THROWS_AS(load_config(dup), ValidationError);

  CHECK_THROWS_AS(load_config("/tmp/definitely_not_here.cfg"), ValidationError);
}

TEST_CASE("config: zero and table damping forms") {
  const auto zero_cfg = write_temp_config("rho=1\nK=1\nI_rho=1\nEI=1\nl=1\nb=zero\n", "beam_zero.cfg");
  CHECK(load_config(zero_cfg).damping.kind() == DampingProfile::Kind::Zero);

  std::ofstream table("/tmp/beam_table.txt");
  table << "0.0 0.5 1.0 0.5 0.0\n";
  table.close();
  const auto tab_cfg =
      write_temp_config("rho=1\nK=1\nI_rho=1\nEI=1\nl=1\nb=table:/tmp/beam_table.txt\n",
                        "beam_tab.cfg");
  Config cfg = load_config(tab_cfg);
  CHECK(cfg.damping.kind() == DampingProfile::Kind::Tabulated);
  CHECK(cfg.damping(0.5) == doctest::Approx(1.0));
}

TEST_CASE("grid invariants") {
  const Grid g = Grid::uniform(2.0, 10);
  CHECK(g.h * g.n == doctest::Approx(2.0).epsilon(1e-15));
  CHECK(g.node(0) == 0.0);
  CHECK(g.node(10) == doctest::Approx(2.0));
  CHECK(g.midpoint(0) == doctest::Approx(0.1));
  CHECK_THROWS_AS(Grid::uniform(-1.0, 10), ValidationError);
  CHECK_THROWS_AS(Grid::uniform(1.0, 1), ValidationError);
}
