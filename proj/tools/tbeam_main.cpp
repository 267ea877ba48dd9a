#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <complex>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "tbeam/beam_model.hpp"
#include "tbeam/errors.hpp"
#include "tbeam/modal_analysis.hpp"
#include "tbeam/riemann_transform.hpp"
#include "tbeam/semigroup_sim.hpp"
#include "tbeam/spectral_tools.hpp"
#include "tbeam/transport_operator.hpp"

using nlohmann::json;
using namespace tbeam;

namespace {

struct CommonOpts {
  std::string config;
  std::optional<int> n;
  std::optional<double> dt;
  std::optional<double> t_final;
  std::string output = "-";
};

Config load_with_overrides(const CommonOpts& c) {
  Config cfg = load_config(c.config);
  if (c.n) cfg.options.n = *c.n;
  if (c.dt) cfg.options.dt = *c.dt;
  if (c.t_final) cfg.options.t_final = *c.t_final;
  return cfg;
}

void write_text(const std::string& path, const std::string& text) {
  if (path == "-") {
    std::fputs(text.c_str(), stdout);
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ValidationError("cannot open output file '" + path + "'");
  out << text;
}

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

void add_common(CLI::App* cmd, CommonOpts& c, bool with_run_opts = true) {
  cmd->add_option("--config", c.config, "beam configuration file")->required();
  cmd->add_option("-o,--output", c.output, "output path ('-' for stdout)");
  if (with_run_opts) {
    cmd->add_option("-n,--n", c.n, "override grid cell count");
    cmd->add_option("--dt", c.dt, "override time step (0 = automatic)");
    cmd->add_option("--t-final", c.t_final, "override final time");
  }
}

SecondOrderState parse_init(const std::string& text, const Grid& grid) {
  if (text.rfind("mode:", 0) == 0) {
    const int k = std::stoi(text.substr(5));
    return mode_initial_state(grid, k);
  }
  if (text.rfind("file:", 0) == 0) {
    const std::string path = text.substr(5);
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot open initial state file '" + path + "'");
    SecondOrderState y = SecondOrderState::zero(grid);
    std::string line;
    std::getline(in, line);  // header x,u,u2,v,v2
    int j = 0;
    while (std::getline(in, line) && j <= grid.n) {
      double x, u, u2, v, v2;
      if (std::sscanf(line.c_str(), "%lf,%lf,%lf,%lf,%lf", &x, &u, &u2, &v, &v2) != 5)
        throw ValidationError("bad initial state row: " + line);
      y.u[j] = u;
      y.u2[j] = u2;
      y.v[j] = v;
      y.v2[j] = v2;
      ++j;
    }
    if (j != grid.n + 1)
      throw ValidationError("initial state file has " + std::to_string(j) + " rows, expected " +
                            std::to_string(grid.n + 1));
    return y;
  }
  throw ValidationError("initial data must be 'mode:<k>' or 'file:<path>'");
}

Formulation parse_formulation(const std::string& name) {
  if (name == "second-order") return Formulation::SecondOrder;
  if (name == "second-order-l1") return Formulation::SecondOrderL1;
  if (name == "riemann") return Formulation::Riemann;
  throw ValidationError("unknown formulation '" + name + "'");
}

OperatorKind parse_kind(const std::string& name) {
  if (name == "L") return OperatorKind::L;
  if (name == "L1") return OperatorKind::L1;
  if (name == "S1C") return OperatorKind::S1C;
  if (name == "S1C0") return OperatorKind::S1C0;
  throw ValidationError("unknown operator kind '" + name + "'");
}

std::string state_csv(const SecondOrderState& y) {
  std::ostringstream os;
  os << "x,u,u2,v,v2\n";
  for (int j = 0; j <= y.grid.n; ++j)
    os << fmt(y.grid.node(j)) << ',' << fmt(y.u[j]) << ',' << fmt(y.u2[j]) << ',' << fmt(y.v[j])
       << ',' << fmt(y.v2[j]) << '\n';
  return os.str();
}

int cmd_analytic_spectrum(const CommonOpts& c, int kmax) {
  Config cfg = load_with_overrides(c);
  auto s = analytic_spectrum(cfg.params, cfg.damping, kmax);
  std::ostringstream os;
  os << "branch,k,re,im\n";
  for (const auto& [k, lambda] : s.branch1)
    os << "1," << k << ',' << fmt(lambda.real()) << ',' << fmt(lambda.imag()) << '\n';
  for (const auto& [k, lambda] : s.branch2)
    os << "2," << k << ',' << fmt(lambda.real()) << ',' << fmt(lambda.imag()) << '\n';
  write_text(c.output, os.str());
  return 0;
}

int cmd_spectrum(const CommonOpts& c, const std::string& kind_name) {
  Config cfg = load_with_overrides(c);
  const OperatorKind kind = parse_kind(kind_name);
  const Grid grid = Grid::uniform(cfg.params.l, cfg.options.n);
  auto op = assemble_operator(kind, cfg.params, cfg.damping, grid);
  auto rep = discrete_spectrum(op);
  std::ostringstream os;
  os << "re,im,kind\n";
  for (const auto& ev : rep.eigenvalues)
    os << fmt(ev.real()) << ',' << fmt(ev.imag()) << ',' << kind_name << '\n';
  write_text(c.output, os.str());
  return 0;
}

int cmd_simulate(const CommonOpts& c, const std::string& formulation, const std::string& init,
                 const std::vector<double>& snapshot_times, const std::string& snapshot_prefix) {
  Config cfg = load_with_overrides(c);
  SimulationRequest req;
  req.formulation = parse_formulation(formulation);
  const Grid grid = Grid::uniform(cfg.params.l, cfg.options.n);
  req.init = parse_init(init, grid);
  req.snapshot_times = snapshot_times;
  if (!snapshot_times.empty() && snapshot_prefix.empty())
    throw ValidationError("--snapshot-times requires --snapshot-prefix");

  auto run = run_simulation(cfg.params, cfg.damping, cfg.options, req);
  std::ostringstream os;
  os << "t,E\n";
  for (std::size_t i = 0; i < run.times.size(); ++i)
    os << fmt(run.times[i]) << ',' << fmt(run.energies[i]) << '\n';
  write_text(c.output, os.str());

  for (std::size_t i = 0; i < run.snapshots.size(); ++i) {
    const std::string path = snapshot_prefix + "_" + std::to_string(i) + ".csv";
    write_text(path, state_csv(run.snapshots[i].second));
  }
  return 0;
}

int cmd_decay(const CommonOpts& c, const std::string& formulation, const std::string& init) {
  Config cfg = load_with_overrides(c);
  SimulationRequest req;
  req.formulation = parse_formulation(formulation);
  const Grid grid = Grid::uniform(cfg.params.l, cfg.options.n);
  req.init = parse_init(init, grid);

  auto rep = decay_report(run_simulation(cfg.params, cfg.damping, cfg.options, req));
  json j;
  j["E0"] = rep.e0;
  j["ET"] = rep.et;
  j["halved"] = std::isfinite(rep.t_half);
  j["t_half"] = std::isfinite(rep.t_half) ? json(rep.t_half) : json();
  j["monotone"] = rep.monotone;
  write_text(c.output, j.dump(2) + "\n");
  return 0;
}

int cmd_roundtrip(const CommonOpts& c, int trials, std::uint64_t seed) {
  Config cfg = load_with_overrides(c);
  const Grid grid = Grid::uniform(cfg.params.l, cfg.options.n);
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);

  double worst_yw = 0.0, worst_wy = 0.0;
  for (int t = 0; t < trials; ++t) {
    SecondOrderState y = SecondOrderState::zero(grid);
    for (int j = 1; j < grid.n; ++j) {
      y.u[j] = gauss(rng);
      y.u2[j] = gauss(rng);
      y.v[j] = gauss(rng);
      y.v2[j] = gauss(rng);
    }
    SecondOrderState back = inverse_transform(forward_transform(y, cfg.params), cfg.params);
    for (int j = 0; j <= grid.n; ++j)
      worst_yw = std::max({worst_yw, std::abs(back.u[j] - y.u[j]), std::abs(back.u2[j] - y.u2[j]),
                           std::abs(back.v[j] - y.v[j]), std::abs(back.v2[j] - y.v2[j])});

    RiemannState w = RiemannState::zero(grid);
    for (int k = 0; k < grid.n; ++k) {
      w.p[k] = gauss(rng);
      w.phi[k] = gauss(rng);
      w.q[k] = gauss(rng);
      w.psi[k] = gauss(rng);
    }
    w.pq_left = gauss(rng);
    w.phipsi_left = gauss(rng);
    w = project_X0(w);
    RiemannState wback = forward_transform(inverse_transform(w, cfg.params), cfg.params);
    for (int k = 0; k < grid.n; ++k)
      worst_wy = std::max({worst_wy, std::abs(wback.p[k] - w.p[k]),
                           std::abs(wback.phi[k] - w.phi[k]), std::abs(wback.q[k] - w.q[k]),
                           std::abs(wback.psi[k] - w.psi[k])});
  }
  json j;
  j["trials"] = trials;
  j["max_error_inverse_of_forward"] = worst_yw;
  j["max_error_forward_of_inverse"] = worst_wy;
  write_text(c.output, j.dump(2) + "\n");
  return 0;
}

int cmd_uc_check(const CommonOpts& c, double omega, const std::vector<double>& interval,
                 int samples) {
  Config cfg = load_with_overrides(c);
  ModalProblem prob{cfg.params, cfg.damping, omega};
  auto coeff = quartic_coefficients(prob);
  auto q = quartic_roots(coeff.alpha2, coeff.gamma2, coeff.beta2);
  auto v = unique_continuation_check(q, interval[0], interval[1], samples);
  json j;
  j["rank_ok"] = v.rank_ok;
  j["sigma_ratio"] = v.smallest_singular_ratio;
  j["regime"] = to_string(q.regime);
  j["Xminus"] = q.Xminus;
  j["Xplus"] = q.Xplus;
  write_text(c.output, j.dump(2) + "\n");
  return 0;
}

int cmd_resolvent_check(const CommonOpts& c, double lam_re, double lam_im) {
  Config cfg = load_with_overrides(c);
  const Grid grid = Grid::uniform(cfg.params.l, cfg.options.n);
  const std::complex<double> lambda(lam_re, lam_im);
  std::vector<std::complex<double>> z(4 * grid.n, 0.0);
  for (int k = 0; k < grid.n; ++k) z[k] = 1.0;  // constant probe data (1, 0, 0, 0)
  auto u = resolvent_apply(lambda, z, cfg.params, cfg.damping, grid);
  const double res = resolvent_residual(lambda, u, z, cfg.params, cfg.damping, grid);
  json j;
  j["lambda_re"] = lam_re;
  j["lambda_im"] = lam_im;
  j["n"] = grid.n;
  j["h"] = grid.h;
  j["residual"] = res;
  write_text(c.output, j.dump(2) + "\n");
  return 0;
}

int cmd_growth_bound(const CommonOpts& c, const std::string& kind_name,
                     std::vector<double> t_samples) {
  Config cfg = load_with_overrides(c);
  const Grid grid = Grid::uniform(cfg.params.l, cfg.options.n);
  auto op = assemble_operator(parse_kind(kind_name), cfg.params, cfg.damping, grid);
  if (t_samples.empty()) t_samples = {1.0, 2.0, 5.0, 10.0};
  const double est = growth_bound_estimate(op, t_samples);
  auto rep = discrete_spectrum(op);
  json j;
  j["estimate"] = est;
  j["max_real_part"] = rep.max_real_part;
  write_text(c.output, j.dump(2) + "\n");
  return 0;
}

int cmd_accumulation(const CommonOpts& c, const std::vector<int>& n_list) {
  Config cfg = load_with_overrides(c);
  auto rows = essential_accumulation_diagnostic(cfg.params, cfg.damping, n_list);
  std::ostringstream os;
  os << "n,line,max_distance\n";
  for (const auto& r : rows)
    os << r.n << ',' << fmt(r.line_re) << ',' << fmt(r.max_distance) << '\n';
  write_text(c.output, os.str());
  return 0;
}

int cmd_conjugacy(const CommonOpts& c, int mode, int n0, int levels) {
  Config cfg = load_with_overrides(c);
  auto d = conjugacy_refinement(cfg.params, cfg.damping, mode, cfg.options.t_final, n0, levels);
  json j;
  json grids = json::array(), discrepancies = json::array(), ratios = json::array();
  int n = n0;
  for (std::size_t i = 0; i < d.size(); ++i, n *= 2) {
    grids.push_back(n);
    discrepancies.push_back(d[i]);
    if (i > 0) ratios.push_back(d[i - 1] / d[i]);
  }
  j["n"] = grids;
  j["discrepancy"] = discrepancies;
  j["ratio"] = ratios;
  write_text(c.output, j.dump(2) + "\n");
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"numerical toolkit for the locally damped shear-beam system"};
  app.require_subcommand(1);

  CommonOpts c_as, c_sp, c_sim, c_dec, c_rt, c_uc, c_res, c_gb, c_acc, c_con;

  auto* as = app.add_subcommand("analytic-spectrum",
                                "closed-form spectrum of the decoupled transport operator");
  int kmax = 10;
  add_common(as, c_as, false);
  as->add_option("--kmax", kmax, "frequency index range |k| <= kmax")->check(CLI::PositiveNumber);

  auto* sp = app.add_subcommand("spectrum", "dense eigenvalues of a discretized generator");
  std::string sp_kind = "L";
  add_common(sp, c_sp);
  sp->add_option("--kind", sp_kind, "L, L1, S1C or S1C0");

  auto* sim = app.add_subcommand("simulate", "time-domain run, energy trace as CSV");
  std::string sim_form = "second-order", sim_init = "mode:1", sim_snap_prefix;
  std::vector<double> sim_snap_times;
  add_common(sim, c_sim);
  sim->add_option("--formulation", sim_form, "second-order, second-order-l1 or riemann");
  sim->add_option("--init", sim_init, "mode:<k> or file:<path>");
  sim->add_option("--snapshot-times", sim_snap_times, "state snapshot times")->delimiter(',');
  sim->add_option("--snapshot-prefix", sim_snap_prefix, "snapshot file prefix");

  auto* dec = app.add_subcommand("decay", "energy decay summary as JSON");
  std::string dec_form = "second-order", dec_init = "mode:1";
  add_common(dec, c_dec);
  dec->add_option("--formulation", dec_form, "second-order, second-order-l1 or riemann");
  dec->add_option("--init", dec_init, "mode:<k> or file:<path>");

  auto* rt = app.add_subcommand("roundtrip", "transform round-trip error report");
  int rt_trials = 50;
  std::uint64_t rt_seed = 20240101;
  add_common(rt, c_rt);
  rt->add_option("--trials", rt_trials)->check(CLI::PositiveNumber);
  rt->add_option("--seed", rt_seed);

  auto* uc = app.add_subcommand("uc-check", "unique-continuation rank certificate");
  double uc_omega = 1.0;
  std::vector<double> uc_interval;
  int uc_samples = 32;
  add_common(uc, c_uc, false);
  uc->add_option("--omega", uc_omega, "modal frequency")->required();
  uc->add_option("--interval", uc_interval, "observation interval b0 b1")
      ->expected(2)
      ->required();
  uc->add_option("--samples", uc_samples, "collocation points");

  auto* res = app.add_subcommand("resolvent-check", "resolvent residual for constant data");
  double res_re = 1.0, res_im = 0.0;
  add_common(res, c_res);
  res->add_option("--lambda-re", res_re);
  res->add_option("--lambda-im", res_im);

  auto* gb = app.add_subcommand("growth-bound", "semigroup growth bound estimate");
  std::string gb_kind = "L";
  std::vector<double> gb_samples;
  add_common(gb, c_gb);
  gb->add_option("--kind", gb_kind, "L, L1, S1C or S1C0");
  gb->add_option("--t-samples", gb_samples, "sample times")->delimiter(',');

  auto* acc = app.add_subcommand("accumulation", "spectrum accumulation diagnostic");
  std::vector<int> acc_list;
  add_common(acc, c_acc, false);
  acc->add_option("--n-list", acc_list, "increasing grid sizes")->delimiter(',')->required();

  auto* con = app.add_subcommand("conjugacy", "transformed-trajectory discrepancy refinement");
  int con_mode = 1, con_n0 = 50, con_levels = 3;
  add_common(con, c_con);
  con->add_option("--mode", con_mode)->check(CLI::PositiveNumber);
  con->add_option("--n0", con_n0, "coarsest grid")->check(CLI::PositiveNumber);
  con->add_option("--levels", con_levels)->check(CLI::PositiveNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  try {
    if (as->parsed()) return cmd_analytic_spectrum(c_as, kmax);
    if (sp->parsed()) return cmd_spectrum(c_sp, sp_kind);
    if (sim->parsed()) return cmd_simulate(c_sim, sim_form, sim_init, sim_snap_times, sim_snap_prefix);
    if (dec->parsed()) return cmd_decay(c_dec, dec_form, dec_init);
    if (rt->parsed()) return cmd_roundtrip(c_rt, rt_trials, rt_seed);
    if (uc->parsed()) return cmd_uc_check(c_uc, uc_omega, uc_interval, uc_samples);
    if (res->parsed()) return cmd_resolvent_check(c_res, res_re, res_im);
    if (gb->parsed()) return cmd_growth_bound(c_gb, gb_kind, gb_samples);
    if (acc->parsed()) return cmd_accumulation(c_acc, acc_list);
    if (con->parsed()) return cmd_conjugacy(c_con, con_mode, con_n0, con_levels);
  } catch (const ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const NumericalError& e) {
    std::cerr << "numerical error: " << e.what() << "\n";
    return 3;
  }
  return 1;
}
