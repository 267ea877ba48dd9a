#include "tbeam/beam_model.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "tbeam/errors.hpp"

namespace tbeam {

double BeamParams::c1() const { return std::sqrt(K / rho); }
double BeamParams::c2() const { return std::sqrt(EI / I_rho); }

bool BeamParams::equal_speeds() const {
  const double a = K / rho, b = EI / I_rho;
  return std::abs(a - b) <= 1e-12 * (a + b);
}

void BeamParams::validate() const {
  auto check = [](double v, const char* name) {
    if (!(std::isfinite(v) && v > 0.0))
      throw ValidationError(std::string("beam parameter ") + name + " must be finite and > 0");
  };
  check(rho, "rho");
  check(K, "K");
  check(I_rho, "I_rho");
  check(EI, "EI");
  check(l, "l");
}

DampingProfile DampingProfile::zero() { return DampingProfile{}; }

DampingProfile DampingProfile::constant(double value) {
  if (!(std::isfinite(value) && value >= 0.0))
    throw ValidationError("constant damping value must be >= 0");
  DampingProfile p;
  p.kind_ = Kind::Constant;
  p.value_ = value;
  return p;
}

DampingProfile DampingProfile::localized(double value, double b0, double b1) {
  if (!(std::isfinite(value) && value > 0.0))
    throw ValidationError("localized damping value must be > 0");
  if (!(b0 >= 0.0 && b0 < b1))
    throw ValidationError("localized damping requires 0 <= b0 < b1");
  DampingProfile p;
  p.kind_ = Kind::Localized;
  p.value_ = value;
  p.b0_ = b0;
  p.b1_ = b1;
  return p;
}

DampingProfile DampingProfile::tabulated(std::vector<double> samples, double length) {
  if (samples.size() < 2) throw ValidationError("tabulated damping needs at least 2 samples");
  if (!(length > 0.0)) throw ValidationError("tabulated damping needs a positive length");
  for (double s : samples)
    if (!(std::isfinite(s) && s >= 0.0))
      throw ValidationError("tabulated damping samples must be >= 0");
  DampingProfile p;
  p.kind_ = Kind::Tabulated;
  p.length_ = length;
  p.samples_ = std::move(samples);
  return p;
}

double DampingProfile::operator()(double x) const {
  switch (kind_) {
    case Kind::Zero:
      return 0.0;
    case Kind::Constant:
      return value_;
    case Kind::Localized:
      return (x >= b0_ && x <= b1_) ? value_ : 0.0;
    case Kind::Tabulated: {
      const int m = static_cast<int>(samples_.size());
      const double dx = length_ / (m - 1);
      double s = std::clamp(x, 0.0, length_) / dx;
      int k = std::min(static_cast<int>(s), m - 2);
      const double w = s - k;
      return (1.0 - w) * samples_[k] + w * samples_[k + 1];
    }
  }
  return 0.0;
}

double DampingProfile::integral(double l) const {
  switch (kind_) {
    case Kind::Zero:
      return 0.0;
    case Kind::Constant:
      return value_ * l;
    case Kind::Localized:
      return value_ * (std::min(b1_, l) - std::min(b0_, l));
    case Kind::Tabulated:
      return partial_integral(std::min(l, length_));
  }
  return 0.0;
}

double DampingProfile::partial_integral(double x) const {
  switch (kind_) {
    case Kind::Zero:
      return 0.0;
    case Kind::Constant:
      return value_ * std::max(x, 0.0);
    case Kind::Localized: {
      const double lo = std::max(std::min(x, b1_) - b0_, 0.0);
      return value_ * lo;
    }
    case Kind::Tabulated: {
      const int m = static_cast<int>(samples_.size());
      const double dx = length_ / (m - 1);
      const double xc = std::clamp(x, 0.0, length_);
      const int full = std::min(static_cast<int>(xc / dx), m - 2);
      double acc = 0.0;
      for (int k = 0; k < full; ++k) acc += 0.5 * dx * (samples_[k] + samples_[k + 1]);
      const double rem = xc - full * dx;
      if (rem > 0.0) {
        const double b_left = samples_[full];
        const double w = rem / dx;
        const double b_right = (1.0 - w) * samples_[full] + w * samples_[full + 1];
        acc += 0.5 * rem * (b_left + b_right);
      }
      return acc;
    }
  }
  return 0.0;
}

void DampingProfile::validate(double l) const {
  if (kind_ == Kind::Localized && b1_ > l)
    throw ValidationError("localized damping interval exceeds the beam length");
  if (kind_ == Kind::Tabulated && std::abs(length_ - l) > 1e-12 * std::max(l, length_))
    throw ValidationError("tabulated damping length differs from the beam length");
}

Grid Grid::uniform(double l, int n) {
  if (!(l > 0.0)) throw ValidationError("grid length must be > 0");
  if (n < 2) throw ValidationError("grid needs at least 2 cells");
  return Grid{n, l / n, l};
}

SecondOrderState SecondOrderState::zero(const Grid& g) {
  SecondOrderState s;
  s.grid = g;
  s.u.assign(g.num_nodes(), 0.0);
  s.u2.assign(g.num_nodes(), 0.0);
  s.v.assign(g.num_nodes(), 0.0);
  s.v2.assign(g.num_nodes(), 0.0);
  return s;
}

void SecondOrderState::validate() const {
  const std::size_t m = static_cast<std::size_t>(grid.num_nodes());
  if (u.size() != m || u2.size() != m || v.size() != m || v2.size() != m)
    throw ValidationError("state arrays do not match the grid");
  const double tol = 1e-12;
  if (std::abs(u.front()) > tol || std::abs(u.back()) > tol || std::abs(v.front()) > tol ||
      std::abs(v.back()) > tol)
    throw ValidationError("state violates the Dirichlet boundary values");
}

double energy_norm(const SecondOrderState& state, const BeamParams& params) {
  const Grid& g = state.grid;
  const std::size_t m = static_cast<std::size_t>(g.num_nodes());
  if (state.u.size() != m || state.u2.size() != m || state.v.size() != m || state.v2.size() != m)
    throw ValidationError("energy_norm: state arrays do not match the grid");

  const double h = g.h;
  double e = 0.0;
  // velocity terms, trapezoid over nodes
  for (int j = 0; j <= g.n; ++j) {
    const double w = (j == 0 || j == g.n) ? 0.5 * h : h;
    e += w * (params.rho * state.u2[j] * state.u2[j] + params.I_rho * state.v2[j] * state.v2[j]);
  }
  // strain terms on midpoints
  for (int k = 0; k < g.n; ++k) {
    const double ux = (state.u[k + 1] - state.u[k]) / h;
    const double vx = (state.v[k + 1] - state.v[k]) / h;
    const double vm = 0.5 * (state.v[k] + state.v[k + 1]);
    const double shear = ux - vm;
    e += h * (params.K * shear * shear + params.EI * vx * vx);
  }
  return 0.5 * e;
}

namespace {

double parse_number(const std::string& key, const std::string& text) {
  std::size_t pos = 0;
  double v = 0.0;
  try {
    v = std::stod(text, &pos);
  } catch (const std::exception&) {
    throw ValidationError("config key '" + key + "': cannot parse number '" + text + "'");
  }
  while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
  if (pos != text.size())
    throw ValidationError("config key '" + key + "': trailing characters in '" + text + "'");
  return v;
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c == sep) {
      out.push_back(cur);
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  out.push_back(cur);
  return out;
}

std::string trim(const std::string& s) {
  std::size_t a = 0, b = s.size();
  while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
  while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
  return s.substr(a, b - a);
}

DampingProfile parse_damping(const std::string& key, const std::string& text, double l) {
  if (text == "zero") return DampingProfile::zero();
  const auto parts = split(text, ':');
  if (parts[0] == "const") {
    if (parts.size() != 2) throw ValidationError("damping form 'const' needs one value");
    return DampingProfile::constant(parse_number(key, parts[1]));
  }
  if (parts[0] == "localized") {
    if (parts.size() != 4)
      throw ValidationError("damping form 'localized' needs value:b0:b1");
    const double v = parse_number(key, parts[1]);
    const double b0 = parse_number(key, parts[2]);
    const double b1 = parse_number(key, parts[3]);
    if (b1 <= b0) throw ValidationError("localized damping requires b0 < b1");
    auto p = DampingProfile::localized(v, b0, b1);
    p.validate(l);
    return p;
  }
  if (parts[0] == "table") {
    if (parts.size() != 2) throw ValidationError("damping form 'table' needs a file path");
    std::ifstream in(parts[1]);
    if (!in) throw ValidationError("cannot open damping table '" + parts[1] + "'");
    std::vector<double> samples;
    double x;
    while (in >> x) samples.push_back(x);
    return DampingProfile::tabulated(std::move(samples), l);
  }
  throw ValidationError("unknown damping form '" + text + "'");
}

}  // namespace

Config load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open config file '" + path + "'");

  std::map<std::string, std::string> kv;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ValidationError(path + ":" + std::to_string(lineno) + ": expected key=value");
    const std::string key = trim(line.substr(0, eq));
    const std::string val = trim(line.substr(eq + 1));
    if (key.empty() || val.empty())
      throw ValidationError(path + ":" + std::to_string(lineno) + ": empty key or value");
    if (kv.count(key))
      throw ValidationError(path + ":" + std::to_string(lineno) + ": duplicate key '" + key + "'");
    kv[key] = val;
  }

  static const std::set<std::string> known = {"rho", "K", "I_rho", "EI", "l",
                                              "b",   "n", "dt",    "t_final"};
  for (const auto& [k, v] : kv)
    if (!known.count(k)) throw ValidationError("unknown config key '" + k + "'");

  for (const char* req : {"rho", "K", "I_rho", "EI", "l"})
    if (!kv.count(req)) throw ValidationError(std::string("missing required config key '") + req + "'");

  Config cfg;
  cfg.params.rho = parse_number("rho", kv["rho"]);
  cfg.params.K = parse_number("K", kv["K"]);
  cfg.params.I_rho = parse_number("I_rho", kv["I_rho"]);
  cfg.params.EI = parse_number("EI", kv["EI"]);
  cfg.params.l = parse_number("l", kv["l"]);
  cfg.params.validate();

  cfg.damping = kv.count("b") ? parse_damping("b", kv["b"], cfg.params.l) : DampingProfile::zero();
  cfg.damping.validate(cfg.params.l);

  if (kv.count("n")) {
    const double n = parse_number("n", kv["n"]);
    if (n < 2 || n != std::floor(n)) throw ValidationError("config key 'n' must be an integer >= 2");
    cfg.options.n = static_cast<int>(n);
  }
  if (kv.count("dt")) {
    cfg.options.dt = parse_number("dt", kv["dt"]);
    if (cfg.options.dt < 0.0) throw ValidationError("config key 'dt' must be >= 0");
  }
  if (kv.count("t_final")) {
    cfg.options.t_final = parse_number("t_final", kv["t_final"]);
    if (!(cfg.options.t_final > 0.0)) throw ValidationError("config key 't_final' must be > 0");
  }
  return cfg;
}

}  // namespace tbeam
