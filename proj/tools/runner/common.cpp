#include "common.hpp"

#include <algorithm>
#include <iomanip>

#include "wmlab/errors.hpp"

namespace wmlab::runner {

GridSpec read_grid(Node& root, GridSpec fb) {
  Node g = root.child("grid", "phase-space grid");
  GridSpec s;
  s.half_extent = g.number("L", fb.half_extent, "half extent of the position box");
  s.points = g.integer("N", fb.points, "points per axis (even)");
  s.hbar = g.number("hbar", fb.hbar, "Planck constant");
  require(s.half_extent > 0.0, g, "L", "must be positive");
  require(s.points >= 8 && s.points % 2 == 0 && s.points <= 1024, g, "N", "must be even, in [8, 1024]");
  require(s.hbar > 0.0, g, "hbar", "must be positive");
  return s;
}

namespace {

std::vector<GaussianPulse> read_pulses(Node& p, const std::string& key, const std::vector<GaussianPulse>& fb) {
  if (p.schema_mode()) {
    Node e = p.list(key, "Gaussian pulses peak * exp(-(t - center)^2 / (2 width^2))").front();
    e.number("center", 0.0, "pulse center");
    e.number("width", 0.5, "pulse width");
    e.number("peak", 0.0, "peak value");
    return fb;
  }
  if (!p.has(key)) {
    p.list(key, "");
    return fb;
  }
  std::vector<GaussianPulse> out;
  for (Node& e : p.list(key, "")) {
    GaussianPulse g;
    g.center = e.number("center", 0.0, "");
    g.width = e.number("width", 0.5, "");
    g.peak = e.number("peak", 0.0, "");
    require(g.width > 0.0, e, "width", "must be positive");
    out.push_back(g);
  }
  return out;
}

std::vector<Plateau> read_plateaus(Node& p, const std::string& key, const std::vector<Plateau>& fb) {
  if (p.schema_mode()) {
    Node e = p.list(key, "smooth plateaus: height on [begin, end], ramps of length ramp").front();
    e.number("begin", 0.0, "start of the flat top");
    e.number("end", 0.0, "end of the flat top");
    e.number("ramp", 1.0, "ramp length");
    e.number("height", 0.0, "plateau height");
    return fb;
  }
  if (!p.has(key)) {
    p.list(key, "");
    return fb;
  }
  std::vector<Plateau> out;
  for (Node& e : p.list(key, "")) {
    Plateau q;
    q.begin = e.number("begin", 0.0, "");
    q.end = e.number("end", 0.0, "");
    q.ramp = e.number("ramp", 1.0, "");
    q.height = e.number("height", 0.0, "");
    require(q.ramp > 0.0 && q.end >= q.begin, e, "ramp", "needs ramp > 0 and end >= begin");
    out.push_back(q);
  }
  return out;
}

}  // namespace

PotentialSpec read_potential(Node& root, const PotentialSpec& fb, const std::string& key) {
  Node p = root.child(key, "V(t) = g(t) q^4/4! + j(t) q on [t1, t2]");
  PotentialSpec v;
  v.t1 = p.number("t1", fb.t1, "window start");
  v.t2 = p.number("t2", fb.t2, "window end");
  v.g.pulses = read_pulses(p, "g", fb.g.pulses);
  v.j.pulses = read_pulses(p, "j", fb.j.pulses);
  v.g.plateaus = read_plateaus(p, "g_plateaus", fb.g.plateaus);
  v.j.plateaus = read_plateaus(p, "j_plateaus", fb.j.plateaus);
  require(v.t2 > v.t1, p, "t2", "must exceed t1");
  if (!p.schema_mode()) {
    try {
      v.validate();
    } catch (const SupportError& e) {
      throw ConfigError("config: '" + p.path() + "': " + e.what());
    }
  }
  return v;
}

Tolerances read_numerics(Node& root) {
  Node n = root.child("numerics", "overrides of library tolerances");
  Tolerances t = default_tolerances();
  t.hermitian = n.number("hermitian", t.hermitian, "real symbol <-> Hermitian matrix");
  t.real_symbol = n.number("real_symbol", t.real_symbol, "max |Im| for real observables");
  t.unitary = n.number("unitary", t.unitary, "unitary flag");
  t.normalization = n.number("normalization", t.normalization, "state normalization");
  t.band_limit = n.number("band_limit", t.band_limit, "Fourier mass above half-Nyquist");
  t.boundary_mass = n.number("boundary_mass", t.boundary_mass, "mass in the outer 10% of the box");
  t.envelope_tail = n.number("envelope_tail", t.envelope_tail, "envelope value at the window edges");
  t.pulse_tail = n.number("pulse_tail", t.pulse_tail, "source pulse mass outside the window");
  t.step_resolution = n.number("step_resolution", t.step_resolution, "dt max|V| / hbar");
  t.cauchy_relative = n.number("cauchy_relative", t.cauchy_relative, "Green ladder convergence");
  t.symplectic = n.number("symplectic", t.symplectic, "|det M - 1| for flows");
  t.momentum_consistency = n.number("momentum_consistency", t.momentum_consistency, "conjugate momentum residual");
  return t;
}

std::vector<std::string> read_checks(Node& root, const std::vector<std::string>& all) {
  std::string doc = "checks to run, any of:";
  for (const auto& a : all) doc += " " + a;
  auto picked = root.strings("checks", all, doc);
  for (const auto& c : picked)
    if (std::find(all.begin(), all.end(), c) == all.end())
      throw ConfigError("config: key '" + root.key_path("checks") + "' names unknown check '" + c + "'");
  require(!picked.empty(), root, "checks", "must not be empty");
  return picked;
}

bool wants(const std::vector<std::string>& checks, const std::string& name) {
  return std::find(checks.begin(), checks.end(), name) != checks.end();
}

json to_json(const std::vector<double>& v) {
  json a = json::array();
  for (double x : v) a.push_back(x);
  return a;
}

Csv::Csv(const std::string& header) {
  out_ << std::setprecision(17);
  out_ << header << '\n';
}

}  // namespace wmlab::runner
