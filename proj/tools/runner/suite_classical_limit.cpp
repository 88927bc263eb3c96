#include <cmath>

#include "common.hpp"
#include "wmlab/classical.hpp"

namespace wmlab::runner {

Suite classical_limit_suite() {
  Suite s;
  s.name = "classical-limit";
  s.summary = "quantum scattering of q and p against the classical scattering map, as hbar goes to 0";
  s.prepare = [](Node& root) -> Job {
    read_checks(root, {"slopes"});
    const double mass = root.number("mass", 1.0, "oscillator frequency");
    PotentialSpec fb;
    fb.g.pulses.push_back({0.0, 0.4, 1.0});
    const PotentialSpec v = read_potential(root, fb);
    ClassicalLimitOptions opt;
    opt.hbars = root.numbers("hbars", opt.hbars, "hbar ladder");
    opt.points = root.integer("points", opt.points, "grid points per axis at every hbar");
    Node st = root.child("steps", "time steps");
    opt.quantum_steps = st.integer("quantum", opt.quantum_steps, "Strang steps (raised if too coarse)");
    opt.classical_steps = st.integer("classical", opt.classical_steps, "RK4 steps of the classical map");
    Node probe = root.child("probe", "coherent-state centers");
    opt.probe_radius = probe.number("radius", opt.probe_radius, "half-width of the center lattice");
    opt.probe_points = probe.integer("points", opt.probe_points, "(2k+1)^2 centers");
    opt.quadrature_nodes = root.integer("quadrature_nodes", opt.quadrature_nodes, "Gauss-Hermite nodes per axis");
    const Tolerances num = read_numerics(root);
    Node tol = root.child("tolerances", "pass thresholds");
    const double slope = tol.number("slope", 1.0, "expected log-log slope of the error in hbar");
    const double width = tol.number("slope_width", 0.2, "allowed deviation");

    require(mass > 0.0, root, "mass", "must be positive");
    require(opt.hbars.size() >= 2, root, "hbars", "needs at least two values");
    for (double h : opt.hbars) require(h > 0.0, root, "hbars", "values must be positive");
    require(opt.points >= 16 && opt.points % 2 == 0, root, "points", "must be even and >= 16");
    require(opt.quantum_steps >= 1 && opt.classical_steps >= 1, st, "quantum", "step counts must be >= 1");
    require(opt.quadrature_nodes >= 2 && opt.quadrature_nodes <= 64, root, "quadrature_nodes", "must be in [2, 64]");
    require(opt.probe_points >= 0, probe, "points", "must be >= 0");
    require(v.duration() * mass / opt.classical_steps < 0.1, st, "classical", "needs dt * mass < 0.1");
    DuffingParams params;
    params.m = mass;
    params.g = v.g;
    params.j = v.j;
    params.t1 = v.t1;
    params.t2 = v.t2;

    return [=](Report& rep) {
      Stopwatch sw;
      const ClassicalLimitReport r = classical_limit(params, opt, num);
      rep.timing("classical_limit", sw.seconds());
      Csv csv("hbar,L,quantum_steps,error_q,error_p");
      json errors = json::array();
      for (const auto& row : r.rows) {
        csv.row(row.hbar, row.half_extent, row.quantum_steps, row.error_q, row.error_p);
        errors.push_back({{"hbar", row.hbar}, {"error_q", row.error_q}, {"error_p", row.error_p}});
      }
      const bool ok = std::abs(r.slope_q - slope) <= width && std::abs(r.slope_p - slope) <= width;
      rep.check("slopes", ok, {{"slope_q", r.slope_q}, {"slope_p", r.slope_p}, {"rows", errors}},
                {{"slope", slope}, {"slope_width", width}});
      rep.file("classical_limit.csv", csv.str());
    };
  };
  return s;
}

}  // namespace wmlab::runner
