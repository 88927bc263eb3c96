#include <cmath>
#include <sstream>

#include "common.hpp"
#include "wmlab/errors.hpp"
#include "wmlab/green.hpp"
#include "wmlab/serialize.hpp"

namespace wmlab::runner {

namespace {

PotentialSpec default_background() {
  PotentialSpec v;
  v.t1 = -5.0;
  v.t2 = 5.0;
  v.g.pulses.push_back({0.0, 0.5, 0.05});
  return v;
}

std::string binary(const Symbol& s) {
  std::ostringstream os(std::ios::binary);
  write_binary(os, s);
  return os.str();
}

}  // namespace

Suite green_suite() {
  Suite s;
  s.name = "green";
  s.summary = "Green functions by finite differences of smoothed sources, checked against closed forms";
  s.prepare = [](Node& root) -> Job {
    const auto checks = read_checks(
        root, {"first_order", "second_order_oracle", "symmetry", "ordering", "contraction", "first_order_g"});
    const GridSpec grid = read_grid(root);
    const double mass = root.number("mass", 1.0, "oscillator frequency of H0");
    const PotentialSpec v0 = read_potential(root, default_background());
    const auto times = root.numbers("times", {0.3, -1.7}, "the two insertion times");
    const Tolerances num = read_numerics(root);
    Node lad = root.child("ladders", "finite-difference ladders");
    MomentCheckOptions opt;
    opt.epsilons = lad.numbers("epsilons", {0.2, 0.1, 0.05}, "source amplitudes");
    opt.sigmas = lad.numbers("sigmas", opt.sigmas, "source widths");
    opt.steps = root.integer("steps", 2000, "time steps per scattering run");
    const std::string route = root.text("route", "hilbert", "hilbert or star");
    Node probe = root.child("probe", "coherent-state centers for weak norms");
    opt.probe_radius = probe.number("radius", 1.0, "half-width of the center lattice");
    opt.probe_points = probe.integer("points", 3, "(2k+1)^2 centers");
    opt.quadrature_nodes = root.integer("quadrature_nodes", 81, "Simpson nodes of the order-g oracle");
    Node tol = root.child("tolerances", "pass thresholds");
    const double t_first = tol.number("first_order", 1e-5, "weak |G1 - q_I / (i hbar)|");
    const double t_oracle = tol.number("second_order_oracle", 1e-4, "weak |G2 - oracle|");
    const double t_sym = tol.number("symmetry", num.cauchy_relative, "relative |G(t1,t2) - G(t2,t1)|");
    const double t_order = tol.number("ordering", 1e-4, "weak |G2 - T[G1 G1]|");
    const double t_contr = tol.number("contraction", 1e-4, "weak |G2 - sym(G1 G1) - contraction|");
    const double t_g = tol.number("first_order_g", 5e-3, "weak distance of the order-g shift to its prediction");

    require(mass > 0.0, root, "mass", "must be positive");
    require(times.size() == 2 && times[0] != times[1], root, "times", "needs two distinct times");
    for (double t : times) require(t > v0.t1 && t < v0.t2, root, "times", "must lie inside the window");
    require(route == "hilbert" || route == "star", root, "route", "must be hilbert or star");
    opt.route = route == "star" ? EvolutionRoute::Star : EvolutionRoute::Hilbert;
    require(v0.j.empty(), root, "potential", "the background may only carry g");
    if (!root.schema_mode()) {
      GreenRequest r;
      r.times = times;
      r.base = v0;
      r.epsilons = opt.epsilons;
      r.sigmas = opt.sigmas;
      r.steps = opt.steps;
      try {
        r.validate();
      } catch (const Error& e) {
        throw ConfigError(std::string("config: green ladders: ") + e.what());
      }
    }

    return [=](Report& rep) {
      const PhaseSpaceGrid g = grid.make();
      const FreeEvolution free(g, QuadraticHamiltonian::oscillator(mass));
      const auto centers = probe_centers(opt.probe_radius, opt.probe_points);
      auto inserted = [&](double t) {
        const double tau = mass * (t - v0.t1);
        return Symbol::sample(g, [&](double q, double p) {
          return (q * std::cos(tau) + p * std::sin(tau) / mass) / cplx(0.0, g.hbar());
        });
      };

      if (wants(checks, "first_order")) {
        // Quadratic background; also provides the convergence report.
        PotentialSpec quad = v0;
        quad.g = Envelope{};
        GreenRequest r;
        r.times = {times[0]};
        r.base = quad;
        r.epsilons = opt.epsilons;
        r.sigmas = opt.sigmas;
        r.steps = opt.steps;
        r.route = opt.route;
        r.probe_radius = opt.probe_radius;
        r.probe_points = opt.probe_points;
        Stopwatch sw;
        const GreenResult res = green_function(free, r, num);
        rep.timing("first_order", sw.seconds());
        const double d = weak_distance(res.value, inserted(times[0]), centers);
        rep.check("first_order", d < t_first,
                  {{"weak_error", d}, {"cauchy_residual", res.cauchy_residual}, {"runs", res.runs}},
                  {{"weak_error", t_first}});
        rep.file("green_first_order.csv", green_report_csv(res));
      }

      const bool moments = wants(checks, "second_order_oracle") || wants(checks, "symmetry") ||
                           wants(checks, "ordering") || wants(checks, "contraction") || wants(checks, "first_order_g");
      if (moments) {
        Stopwatch sw;
        const MomentReport m = feynman_moment_check(free, times[0], times[1], v0, opt, num);
        rep.timing("moment_check", sw.seconds());
        if (wants(checks, "second_order_oracle"))
          rep.check("second_order_oracle", m.oracle_residual < t_oracle, {{"weak_error", m.oracle_residual}},
                    {{"weak_error", t_oracle}});
        if (wants(checks, "symmetry"))
          rep.check("symmetry", m.symmetry_defect < t_sym, {{"relative_defect", m.symmetry_defect}},
                    {{"relative_defect", t_sym}});
        if (wants(checks, "ordering"))
          rep.check("ordering", m.ordering_residual < t_order, {{"weak_error", m.ordering_residual}},
                    {{"weak_error", t_order}});
        if (wants(checks, "contraction"))
          rep.check("contraction", m.contraction_residual < t_contr, {{"weak_error", m.contraction_residual}},
                    {{"weak_error", t_contr}});
        if (wants(checks, "first_order_g")) {
          // Without a quartic background there is no shift to compare.
          const bool ok = m.quadratic || (m.first_order_residual < t_g && m.first_order_shift > 10 * m.first_order_residual);
          rep.check("first_order_g", ok,
                    {{"weak_error", m.first_order_residual}, {"shift", m.first_order_shift}, {"quadratic", m.quadratic}},
                    {{"weak_error", t_g}, {"min_shift_ratio", 10.0}});
        }
        Csv csv("q0,p0,re_g1_first,im_g1_first,re_g1_second,im_g1_second,re_g2,im_g2");
        for (const auto& c : centers) {
          const cplx a = coherent_expectation(m.g1_first, c(0), c(1));
          const cplx b = coherent_expectation(m.g1_second, c(0), c(1));
          const cplx d = coherent_expectation(m.g2, c(0), c(1));
          csv.row(c(0), c(1), a.real(), a.imag(), b.real(), b.imag(), d.real(), d.imag());
        }
        rep.file("green_coherent.csv", csv.str());
        rep.file("green_g2.bin", binary(m.g2));
      }
    };
  };
  return s;
}

}  // namespace wmlab::runner
