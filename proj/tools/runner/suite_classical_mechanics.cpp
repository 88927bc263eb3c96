#include <cmath>
#include <numbers>
#include <random>

#include "common.hpp"
#include "wmlab/classical.hpp"

namespace wmlab::runner {

namespace {

constexpr double kPi = std::numbers::pi;

double simpson(const std::function<double(double)>& f, double a, double b, int cells) {
  if (cells % 2) ++cells;
  const double h = (b - a) / cells;
  double acc = f(a) + f(b);
  for (int i = 1; i < cells; ++i) acc += (i % 2 ? 4.0 : 2.0) * f(a + i * h);
  return acc * h / 3.0;
}

DuffingParams window(double t1, double t2, double m = 1.0) {
  DuffingParams p;
  p.m = m;
  p.t1 = t1;
  p.t2 = t2;
  return p;
}

LatticeField mode(int sites, double a, int n) {
  LatticeField f;
  f.a = a;
  for (int i = 0; i < sites; ++i) {
    f.phi.push_back(std::cos(2.0 * kPi * n * i / sites));
    f.pi.push_back(0.0);
  }
  return f;
}

}  // namespace

Suite classical_mechanics_suite() {
  Suite s;
  s.name = "classical-mechanics";
  s.summary = "Duffing RK4, scattering map symplecticity, action principle, Klein-Gordon lattice";
  s.prepare = [](Node& root) -> Job {
    const auto checks = read_checks(root, {"harmonic_return", "duhamel", "symplecticity", "work_energy",
                                           "action_stationarity", "kg_drift", "kg_dispersion"});
    Node du = root.child("duffing", "single-oscillator runs");
    const int period_steps = du.integer("period_steps", 10000, "RK4 steps over one harmonic period");
    const int duhamel_steps = du.integer("duhamel_steps", 8000, "RK4 steps of the driven run");
    const double duhamel_mass = du.number("duhamel_mass", 1.3, "frequency of the driven run");
    const int map_steps = du.integer("map_steps", 4000, "RK4 steps per scattering-map evaluation");
    const double map_peak = du.number("map_g_peak", 0.5, "quartic pulse peak for the symplecticity check");
    const int action_trials = du.integer("action_trials", 20, "random variations of the solution");
    const int seed = root.integer("seed", 7, "random seed for the action variations");
    Node kg = root.child("klein_gordon", "lattice field runs");
    const int sites = kg.integer("sites", 256, "lattice sites");
    const double spacing = kg.number("spacing", 0.1, "lattice spacing a");
    const double duration = kg.number("duration", 10.0, "evolution time");
    const int kg_steps = kg.integer("steps", 20000, "Verlet steps over the duration");
    const double kg_mass = kg.number("mass", 1.0, "field mass");
    Node tol = root.child("tolerances", "pass thresholds");
    const double t_return = tol.number("harmonic_return", 1e-8, "|z(T) - z(0)| after one period");
    const double t_duhamel = tol.number("duhamel", 1e-8, "driven solution vs the Duhamel integral");
    const double t_sympl = tol.number("symplecticity", 1e-8, "|det DS - 1| of the scattering map");
    const double t_work = tol.number("work_energy", 1e-8, "energy change vs work");
    const double t_slope_w = tol.number("action_slope_width", 0.2, "action change must scale with slope 2");
    const double t_drift = tol.number("kg_drift", 1e-6, "relative lattice energy drift");
    const double t_disp = tol.number("kg_dispersion", 1e-6, "single mode vs the lattice dispersion");

    for (int n : {period_steps, duhamel_steps, map_steps}) require(n >= 1, du, "period_steps", "step counts must be >= 1");
    require(duhamel_mass > 0.0, du, "duhamel_mass", "must be positive");
    require(action_trials >= 1, du, "action_trials", "must be >= 1");
    require(sites >= 16, kg, "sites", "must be >= 16");
    require(spacing > 0.0 && duration > 0.0 && kg_mass >= 0.0, kg, "spacing", "needs a > 0, duration > 0, mass >= 0");
    require(duration / kg_steps < spacing, kg, "steps", "needs dt < a");

    return [=](Report& rep) {
      if (wants(checks, "harmonic_return")) {
        const auto p = window(-kPi, kPi);
        const auto tr = solve_duffing(p, {1.0, 0.0}, period_steps);
        const double e = std::hypot(tr.q.back() - 1.0, tr.p.back());
        rep.check("harmonic_return", e < t_return, {{"error", e}, {"steps", period_steps}}, {{"error", t_return}});
        rep.file("harmonic_trajectory.csv", trajectory_csv(tr));
      }
      if (wants(checks, "duhamel")) {
        auto p = window(-5.0, 5.0, duhamel_mass);
        p.j.pulses.push_back(GaussianPulse::normalized(0.2, 0.5, 1.0));
        const Eigen::Vector2d z0{0.4, -0.3};
        const auto tr = solve_duffing(p, z0, duhamel_steps);
        double worst = 0.0;
        const std::size_t stride = std::max<std::size_t>(1, tr.size() / 20);
        for (std::size_t i = stride; i < tr.size(); i += stride) {
          const double t = tr.t[i], u = p.m * (t - p.t1);
          const double free = z0(0) * std::cos(u) + z0(1) * std::sin(u) / p.m;
          const double forced = simpson([&](double w) { return p.j(w) * std::sin(p.m * (t - w)) / p.m; }, p.t1, t, 20000);
          worst = std::max(worst, std::abs(tr.q[i] - (free - forced)));
        }
        rep.check("duhamel", worst < t_duhamel, {{"max_error", worst}}, {{"max_error", t_duhamel}});
      }
      if (wants(checks, "symplecticity")) {
        auto p = window(-4.0, 4.0);
        p.g.pulses.push_back({0.0, 0.4, map_peak});
        double worst = 0.0, bend = 0.0;
        Csv csv("q,p,det_minus_one");
        for (int a = -2; a <= 2; ++a)
          for (int b = -2; b <= 2; ++b) {
            const auto jac = scattering_jacobian(p, {0.75 * a, 0.75 * b}, map_steps);
            worst = std::max(worst, std::abs(jac.determinant() - 1.0));
            bend = std::max(bend, (jac - Eigen::Matrix2d::Identity()).norm());
            csv.row(0.75 * a, 0.75 * b, jac.determinant() - 1.0);
          }
        rep.check("symplecticity", worst < t_sympl, {{"max_det_defect", worst}, {"max_bend", bend}},
                  {{"max_det_defect", t_sympl}});
        rep.file("symplecticity.csv", csv.str());
      }
      if (wants(checks, "work_energy")) {
        auto p = window(-4.0, 4.0);
        p.g.plateaus.push_back({-1.5, 1.5, 1.0, 0.1});
        const auto w = work_energy(solve_duffing(p, {1.2, 0.3}, 8000), p);
        rep.check("work_energy", w.residual < t_work && std::abs(w.work) > 1e-4,
                  {{"residual", w.residual}, {"work", w.work}}, {{"residual", t_work}});
      }
      if (wants(checks, "action_stationarity")) {
        // Variations eta = c sin^2(pi u) sin(n pi u) change the action at second order.
        auto p = window(-4.0, 4.0);
        p.g.pulses.push_back({0.0, 0.45, 0.6});
        p.j.pulses.push_back({-0.5, 0.4, 0.4});
        const auto tr = solve_duffing(p, {0.5, 0.2}, 8000);
        const double base = evaluate_action(tr, p), span = p.t2 - p.t1;
        std::mt19937 rng(static_cast<unsigned>(seed));
        std::uniform_int_distribution<int> pick(1, 6);
        std::uniform_real_distribution<double> amp(0.5, 1.5);
        const std::vector<double> deltas{0.08, 0.04, 0.02, 0.01};
        double worst = 0.0;
        std::vector<double> slopes;
        for (int trial = 0; trial < action_trials; ++trial) {
          const int n = pick(rng);
          const double c = amp(rng);
          std::vector<double> change;
          for (double d : deltas) {
            Trajectory v = tr;
            for (std::size_t i = 0; i < v.size(); ++i) {
              const double u = (v.t[i] - p.t1) / span, w = kPi / span;
              const double sn = std::sin(kPi * u), sm = std::sin(n * kPi * u);
              v.q[i] += d * c * sn * sn * sm;
              v.p[i] += d * c * (2.0 * sn * std::cos(kPi * u) * w * sm + sn * sn * n * w * std::cos(n * kPi * u));
            }
            change.push_back(std::abs(evaluate_action(v, p) - base));
          }
          slopes.push_back(loglog_slope(deltas, change));
          worst = std::max(worst, std::abs(slopes.back() - 2.0));
        }
        rep.check("action_stationarity", worst <= t_slope_w, {{"max_slope_deviation", worst}, {"slopes", to_json(slopes)}},
                  {{"slope", 2.0}, {"slope_width", t_slope_w}});
      }
      if (wants(checks, "kg_drift")) {
        LatticeField f = mode(sites, spacing, 2);
        const auto g = mode(sites, spacing, 5);
        for (int i = 0; i < sites; ++i) {
          f.phi[i] += 0.5 * g.phi[i];
          f.pi[i] = 0.3 * std::sin(2.0 * kPi * 7 * i / sites);
        }
        LagrangianSpec spec;
        spec.m = kg_mass;
        const double e0 = lattice_energy(f, spec);
        const int chunks = 10;
        LatticeField cur = f;
        double drift = 0.0;
        Csv csv("t,energy,relative_drift");
        csv.row(0.0, e0, 0.0);
        for (int c = 0; c < chunks; ++c) {
          cur = solve_klein_gordon(cur, spec, duration / chunks, std::max(1, kg_steps / chunks));
          const double e = lattice_energy(cur, spec);
          drift = std::max(drift, std::abs(e - e0) / e0);
          csv.row(cur.t, e, (e - e0) / e0);
        }
        rep.check("kg_drift", drift < t_drift, {{"max_relative_drift", drift}, {"sites", sites}, {"duration", duration}},
                  {{"max_relative_drift", t_drift}});
        rep.file("kg_energy.csv", csv.str());
        rep.file("kg_final.csv", lattice_csv(cur));
      }
      if (wants(checks, "kg_dispersion")) {
        const auto f = mode(sites, spacing, 3);
        LagrangianSpec spec;
        spec.m = kg_mass;
        const auto g = solve_klein_gordon(f, spec, duration, kg_steps);
        const double k = 2.0 * kPi * 3 / (sites * spacing);
        const double w = lattice_frequency(k, spacing, kg_mass);
        double worst = 0.0;
        for (int i = 0; i < sites; ++i)
          worst = std::max(worst, std::abs(g.phi[i] - std::cos(k * f.x(i)) * std::cos(w * duration)));
        rep.check("kg_dispersion", worst < t_disp, {{"max_error", worst}, {"omega", w}}, {{"max_error", t_disp}});
      }
    };
  };
  return s;
}

}  // namespace wmlab::runner
