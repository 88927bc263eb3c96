#include <algorithm>
#include <cmath>
#include <map>

#include "common.hpp"
#include "wmlab/classical.hpp"
#include "wmlab/moyal.hpp"

namespace wmlab::runner {

namespace {

PotentialSpec default_pulse() {
  PotentialSpec v;
  v.t1 = -4.2;
  v.t2 = 4.2;
  v.g.pulses.push_back({0.0, 0.5, 0.1});
  return v;
}

// Successive differences |S_k - S_{k+1}| along a doubling ladder and the
// log-log slope against the step size.
double ladder_slope(const std::vector<int>& steps, const std::vector<double>& diffs, double duration) {
  std::vector<double> dt;
  for (std::size_t i = 0; i + 1 < steps.size(); ++i) dt.push_back(duration / steps[i]);
  return loglog_slope(dt, diffs);
}

}  // namespace

Suite scattering_suite() {
  Suite s;
  s.name = "scattering";
  s.summary = "scattering operator by the Hilbert and star routes: unitarity, agreement, convergence order";
  s.prepare = [](Node& root) -> Job {
    const auto checks = read_checks(root, {"unitarity", "route_equivalence", "convergence"});
    const GridSpec grid = read_grid(root);
    const double mass = root.number("mass", 1.0, "oscillator frequency of H0");
    const PotentialSpec v = read_potential(root, default_pulse());
    const Tolerances num = read_numerics(root);
    Node st = root.child("steps", "time steps per route");
    const int hilbert_steps = st.integer("hilbert", 6400, "Strang steps for the unitarity check");
    const int star_steps = st.integer("star", 6400, "RK4 steps for unitarity and equivalence");
    const int reference = st.integer("reference", 102400, "Strang steps of the equivalence reference");
    const auto hilbert_ladder = st.integers("hilbert_ladder", {800, 1600, 3200, 6400, 12800}, "convergence ladder");
    const auto star_ladder = st.integers("star_ladder", {1600, 3200, 6400}, "convergence ladder");
    Node tol = root.child("tolerances", "pass thresholds");
    const double t_unit = tol.number("unitarity", 1e-5, "sup |S * conj(S) - 1|, each route");
    const double t_equiv = tol.number("route_equivalence", 1e-5, "sup |S_star - S_hilbert|");
    const double hilbert_order = tol.number("hilbert_order", 2.0, "expected convergence slope");
    const double hilbert_width = tol.number("hilbert_order_width", 0.2, "allowed deviation");
    const double star_order = tol.number("star_order", 4.0, "expected convergence slope");
    const double star_width = tol.number("star_order_width", 0.5, "allowed deviation");
    require(mass > 0.0, root, "mass", "must be positive");
    for (int n : {hilbert_steps, star_steps, reference}) require(n >= 1, st, "hilbert", "step counts must be >= 1");
    for (const auto* l : {&hilbert_ladder, &star_ladder}) {
      require(l->size() >= 3, st, l == &star_ladder ? "star_ladder" : "hilbert_ladder", "needs at least three entries");
      for (int n : *l) require(n >= 1, st, "hilbert_ladder", "step counts must be >= 1");
    }

    return [=](Report& rep) {
      const PhaseSpaceGrid g = grid.make();
      const FreeEvolution free(g, QuadraticHamiltonian::oscillator(mass));
      std::map<std::pair<int, int>, Symbol> cache;
      std::map<int, StarRouteReport> star_reports;
      auto run = [&](bool star_route, int n) -> const Symbol& {
        const auto key = std::make_pair(int(star_route), n);
        auto it = cache.find(key);
        if (it != cache.end()) return it->second;
        Stopwatch sw;
        Symbol out = star_route ? scattering_operator_star(free, v, n, num, &star_reports[n])
                                : scattering_operator_hilbert(free, v, n, num);
        rep.timing(std::string(star_route ? "star_" : "hilbert_") + std::to_string(n), sw.seconds());
        return cache.emplace(key, std::move(out)).first->second;
      };

      if (wants(checks, "unitarity")) {
        const double dh = unitarity_defect(run(false, hilbert_steps), BandLimitPolicy::Ignore, num);
        const double ds = unitarity_defect(run(true, star_steps), BandLimitPolicy::Ignore, num);
        rep.check("unitarity", dh < t_unit && ds < t_unit,
                  {{"hilbert_defect", dh}, {"star_defect", ds}, {"hilbert_steps", hilbert_steps},
                   {"star_steps", star_steps}, {"star_band_excess", star_reports[star_steps].max_band_excess}},
                  {{"defect", t_unit}});
      }
      if (wants(checks, "route_equivalence")) {
        const double d = sup_norm(run(true, star_steps) - run(false, reference));
        rep.check("route_equivalence", d < t_equiv,
                  {{"sup_difference", d}, {"star_steps", star_steps}, {"reference_steps", reference}},
                  {{"sup_difference", t_equiv}});
      }
      if (wants(checks, "convergence")) {
        Csv csv("route,steps,dt,successive_difference");
        auto sweep = [&](bool star_route, const std::vector<int>& ladder) {
          std::vector<double> diffs;
          for (std::size_t i = 0; i + 1 < ladder.size(); ++i) {
            diffs.push_back(sup_norm(run(star_route, ladder[i]) - run(star_route, ladder[i + 1])));
            csv.row(star_route ? "star" : "hilbert", ladder[i], v.duration() / ladder[i], diffs.back());
          }
          return ladder_slope(ladder, diffs, v.duration());
        };
        const double sh = sweep(false, hilbert_ladder);
        const double ss = sweep(true, star_ladder);
        rep.check("convergence",
                  std::abs(sh - hilbert_order) <= hilbert_width && std::abs(ss - star_order) <= star_width,
                  {{"hilbert_slope", sh}, {"star_slope", ss}},
                  {{"hilbert_order", hilbert_order}, {"hilbert_order_width", hilbert_width},
                   {"star_order", star_order}, {"star_order_width", star_width}});
        rep.file("convergence.csv", csv.str());
      }
    };
  };
  return s;
}

}  // namespace wmlab::runner
