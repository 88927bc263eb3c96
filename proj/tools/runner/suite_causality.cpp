#include "common.hpp"
#include "wmlab/errors.hpp"
#include "wmlab/moyal.hpp"

namespace wmlab::runner {

// Two late couplings, each scattered against the same early background, then
// the early background is varied. The relative operator S(late_a) S(late_b)^*
// must not notice: a change confined to earlier times cancels.
Suite causality_suite() {
  Suite s;
  s.name = "causality";
  s.summary = "relative scattering operator is blind to variations before the late region";
  s.prepare = [](Node& root) -> Job {
    read_checks(root, {"causality"});
    const GridSpec grid = read_grid(root);
    const double mass = root.number("mass", 1.0, "oscillator frequency of H0");
    PotentialSpec bg;
    bg.g.plateaus.push_back({-2.5, -1.8, 0.6, 0.05});
    bg = read_potential(root, bg, "background");
    Node late = root.child("late", "late plateau in g; its height takes the values a and b");
    const Plateau late_shape{late.number("begin", 0.8, ""), late.number("end", 1.6, ""),
                             late.number("ramp", 0.6, ""), 0.0};
    const double late_a = late.number("height_a", 0.08, "");
    const double late_b = late.number("height_b", 0.02, "");
    Node early = root.child("early", "early plateau in g added to the background");
    const Plateau early_shape{early.number("begin", -2.2, ""), early.number("end", -1.6, ""),
                              early.number("ramp", 0.5, ""), early.number("height", 0.04, "")};
    const int steps = root.integer("steps", 1600, "Strang steps per run");
    const Tolerances num = read_numerics(root);
    Node tol = root.child("tolerances", "pass thresholds");
    const double t_res = tol.number("residual", 1e-5, "sup of the change in the relative operator");
    const double t_sens = tol.number("sensitivity", 1e-3, "minimum change of S itself");
    require(mass > 0.0, root, "mass", "must be positive");
    require(steps >= 1, root, "steps", "must be >= 1");
    require(late_shape.ramp > 0.0 && late_shape.end >= late_shape.begin, late, "ramp", "needs ramp > 0, end >= begin");
    require(early_shape.ramp > 0.0 && early_shape.end >= early_shape.begin, early, "ramp",
            "needs ramp > 0, end >= begin");
    require(early_shape.end + early_shape.ramp < late_shape.begin - late_shape.ramp, early, "end",
            "early plateau must end before the late plateau starts");
    const bool schema = root.schema_mode();
    if (!schema) {
      // Validate the full potentials now so support errors are config errors.
      auto probe = bg;
      probe.g.plateaus.push_back(late_shape);
      probe.g.plateaus.push_back(early_shape);
      try {
        probe.validate(num);
      } catch (const SupportError& e) {
        throw ConfigError(std::string("config: potential: ") + e.what());
      }
    }

    return [=](Report& rep) {
      const PhaseSpaceGrid g = grid.make();
      const FreeEvolution free(g, QuadraticHamiltonian::oscillator(mass));
      auto scatter = [&](double height, bool with_early) {
        PotentialSpec v = bg;
        Plateau p = late_shape;
        p.height = height;
        v.g.plateaus.push_back(p);
        if (with_early) v.g.plateaus.push_back(early_shape);
        return scattering_operator_hilbert(free, v, steps, num);
      };
      auto rel = [](const Symbol& a, const Symbol& b) {
        return star(a, b.conj(), StarMethod::spectral(), BandLimitPolicy::Ignore);
      };
      Stopwatch sw;
      const Symbol a0 = scatter(late_a, false), b0 = scatter(late_b, false);
      const Symbol a1 = scatter(late_a, true), b1 = scatter(late_b, true);
      const double residual = sup_norm(rel(a1, b1) - rel(a0, b0));
      const double sensitivity = sup_norm(a1 - a0);
      rep.timing("runs", sw.seconds());
      rep.check("causality", residual < t_res && sensitivity > t_sens,
                {{"residual", residual}, {"sensitivity", sensitivity}, {"steps", steps}},
                {{"residual", t_res}, {"sensitivity", t_sens}});
    };
  };
  return s;
}

}  // namespace wmlab::runner
