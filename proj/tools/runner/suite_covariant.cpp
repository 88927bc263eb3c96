#include <cmath>
#include <numbers>

#include "common.hpp"
#include "wmlab/classical.hpp"

namespace wmlab::runner {

namespace {

constexpr double kPi = std::numbers::pi;

std::vector<double> parameter_grid(int n, double a, double b) {
  std::vector<double> s(n);
  for (int i = 0; i < n; ++i) s[i] = a + (b - a) * i / (n - 1);
  return s;
}

}  // namespace

Suite covariant_suite() {
  Suite s;
  s.name = "covariant";
  s.summary = "Hamiltonian densities on flat and tilted surfaces; functional brackets vs the lattice flow";
  s.prepare = [](Node& root) -> Job {
    const auto checks = read_checks(root, {"flat_surface", "tilted_surface", "canonical_brackets", "hamilton_equations"});
    const double mass = root.number("mass", 1.7, "field mass on the surfaces");
    const int samples = root.integer("samples", 41, "points along each surface");
    Node tilt = root.child("tilted", "constant-gradient field on x0 = slope x1 + offset");
    const double slope = tilt.number("slope", 0.35, "must satisfy |slope| < 1");
    const double f0 = tilt.number("phi0", 0.9, "d phi / d x0");
    const double f1 = tilt.number("phi1", -0.4, "d phi / d x1");
    const double phi = tilt.number("phi", 0.25, "field value");
    Node lat = root.child("lattice", "lattice for the bracket checks");
    const int sites = lat.integer("sites", 128, "");
    const double spacing = lat.number("spacing", 0.2, "");
    const double lat_mass = lat.number("mass", 1.4, "");
    const auto hs = lat.numbers("steps", {4e-3, 2e-3, 1e-3}, "time steps of the central differences");
    Node tol = root.child("tolerances", "pass thresholds");
    const double t_exact = tol.number("exact", 1e-12, "round-off allowance for closed-form identities");
    const double t_ham = tol.number("hamilton_equations", 1e-5, "bracket vs lattice time derivative at the finest step");
    const double order = tol.number("order", 2.0, "expected slope of the residual in the step");
    const double order_w = tol.number("order_width", 0.3, "allowed deviation");

    require(mass >= 0.0 && lat_mass >= 0.0, root, "mass", "must be >= 0");
    require(samples >= 5, root, "samples", "must be >= 5");
    require(std::abs(slope) < 1.0, tilt, "slope", "the surface must be spacelike, |slope| < 1");
    require(sites >= 8 && spacing > 0.0, lat, "sites", "needs sites >= 8 and spacing > 0");
    require(hs.size() >= 2, lat, "steps", "needs at least two values");
    for (double h : hs) require(h > 0.0 && h < spacing, lat, "steps", "needs 0 < h < spacing");

    return [=](Report& rep) {
      LagrangianSpec spec;
      spec.m = mass;
      if (wants(checks, "flat_surface")) {
        // On x0 = const: pi = phi_0, H^0 the energy density, H^1 = pi phi_s.
        const auto sv = parameter_grid(samples, 0.0, 2.0 * kPi);
        const auto surf = SurfaceParameterization::flat(sv, 0.5);
        SurfaceField f;
        for (double x : sv) {
          f.phi.push_back(std::sin(x));
          f.phi0.push_back(std::cos(3.0 * x) + 0.2);
          f.phi1.push_back(std::cos(x));
        }
        const auto pi = conjugate_momentum(surf, f, spec);
        const auto h = covariant_hamiltonian_densities(surf, f, pi, spec);
        double e_pi = 0.0, e_h0 = 0.0, e_h1 = 0.0;
        Csv csv("s,pi,h0,h1,energy_density");
        for (std::size_t i = 0; i < sv.size(); ++i) {
          const double e = 0.5 * (pi[i] * pi[i] + f.phi1[i] * f.phi1[i] + mass * mass * f.phi[i] * f.phi[i]);
          e_pi = std::max(e_pi, std::abs(pi[i] - f.phi0[i]));
          e_h0 = std::max(e_h0, std::abs(h.h0[i] - e));
          e_h1 = std::max(e_h1, std::abs(h.h1[i] - pi[i] * f.phi1[i]));
          csv.row(sv[i], pi[i], h.h0[i], h.h1[i], e);
        }
        const double worst = std::max({e_pi, e_h0, e_h1});
        rep.check("flat_surface", worst < t_exact,
                  {{"momentum_error", e_pi}, {"h0_error", e_h0}, {"h1_error", e_h1}}, {{"error", t_exact}});
        rep.file("flat_surface.csv", csv.str());
      }
      if (wants(checks, "tilted_surface")) {
        const auto sv = parameter_grid(samples, -1.0, 1.0);
        const auto surf = SurfaceParameterization::tilted(sv, slope);
        const std::size_t n = sv.size();
        const SurfaceField f{std::vector<double>(n, phi), std::vector<double>(n, f0), std::vector<double>(n, f1)};
        // dx1/ds = 1, dx0/ds = slope.
        const double lag = 0.5 * (f0 * f0 - f1 * f1 - mass * mass * phi * phi);
        const double pi_hand = f0 + slope * f1;
        const double h0_hand = slope * f1 * f0 + (f0 * f0 - lag);
        const double h1_hand = f0 * f1 + slope * (f1 * f1 + lag);
        const auto pi = conjugate_momentum(surf, f, spec);
        const auto h = covariant_hamiltonian_densities(surf, f, pi, spec);
        double worst = 0.0;
        for (std::size_t i = 0; i < n; ++i)
          worst = std::max({worst, std::abs(pi[i] - pi_hand), std::abs(h.h0[i] - h0_hand), std::abs(h.h1[i] - h1_hand)});
        rep.check("tilted_surface", worst < t_exact, {{"max_error", worst}, {"pi", pi_hand}, {"h0", h0_hand}, {"h1", h1_hand}},
                  {{"error", t_exact}});
      }

      LagrangianSpec lspec;
      lspec.m = lat_mass;
      LatticeField f;
      f.a = spacing;
      for (int i = 0; i < sites; ++i) {
        f.phi.push_back(std::cos(2.0 * kPi * 2 * i / sites));
        f.pi.push_back(0.4 * std::sin(2.0 * kPi * 3 * i / sites));
      }
      if (wants(checks, "canonical_brackets")) {
        double worst = 0.0;
        const auto n = static_cast<std::size_t>(sites);
        for (std::size_t a = 0; a < n; a += 5)
          for (std::size_t b = 0; b < n; b += 3) {
            const double v = functional_poisson_bracket(LatticeFunctional::field_at(n, spacing, a),
                                                        LatticeFunctional::momentum_at(n, spacing, b), spacing);
            worst = std::max(worst, std::abs(v - (a == b ? 1.0 / spacing : 0.0)));
          }
        const auto h = LatticeFunctional::energy(f, lspec);
        const double self = std::abs(functional_poisson_bracket(h, h, spacing));
        rep.check("canonical_brackets", worst < t_exact && self < t_exact, {{"max_error", worst}, {"energy_self_bracket", self}},
                  {{"error", t_exact}});
      }
      if (wants(checks, "hamilton_equations")) {
        // {H, phi(s)} = -dphi/dt and {pi(s), H} = dpi/dt by central differences of the solver.
        const auto energy = LatticeFunctional::energy(f, lspec);
        std::vector<double> residual;
        Csv csv("h,residual");
        for (double h : hs) {
          LatticeField back = f;
          for (auto& v : back.pi) v = -v;
          back = solve_klein_gordon(back, lspec, h, 1);
          for (auto& v : back.pi) v = -v;
          const auto fwd = solve_klein_gordon(f, lspec, h, 1);
          double worst = 0.0;
          for (std::size_t s = 0; s < static_cast<std::size_t>(sites); ++s) {
            const double dphi = (fwd.phi[s] - back.phi[s]) / (2.0 * h);
            const double dpi = (fwd.pi[s] - back.pi[s]) / (2.0 * h);
            const auto n = static_cast<std::size_t>(sites);
            worst = std::max(worst, std::abs(functional_poisson_bracket(energy, LatticeFunctional::field_at(n, spacing, s), spacing) + dphi));
            worst = std::max(worst, std::abs(functional_poisson_bracket(LatticeFunctional::momentum_at(n, spacing, s), energy, spacing) - dpi));
          }
          residual.push_back(worst);
          csv.row(h, worst);
        }
        const double finest = residual.back();
        const double fitted = loglog_slope(hs, residual);
        rep.check("hamilton_equations", finest < t_ham && std::abs(fitted - order) <= order_w,
                  {{"finest_residual", finest}, {"slope", fitted}},
                  {{"finest_residual", t_ham}, {"order", order}, {"order_width", order_w}});
        rep.file("hamilton_equations.csv", csv.str());
      }
    };
  };
  return s;
}

}  // namespace wmlab::runner
