#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "common.hpp"
#include "wmlab/classical.hpp"
#include "wmlab/moyal.hpp"

namespace wmlab::runner {

namespace {

// Random combination of plane waves exp(i pi mu q / L) exp(i nu dq p / hbar)
// with |mu|, |nu| < N/4 - 1, so the symbol is band-limited.
Symbol random_symbol(const PhaseSpaceGrid& g, std::mt19937_64& rng) {
  const int n = g.points(), cut = n / 4 - 1, m = 2 * cut + 1;
  std::normal_distribution<double> nd(0.0, 1.0);
  CMatrix c(m, m);
  for (int a = 0; a < m; ++a)
    for (int b = 0; b < m; ++b) c(a, b) = cplx(nd(rng), nd(rng)) / double(cut);
  CMatrix eq(n, m), ep(n, m);
  for (int a = 0; a < m; ++a) {
    const int mu = a - cut;
    for (int j = 0; j < n; ++j) {
      eq(j, a) = std::polar(1.0, std::numbers::pi * mu * g.q(j) / g.half_extent());
      ep(j, a) = std::polar(1.0, mu * g.dq() / g.hbar() * g.p(j));
    }
  }
  return Symbol(g, eq * c * ep.transpose());
}

Symbol blob(const PhaseSpaceGrid& g, double q0, double p0, double s, double tilt) {
  return Symbol::sample(g, [=](double q, double p) {
    return (1.0 + tilt * (q - p)) * std::exp(-((q - q0) * (q - q0) + (p - p0) * (p - p0)) / (2 * s * s));
  });
}

}  // namespace

Suite algebra_suite() {
  Suite s;
  s.name = "algebra";
  s.summary = "Weyl round trip, star product vs operator product, associativity, hbar scaling";
  s.prepare = [](Node& root) -> Job {
    const auto checks = read_checks(root, {"round_trip", "correspondence", "associativity", "hbar_scaling"});
    const GridSpec grid = read_grid(root);
    const int seed = root.integer("seed", 20240601, "random seed for test symbols");
    Node tol = root.child("tolerances", "pass thresholds");
    const double t_round = tol.number("round_trip", 1e-10, "sup |symbol(quantize(A)) - A|");
    const double t_corr = tol.number("correspondence", 1e-8, "sup |f*g - symbol(F G)|");
    const double t_assoc = tol.number("associativity", 1e-9, "sup |(f*g)*h - f*(g*h)|");
    const double star_slope = tol.number("star_slope", 1.0, "expected slope of |f*g - fg|");
    const double bracket_slope = tol.number("bracket_slope", 2.0, "expected slope of |bracket - Poisson|");
    const double star_width = tol.number("star_slope_width", 0.1, "allowed deviation");
    const double bracket_width = tol.number("bracket_slope_width", 0.2, "allowed deviation");
    Node sizes = root.child("samples", "number of random test symbols");
    const int n_round = sizes.integer("round_trip", 50, "");
    const int n_corr = sizes.integer("correspondence", 5, "");
    const int n_assoc = sizes.integer("associativity", 30, "");
    Node sc = root.child("scaling", "hbar ladder for the scaling check");
    const auto hbars = sc.numbers("hbars", {0.4, 0.2, 0.1, 0.05}, "hbar values");
    const double scale_l = sc.number("L", 7.0, "half extent of the position box");
    // N grows with 1/hbar so the momentum extent keeps holding the symbols.
    const auto scale_n = sc.integers("points", {128, 160, 320, 640}, "points per axis, one per hbar");
    for (const auto* n : {&n_round, &n_corr, &n_assoc}) require(*n >= 1, sizes, "round_trip", "counts must be >= 1");
    require(hbars.size() >= 2, sc, "hbars", "needs at least two values");
    for (double h : hbars) require(h > 0.0, sc, "hbars", "values must be positive");
    require(scale_n.size() == hbars.size(), sc, "points", "needs one entry per hbar");
    for (int n : scale_n) require(n >= 8 && n % 2 == 0, sc, "points", "entries must be even and >= 8");

    return [=](Report& rep) {
      const PhaseSpaceGrid g = grid.make();
      std::mt19937_64 rng(static_cast<std::uint64_t>(seed));
      if (wants(checks, "round_trip")) {
        Stopwatch sw;
        Csv csv("sample,error");
        double worst = 0.0;
        for (int i = 0; i < n_round; ++i) {
          const Symbol a = random_symbol(g, rng);
          const double e = sup_norm(weyl_symbol_of(weyl_quantize(a)) - a);
          worst = std::max(worst, e);
          csv.row(i, e);
        }
        rep.check("round_trip", worst < t_round, {{"max_error", worst}, {"samples", n_round}}, {{"max_error", t_round}});
        rep.file("round_trip.csv", csv.str());
        rep.timing("round_trip", sw.seconds());
      }
      if (wants(checks, "correspondence")) {
        Stopwatch sw;
        double worst = 0.0;
        for (int i = 0; i < n_corr; ++i) {
          const Symbol f = random_symbol(g, rng), h = random_symbol(g, rng);
          worst = std::max(worst, sup_norm(star(f, h) - weyl_symbol_of(weyl_quantize(f) * weyl_quantize(h))));
        }
        rep.check("correspondence", worst < t_corr, {{"max_error", worst}, {"samples", n_corr}}, {{"max_error", t_corr}});
        rep.timing("correspondence", sw.seconds());
      }
      if (wants(checks, "associativity")) {
        Stopwatch sw;
        double worst = 0.0;
        for (int i = 0; i < n_assoc; ++i) {
          const Symbol f = random_symbol(g, rng), h = random_symbol(g, rng), k = random_symbol(g, rng);
          // Inner products have twice the band; the bracketing is the point here.
          const auto ig = BandLimitPolicy::Ignore;
          const auto sm = StarMethod::spectral();
          worst = std::max(worst, sup_norm(star(star(f, h, sm, ig), k, sm, ig) - star(f, star(h, k, sm, ig), sm, ig)));
        }
        rep.check("associativity", worst < t_assoc, {{"max_defect", worst}, {"samples", n_assoc}},
                  {{"max_defect", t_assoc}});
        rep.timing("associativity", sw.seconds());
      }
      if (wants(checks, "hbar_scaling")) {
        Stopwatch sw;
        Csv csv("hbar,N,star_error,bracket_error");
        std::vector<double> e1, e2;
        for (std::size_t i = 0; i < hbars.size(); ++i) {
          const double h = hbars[i];
          const int n = scale_n[i];
          const auto gh = make_grid(scale_l, n, h);
          const Symbol f = blob(gh, 0.3, -0.2, 1.0, 0.5), k = blob(gh, -0.2, 0.3, 1.1, -0.4);
          e1.push_back(sup_norm(star(f, k, StarMethod::spectral(), BandLimitPolicy::Ignore) - pointwise(f, k)));
          e2.push_back(sup_norm(moyal_bracket(f, k, StarMethod::spectral(), BandLimitPolicy::Ignore) -
                                poisson_bracket(f, k)));
          csv.row(h, n, e1.back(), e2.back());
        }
        const double s1 = loglog_slope(hbars, e1), s2 = loglog_slope(hbars, e2);
        rep.check("hbar_scaling",
                  std::abs(s1 - star_slope) <= star_width && std::abs(s2 - bracket_slope) <= bracket_width,
                  {{"star_slope", s1}, {"bracket_slope", s2}, {"hbars", to_json(hbars)}},
                  {{"star_slope", star_slope}, {"star_slope_width", star_width}, {"bracket_slope", bracket_slope},
                   {"bracket_slope_width", bracket_width}});
        rep.file("hbar_scaling.csv", csv.str());
        rep.timing("hbar_scaling", sw.seconds());
      }
    };
  };
  return s;
}

}  // namespace wmlab::runner
