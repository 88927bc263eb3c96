#include <algorithm>
#include <cmath>

#include "common.hpp"
#include "wmlab/perturbation.hpp"

namespace wmlab::runner {

namespace {

constexpr cplx kI{0.0, 1.0};

std::vector<double> bump(const TimeGrid& grid, double center, double width, double peak) {
  return grid.sample([=](double t) { return peak * std::exp(-0.5 * std::pow((t - center) / width, 2)); });
}

struct Bump {
  double center, width, peak;
};

Bump read_bump(Node& n, const std::string& key, Bump fb, std::string_view doc) {
  Node b = n.child(key, doc);
  Bump out{b.number("center", fb.center, ""), b.number("width", fb.width, ""), b.number("peak", fb.peak, "")};
  require(out.width > 0.0, b, "width", "must be positive");
  return out;
}

TimeGrid make_time(const std::string& rule, double t1, double t2, int n) {
  return rule == "simpson" ? TimeGrid::simpson(t1, t2, n) : TimeGrid::midpoint(t1, t2, n);
}

// hbar power -vertices + pairings on every term.
int grading_violations(const FunctionalPolynomial& p) {
  int bad = 0;
  for (const auto& [k, c] : p.terms()) {
    const int legs = 4 * k.g_order + k.j_order, degree = static_cast<int>(k.nodes.size());
    if ((legs - degree) % 2 != 0 || k.hbar_power != -(k.g_order + k.j_order) + (legs - degree) / 2) ++bad;
  }
  return bad;
}

}  // namespace

Suite pv_kernel_suite() {
  Suite s;
  s.name = "pv-kernel";
  s.summary = "star-Dyson series vs Wick expansion with the time-ordered PV kernel; energy transform";
  s.prepare = [](Node& root) -> Job {
    const auto checks = read_checks(root, {"star_vs_wick", "energy_transform", "feynman_difference", "series_structure"});
    const double mass = root.number("mass", 1.1, "oscillator frequency");
    Node tg = root.child("time_grid", "quadrature nodes of the coupling integrals");
    const std::string rule = tg.text("rule", "simpson", "simpson or midpoint");
    const double t1 = tg.number("t1", -2.5, "");
    const double t2 = tg.number("t2", 2.5, "");
    const int nodes = tg.integer("nodes", 7, "node count (odd for simpson)");
    const Bump gb = read_bump(root, "g", {0.3, 0.9, 0.4}, "quartic coupling bump on the nodes");
    const Bump jb = read_bump(root, "j", {-0.2, 1.0, 0.7}, "source bump on the nodes");
    Node ord = root.child("orders", "truncation orders of the series");
    const DysonOrders orders{ord.integer("g", 2, ""), ord.integer("j", 4, "")};
    const int degree_bound = ord.integer("degree_bound", 12, "largest number of insertions kept");
    Node en = root.child("energies", "energy sweep of the PV transform");
    const double e_min = en.number("min", -3.0, "");
    const double e_max = en.number("max", 3.0, "");
    const int e_points = en.integer("points", 121, "");
    const double exclusion = en.number("exclusion", 0.5, "skip |E -+ m| below this");
    Node tol = root.child("tolerances", "pass thresholds");
    const double t_coef = tol.number("coefficients", 1e-12, "relative coefficient mismatch");
    const double t_transform = tol.number("transform_relative", 0.02, "relative error of the transform");
    const double t_diff = tol.number("feynman_difference", 1e-14, "largest coefficient of the mismatch");
    const double t_low = tol.number("series_structure", 1e-15, "largest low-order coefficient mismatch");

    require(mass > 0.0, root, "mass", "must be positive");
    require(rule == "simpson" || rule == "midpoint", tg, "rule", "must be simpson or midpoint");
    require(t2 > t1, tg, "t2", "must exceed t1");
    require(nodes >= 1 && (rule != "simpson" || (nodes >= 3 && nodes % 2 == 1)), tg, "nodes",
            "simpson needs an odd count >= 3");
    require(orders.g >= 0 && orders.g <= 2 && orders.j >= 0 && orders.j <= 4, ord, "g",
            "orders must lie in g <= 2, j <= 4");
    require(degree_bound >= 4 * orders.g + orders.j, ord, "degree_bound", "must hold 4 g + j insertions");
    require(e_points >= 2 && e_max > e_min, en, "points", "needs >= 2 points on a nonempty range");
    require(exclusion > 0.0, en, "exclusion", "must be positive");

    return [=](Report& rep) {
      const TimeGrid grid = make_time(rule, t1, t2, nodes);
      const auto g = bump(grid, gb.center, gb.width, gb.peak);
      const auto j = bump(grid, jb.center, jb.width, jb.peak);

      if (wants(checks, "star_vs_wick")) {
        Stopwatch sw;
        const ContractionKernel pv(KernelKind::PvTimeOrdered, mass, grid);
        const auto star = star_dyson(g, j, mass, grid, orders, degree_bound);
        const auto wick = wick_expand(g, j, pv, orders, degree_bound);
        double worst = 0.0;
        std::size_t missing = 0;
        for (const auto& [k, c] : star.terms()) {
          if (!wick.terms().contains(k)) ++missing;
          worst = std::max(worst, std::abs(c - wick.coefficient(k)) / std::max(1.0, std::abs(c)));
        }
        for (const auto& [k, c] : wick.terms())
          if (!star.terms().contains(k)) worst = std::max(worst, std::abs(c) / std::max(1.0, std::abs(c)));
        const int bad = grading_violations(star) + grading_violations(wick);
        rep.check("star_vs_wick", worst <= t_coef && missing == 0 && star.size() == wick.size() && bad == 0,
                  {{"max_relative_mismatch", worst}, {"terms", star.size()}, {"wick_terms", wick.size()},
                   {"missing_terms", missing}, {"grading_violations", bad}},
                  {{"max_relative_mismatch", t_coef}});
        rep.timing("star_vs_wick", sw.seconds());
      }
      if (wants(checks, "energy_transform")) {
        Stopwatch sw;
        std::vector<double> e;
        for (int i = 0; i < e_points; ++i) e.push_back(e_min + (e_max - e_min) * i / (e_points - 1));
        EnergyTransformOptions opt;
        opt.exclude_singular = true;
        opt.exclusion = exclusion;
        const ContractionKernel pv(KernelKind::PvTimeOrdered, mass, TimeGrid::midpoint(0.0, 1.0, 1));
        const auto t = kernel_energy_transform(pv, e, opt);
        // The PV kernel carries -i/2m sin, so its transform is i PV 1/(E^2 - m^2).
        const double constant_error = std::abs(t.constant - kI);
        Csv csv("E,re_transform,im_transform,pv_reference");
        int kept = 0;
        for (std::size_t i = 0; i < e.size(); ++i) {
          if (t.excluded[i]) continue;
          ++kept;
          csv.row(e[i], t.values[i].real(), t.values[i].imag(), t.reference[i]);
        }
        rep.check("energy_transform", t.max_relative_error < t_transform && constant_error < t_transform,
                  {{"max_relative_error", t.max_relative_error}, {"constant_re", t.constant.real()},
                   {"constant_im", t.constant.imag()}, {"kept_points", kept}},
                  {{"relative", t_transform}});
        rep.file("pv_transform.csv", csv.str());
        rep.timing("energy_transform", sw.seconds());
      }
      if (wants(checks, "feynman_difference")) {
        // Pure source at order (0, 2): the kernel difference is the symmetric part.
        const std::vector<double> zero(grid.size(), 0.0);
        const DysonOrders o{0, 2};
        auto with = [&](const ContractionKernel& k) { return wick_expand(zero, j, k, o, 2); };
        const auto f = with(ContractionKernel(KernelKind::Feynman, mass, grid));
        const auto pv = with(ContractionKernel(KernelKind::PvTimeOrdered, mass, grid));
        const auto sym = with(ContractionKernel(KernelKind::SymmetricPart, mass, grid));
        const auto none = with(ContractionKernel::custom(grid, CMatrix::Zero(grid.size(), grid.size())));
        const double d = ((f - pv) - (sym - none)).distance(FunctionalPolynomial(2));
        const double tadpole = std::abs((sym - none).coefficient({-1, 0, 2, {}}));
        rep.check("feynman_difference", d < t_diff && tadpole > 0.0, {{"mismatch", d}, {"symmetric_constant", tadpole}},
                  {{"mismatch", t_diff}});
      }
      if (wants(checks, "series_structure")) {
        const auto series = star_dyson(g, j, mass, grid, {1, 1}, 5);
        double worst = std::abs(series.coefficient({}) - 1.0);
        for (int i = 0; i < grid.size(); ++i) {
          const double w = grid.weight(i);
          worst = std::max(worst, std::abs(series.coefficient({-1, 1, 0, {i, i, i, i}}) - w * g[i] / 24.0 / kI));
          worst = std::max(worst, std::abs(series.coefficient({-1, 0, 1, {i}}) - w * j[i] / kI));
        }
        const auto low = series.order(1, 0) + series.order(0, 1);
        const bool sizes = low.size() == static_cast<std::size_t>(2 * grid.size());
        rep.check("series_structure", worst <= t_low && sizes && grading_violations(series) == 0,
                  {{"max_mismatch", worst}, {"low_order_terms", low.size()}}, {{"max_mismatch", t_low}});
        rep.file("series_low_orders.json", to_json(low) + "\n");
      }
    };
  };
  return s;
}

}  // namespace wmlab::runner
