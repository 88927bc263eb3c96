#include "wmlab/green.hpp"

#include <algorithm>
#include <cmath>
#include <bit>
#include <iomanip>
#include <optional>
#include <sstream>

#include "wmlab/errors.hpp"
#include "wmlab/parallel.hpp"
#include "wmlab/perturbation.hpp"

namespace wmlab {
namespace {

constexpr cplx kI{0.0, 1.0};

// Weak norm: largest coherent-state expectation over a lattice of centers.
struct Norm {
  std::vector<Eigen::Vector2d> centers;
  double operator()(const Symbol& a) const { return weak_distance(a, Symbol::constant(a.grid(), 0.0), centers); }
  double relative(const Symbol& a, const Symbol& b) const {
    const double d = weak_distance(a, b, centers), s = (*this)(b);
    return s > 0.0 ? d / s : d;
  }
};

// Neville table for data with an even expansion in h; returns the diagonal.
std::vector<Symbol> richardson_diagonal(const std::vector<Symbol>& values, const std::vector<double>& h) {
  std::vector<Symbol> row = values, diag{values.front()};
  for (std::size_t level = 1; level < values.size(); ++level) {
    std::vector<Symbol> next;
    for (std::size_t k = level; k < values.size(); ++k) {
      const double r = h[k - level] / h[k];
      next.push_back(row[k - level + 1] + (1.0 / (r * r - 1.0)) * (row[k - level + 1] - row[k - level]));
    }
    row = std::move(next);
    diag.push_back(row.front());
  }
  return diag;
}

Symbol scattering(const FreeEvolution& free, const PotentialSpec& v, int steps, EvolutionRoute route,
                  const Tolerances& tol) {
  return route == EvolutionRoute::Hilbert ? scattering_operator_hilbert(free, v, steps, tol)
                                          : scattering_operator_star(free, v, steps, tol);
}

}  // namespace

double SourcePulse::tail_mass(double t1, double t2) const {
  const double s = width * std::sqrt(2.0);
  return 0.5 * std::erfc((center - t1) / s) + 0.5 * std::erfc((t2 - center) / s);
}

void SourcePulse::validate(double t1, double t2) const {
  if (!(width > 0.0)) throw InvalidArgument("source pulse: width must be positive");
  const double tail = tail_mass(t1, t2);
  if (tail > default_tolerances().pulse_tail) {
    std::ostringstream msg;
    msg << "source pulse at t = " << center << " with width " << width << " escapes the window [" << t1 << ", "
        << t2 << "] (tail mass " << tail << ")";
    throw SupportError(msg.str());
  }
}

void GreenRequest::validate() const {
  if (times.empty()) throw InvalidArgument("green: need at least one insertion time");
  if (times.size() > 2) throw InvalidArgument("green: at most two insertion times are supported");
  for (std::size_t i = 0; i < times.size(); ++i) {
    if (!(times[i] > base.t1 && times[i] < base.t2)) throw InvalidArgument("green: insertion time outside the window");
    for (std::size_t k = 0; k < i; ++k)
      if (times[i] == times[k]) throw InvalidArgument("green: insertion times must be distinct");
  }
  if (epsilons.empty() || sigmas.empty()) throw InvalidArgument("green: empty differencing ladder");
  for (double e : epsilons)
    if (e < 0.0 || (extrapolate && e == 0.0))
      throw InvalidArgument("green: amplitudes must be positive (zero only without extrapolation)");
  for (std::size_t i = 1; i < epsilons.size(); ++i)
    if (!(epsilons[i] < epsilons[i - 1])) throw InvalidArgument("green: amplitude ladder must decrease");
  for (std::size_t i = 1; i < sigmas.size(); ++i)
    if (!(sigmas[i] < sigmas[i - 1])) throw InvalidArgument("green: width ladder must decrease");
  for (double s : sigmas)
    for (double t : times) SourcePulse{t, s, 1.0}.validate(base.t1, base.t2);
  if (steps < 1) throw InvalidArgument("green: steps must be positive");
  if (!(probe_radius >= 0.0) || probe_points < 0) throw InvalidArgument("green: invalid probe lattice");
}

GreenResult green_function(const FreeEvolution& free, const GreenRequest& req, const Tolerances& tol) {
  req.validate();
  req.base.validate(tol);
  const PhaseSpaceGrid& grid = free.grid();
  const Norm norm{probe_centers(req.probe_radius, req.probe_points)};
  const int n = static_cast<int>(req.times.size());
  const int patterns = 1 << n;
  const std::size_t ne = req.epsilons.size(), ns = req.sigmas.size();

  // Run (l, k, pattern): sigma l, epsilon k, sign bits.
  std::vector<std::size_t> live;
  for (std::size_t l = 0; l < ns; ++l)
    for (std::size_t k = 0; k < ne; ++k)
      if (req.epsilons[k] != 0.0)
        for (int s = 0; s < patterns; ++s) live.push_back((l * ne + k) * patterns + s);
  std::vector<std::optional<Symbol>> runs(ns * ne * patterns);
  parallel_for(live.size(), [&](std::size_t r) {
    const std::size_t id = live[r];
    const int s = static_cast<int>(id % patterns);
    const std::size_t k = (id / patterns) % ne, l = id / patterns / ne;
    PotentialSpec v = req.base;
    for (int i = 0; i < n; ++i) {
      const double sign = (s >> i) & 1 ? -1.0 : 1.0;
      v.j.pulses.push_back(SourcePulse{req.times[i], req.sigmas[l], sign * req.epsilons[k]}.envelope());
    }
    runs[id] = scattering(free, v, req.steps, req.route, tol);
  });

  // Signed sums in fixed order.
  std::vector<std::vector<Symbol>> raw(ns);
  for (std::size_t l = 0; l < ns; ++l)
    for (std::size_t k = 0; k < ne; ++k) {
      const double e = req.epsilons[k];
      if (e == 0.0) {
        raw[l].push_back(Symbol::constant(grid, 0.0));
        continue;
      }
      CMatrix acc = CMatrix::Zero(grid.points(), grid.points());
      for (int s = 0; s < patterns; ++s) {
        const int minus = std::popcount(static_cast<unsigned>(s));
        acc += (minus % 2 ? -1.0 : 1.0) * runs[(l * ne + k) * patterns + s]->values();
      }
      acc /= std::pow(2.0 * e, n);
      raw[l].emplace_back(grid, std::move(acc));
    }

  std::vector<Symbol> per_sigma;
  for (std::size_t l = 0; l < ns; ++l)
    per_sigma.push_back(req.extrapolate ? richardson_diagonal(raw[l], req.epsilons).back() : raw[l].back());

  Symbol value = per_sigma.back();
  double cauchy = 0.0;
  if (req.extrapolate) {
    const auto diag = richardson_diagonal(per_sigma, req.sigmas);
    value = diag.back();
    if (diag.size() > 1) cauchy = norm.relative(diag[diag.size() - 2], diag.back());
  } else if (ns > 1) {
    cauchy = norm.relative(per_sigma[ns - 2], per_sigma.back());
  }

  std::vector<GreenReportRow> report;
  for (std::size_t l = 0; l < ns; ++l)
    for (std::size_t k = 0; k < ne; ++k)
      report.push_back({req.epsilons[k], req.sigmas[l], norm(raw[l][k]), norm.relative(raw[l][k], per_sigma[l])});
  for (std::size_t l = 0; l < ns; ++l)
    report.push_back({0.0, req.sigmas[l], norm(per_sigma[l]), norm.relative(per_sigma[l], value)});
  report.push_back({0.0, 0.0, norm(value), cauchy});

  if (req.extrapolate && cauchy > tol.cauchy_relative) {
    std::ostringstream msg;
    msg << "green: sigma extrapolation did not converge (relative change " << cauchy << " > "
        << tol.cauchy_relative << ")";
    throw ConvergenceError(msg.str());
  }
  return {std::move(value), std::move(per_sigma), std::move(report), cauchy, static_cast<int>(live.size())};
}

std::string green_report_csv(const GreenResult& r) {
  std::ostringstream out;
  out << "epsilon,sigma,estimate_norm,residual\n" << std::setprecision(17);
  for (const auto& row : r.report)
    out << row.epsilon << ',' << row.sigma << ',' << row.estimate_norm << ',' << row.residual << '\n';
  return out.str();
}

MomentReport feynman_moment_check(const FreeEvolution& free, double t1, double t2, const PotentialSpec& v0,
                                  const MomentCheckOptions& opt, const Tolerances& tol) {
  const auto& h = free.hamiltonian();
  if (h.A(0, 1) != 0.0 || h.A(1, 0) != 0.0 || h.A(1, 1) != 1.0 || !h.b.isZero() || !(h.A(0, 0) > 0.0))
    throw InvalidArgument("moment check: H0 must be an oscillator (p^2 + m^2 q^2)/2");
  if (v0.general || !v0.j.empty()) throw InvalidArgument("moment check: V0 may only carry a quartic envelope");
  const double m = std::sqrt(h.A(0, 0));
  const PhaseSpaceGrid& grid = free.grid();
  const double hbar = grid.hbar();
  const auto centers = probe_centers(opt.probe_radius, opt.probe_points);

  PotentialSpec quad = v0;
  quad.g = Envelope{};
  const auto request = [&](std::vector<double> times, const PotentialSpec& base) {
    GreenRequest r;
    r.times = std::move(times);
    r.base = base;
    r.epsilons = opt.epsilons;
    r.sigmas = opt.sigmas;
    r.steps = opt.steps;
    r.route = opt.route;
    return r;
  };
  const Symbol ga = green_function(free, request({t1}, quad), tol).value;
  const Symbol gb = green_function(free, request({t2}, quad), tol).value;
  const Symbol g12 = green_function(free, request({t1, t2}, quad), tol).value;
  const Symbol g21 = green_function(free, request({t2, t1}, quad), tol).value;

  MomentReport r{.g1_first = ga, .g1_second = gb, .g2 = g12};
  r.quadratic = v0.g.empty();
  const Norm norm{centers};
  r.symmetry_defect = norm.relative(g21, g12);

  // Later insertion on the left.
  const Symbol& late = t1 > t2 ? ga : gb;
  const Symbol& early = t1 > t2 ? gb : ga;
  const Symbol ordered = weyl_symbol_of(weyl_quantize(late) * weyl_quantize(early));
  r.ordering_residual = weak_distance(g12, ordered, centers);

  const cplx contraction = (1.0 / (kI * hbar)) * (1.0 / (kI * hbar)) * hbar *
                           (-kI * std::sin(m * std::abs(t1 - t2)) / (2.0 * m));
  // The symmetrized product has the ordinary product as its symbol.
  const OperatorMatrix qa = weyl_quantize(ga), qb = weyl_quantize(gb);
  const Symbol symmetric = weyl_symbol_of(cplx(0.5) * (qa * qb + qb * qa));
  r.contraction_residual = weak_distance(g12 - symmetric, Symbol::constant(grid, contraction), centers);

  // Delta sources at the two insertion nodes; the mixed part of order (0, 2).
  {
    const double lo = std::min(t1, t2), hi = std::max(t1, t2);
    const TimeGrid nodes(v0.t1, v0.t2, {lo, hi}, {1.0, 1.0});
    const std::vector<double> zero{0.0, 0.0};
    const auto part = [&](std::vector<double> j) { return star_dyson(zero, j, m, nodes, {0, 2}, 2).order(0, 2); };
    const FunctionalPolynomial cross = part({1.0, 1.0}) - part({1.0, 0.0}) - part({0.0, 1.0});
    r.oracle_residual = weak_distance(g12, cross.evaluate(grid, nodes, m), centers);
  }

  if (!r.quadratic) {
    const Symbol gg = green_function(free, request({t1}, v0), tol).value;
    const Symbol shift = gg - ga;
    r.first_order_shift = norm(shift);

    // Simpson nodes for the quartic vertex plus the insertion node.
    const TimeGrid simpson = TimeGrid::simpson(v0.t1, v0.t2, opt.quadrature_nodes);
    std::vector<double> x, w, g, j;
    bool placed = false;
    for (int i = 0; i < simpson.size(); ++i) {
      const double t = simpson.node(i);
      if (!placed && t1 < t) {
        x.push_back(t1), w.push_back(1.0), g.push_back(0.0), j.push_back(1.0);
        placed = true;
      }
      if (t == t1) {
        x.push_back(t), w.push_back(simpson.weight(i)), g.push_back(v0.g(t)), j.push_back(1.0 / simpson.weight(i));
        placed = true;
        continue;
      }
      x.push_back(t), w.push_back(simpson.weight(i)), g.push_back(v0.g(t)), j.push_back(0.0);
    }
    const TimeGrid time(v0.t1, v0.t2, std::move(x), std::move(w));
    const FunctionalPolynomial term = star_dyson(g, j, m, time, {1, 1}, 5).order(1, 1);
    r.first_order_residual = weak_distance(shift, term.evaluate(grid, time, m), centers);
  }
  return r;
}

}  // namespace wmlab
