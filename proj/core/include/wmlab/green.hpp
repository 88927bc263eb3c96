#pragma once

#include <string>
#include <vector>

#include "wmlab/dynamics.hpp"

namespace wmlab {

// Smoothed delta eps * phi_sigma(t - t0) with phi_sigma a unit-mass Gaussian.
struct SourcePulse {
  double center = 0.0;
  double width = 0.1;
  double amplitude = 0.0;

  GaussianPulse envelope() const { return GaussianPulse::normalized(center, width, amplitude); }
  // Mass of phi_sigma outside [t1, t2].
  double tail_mass(double t1, double t2) const;
  // Throws SupportError above 1e-12 tail mass, InvalidArgument for width <= 0.
  void validate(double t1, double t2) const;
};

enum class EvolutionRoute { Hilbert, Star };

struct GreenRequest {
  std::vector<double> times;          // insertion times, N of them
  PotentialSpec base;                 // V0; its window is the scattering window
  std::vector<double> epsilons{0.2, 0.1, 0.05};
  std::vector<double> sigmas{0.4, 0.2, 0.1};
  bool extrapolate = true;
  int steps = 3200;
  EvolutionRoute route = EvolutionRoute::Hilbert;
  double probe_radius = 1.5;          // weak norms use coherent states centered
  int probe_points = 3;               // on a (2k+1)^2 lattice of this half-width

  void validate() const;
};

// One line of the convergence report. Raw finite differences carry their
// (epsilon, sigma); epsilon-extrapolated rows have epsilon = 0 and the final
// value has both zero. The residual is the relative weak distance to
// the next stage (raw -> epsilon limit at that sigma, epsilon limit -> final)
// and, on the final row, the Cauchy residual of the sigma extrapolation.
struct GreenReportRow {
  double epsilon = 0.0;
  double sigma = 0.0;
  double estimate_norm = 0.0;
  double residual = 0.0;
};

struct GreenResult {
  Symbol value;
  std::vector<Symbol> per_sigma;      // epsilon limit at each sigma
  std::vector<GreenReportRow> report;
  double cauchy_residual = 0.0;
  int runs = 0;
};

// N-th functional derivative of S(j) at j = 0 (on top of V0) by central
// differences in the amplitudes of smoothed sources: 2^N scattering runs per
// (epsilon, sigma), combined with signs prod s_i / (2 eps)^N. With extrapolation
// on, Richardson tables in eps^2 and then sigma^2 are built over the full
// ladders, and the last two diagonal entries of the sigma table must agree to
// tol.cauchy_relative (ConvergenceError otherwise). Runs fan out over workers; sums
// are taken in a fixed order.
GreenResult green_function(const FreeEvolution& free, const GreenRequest& req,
                           const Tolerances& tol = default_tolerances());

// Columns: epsilon,sigma,estimate_norm,residual
std::string green_report_csv(const GreenResult& r);

struct MomentCheckOptions {
  std::vector<double> epsilons{0.2, 0.1, 0.05};
  // One octave below the single-insertion ladder: the two-point function's
  // sigma^4 term is four times larger and fails the Cauchy test at 0.4.
  std::vector<double> sigmas{0.2, 0.1, 0.05};
  int steps = 3200;
  EvolutionRoute route = EvolutionRoute::Hilbert;
  double probe_radius = 1.0;          // coherent-state centers for weak norms
  int probe_points = 3;
  int quadrature_nodes = 81;          // Simpson nodes for the order-g oracle
};

struct MomentReport {
  bool quadratic = true;              // V0 has no quartic part
  // All residuals are weak distances; the symmetry defect is relative.
  double symmetry_defect = 0.0;       // G(t1, t2) vs G(t2, t1)
  double ordering_residual = 0.0;     // G2 vs symbol of T[G1(t1) G1(t2)]
  double contraction_residual = 0.0;  // G2 - sym(G1 G1) vs (1/i hbar)^2 hbar K_pv
  double oracle_residual = 0.0;       // G2 vs the star-Dyson delta-source oracle, weak
  double first_order_shift = 0.0;     // weak size of G1(g) - G1(0)
  double first_order_residual = 0.0;  // its distance to the order-(1,1) star-Dyson term
  Symbol g1_first, g1_second, g2;
};

// Moment structure of the Green functions at two insertion times. The
// quadratic-case residuals are computed with V0's quartic part removed; when
// V0 has one, G1(t1) is also computed with it and its first-order shift is
// compared with the symbolic prediction. H0 must be an oscillator.
MomentReport feynman_moment_check(const FreeEvolution& free, double t1, double t2, const PotentialSpec& v0,
                                  const MomentCheckOptions& options = {},
                                  const Tolerances& tol = default_tolerances());

}  // namespace wmlab
