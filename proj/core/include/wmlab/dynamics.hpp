#pragma once

#include <Eigen/Dense>

#include <functional>
#include <memory>
#include <optional>
#include <vector>

#include "wmlab/config.hpp"
#include "wmlab/moyal.hpp"
#include "wmlab/phase_space.hpp"

namespace wmlab {

// H0(z) = z^T A z / 2 + b^T z + c with z = (q, p).
struct QuadraticHamiltonian {
  Eigen::Matrix2d A = Eigen::Matrix2d::Zero();
  Eigen::Vector2d b = Eigen::Vector2d::Zero();
  double c = 0.0;

  // (p^2 + m^2 q^2) / 2
  static QuadraticHamiltonian oscillator(double m = 1.0);
  // p^2 / 2
  static QuadraticHamiltonian free_particle();

  void validate() const;
  double operator()(double q, double p) const;
  Symbol symbol(const PhaseSpaceGrid& grid) const;
};

// Affine map z -> M z + d.
struct SymplecticFlow {
  Eigen::Matrix2d M = Eigen::Matrix2d::Identity();
  Eigen::Vector2d d = Eigen::Vector2d::Zero();

  static SymplecticFlow identity() { return {}; }
  Eigen::Vector2d operator()(const Eigen::Vector2d& z) const { return M * z + d; }
  SymplecticFlow inverse() const;
  double determinant() const { return M.determinant(); }
  bool is_symplectic(double tol = default_tolerances().symplectic) const;
};

// outer(inner(z))
SymplecticFlow compose(const SymplecticFlow& outer, const SymplecticFlow& inner);

// Hamilton's equations q' = dH/dp, p' = -dH/dq integrated for time t, via
// the exponential of the augmented 3x3 generator. For the oscillator,
// free_flow(h, t) maps (q, p) to (q cos t + p sin t, p cos t - q sin t).
SymplecticFlow free_flow(const QuadraticHamiltonian& h0, double t);

// Phi o flow, i.e. the Heisenberg-picture observable when flow = free_flow(h0, t).
// The symbol is evaluated off-grid through its trigonometric interpolant and
// extended by zero outside the box.
// Throws SupportError if the result puts more than tol.boundary_mass of its
// weight in the outer 10% of the box, or if Phi itself does.
Symbol transport_symbol(const Symbol& phi, const SymplecticFlow& flow,
                        const Tolerances& tol = default_tolerances());

// Exact grid propagator U0(t) = exp(-i H0 t / hbar) from one eigendecomposition,
// with H0 assembled from the grid position and momentum operators (the qp
// term symmetrized). The Weyl-side counterpart of free_flow.
class FreeEvolution {
 public:
  FreeEvolution(const PhaseSpaceGrid& grid, const QuadraticHamiltonian& h0);

  const PhaseSpaceGrid& grid() const { return grid_; }
  const QuadraticHamiltonian& hamiltonian() const { return h0_; }
  const RVector& energies() const { return energies_; }

  OperatorMatrix propagator(double t) const;
  // U0(t)^dagger X U0(t)
  OperatorMatrix heisenberg(const OperatorMatrix& x, double t) const;
  // Same with X diagonal in position.
  OperatorMatrix heisenberg_diagonal(const CVector& diag, double t) const;
  // symbol(U0^dagger quantize(Phi) U0): metaplectic transport on the grid.
  Symbol transport(const Symbol& phi, double t) const;

 private:
  PhaseSpaceGrid grid_;
  QuadraticHamiltonian h0_;
  RVector energies_;
  CMatrix vectors_;
};

struct GaussianPulse {
  double center = 0.0;
  double width = 1.0;
  double peak = 0.0;
  double operator()(double t) const;
  // Pulse normalized to integral `amplitude`.
  static GaussianPulse normalized(double center, double width, double amplitude);
};

// Smooth compactly supported plateau: `height` on [begin, end], C-infinity
// ramps of length `ramp` on both sides, exactly zero beyond.
struct Plateau {
  double begin = 0.0;
  double end = 0.0;
  double ramp = 1.0;
  double height = 0.0;
  double operator()(double t) const;
};

// Sum of pulses and plateaus.
struct Envelope {
  std::vector<GaussianPulse> pulses;
  std::vector<Plateau> plateaus;

  double operator()(double t) const;
  bool empty() const;
  double max_abs() const;
  // Upper bound of |value| on [a, b]: each term at its own maximizer in the
  // interval, so the bound is tight for a single term.
  double bound_on(double a, double b) const;
  // Largest |value| on t <= t1 or t >= t2.
  double tail(double t1, double t2) const;
};

// V(t, q, p) = g(t) q^4 / 4! + j(t) q, plus an optional general symbol
// sampled per time step, on the window [t1, t2].
struct PotentialSpec {
  double t1 = -4.0;
  double t2 = 4.0;
  Envelope g;
  Envelope j;
  std::function<Symbol(double, const PhaseSpaceGrid&)> general;

  double duration() const { return t2 - t1; }
  bool is_zero() const { return g.empty() && j.empty() && !general; }
  // Throws SupportError if an envelope does not vanish at the window edges.
  void validate(const Tolerances& tol = default_tolerances()) const;
  // The position-diagonal part g(t) q^4/24 + j(t) q on the grid.
  RVector diagonal(double t, const PhaseSpaceGrid& grid) const;
  // Full symbol at time t (diagonal part plus the general term).
  Symbol symbol(double t, const PhaseSpaceGrid& grid) const;
};

// Full evolution U(t2, t1) by Strang splitting: half free step, potential
// kick at the step midpoint, free step and so on. The free factor is the
// exact grid propagator, so U is unitary up to roundoff and the global
// error is O(dt^2). Throws StepResolutionError when dt max|V| / hbar exceeds
// tol.step_resolution and InvalidArgument when a general V is not Hermitian.
OperatorMatrix evolve_hilbert(const FreeEvolution& free, const PotentialSpec& v, int steps,
                              const Tolerances& tol = default_tolerances());

// Symbol of U0(t2 - t1)^{-1} U(t2, t1), the scattering operator in the
// interaction picture referenced to t1.
Symbol scattering_operator_hilbert(const FreeEvolution& free, const PotentialSpec& v, int steps,
                                   const Tolerances& tol = default_tolerances());

struct StarRouteReport {
  double max_band_excess = 0.0;  // largest band_limit_excess(S_t) seen
  double unitarity_defect = 0.0;  // of the final S
};

// Integrates i hbar dS/dt = V_I(t) * S with S(t1) = 1 by classical RK4 on
// symbols, V_I(t) the grid-transported potential symbol at time t - t1.
// Star products use the spectral method; the band limit is monitored into
// `report` rather than enforced, because V_I of a quartic is never band-limited
// near the box edge.
Symbol scattering_operator_star(const FreeEvolution& free, const PotentialSpec& v, int steps,
                                const Tolerances& tol = default_tolerances(),
                                StarRouteReport* report = nullptr);

// <z| quantize(A) |z> for the coherent state centered at (q0, p0).
cplx coherent_expectation(const Symbol& a, double q0, double p0);

// max over centers of |<z|quantize(A - B)|z>|: the weak distance used to
// compare grid symbols with continuum closed forms.
double weak_distance(const Symbol& a, const Symbol& b, const std::vector<Eigen::Vector2d>& centers);

// (2k+1)^2 coherent-state centers on a square lattice of half-width r.
std::vector<Eigen::Vector2d> probe_centers(double r, int k);

}  // namespace wmlab
