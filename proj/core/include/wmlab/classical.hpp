#pragma once

#include <Eigen/Dense>

#include <string>
#include <vector>

#include "wmlab/config.hpp"
#include "wmlab/dynamics.hpp"

namespace wmlab {

// q'' + m^2 q + g(t) q^3 / 3! = -j(t) on [t1, t2]; the classical system of
// H = (p^2 + m^2 q^2)/2 + g q^4/4! + j q.
struct DuffingParams {
  double m = 1.0;
  Envelope g;
  Envelope j;
  double t1 = -4.0;
  double t2 = 4.0;

  // Throws InvalidArgument for m <= 0 or an empty window and SupportError
  // when an envelope does not vanish at the window edges.
  void validate(const Tolerances& tol = default_tolerances()) const;
  PotentialSpec potential() const;
};

struct Trajectory {
  std::vector<double> t, q, p;  // p = dq/dt
  std::size_t size() const { return t.size(); }
  double dt() const { return t.size() > 1 ? t[1] - t[0] : 0.0; }
};

// Classical RK4 over the whole window. Throws StepResolutionError when
// dt * m >= 0.1.
Trajectory solve_duffing(const DuffingParams& params, const Eigen::Vector2d& z0, int steps);

// Interaction-picture scattering map: the state at t2 rotated back by the
// free flow (t2 - t1). Identity when g = j = 0.
Eigen::Vector2d classical_scattering_map(const DuffingParams& params, const Eigen::Vector2d& z0, int steps);

// Central-difference Jacobian of the scattering map.
Eigen::Matrix2d scattering_jacobian(const DuffingParams& params, const Eigen::Vector2d& z0, int steps,
                                    double h = 1e-5);

// int (p^2/2 - m^2 q^2/2 - g q^4/4! - j q) dt by composite Simpson (an odd
// number of samples) or trapezoid otherwise. The trajectory must span the
// parameter window; InvalidArgument on a mismatch.
double evaluate_action(const Trajectory& traj, const DuffingParams& params);

// Change of the free energy (p^2 + m^2 q^2)/2 along the trajectory against
// the work -int (g q^3/3! + j) p dt of the interaction.
struct WorkEnergy {
  double energy_change = 0.0;
  double work = 0.0;
  double residual = 0.0;
};
WorkEnergy work_energy(const Trajectory& traj, const DuffingParams& params);

std::string trajectory_csv(const Trajectory& traj);

// --- Classical limit of the scattering operator ---------------------------

struct ClassicalLimitOptions {
  std::vector<double> hbars{0.4, 0.2, 0.1, 0.05};
  int points = 128;            // grid size; the box is square in (q, p)
  int quantum_steps = 2000;    // raised when the step-resolution rule asks
  int classical_steps = 4000;
  double probe_radius = 1.0;
  int probe_points = 2;
  int quadrature_nodes = 16;   // Gauss-Hermite nodes per axis
};

struct ClassicalLimitRow {
  double hbar = 0.0;
  double half_extent = 0.0;
  int quantum_steps = 0;
  double error_q = 0.0;
  double error_p = 0.0;
};

struct ClassicalLimitReport {
  std::vector<ClassicalLimitRow> rows;
  double slope_q = 0.0;
  double slope_p = 0.0;
};

// For Phi in {q, p}: max over coherent-state centers of
// |<z| S^dagger Phi S |z> - <z| Op(Phi o map) |z>|, with S the grid scattering
// operator at each hbar and the right side the Gaussian (anti-Wick) smoothing
// of the classical composition, computed off-grid by Gauss-Hermite quadrature.
// Slopes are least-squares fits of log error against log hbar.
ClassicalLimitReport classical_limit(const DuffingParams& params, const ClassicalLimitOptions& options = {},
                                     const Tolerances& tol = default_tolerances());

// Least-squares slope of log y against log x.
double loglog_slope(const std::vector<double>& x, const std::vector<double>& y);

// --- 1+1D lattice field ----------------------------------------------------

// L = (phi_{x0}^2 - phi_{x1}^2 - m^2 phi^2)/2 - g(x0) phi^4/4!.
struct LagrangianSpec {
  double m = 1.0;
  Envelope g;  // quartic coupling as a function of x0

  void validate() const;
  double lagrangian(double x0, double phi, double phi0, double phi1) const;
  double d_phi0(double phi0) const { return phi0; }
  double d_phi1(double phi1) const { return -phi1; }
};

// Periodic lattice of n sites with spacing a at time t.
struct LatticeField {
  double a = 0.1;
  double t = 0.0;
  std::vector<double> phi, pi;

  std::size_t sites() const { return phi.size(); }
  // InvalidArgument unless a > 0, phi and pi agree in length (>= 3) and all
  // values are finite.
  void validate() const;
  double x(std::size_t i) const { return static_cast<double>(i) * a; }
};

// sum a [pi^2/2 + (phi_{i+1} - phi_i)^2/(2a^2) + m^2 phi^2/2 + g phi^4/4!]
double lattice_energy(const LatticeField& f, const LagrangianSpec& spec);

// Velocity Verlet for phi_tt = Laplacian phi - m^2 phi - g phi^3/3!.
// Throws StepResolutionError unless dt < a.
LatticeField solve_klein_gordon(const LatticeField& initial, const LagrangianSpec& spec, double duration,
                                int steps);

// Continuum angular frequency of lattice mode k: sqrt(m^2 + (2/a)^2 sin^2(k a/2)).
double lattice_frequency(double k, double a, double m);

std::string lattice_csv(const LatticeField& f);

// --- Covariant formalism, n = 1 --------------------------------------------

// Surface s -> (x0(s), x1(s)); derivatives by second-order differences,
// one-sided at the ends (exact for maps at most quadratic in s).
struct SurfaceParameterization {
  std::vector<double> s, x0, x1;

  static SurfaceParameterization flat(const std::vector<double>& s, double time = 0.0);
  static SurfaceParameterization tilted(const std::vector<double>& s, double slope, double offset = 0.0);

  std::size_t size() const { return s.size(); }
  std::vector<double> dx0() const;
  std::vector<double> dx1() const;
  // InvalidArgument on ragged or short samples, or when |dx0/ds| >= |dx1/ds|
  // anywhere.
  void validate() const;
};

// phi and its spacetime gradient sampled along the surface.
struct SurfaceField {
  std::vector<double> phi, phi0, phi1;
};

// pi = L_{phi0} dx1/ds + L_{phi1} (-dx0/ds).
std::vector<double> conjugate_momentum(const SurfaceParameterization& surface, const SurfaceField& field,
                                       const LagrangianSpec& spec);

struct HamiltonianDensities {
  std::vector<double> h0, h1;
};

// H^j from the Lagrangian derivatives and the surface Jacobians. The
// supplied pi must agree with conjugate_momentum to tol.momentum_consistency.
HamiltonianDensities covariant_hamiltonian_densities(const SurfaceParameterization& surface,
                                                     const SurfaceField& field, const std::vector<double>& pi,
                                                     const LagrangianSpec& spec,
                                                     const Tolerances& tol = default_tolerances());

// A lattice functional through its discrete variational derivatives.
struct LatticeFunctional {
  std::vector<double> d_phi, d_pi;

  static LatticeFunctional field_at(std::size_t sites, double a, std::size_t i);
  static LatticeFunctional momentum_at(std::size_t sites, double a, std::size_t i);
  // Derivatives of lattice_energy at f.
  static LatticeFunctional energy(const LatticeField& f, const LagrangianSpec& spec);
};

// sum_s a (dF1/dphi dF2/dpi - dF1/dpi dF2/dphi). InvalidArgument on lattice
// size mismatch.
double functional_poisson_bracket(const LatticeFunctional& f1, const LatticeFunctional& f2, double a);

}  // namespace wmlab
