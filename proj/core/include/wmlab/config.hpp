#pragma once

namespace wmlab {

// Default numerical tolerances. Every routine that checks one of these
// takes an optional Tolerances argument, so a convergence study can
// tighten or loosen them in one place.
struct Tolerances {
  double hermitian = 1e-10;         // real symbol <-> Hermitian matrix
  double real_symbol = 1e-10;       // max |Im| for a real-observable flag
  double unitary = 1e-12;           // ||M M^dagger - I|| for unitary flag
  double normalization = 1e-12;     // |<psi|psi> - 1| for normalized states
  double band_limit = 1e-10;        // Fourier mass above half-Nyquist
  double boundary_mass = 1e-10;     // mass in the outer 10% of the box
  double envelope_tail = 1e-14;     // potential coefficients at the window edges
  double pulse_tail = 1e-12;        // source pulse mass outside the window
  double step_resolution = 0.5;     // dt * max|V| / hbar
  double cauchy_relative = 1e-3;    // Green-function ladder convergence
  double symplectic = 1e-12;        // |det M - 1| for flows
  double momentum_consistency = 1e-10;  // conjugate momentum residual
};

const Tolerances& default_tolerances();

}  // namespace wmlab
