#include "wmlab/dynamics.hpp"

#include <unsupported/Eigen/MatrixFunctions>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "fft.hpp"
#include "wmlab/errors.hpp"

namespace wmlab {
namespace {

using std::numbers::pi;

int signed_index(int m, int n) { return m < n / 2 ? m : m - n; }

// C-infinity step from 0 at x <= 0 to 1 at x >= 1.
double smooth_step(double x) {
  if (x <= 0.0) return 0.0;
  if (x >= 1.0) return 1.0;
  const double a = std::exp(-1.0 / x);
  const double b = std::exp(-1.0 / (1.0 - x));
  return a / (a + b);
}

void check_steps(int steps) {
  if (steps < 1) throw InvalidArgument("evolution: steps must be positive");
}

// Largest dt max|V| / hbar over the steps. Envelopes are bounded over the
// whole step, so a coarse step cannot straddle a pulse unnoticed; a general
// V is sampled at the midpoint.
double resolution_ratio(const PotentialSpec& v, const PhaseSpaceGrid& grid, int steps) {
  const double dt = v.duration() / steps;
  const double L = grid.half_extent();
  const double q4 = std::pow(L, 4) / 24.0;
  double worst = 0.0;
  for (int k = 0; k < steps; ++k) {
    const double a = v.t1 + k * dt, t = a + 0.5 * dt;
    double vmax = v.g.bound_on(a, a + dt) * q4 + v.j.bound_on(a, a + dt) * L;
    if (v.general) vmax += v.general(t, grid).max_abs();
    worst = std::max(worst, dt * vmax / grid.hbar());
  }
  return worst;
}

void check_resolution(const PotentialSpec& v, const PhaseSpaceGrid& grid, int steps,
                      const Tolerances& tol) {
  const double r = resolution_ratio(v, grid, steps);
  if (r > tol.step_resolution) {
    std::ostringstream os;
    os << "evolution: " << steps << " steps do not resolve the potential (dt max|V| / hbar = " << r
       << ", limit " << tol.step_resolution << ")";
    throw StepResolutionError(os.str());
  }
}

// exp(-i K dt / hbar) for Hermitian K
CMatrix hermitian_exponential(const CMatrix& k, double dt, double hbar) {
  Eigen::SelfAdjointEigenSolver<CMatrix> es(0.5 * (k + k.adjoint()));
  const CVector phase = (es.eigenvalues() * (-dt / hbar)).unaryExpr([](double x) {
    return std::polar(1.0, x);
  });
  return es.eigenvectors() * phase.asDiagonal() * es.eigenvectors().adjoint();
}

}  // namespace

// ---- quadratic Hamiltonians and flows ---------------------------------------

QuadraticHamiltonian QuadraticHamiltonian::oscillator(double m) {
  if (!(m > 0.0)) throw InvalidArgument("oscillator: m must be positive");
  QuadraticHamiltonian h;
  h.A << m * m, 0.0, 0.0, 1.0;
  return h;
}

QuadraticHamiltonian QuadraticHamiltonian::free_particle() {
  QuadraticHamiltonian h;
  h.A << 0.0, 0.0, 0.0, 1.0;
  return h;
}

void QuadraticHamiltonian::validate() const {
  if (std::abs(A(0, 1) - A(1, 0)) > 1e-14 * (1.0 + A.cwiseAbs().maxCoeff()))
    throw InvalidArgument("quadratic Hamiltonian: A must be symmetric");
}

double QuadraticHamiltonian::operator()(double q, double p) const {
  const Eigen::Vector2d z(q, p);
  return 0.5 * z.dot(A * z) + b.dot(z) + c;
}

Symbol QuadraticHamiltonian::symbol(const PhaseSpaceGrid& grid) const {
  validate();
  return Symbol::sample(grid, [this](double q, double p) { return (*this)(q, p); });
}

SymplecticFlow SymplecticFlow::inverse() const {
  const Eigen::Matrix2d mi = M.inverse();
  return {mi, -mi * d};
}

bool SymplecticFlow::is_symplectic(double tol) const { return std::abs(determinant() - 1.0) < tol; }

SymplecticFlow compose(const SymplecticFlow& outer, const SymplecticFlow& inner) {
  return {outer.M * inner.M, outer.M * inner.d + outer.d};
}

SymplecticFlow free_flow(const QuadraticHamiltonian& h0, double t) {
  h0.validate();
  Eigen::Matrix2d J;
  J << 0.0, 1.0, -1.0, 0.0;
  Eigen::Matrix3d gen = Eigen::Matrix3d::Zero();
  gen.topLeftCorner<2, 2>() = J * h0.A;
  gen.topRightCorner<2, 1>() = J * h0.b;
  const Eigen::Matrix3d e = (gen * t).exp();
  return {e.topLeftCorner<2, 2>(), e.topRightCorner<2, 1>()};
}

Symbol transport_symbol(const Symbol& phi, const SymplecticFlow& flow, const Tolerances& tol) {
  const auto& g = phi.grid();
  const int n = g.points();
  if (boundary_mass(phi) > tol.boundary_mass)
    throw SupportError("transport_symbol: input symbol is not negligible near the box edge");

  CMatrix f = phi.values();
  detail::fft2(f.data(), n, -1);
  f.row(n / 2).setZero();
  f.col(n / 2).setZero();

  const double L = g.half_extent();
  const double P = g.momentum_extent();
  const int n2 = n * n;
  // Eq(i, m) = exp(i pi mu (q'_i + L) / L) for the image point of node i
  CMatrix eq(n2, n);
  Eigen::ArrayXd qs(n2), ps(n2);
  for (int k = 0; k < n; ++k)
    for (int j = 0; j < n; ++j) {
      const Eigen::Vector2d z = flow(Eigen::Vector2d(g.q(j), g.p(k)));
      qs(j + k * n) = z(0);
      ps(j + k * n) = z(1);
    }
  for (int m = 0; m < n; ++m) {
    const double w = pi * signed_index(m, n) / L;
    for (int i = 0; i < n2; ++i) eq(i, m) = std::polar(1.0, w * (qs(i) + L));
  }
  const CMatrix x = eq * f;
  CMatrix out(n, n);
  for (int i = 0; i < n2; ++i) {
    cplx s = 0.0;
    // outside the box the symbol is taken as zero, not as its periodic image
    if (std::abs(qs(i)) > L || std::abs(ps(i)) > P) {
      out(i % n, i / n) = 0.0;
      continue;
    }
    for (int m = 0; m < n; ++m) s += x(i, m) * std::polar(1.0, pi * signed_index(m, n) * (ps(i) + P) / P);
    out(i % n, i / n) = s / static_cast<double>(n2);
  }
  Symbol r(g, std::move(out));
  if (boundary_mass(r) > tol.boundary_mass)
    throw SupportError("transport_symbol: transported symbol escapes the box");
  return r;
}

// ---- grid free evolution ------------------------------------------------------

FreeEvolution::FreeEvolution(const PhaseSpaceGrid& grid, const QuadraticHamiltonian& h0)
    : grid_(grid), h0_(h0) {
  h0.validate();
  // Assembled from the grid Q and P; for diagonal A this equals
  // quantize(h0.symbol(grid)), and the cross term is the symmetrized QP.
  const CMatrix q = OperatorMatrix::position(grid).entries();
  const CMatrix p = OperatorMatrix::momentum(grid).entries();
  const CMatrix qp = q * p;
  CMatrix h = 0.5 * h0.A(0, 0) * (q * q) + 0.5 * h0.A(1, 1) * (p * p) +
              0.5 * h0.A(0, 1) * (qp + qp.adjoint()) + h0.b(0) * q + h0.b(1) * p;
  h.diagonal().array() += h0.c;
  Eigen::SelfAdjointEigenSolver<CMatrix> es(0.5 * (h + h.adjoint()));
  energies_ = es.eigenvalues();
  vectors_ = es.eigenvectors();
}

OperatorMatrix FreeEvolution::propagator(double t) const {
  const double s = -t / grid_.hbar();
  const CVector phase = (energies_ * s).unaryExpr([](double x) { return std::polar(1.0, x); });
  return OperatorMatrix(grid_, vectors_ * phase.asDiagonal() * vectors_.adjoint());
}

OperatorMatrix FreeEvolution::heisenberg(const OperatorMatrix& x, double t) const {
  require_same_grid(grid_, x.grid(), "heisenberg");
  const CMatrix u = propagator(t).entries();
  return OperatorMatrix(grid_, u.adjoint() * x.entries() * u);
}

OperatorMatrix FreeEvolution::heisenberg_diagonal(const CVector& diag, double t) const {
  const CMatrix u = propagator(t).entries();
  return OperatorMatrix(grid_, u.adjoint() * (diag.asDiagonal() * u));
}

Symbol FreeEvolution::transport(const Symbol& phi, double t) const {
  return weyl_symbol_of(heisenberg(weyl_quantize(phi), t));
}

// ---- envelopes and potentials --------------------------------------------------

double GaussianPulse::operator()(double t) const {
  const double x = (t - center) / width;
  return peak * std::exp(-0.5 * x * x);
}

GaussianPulse GaussianPulse::normalized(double center, double width, double amplitude) {
  if (!(width > 0.0)) throw InvalidArgument("pulse: width must be positive");
  return {center, width, amplitude / (width * std::sqrt(2.0 * pi))};
}

double Plateau::operator()(double t) const {
  if (t <= begin - ramp || t >= end + ramp) return 0.0;
  if (t < begin) return height * smooth_step((t - begin + ramp) / ramp);
  if (t > end) return height * smooth_step((end + ramp - t) / ramp);
  return height;
}

double Envelope::operator()(double t) const {
  double s = 0.0;
  for (const auto& p : pulses) s += p(t);
  for (const auto& p : plateaus) s += p(t);
  return s;
}

bool Envelope::empty() const {
  for (const auto& p : pulses)
    if (p.peak != 0.0) return false;
  for (const auto& p : plateaus)
    if (p.height != 0.0) return false;
  return true;
}

double Envelope::max_abs() const {
  double s = 0.0;
  for (const auto& p : pulses) s += std::abs(p.peak);
  for (const auto& p : plateaus) s += std::abs(p.height);
  return s;
}

double Envelope::bound_on(double a, double b) const {
  double s = 0.0;
  for (const auto& p : pulses) s += std::abs(p(std::clamp(p.center, a, b)));
  // Plateaus are monotone on their ramps; the point closest to the top wins.
  for (const auto& p : plateaus) {
    const double t = b < p.begin ? b : a > p.end ? a : std::clamp(p.begin, a, b);
    s += std::abs(p(t));
  }
  return s;
}

double Envelope::tail(double t1, double t2) const {
  double s = 0.0;
  for (const auto& p : pulses) {
    if (p.peak == 0.0) continue;
    if (!(p.width > 0.0)) return INFINITY;
    s += (p.center > t1 && p.center < t2) ? std::max(std::abs(p(t1)), std::abs(p(t2)))
                                           : std::abs(p.peak);
  }
  for (const auto& p : plateaus) {
    if (p.height == 0.0) continue;
    const bool inside = p.begin - p.ramp >= t1 && p.end + p.ramp <= t2 && p.ramp > 0.0;
    if (!inside) s += std::abs(p.height);
  }
  return s;
}

void PotentialSpec::validate(const Tolerances& tol) const {
  if (!(t2 > t1)) throw InvalidArgument("potential: window must have t2 > t1");
  for (const auto* e : {&g, &j}) {
    const double tl = e->tail(t1, t2);
    if (tl > tol.envelope_tail) {
      std::ostringstream os;
      os << "potential: envelope " << (e == &g ? "g" : "j") << " does not vanish at the window edges ("
         << tl << " > " << tol.envelope_tail << ")";
      throw SupportError(os.str());
    }
  }
}

RVector PotentialSpec::diagonal(double t, const PhaseSpaceGrid& grid) const {
  const double gt = g(t) / 24.0;
  const double jt = j(t);
  RVector v(grid.points());
  for (int i = 0; i < grid.points(); ++i) {
    const double q = grid.q(i);
    v(i) = gt * q * q * q * q + jt * q;
  }
  return v;
}

Symbol PotentialSpec::symbol(double t, const PhaseSpaceGrid& grid) const {
  const RVector d = diagonal(t, grid);
  Symbol s = Symbol::sample(grid, [&](double, double) { return 0.0; });
  for (int k = 0; k < grid.points(); ++k) s.values().col(k) = d.cast<cplx>();
  if (general) s += general(t, grid);
  return s;
}

// ---- the two routes -------------------------------------------------------------

OperatorMatrix evolve_hilbert(const FreeEvolution& free, const PotentialSpec& v, int steps,
                              const Tolerances& tol) {
  check_steps(steps);
  v.validate(tol);
  const auto& grid = free.grid();
  const double hbar = grid.hbar();
  const double dt = v.duration() / steps;
  check_resolution(v, grid, steps, tol);

  const CMatrix half = free.propagator(0.5 * dt).entries();
  const CMatrix full = free.propagator(dt).entries();
  CMatrix u = half;
  for (int k = 0; k < steps; ++k) {
    const double t = v.t1 + (k + 0.5) * dt;
    if (v.general) {
      OperatorMatrix kick = weyl_quantize(v.general(t, grid));
      if (kick.hermiticity_defect() > tol.hermitian)
        throw InvalidArgument("evolve_hilbert: assembled Hamiltonian is not Hermitian");
      CMatrix k = kick.entries();
      k.diagonal() += v.diagonal(t, grid).cast<cplx>();
      u = hermitian_exponential(k, dt, hbar) * u;
    } else {
      const RVector d = v.diagonal(t, grid);
      for (int i = 0; i < grid.points(); ++i) u.row(i) *= std::polar(1.0, -d(i) * dt / hbar);
    }
    u = (k + 1 < steps ? full : half) * u;
  }
  return OperatorMatrix(grid, std::move(u));
}

Symbol scattering_operator_hilbert(const FreeEvolution& free, const PotentialSpec& v, int steps,
                                   const Tolerances& tol) {
  // No interaction: S = 1 exactly, rather than U0(T)^dagger U0(T) up to roundoff.
  if (v.is_zero()) {
    check_steps(steps);
    return Symbol::constant(free.grid(), 1.0);
  }
  const OperatorMatrix u = evolve_hilbert(free, v, steps, tol);
  const OperatorMatrix u0 = free.propagator(v.duration());
  return weyl_symbol_of(u0.adjoint() * u);
}

Symbol scattering_operator_star(const FreeEvolution& free, const PotentialSpec& v, int steps,
                                const Tolerances& tol, StarRouteReport* report) {
  check_steps(steps);
  const auto& grid = free.grid();
  Symbol s = Symbol::constant(grid, 1.0);
  v.validate(tol);
  check_resolution(v, grid, steps, tol);
  const double dt = v.duration() / steps;
  const cplx coupling = 1.0 / cplx(0.0, grid.hbar());

  auto interaction = [&](double t) {
    const double tau = t - v.t1;
    Symbol vi = weyl_symbol_of(free.heisenberg_diagonal(v.diagonal(t, grid).cast<cplx>(), tau));
    if (v.general) vi += free.transport(v.general(t, grid), tau);
    return vi;
  };
  auto rhs = [&](const Symbol& vi, const Symbol& x) {
    return coupling * star(vi, x, StarMethod::spectral(), BandLimitPolicy::Ignore, tol);
  };

  double excess = 0.0;
  Symbol v0 = interaction(v.t1);
  for (int k = 0; k < steps; ++k) {
    const double t = v.t1 + k * dt;
    const Symbol vm = interaction(t + 0.5 * dt);
    Symbol v1 = interaction(t + dt);
    const Symbol k1 = rhs(v0, s);
    const Symbol k2 = rhs(vm, s + (0.5 * dt) * k1);
    const Symbol k3 = rhs(vm, s + (0.5 * dt) * k2);
    const Symbol k4 = rhs(v1, s + dt * k3);
    s += (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    v0 = std::move(v1);
    if (report) excess = std::max(excess, band_limit_excess(s));
  }
  if (report) {
    report->max_band_excess = excess;
    report->unitarity_defect = unitarity_defect(s, BandLimitPolicy::Ignore, tol);
  }
  return s;
}

// ---- weak comparisons --------------------------------------------------------------

cplx coherent_expectation(const Symbol& a, double q0, double p0) {
  return expectation(a, WaveFunction::gaussian(a.grid(), q0, p0));
}

double weak_distance(const Symbol& a, const Symbol& b, const std::vector<Eigen::Vector2d>& centers) {
  require_same_grid(a.grid(), b.grid(), "weak_distance");
  const Symbol d = a - b;
  double worst = 0.0;
  for (const auto& z : centers) worst = std::max(worst, std::abs(coherent_expectation(d, z(0), z(1))));
  return worst;
}

std::vector<Eigen::Vector2d> probe_centers(double r, int k) {
  std::vector<Eigen::Vector2d> out;
  for (int a = -k; a <= k; ++a)
    for (int b = -k; b <= k; ++b)
      out.emplace_back(k ? r * a / k : 0.0, k ? r * b / k : 0.0);
  return out;
}

}  // namespace wmlab
