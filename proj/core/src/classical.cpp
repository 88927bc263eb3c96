#include "wmlab/classical.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <numbers>
#include <sstream>

#include "wmlab/errors.hpp"
#include "wmlab/parallel.hpp"

namespace wmlab {

namespace {

using Vec2 = Eigen::Vector2d;

Vec2 duffing_rhs(const DuffingParams& pr, double t, const Vec2& z) {
  const double q = z(0);
  return {z(1), -pr.m * pr.m * q - pr.g(t) * q * q * q / 6.0 - pr.j(t)};
}

void check_steps(const DuffingParams& pr, int steps) {
  if (steps < 1) throw InvalidArgument("duffing: steps must be positive");
  const double dt = (pr.t2 - pr.t1) / steps;
  if (!(dt * pr.m < 0.1)) {
    std::ostringstream os;
    os << "duffing: dt * m = " << dt * pr.m << " does not resolve the oscillation (need < 0.1)";
    throw StepResolutionError(os.str());
  }
}

// Integrates and reports each sample through `visit`.
template <class Visit>
Vec2 integrate(const DuffingParams& pr, Vec2 z, int steps, Visit&& visit) {
  const double dt = (pr.t2 - pr.t1) / steps;
  visit(0, pr.t1, z);
  for (int n = 0; n < steps; ++n) {
    const double t = pr.t1 + n * dt;
    const Vec2 k1 = duffing_rhs(pr, t, z);
    const Vec2 k2 = duffing_rhs(pr, t + 0.5 * dt, z + 0.5 * dt * k1);
    const Vec2 k3 = duffing_rhs(pr, t + 0.5 * dt, z + 0.5 * dt * k2);
    const Vec2 k4 = duffing_rhs(pr, t + dt, z + dt * k3);
    z += dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    visit(n + 1, pr.t1 + (n + 1) * dt, z);
  }
  return z;
}

// Simpson for an odd number of uniform samples, trapezoid otherwise.
template <class F>
double quadrature(const Trajectory& tr, F&& f) {
  const std::size_t n = tr.size();
  if (n < 2) return 0.0;
  const double h = tr.dt();
  double s = 0.0;
  if (n % 2 == 1 && n >= 3) {
    for (std::size_t i = 0; i < n; ++i) {
      const double w = (i == 0 || i == n - 1) ? 1.0 : (i % 2 == 1 ? 4.0 : 2.0);
      s += w * f(i);
    }
    return s * h / 3.0;
  }
  for (std::size_t i = 0; i < n; ++i) s += ((i == 0 || i == n - 1) ? 0.5 : 1.0) * f(i);
  return s * h;
}

void check_window(const Trajectory& tr, const DuffingParams& pr) {
  const double scale = std::max({1.0, std::abs(pr.t1), std::abs(pr.t2)});
  if (tr.size() < 2 || tr.q.size() != tr.size() || tr.p.size() != tr.size())
    throw InvalidArgument("trajectory: inconsistent sampling");
  if (std::abs(tr.t.front() - pr.t1) > 1e-12 * scale || std::abs(tr.t.back() - pr.t2) > 1e-9 * scale)
    throw InvalidArgument("trajectory: does not span the parameter window");
}

// Gauss-Hermite nodes and weights for weight exp(-x^2) (Golub-Welsch).
std::pair<RVector, RVector> gauss_hermite(int n) {
  Eigen::MatrixXd jm = Eigen::MatrixXd::Zero(n, n);
  for (int k = 1; k < n; ++k) jm(k, k - 1) = jm(k - 1, k) = std::sqrt(k / 2.0);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(jm);
  RVector w = es.eigenvectors().row(0).transpose().array().square() * std::sqrt(std::numbers::pi);
  return {es.eigenvalues(), w};
}

double max_potential(const DuffingParams& pr, double half_extent) {
  const double l = half_extent;
  return pr.g.max_abs() * l * l * l * l / 24.0 + pr.j.max_abs() * l;
}

std::vector<double> diff(const std::vector<double>& s, const std::vector<double>& f) {
  const std::size_t n = f.size();
  const double h = s[1] - s[0];
  std::vector<double> d(n);
  d[0] = (-3.0 * f[0] + 4.0 * f[1] - f[2]) / (2.0 * h);
  d[n - 1] = (3.0 * f[n - 1] - 4.0 * f[n - 2] + f[n - 3]) / (2.0 * h);
  for (std::size_t i = 1; i + 1 < n; ++i) d[i] = (f[i + 1] - f[i - 1]) / (2.0 * h);
  return d;
}

void check_field(const SurfaceParameterization& sf, const SurfaceField& f) {
  sf.validate();
  if (f.phi.size() != sf.size() || f.phi0.size() != sf.size() || f.phi1.size() != sf.size())
    throw InvalidArgument("surface field: sample count differs from the surface");
}

}  // namespace

void DuffingParams::validate(const Tolerances& tol) const {
  if (!(m > 0.0)) throw InvalidArgument("duffing: m must be positive");
  potential().validate(tol);
}

PotentialSpec DuffingParams::potential() const {
  PotentialSpec v;
  v.t1 = t1;
  v.t2 = t2;
  v.g = g;
  v.j = j;
  return v;
}

Trajectory solve_duffing(const DuffingParams& params, const Eigen::Vector2d& z0, int steps) {
  params.validate();
  check_steps(params, steps);
  Trajectory tr;
  tr.t.resize(steps + 1);
  tr.q.resize(steps + 1);
  tr.p.resize(steps + 1);
  integrate(params, z0, steps, [&](int n, double t, const Vec2& z) {
    tr.t[n] = t;
    tr.q[n] = z(0);
    tr.p[n] = z(1);
  });
  return tr;
}

Eigen::Vector2d classical_scattering_map(const DuffingParams& params, const Eigen::Vector2d& z0, int steps) {
  params.validate();
  check_steps(params, steps);
  const Vec2 end = integrate(params, z0, steps, [](int, double, const Vec2&) {});
  return free_flow(QuadraticHamiltonian::oscillator(params.m), -(params.t2 - params.t1))(end);
}

Eigen::Matrix2d scattering_jacobian(const DuffingParams& params, const Eigen::Vector2d& z0, int steps, double h) {
  Eigen::Matrix2d jac;
  for (int c = 0; c < 2; ++c) {
    Vec2 e = Vec2::Zero();
    e(c) = h;
    jac.col(c) = (classical_scattering_map(params, z0 + e, steps) - classical_scattering_map(params, z0 - e, steps)) /
                 (2.0 * h);
  }
  return jac;
}

double evaluate_action(const Trajectory& tr, const DuffingParams& pr) {
  check_window(tr, pr);
  const double m2 = pr.m * pr.m;
  return quadrature(tr, [&](std::size_t i) {
    const double q = tr.q[i], p = tr.p[i], t = tr.t[i];
    return 0.5 * p * p - 0.5 * m2 * q * q - pr.g(t) * q * q * q * q / 24.0 - pr.j(t) * q;
  });
}

WorkEnergy work_energy(const Trajectory& tr, const DuffingParams& pr) {
  check_window(tr, pr);
  const auto energy = [&](std::size_t i) { return 0.5 * (tr.p[i] * tr.p[i] + pr.m * pr.m * tr.q[i] * tr.q[i]); };
  WorkEnergy w;
  w.energy_change = energy(tr.size() - 1) - energy(0);
  w.work = -quadrature(tr, [&](std::size_t i) {
    const double q = tr.q[i];
    return (pr.g(tr.t[i]) * q * q * q / 6.0 + pr.j(tr.t[i])) * tr.p[i];
  });
  w.residual = std::abs(w.energy_change - w.work);
  return w;
}

std::string trajectory_csv(const Trajectory& tr) {
  std::ostringstream os;
  os << std::setprecision(17) << "t,q,p\n";
  for (std::size_t i = 0; i < tr.size(); ++i) os << tr.t[i] << ',' << tr.q[i] << ',' << tr.p[i] << '\n';
  return os.str();
}

double loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2) throw InvalidArgument("slope: need two or more matching points");
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const double n = static_cast<double>(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!(x[i] > 0.0) || !(y[i] > 0.0)) throw InvalidArgument("slope: values must be positive");
    const double lx = std::log(x[i]), ly = std::log(y[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

ClassicalLimitReport classical_limit(const DuffingParams& params, const ClassicalLimitOptions& opt,
                                     const Tolerances& tol) {
  params.validate(tol);
  check_steps(params, opt.classical_steps);
  if (opt.hbars.empty() || opt.points < 8 || opt.quadrature_nodes < 2)
    throw InvalidArgument("classical limit: invalid options");
  const auto centers = probe_centers(opt.probe_radius, opt.probe_points);
  const auto [nodes, weights] = gauss_hermite(opt.quadrature_nodes);
  const double duration = params.t2 - params.t1;

  ClassicalLimitReport rep;
  std::vector<double> hs, eq, ep;
  for (const double hbar : opt.hbars) {
    if (!(hbar > 0.0)) throw InvalidArgument("classical limit: hbar must be positive");
    ClassicalLimitRow row;
    row.hbar = hbar;
    // Square box: momentum extent N pi hbar / (2 L) equal to L.
    row.half_extent = std::sqrt(std::numbers::pi * hbar * opt.points / 2.0);
    const PhaseSpaceGrid grid = make_grid(row.half_extent, opt.points, hbar);
    const FreeEvolution free(grid, QuadraticHamiltonian::oscillator(params.m));
    const double needed = duration * max_potential(params, row.half_extent) / (hbar * tol.step_resolution);
    row.quantum_steps = std::max(opt.quantum_steps, static_cast<int>(std::ceil(needed)) + 1);
    const OperatorMatrix u =
        free.propagator(duration).adjoint() * evolve_hilbert(free, params.potential(), row.quantum_steps, tol);
    const CMatrix q_op = OperatorMatrix::position(grid).entries();
    const CMatrix p_op = OperatorMatrix::momentum(grid).entries();

    std::vector<double> dq(centers.size()), dp(centers.size());
    parallel_for(centers.size(), [&](std::size_t c) {
      const Vec2 z = centers[c];
      const CVector psi = u.entries() * WaveFunction::gaussian(grid, z(0), z(1)).amplitudes();
      const double norm = psi.squaredNorm();
      const double quantum_q = (psi.adjoint() * q_op * psi)(0).real() / norm;
      const double quantum_p = (psi.adjoint() * p_op * psi)(0).real() / norm;
      // Wigner function of the packet: exp(-|w - z|^2 / hbar) / (pi hbar).
      Vec2 smooth = Vec2::Zero();
      const double s = std::sqrt(hbar);
      for (int a = 0; a < nodes.size(); ++a)
        for (int b = 0; b < nodes.size(); ++b) {
          const Vec2 w{z(0) + s * nodes(a), z(1) + s * nodes(b)};
          smooth += weights(a) * weights(b) * classical_scattering_map(params, w, opt.classical_steps);
        }
      smooth /= std::numbers::pi;
      dq[c] = std::abs(quantum_q - smooth(0));
      dp[c] = std::abs(quantum_p - smooth(1));
    });
    row.error_q = *std::max_element(dq.begin(), dq.end());
    row.error_p = *std::max_element(dp.begin(), dp.end());
    hs.push_back(hbar);
    eq.push_back(row.error_q);
    ep.push_back(row.error_p);
    rep.rows.push_back(row);
  }
  if (hs.size() >= 2) {
    rep.slope_q = loglog_slope(hs, eq);
    rep.slope_p = loglog_slope(hs, ep);
  }
  return rep;
}

void LagrangianSpec::validate() const {
  if (!(m > 0.0)) throw InvalidArgument("lagrangian: m must be positive");
}

double LagrangianSpec::lagrangian(double x0, double phi, double phi0, double phi1) const {
  return 0.5 * (phi0 * phi0 - phi1 * phi1 - m * m * phi * phi) - g(x0) * phi * phi * phi * phi / 24.0;
}

void LatticeField::validate() const {
  if (!(a > 0.0)) throw InvalidArgument("lattice: spacing must be positive");
  if (phi.size() != pi.size() || phi.size() < 3) throw InvalidArgument("lattice: phi and pi must match, >= 3 sites");
  for (std::size_t i = 0; i < phi.size(); ++i)
    if (!std::isfinite(phi[i]) || !std::isfinite(pi[i])) throw InvalidArgument("lattice: non-finite field value");
}

double lattice_energy(const LatticeField& f, const LagrangianSpec& spec) {
  f.validate();
  spec.validate();
  const std::size_t n = f.sites();
  const double gt = spec.g(f.t);
  double e = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double d = (f.phi[(i + 1) % n] - f.phi[i]) / f.a;
    const double ph = f.phi[i];
    e += 0.5 * f.pi[i] * f.pi[i] + 0.5 * d * d + 0.5 * spec.m * spec.m * ph * ph + gt * ph * ph * ph * ph / 24.0;
  }
  return e * f.a;
}

LatticeField solve_klein_gordon(const LatticeField& initial, const LagrangianSpec& spec, double duration, int steps) {
  initial.validate();
  spec.validate();
  if (steps < 1 || !(duration >= 0.0)) throw InvalidArgument("klein-gordon: need steps >= 1 and duration >= 0");
  const double dt = duration / steps;
  if (!(dt < initial.a)) {
    std::ostringstream os;
    os << "klein-gordon: CFL violated, dt = " << dt << " >= a = " << initial.a;
    throw StepResolutionError(os.str());
  }
  LatticeField f = initial;
  const std::size_t n = f.sites();
  const double inv_a2 = 1.0 / (f.a * f.a), m2 = spec.m * spec.m;
  std::vector<double> force(n);
  const auto compute = [&](double t) {
    const double gt = spec.g(t);
    for (std::size_t i = 0; i < n; ++i) {
      const double ph = f.phi[i];
      const double lap = (f.phi[(i + 1) % n] - 2.0 * ph + f.phi[(i + n - 1) % n]) * inv_a2;
      force[i] = lap - m2 * ph - gt * ph * ph * ph / 6.0;
    }
  };
  compute(f.t);
  const double t0 = f.t;
  for (int s = 0; s < steps; ++s) {
    for (std::size_t i = 0; i < n; ++i) {
      f.pi[i] += 0.5 * dt * force[i];
      f.phi[i] += dt * f.pi[i];
    }
    compute(t0 + (s + 1) * dt);
    for (std::size_t i = 0; i < n; ++i) f.pi[i] += 0.5 * dt * force[i];
  }
  f.t = t0 + duration;
  return f;
}

double lattice_frequency(double k, double a, double m) {
  const double kh = 2.0 / a * std::sin(k * a / 2.0);
  return std::sqrt(m * m + kh * kh);
}

std::string lattice_csv(const LatticeField& f) {
  std::ostringstream os;
  os << std::setprecision(17) << "x,phi,pi\n";
  for (std::size_t i = 0; i < f.sites(); ++i) os << f.x(i) << ',' << f.phi[i] << ',' << f.pi[i] << '\n';
  return os.str();
}

SurfaceParameterization SurfaceParameterization::flat(const std::vector<double>& s, double time) {
  return {s, std::vector<double>(s.size(), time), s};
}

SurfaceParameterization SurfaceParameterization::tilted(const std::vector<double>& s, double slope, double offset) {
  SurfaceParameterization sf{s, s, s};
  for (auto& x : sf.x0) x = offset + slope * x;
  return sf;
}

std::vector<double> SurfaceParameterization::dx0() const { return diff(s, x0); }
std::vector<double> SurfaceParameterization::dx1() const { return diff(s, x1); }

void SurfaceParameterization::validate() const {
  if (s.size() < 3 || x0.size() != s.size() || x1.size() != s.size())
    throw InvalidArgument("surface: need matching samples, at least three");
  const double h = s[1] - s[0];
  if (!(h > 0.0)) throw InvalidArgument("surface: parameter must increase");
  for (std::size_t i = 1; i < s.size(); ++i)
    if (std::abs((s[i] - s[i - 1]) - h) > 1e-9 * std::abs(h)) throw InvalidArgument("surface: parameter grid must be uniform");
  const auto d0 = dx0(), d1 = dx1();
  for (std::size_t i = 0; i < s.size(); ++i)
    if (!(std::abs(d0[i]) < std::abs(d1[i]))) {
      std::ostringstream os;
      os << "surface: not spacelike at s = " << s[i];
      throw InvalidArgument(os.str());
    }
}

std::vector<double> conjugate_momentum(const SurfaceParameterization& sf, const SurfaceField& f,
                                       const LagrangianSpec& spec) {
  spec.validate();
  check_field(sf, f);
  // Jacobians with x^l removed: J0 = dx1/ds, J1 = dx0/ds.
  const auto j0 = sf.dx1(), j1 = sf.dx0();
  std::vector<double> pi(sf.size());
  for (std::size_t i = 0; i < pi.size(); ++i) pi[i] = spec.d_phi0(f.phi0[i]) * j0[i] - spec.d_phi1(f.phi1[i]) * j1[i];
  return pi;
}

HamiltonianDensities covariant_hamiltonian_densities(const SurfaceParameterization& sf, const SurfaceField& f,
                                                     const std::vector<double>& pi, const LagrangianSpec& spec,
                                                     const Tolerances& tol) {
  const auto expected = conjugate_momentum(sf, f, spec);
  if (pi.size() != expected.size()) throw InvalidArgument("hamiltonian densities: pi sample count differs");
  for (std::size_t i = 0; i < pi.size(); ++i)
    if (std::abs(pi[i] - expected[i]) > tol.momentum_consistency * std::max(1.0, std::abs(expected[i]))) {
      std::ostringstream os;
      os << "hamiltonian densities: pi inconsistent with the surface at s = " << sf.s[i];
      throw InvalidArgument(os.str());
    }
  const auto j0 = sf.dx1(), j1 = sf.dx0();
  HamiltonianDensities h{std::vector<double>(pi.size()), std::vector<double>(pi.size())};
  for (std::size_t i = 0; i < pi.size(); ++i) {
    const double p0 = f.phi0[i], p1 = f.phi1[i];
    const double l = spec.lagrangian(sf.x0[i], f.phi[i], p0, p1);
    const double l0 = spec.d_phi0(p0), l1 = spec.d_phi1(p1);
    h.h0[i] = -l1 * p0 * j1[i] + (l0 * p0 - l) * j0[i];
    h.h1[i] = l0 * p1 * j0[i] - (l1 * p1 - l) * j1[i];
  }
  return h;
}

LatticeFunctional LatticeFunctional::field_at(std::size_t sites, double a, std::size_t i) {
  LatticeFunctional f{std::vector<double>(sites, 0.0), std::vector<double>(sites, 0.0)};
  f.d_phi.at(i) = 1.0 / a;
  return f;
}

LatticeFunctional LatticeFunctional::momentum_at(std::size_t sites, double a, std::size_t i) {
  LatticeFunctional f{std::vector<double>(sites, 0.0), std::vector<double>(sites, 0.0)};
  f.d_pi.at(i) = 1.0 / a;
  return f;
}

LatticeFunctional LatticeFunctional::energy(const LatticeField& f, const LagrangianSpec& spec) {
  f.validate();
  spec.validate();
  const std::size_t n = f.sites();
  const double gt = spec.g(f.t);
  LatticeFunctional d{std::vector<double>(n), f.pi};
  for (std::size_t i = 0; i < n; ++i) {
    const double ph = f.phi[i];
    const double lap = (f.phi[(i + 1) % n] - 2.0 * ph + f.phi[(i + n - 1) % n]) / (f.a * f.a);
    d.d_phi[i] = -lap + spec.m * spec.m * ph + gt * ph * ph * ph / 6.0;
  }
  return d;
}

double functional_poisson_bracket(const LatticeFunctional& f1, const LatticeFunctional& f2, double a) {
  const std::size_t n = f1.d_phi.size();
  if (f1.d_pi.size() != n || f2.d_phi.size() != n || f2.d_pi.size() != n)
    throw InvalidArgument("poisson bracket: functionals live on different lattices");
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) s += f1.d_phi[i] * f2.d_pi[i] - f1.d_pi[i] * f2.d_phi[i];
  return s * a;
}

}  // namespace wmlab
