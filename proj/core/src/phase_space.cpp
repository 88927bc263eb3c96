#include "wmlab/phase_space.hpp"

#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>
#include <string>

#include "fft.hpp"
#include "wmlab/errors.hpp"

namespace wmlab {

using std::numbers::pi;

// ---- grid ----------------------------------------------------------------

PhaseSpaceGrid::PhaseSpaceGrid(double half_extent, int points, double hbar)
    : L_(half_extent), n_(points), hbar_(hbar) {
  if (points < 8) throw InvalidArgument("grid: N must be at least 8, got " + std::to_string(points));
  if (points % 2 != 0) throw InvalidArgument("grid: N must be even, got " + std::to_string(points));
  if (!(half_extent > 0.0) || !std::isfinite(half_extent))
    throw InvalidArgument("grid: half extent L must be positive");
  if (!(hbar > 0.0) || !std::isfinite(hbar)) throw InvalidArgument("grid: hbar must be positive");
}

double PhaseSpaceGrid::dp() const { return pi * hbar_ / L_; }

RVector PhaseSpaceGrid::q_values() const {
  RVector v(n_);
  for (int j = 0; j < n_; ++j) v(j) = q(j);
  return v;
}

RVector PhaseSpaceGrid::p_values() const {
  RVector v(n_);
  for (int k = 0; k < n_; ++k) v(k) = p(k);
  return v;
}

PhaseSpaceGrid make_grid(double half_extent, int points, double hbar) {
  return PhaseSpaceGrid(half_extent, points, hbar);
}

void require_same_grid(const PhaseSpaceGrid& a, const PhaseSpaceGrid& b, const char* what) {
  if (!(a == b)) throw GridMismatch(std::string(what) + ": operands live on different grids");
}

// ---- Symbol --------------------------------------------------------------

Symbol::Symbol(PhaseSpaceGrid grid, CMatrix values) : grid_(grid), values_(std::move(values)) {
  if (values_.rows() != grid_.points() || values_.cols() != grid_.points())
    throw InvalidArgument("symbol: value array does not match the grid shape");
}

Symbol Symbol::constant(const PhaseSpaceGrid& grid, cplx c) {
  return Symbol(grid, CMatrix::Constant(grid.points(), grid.points(), c));
}

Symbol Symbol::position(const PhaseSpaceGrid& grid) {
  return sample(grid, [](double q, double) { return q; });
}

Symbol Symbol::momentum(const PhaseSpaceGrid& grid) {
  return sample(grid, [](double, double p) { return p; });
}

Symbol Symbol::conj() const { return Symbol(grid_, values_.conjugate()); }

double Symbol::max_abs() const { return values_.size() ? values_.cwiseAbs().maxCoeff() : 0.0; }

double Symbol::max_imag() const {
  return values_.size() ? values_.imag().cwiseAbs().maxCoeff() : 0.0;
}

Symbol& Symbol::operator+=(const Symbol& other) {
  require_same_grid(grid_, other.grid_, "symbol +");
  values_ += other.values_;
  return *this;
}

Symbol& Symbol::operator-=(const Symbol& other) {
  require_same_grid(grid_, other.grid_, "symbol -");
  values_ -= other.values_;
  return *this;
}

Symbol& Symbol::operator*=(cplx c) {
  values_ *= c;
  return *this;
}

Symbol operator+(Symbol a, const Symbol& b) { return a += b; }
Symbol operator-(Symbol a, const Symbol& b) { return a -= b; }
Symbol operator*(cplx c, Symbol a) { return a *= c; }
Symbol operator*(Symbol a, cplx c) { return a *= c; }

Symbol pointwise(const Symbol& a, const Symbol& b) {
  require_same_grid(a.grid(), b.grid(), "pointwise product");
  return Symbol(a.grid(), a.values().cwiseProduct(b.values()));
}

double sup_norm(const Symbol& a) { return a.max_abs(); }

double sup_norm_in(const Symbol& a, double qmax, double pmax) {
  const auto& g = a.grid();
  double m = 0.0;
  for (int k = 0; k < g.points(); ++k) {
    if (std::abs(g.p(k)) > pmax) continue;
    for (int j = 0; j < g.points(); ++j)
      if (std::abs(g.q(j)) <= qmax) m = std::max(m, std::abs(a(j, k)));
  }
  return m;
}

// ---- OperatorMatrix ------------------------------------------------------

OperatorMatrix::OperatorMatrix(PhaseSpaceGrid grid, CMatrix entries)
    : grid_(grid), m_(std::move(entries)) {
  if (m_.rows() != grid_.points() || m_.cols() != grid_.points())
    throw InvalidArgument("operator: matrix does not match the grid shape");
}

OperatorMatrix OperatorMatrix::identity(const PhaseSpaceGrid& grid) {
  return OperatorMatrix(grid, CMatrix::Identity(grid.points(), grid.points()));
}

OperatorMatrix OperatorMatrix::position(const PhaseSpaceGrid& grid) {
  return OperatorMatrix(grid, grid.q_values().cast<cplx>().asDiagonal());
}

OperatorMatrix OperatorMatrix::momentum(const PhaseSpaceGrid& grid) {
  const int n = grid.points();
  CMatrix f(n, n);
  for (int k = 0; k < n; ++k)
    for (int j = 0; j < n; ++j)
      f(j, k) = std::polar(1.0, grid.p(k) * grid.q(j) / grid.hbar());
  CMatrix m = f * grid.p_values().cast<cplx>().asDiagonal() * f.adjoint() / double(n);
  return OperatorMatrix(grid, std::move(m));
}

OperatorMatrix OperatorMatrix::adjoint() const { return OperatorMatrix(grid_, m_.adjoint()); }

double OperatorMatrix::hermiticity_defect() const {
  return (m_ - m_.adjoint()).cwiseAbs().maxCoeff();
}

double OperatorMatrix::unitarity_defect() const {
  const int n = grid_.points();
  return (m_ * m_.adjoint() - CMatrix::Identity(n, n)).cwiseAbs().maxCoeff();
}

OperatorMatrix operator*(const OperatorMatrix& a, const OperatorMatrix& b) {
  require_same_grid(a.grid(), b.grid(), "operator product");
  return OperatorMatrix(a.grid(), a.entries() * b.entries());
}

OperatorMatrix operator+(const OperatorMatrix& a, const OperatorMatrix& b) {
  require_same_grid(a.grid(), b.grid(), "operator sum");
  return OperatorMatrix(a.grid(), a.entries() + b.entries());
}

OperatorMatrix operator-(const OperatorMatrix& a, const OperatorMatrix& b) {
  require_same_grid(a.grid(), b.grid(), "operator difference");
  return OperatorMatrix(a.grid(), a.entries() - b.entries());
}

OperatorMatrix operator*(cplx c, const OperatorMatrix& a) {
  return OperatorMatrix(a.grid(), c * a.entries());
}

// ---- WaveFunction --------------------------------------------------------

WaveFunction::WaveFunction(PhaseSpaceGrid grid, CVector amplitudes)
    : grid_(grid), psi_(std::move(amplitudes)) {
  if (psi_.size() != grid_.points())
    throw InvalidArgument("wavefunction: length does not match the grid");
}

WaveFunction WaveFunction::gaussian(const PhaseSpaceGrid& grid, double q0, double p0, double width) {
  const double w = width > 0.0 ? width : std::sqrt(grid.hbar());
  CVector psi(grid.points());
  for (int j = 0; j < grid.points(); ++j) {
    const double x = grid.q(j) - q0;
    psi(j) = std::exp(-x * x / (2 * w * w)) * std::polar(1.0, p0 * x / grid.hbar());
  }
  return WaveFunction(grid, std::move(psi)).normalized();
}

double WaveFunction::norm_squared() const { return psi_.squaredNorm() * grid_.dq(); }

WaveFunction WaveFunction::normalized() const {
  const double s = norm_squared();
  if (!(s > 0.0)) throw InvalidArgument("wavefunction: cannot normalize the zero vector");
  return WaveFunction(grid_, psi_ / std::sqrt(s));
}

bool WaveFunction::is_normalized(double tol) const { return std::abs(norm_squared() - 1.0) < tol; }

WaveFunction apply(const OperatorMatrix& m, const WaveFunction& psi) {
  require_same_grid(m.grid(), psi.grid(), "apply");
  return WaveFunction(psi.grid(), m.entries() * psi.amplitudes());
}

// ---- discrete Weyl transform --------------------------------------------
//
// A(q, p) = sum a[mu, nu] exp(i alpha_mu q) exp(i beta_nu p) with
// alpha = pi mu / L and beta = nu dq / hbar, mu, nu in [-N/2, N/2).
// The operator of a plane wave is phi(mu, nu) C^mu S^nu, C the clock
// diag(exp(i alpha q_j)) and (S^nu psi)_j = psi_{j+nu}. The phase
// exp(i pi mu nu / N) places the p-shift at the midpoint; the sign flip on
// odd negative partners of the Nyquist row and column keeps
// "real symbol <=> Hermitian matrix" exact there as well.

namespace {

int signed_index(int m, int n) { return m < n / 2 ? m : m - n; }

cplx ipow(cplx x, int e) {
  cplx r = 1.0;
  for (int i = 0; i < e; ++i) r *= x;
  return r;
}

struct WeylTables {
  CMatrix to_operator;  // (-1)^nu phi / N^2
  CMatrix to_symbol;    // (-1)^nu / (N phi)
};

const WeylTables& tables(int n) {
  static std::mutex mu;
  static std::map<int, std::shared_ptr<const WeylTables>> cache;
  std::lock_guard lock(mu);
  auto& slot = cache[n];
  if (!slot) {
    auto t = std::make_shared<WeylTables>();
    t->to_operator.resize(n, n);
    t->to_symbol.resize(n, n);
    for (int b = 0; b < n; ++b) {
      const int nu = signed_index(b, n);
      for (int a = 0; a < n; ++a) {
        const int mu = signed_index(a, n);
        double sigma = 1.0;
        if (mu == -n / 2 && nu < 0 && (nu % 2 != 0)) sigma = -sigma;
        if (nu == -n / 2 && mu < 0 && (mu % 2 != 0)) sigma = -sigma;
        const cplx phi = sigma * std::polar(1.0, pi * mu * nu / n);
        const double parity = (nu % 2 == 0) ? 1.0 : -1.0;
        t->to_operator(a, b) = parity * phi / (double(n) * n);
        t->to_symbol(a, b) = parity / (double(n) * phi);
      }
    }
    slot = std::move(t);
  }
  return *slot;
}

}  // namespace

OperatorMatrix weyl_quantize(const Symbol& a) {
  const int n = a.grid().points();
  CMatrix d = a.values();
  detail::fft2(d.data(), n, -1);
  d = d.cwiseProduct(tables(n).to_operator);
  detail::fft_columns(d.data(), n, +1);
  CMatrix m(n, n);
  for (int c = 0; c < n; ++c)
    for (int j = 0; j < n; ++j) m(j, (j + c) % n) = d(j, c);
  return OperatorMatrix(a.grid(), std::move(m));
}

Symbol weyl_symbol_of(const OperatorMatrix& op) {
  const int n = op.grid().points();
  const CMatrix& m = op.entries();
  CMatrix d(n, n);
  for (int c = 0; c < n; ++c)
    for (int j = 0; j < n; ++j) d(j, c) = m(j, (j + c) % n);
  detail::fft_columns(d.data(), n, -1);
  d = d.cwiseProduct(tables(n).to_symbol);
  detail::fft2(d.data(), n, +1);
  return Symbol(op.grid(), std::move(d));
}

Symbol weyl_symbol_of(const OperatorMatrix& m, const PhaseSpaceGrid& expected) {
  require_same_grid(m.grid(), expected, "weyl_symbol_of");
  return weyl_symbol_of(m);
}

Symbol wigner_of_state(const WaveFunction& psi, bool strict, const Tolerances& tol) {
  if (strict && !psi.is_normalized(tol.normalization))
    throw InvalidArgument("wigner_of_state: state is not normalized");
  const auto& g = psi.grid();
  const CVector& v = psi.amplitudes();
  OperatorMatrix rho(g, v * v.adjoint() * g.dq());
  Symbol w = weyl_symbol_of(rho);
  w *= cplx(1.0 / (2 * pi * g.hbar()));
  return w;
}

cplx trace_of(const Symbol& a) {
  const auto& g = a.grid();
  return a.values().sum() * g.cell() / (2 * pi * g.hbar());
}

cplx trace_pairing(const Symbol& a, const Symbol& b) {
  require_same_grid(a.grid(), b.grid(), "trace_pairing");
  const auto& g = a.grid();
  return a.values().cwiseProduct(b.values()).sum() * g.cell() / (2 * pi * g.hbar());
}

cplx expectation(const Symbol& a, const WaveFunction& psi) {
  require_same_grid(a.grid(), psi.grid(), "expectation");
  const Symbol w = wigner_of_state(psi, false);
  return a.values().cwiseProduct(w.values()).sum() * a.grid().cell();
}

double band_limit_excess(const Symbol& a) {
  const int n = a.grid().points();
  CMatrix f = a.values();
  detail::fft2(f.data(), n, -1);
  double high = 0.0, total = 0.0;
  for (int c = 0; c < n; ++c) {
    const int nu = std::abs(signed_index(c, n));
    for (int r = 0; r < n; ++r) {
      const int mu = std::abs(signed_index(r, n));
      const double w = std::norm(f(r, c));
      total += w;
      if (mu >= n / 4 || nu >= n / 4) high += w;
    }
  }
  return total > 0.0 ? high / total : 0.0;
}

double boundary_mass(const Symbol& a) {
  const auto& g = a.grid();
  const double qc = 0.9 * g.half_extent(), pc = 0.9 * g.momentum_extent();
  double outer = 0.0, total = 0.0;
  for (int k = 0; k < g.points(); ++k)
    for (int j = 0; j < g.points(); ++j) {
      const double w = std::norm(a(j, k));
      total += w;
      if (std::abs(g.q(j)) > qc || std::abs(g.p(k)) > pc) outer += w;
    }
  return total > 0.0 ? outer / total : 0.0;
}

double boundary_mass(const WaveFunction& psi) {
  const auto& g = psi.grid();
  const double qc = 0.9 * g.half_extent();
  double outer = 0.0, total = 0.0;
  for (int j = 0; j < g.points(); ++j) {
    const double w = std::norm(psi.amplitudes()(j));
    total += w;
    if (std::abs(g.q(j)) > qc) outer += w;
  }
  // momentum side through the discrete Fourier transform
  CVector f = psi.amplitudes();
  detail::fft1(f.data(), g.points(), -1);
  double pouter = 0.0, ptotal = 0.0;
  const int n = g.points();
  for (int m = 0; m < n; ++m) {
    const int k = signed_index(m, n);
    const double w = std::norm(f(m));
    ptotal += w;
    if (std::abs(k) > 0.9 * n / 2) pouter += w;
  }
  const double qpart = total > 0.0 ? outer / total : 0.0;
  const double ppart = ptotal > 0.0 ? pouter / ptotal : 0.0;
  return std::max(qpart, ppart);
}

Symbol spectral_derivative(const Symbol& a, int nq, int np) {
  if (nq < 0 || np < 0) throw InvalidArgument("spectral_derivative: negative order");
  const auto& g = a.grid();
  const int n = g.points();
  CMatrix f = a.values();
  detail::fft2(f.data(), n, -1);
  const double aq = pi / g.half_extent();
  const double bp = g.dq() / g.hbar();
  for (int c = 0; c < n; ++c) {
    const int nu = signed_index(c, n);
    for (int r = 0; r < n; ++r) {
      const int mu = signed_index(r, n);
      if ((nq > 0 && mu == -n / 2) || (np > 0 && nu == -n / 2)) {
        f(r, c) = 0.0;
        continue;
      }
      f(r, c) *= ipow(cplx(0.0, aq * mu), nq) * ipow(cplx(0.0, bp * nu), np);
    }
  }
  detail::fft2(f.data(), n, +1);
  f /= double(n) * n;
  return Symbol(g, std::move(f));
}

}  // namespace wmlab
