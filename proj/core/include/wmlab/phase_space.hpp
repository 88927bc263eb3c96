#pragma once

#include <Eigen/Dense>

#include <complex>
#include <vector>

#include "wmlab/config.hpp"

namespace wmlab {

using cplx = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using RVector = Eigen::VectorXd;

// Periodic phase-space box [-L, L) x [-P, P) sampled on an N x N lattice.
// q_j = -L + j dq with dq = 2L/N, p_k = -P + k dp with dp = pi hbar / L and
// P = N dp / 2, so that dq * dp * N = 2 pi hbar.
class PhaseSpaceGrid {
 public:
  PhaseSpaceGrid(double half_extent, int points, double hbar);

  double half_extent() const { return L_; }
  int points() const { return n_; }
  double hbar() const { return hbar_; }
  double dq() const { return 2.0 * L_ / n_; }
  double dp() const;
  double momentum_extent() const { return 0.5 * n_ * dp(); }
  double cell() const { return dq() * dp(); }

  double q(int j) const { return -L_ + j * dq(); }
  double p(int k) const { return -momentum_extent() + k * dp(); }
  RVector q_values() const;
  RVector p_values() const;

  friend bool operator==(const PhaseSpaceGrid&, const PhaseSpaceGrid&) = default;

 private:
  double L_;
  int n_;
  double hbar_;
};

PhaseSpaceGrid make_grid(double half_extent, int points, double hbar);

// Throws GridMismatch naming `what` unless the grids are identical.
void require_same_grid(const PhaseSpaceGrid& a, const PhaseSpaceGrid& b, const char* what);

// A complex function on the grid, values(j, k) = A(q_j, p_k).
class Symbol {
 public:
  Symbol(PhaseSpaceGrid grid, CMatrix values);

  static Symbol constant(const PhaseSpaceGrid& grid, cplx c);
  static Symbol position(const PhaseSpaceGrid& grid);
  static Symbol momentum(const PhaseSpaceGrid& grid);

  template <class F>
  static Symbol sample(const PhaseSpaceGrid& grid, F&& f) {
    const int n = grid.points();
    CMatrix v(n, n);
    for (int k = 0; k < n; ++k)
      for (int j = 0; j < n; ++j) v(j, k) = cplx(f(grid.q(j), grid.p(k)));
    return Symbol(grid, std::move(v));
  }

  const PhaseSpaceGrid& grid() const { return grid_; }
  const CMatrix& values() const { return values_; }
  CMatrix& values() { return values_; }
  cplx operator()(int j, int k) const { return values_(j, k); }

  Symbol conj() const;
  double max_abs() const;
  double max_imag() const;
  bool is_real(double tol = default_tolerances().real_symbol) const { return max_imag() < tol; }

  Symbol& operator+=(const Symbol& other);
  Symbol& operator-=(const Symbol& other);
  Symbol& operator*=(cplx c);

 private:
  PhaseSpaceGrid grid_;
  CMatrix values_;
};

Symbol operator+(Symbol a, const Symbol& b);
Symbol operator-(Symbol a, const Symbol& b);
Symbol operator*(cplx c, Symbol a);
Symbol operator*(Symbol a, cplx c);
// Pointwise (commutative) product, not the star product.
Symbol pointwise(const Symbol& a, const Symbol& b);

double sup_norm(const Symbol& a);
// Sup norm restricted to |q| <= qmax and |p| <= pmax.
double sup_norm_in(const Symbol& a, double qmax, double pmax);

// Dense operator on position-grid wavefunctions.
class OperatorMatrix {
 public:
  OperatorMatrix(PhaseSpaceGrid grid, CMatrix entries);

  static OperatorMatrix identity(const PhaseSpaceGrid& grid);
  static OperatorMatrix position(const PhaseSpaceGrid& grid);
  // Multiplication by p_k in the discrete Fourier basis e^{i p_k q_j / hbar}.
  static OperatorMatrix momentum(const PhaseSpaceGrid& grid);

  const PhaseSpaceGrid& grid() const { return grid_; }
  const CMatrix& entries() const { return m_; }
  CMatrix& entries() { return m_; }

  OperatorMatrix adjoint() const;
  double hermiticity_defect() const;
  double unitarity_defect() const;

 private:
  PhaseSpaceGrid grid_;
  CMatrix m_;
};

OperatorMatrix operator*(const OperatorMatrix& a, const OperatorMatrix& b);
OperatorMatrix operator+(const OperatorMatrix& a, const OperatorMatrix& b);
OperatorMatrix operator-(const OperatorMatrix& a, const OperatorMatrix& b);
OperatorMatrix operator*(cplx c, const OperatorMatrix& a);

class WaveFunction {
 public:
  WaveFunction(PhaseSpaceGrid grid, CVector amplitudes);

  // Gaussian packet exp(-(q-q0)^2/(2 w^2) + i p0 q / hbar), normalized.
  // Width w defaults to sqrt(hbar), the m = omega = 1 coherent state.
  static WaveFunction gaussian(const PhaseSpaceGrid& grid, double q0, double p0, double width = 0.0);

  const PhaseSpaceGrid& grid() const { return grid_; }
  const CVector& amplitudes() const { return psi_; }
  CVector& amplitudes() { return psi_; }

  double norm_squared() const;
  WaveFunction normalized() const;
  bool is_normalized(double tol = default_tolerances().normalization) const;

 private:
  PhaseSpaceGrid grid_;
  CVector psi_;
};

WaveFunction apply(const OperatorMatrix& m, const WaveFunction& psi);

// Discrete Weyl correspondence. Exact inverses of each other on the grid.
Symbol weyl_symbol_of(const OperatorMatrix& m);
Symbol weyl_symbol_of(const OperatorMatrix& m, const PhaseSpaceGrid& expected);
OperatorMatrix weyl_quantize(const Symbol& a);

// W = symbol(|psi><psi|) / (2 pi hbar); sums to 1 against dq dp.
Symbol wigner_of_state(const WaveFunction& psi, bool strict = true,
                       const Tolerances& tol = default_tolerances());

// trace(quantize(A)) = sum A dq dp / (2 pi hbar).
cplx trace_of(const Symbol& a);
// trace(quantize(A) quantize(B)); exact for the discrete calculus.
cplx trace_pairing(const Symbol& a, const Symbol& b);
// <psi| quantize(A) |psi> computed in phase space against the Wigner function.
cplx expectation(const Symbol& a, const WaveFunction& psi);

// Fraction of spectral power with |mu| or |nu| >= N/4 (half-Nyquist).
double band_limit_excess(const Symbol& a);
// Fraction of sum |A|^2 lying in the outer 10% of the box in q or p.
double boundary_mass(const Symbol& a);
double boundary_mass(const WaveFunction& psi);

// Spectral partial derivative d^nq/dq^nq d^np/dp^np (Nyquist modes dropped).
Symbol spectral_derivative(const Symbol& a, int nq, int np);

}  // namespace wmlab
