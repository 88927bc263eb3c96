#pragma once

#include <functional>
#include <map>
#include <string>
#include <utility>

#include "wmlab/config.hpp"
#include "wmlab/phase_space.hpp"

namespace wmlab {

enum class StarKind { SpectralIntegral, DerivativeSeries };

struct StarMethod {
  StarKind kind = StarKind::SpectralIntegral;
  int order = 8;  // truncation order K of the derivative series

  static StarMethod spectral() { return {StarKind::SpectralIntegral, 0}; }
  static StarMethod series(int k);
};

// What to do when an operand is not band-limited.
enum class BandLimitPolicy { Ignore, Warn, Strict };

// Receives band-limit warnings; the default handler writes to stderr.
void set_warning_handler(std::function<void(const std::string&)> handler);

// f * g. The spectral method is the algebra of the discrete Weyl calculus,
// symbol(quantize(f) quantize(g)); the series method sums
// (i hbar / 2)^n / n! (d_q1 d_p2 - d_p1 d_q2)^n with spectral derivatives.
Symbol star(const Symbol& f, const Symbol& g, StarMethod method = StarMethod::spectral(),
            BandLimitPolicy policy = BandLimitPolicy::Warn,
            const Tolerances& tol = default_tolerances());

// (f * g - g * f) / (i hbar)
Symbol moyal_bracket(const Symbol& f, const Symbol& g, StarMethod method = StarMethod::spectral(),
                     BandLimitPolicy policy = BandLimitPolicy::Warn,
                     const Tolerances& tol = default_tolerances());

// {f, g} = f_q g_p - f_p g_q with spectral derivatives.
Symbol poisson_bracket(const Symbol& f, const Symbol& g);

// || S * conj(S) - 1 ||_inf with the spectral product.
double unitarity_defect(const Symbol& s, BandLimitPolicy policy = BandLimitPolicy::Warn,
                        const Tolerances& tol = default_tolerances());
// Same defect measured only on |q| <= qmax, |p| <= pmax.
double unitarity_defect_in(const Symbol& s, double qmax, double pmax);

// Polynomial in (q, p) with exact series star product. Keys are (a, b)
// for the monomial q^a p^b.
class PhasePolynomial {
 public:
  PhasePolynomial() = default;
  static PhasePolynomial constant(cplx c);
  static PhasePolynomial q();
  static PhasePolynomial p();
  static PhasePolynomial monomial(int a, int b, cplx c = 1.0);

  const std::map<std::pair<int, int>, cplx>& terms() const { return terms_; }
  cplx coefficient(int a, int b) const;
  int degree() const;
  PhasePolynomial derivative(int nq, int np) const;
  cplx operator()(double q, double p) const;
  Symbol evaluate(const PhaseSpaceGrid& grid) const;

  PhasePolynomial& operator+=(const PhasePolynomial& o);
  PhasePolynomial& operator-=(const PhasePolynomial& o);
  PhasePolynomial& operator*=(cplx c);
  friend PhasePolynomial operator+(PhasePolynomial a, const PhasePolynomial& b) { return a += b; }
  friend PhasePolynomial operator-(PhasePolynomial a, const PhasePolynomial& b) { return a -= b; }
  friend PhasePolynomial operator*(cplx c, PhasePolynomial a) { return a *= c; }
  // Commutative product.
  friend PhasePolynomial operator*(const PhasePolynomial& a, const PhasePolynomial& b);

  // Largest coefficient magnitude of this minus other.
  double distance(const PhasePolynomial& other) const;

 private:
  void prune();
  std::map<std::pair<int, int>, cplx> terms_;
};

// Series star product; the default order sums the full (finite) series.
PhasePolynomial star(const PhasePolynomial& f, const PhasePolynomial& g, double hbar, int order = -1);
PhasePolynomial moyal_bracket(const PhasePolynomial& f, const PhasePolynomial& g, double hbar);
PhasePolynomial poisson_bracket(const PhasePolynomial& f, const PhasePolynomial& g);

}  // namespace wmlab
