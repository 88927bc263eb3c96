#include "wmlab/moyal.hpp"

#include <cmath>
#include <iostream>
#include <sstream>
#include <mutex>
#include <vector>

#include "wmlab/errors.hpp"

namespace wmlab {
namespace {

std::mutex& handler_mutex() {
  static std::mutex m;
  return m;
}

std::function<void(const std::string&)>& handler() {
  static std::function<void(const std::string&)> h = [](const std::string& msg) {
    std::cerr << "wmlab warning: " << msg << '\n';
  };
  return h;
}

void warn(const std::string& msg) {
  std::lock_guard lock(handler_mutex());
  if (handler()) handler()(msg);
}

void check_band_limit(const Symbol& s, const char* which, BandLimitPolicy policy,
                      const Tolerances& tol) {
  if (policy == BandLimitPolicy::Ignore) return;
  const double excess = band_limit_excess(s);
  if (excess < tol.band_limit) return;
  std::ostringstream os;
  os << "star: operand " << which << " is not band-limited (spectral mass above half-Nyquist "
     << excess << ")";
  const std::string msg = os.str();
  if (policy == BandLimitPolicy::Strict) throw BandLimitError(msg);
  warn(msg);
}

double binomial(int n, int k) {
  double r = 1.0;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

double factorial(int n) {
  double r = 1.0;
  for (int i = 2; i <= n; ++i) r *= i;
  return r;
}

Symbol series_star(const Symbol& f, const Symbol& g, int order) {
  const auto& grid = f.grid();
  const double hbar = grid.hbar();
  // derivative tables indexed [a][b] = d_q^a d_p^b
  std::vector<std::vector<Symbol>> df, dg;
  for (int a = 0; a <= order; ++a) {
    df.emplace_back();
    dg.emplace_back();
    for (int b = 0; a + b <= order; ++b) {
      df[a].push_back(spectral_derivative(f, a, b));
      dg[a].push_back(spectral_derivative(g, a, b));
    }
  }
  CMatrix acc = f.values().cwiseProduct(g.values());
  cplx pref = 1.0;
  for (int n = 1; n <= order; ++n) {
    pref *= cplx(0.0, hbar / 2.0);
    CMatrix term = CMatrix::Zero(grid.points(), grid.points());
    for (int k = 0; k <= n; ++k) {
      const double c = binomial(n, k) * ((k % 2) ? -1.0 : 1.0);
      // f: d_q^{n-k} d_p^k ; g: d_q^k d_p^{n-k}
      term += c * df[n - k][k].values().cwiseProduct(dg[k][n - k].values());
    }
    acc += (pref / factorial(n)) * term;
  }
  return Symbol(grid, std::move(acc));
}

}  // namespace

StarMethod StarMethod::series(int k) {
  if (k < 1) throw InvalidArgument("derivative-series star: order K must be at least 1");
  return {StarKind::DerivativeSeries, k};
}

void set_warning_handler(std::function<void(const std::string&)> h) {
  std::lock_guard lock(handler_mutex());
  handler() = std::move(h);
}

Symbol star(const Symbol& f, const Symbol& g, StarMethod method, BandLimitPolicy policy,
            const Tolerances& tol) {
  require_same_grid(f.grid(), g.grid(), "star");
  check_band_limit(f, "f", policy, tol);
  check_band_limit(g, "g", policy, tol);
  if (method.kind == StarKind::DerivativeSeries) {
    if (method.order < 1) throw InvalidArgument("derivative-series star: order K must be at least 1");
    return series_star(f, g, method.order);
  }
  const OperatorMatrix a = weyl_quantize(f);
  const OperatorMatrix b = weyl_quantize(g);
  return weyl_symbol_of(a * b);
}

Symbol moyal_bracket(const Symbol& f, const Symbol& g, StarMethod method, BandLimitPolicy policy,
                     const Tolerances& tol) {
  Symbol d = star(f, g, method, policy, tol) - star(g, f, method, BandLimitPolicy::Ignore, tol);
  d *= 1.0 / cplx(0.0, f.grid().hbar());
  return d;
}

Symbol poisson_bracket(const Symbol& f, const Symbol& g) {
  require_same_grid(f.grid(), g.grid(), "poisson_bracket");
  return pointwise(spectral_derivative(f, 1, 0), spectral_derivative(g, 0, 1)) -
         pointwise(spectral_derivative(f, 0, 1), spectral_derivative(g, 1, 0));
}

double unitarity_defect(const Symbol& s, BandLimitPolicy policy, const Tolerances& tol) {
  const Symbol one = Symbol::constant(s.grid(), 1.0);
  return sup_norm(star(s, s.conj(), StarMethod::spectral(), policy, tol) - one);
}

double unitarity_defect_in(const Symbol& s, double qmax, double pmax) {
  const Symbol one = Symbol::constant(s.grid(), 1.0);
  const Symbol d =
      star(s, s.conj(), StarMethod::spectral(), BandLimitPolicy::Ignore, default_tolerances()) - one;
  return sup_norm_in(d, qmax, pmax);
}

// ---- PhasePolynomial -----------------------------------------------------

PhasePolynomial PhasePolynomial::constant(cplx c) { return monomial(0, 0, c); }
PhasePolynomial PhasePolynomial::q() { return monomial(1, 0); }
PhasePolynomial PhasePolynomial::p() { return monomial(0, 1); }

PhasePolynomial PhasePolynomial::monomial(int a, int b, cplx c) {
  if (a < 0 || b < 0) throw InvalidArgument("polynomial: negative exponent");
  PhasePolynomial r;
  if (c != cplx(0.0)) r.terms_[{a, b}] = c;
  return r;
}

cplx PhasePolynomial::coefficient(int a, int b) const {
  auto it = terms_.find({a, b});
  return it == terms_.end() ? cplx(0.0) : it->second;
}

int PhasePolynomial::degree() const {
  int d = 0;
  for (const auto& [k, c] : terms_) d = std::max(d, k.first + k.second);
  return d;
}

PhasePolynomial PhasePolynomial::derivative(int nq, int np) const {
  PhasePolynomial r;
  for (const auto& [k, c] : terms_) {
    const auto [a, b] = k;
    if (a < nq || b < np) continue;
    double f = 1.0;
    for (int i = 0; i < nq; ++i) f *= a - i;
    for (int i = 0; i < np; ++i) f *= b - i;
    r.terms_[{a - nq, b - np}] += f * c;
  }
  r.prune();
  return r;
}

cplx PhasePolynomial::operator()(double q, double p) const {
  cplx s = 0.0;
  for (const auto& [k, c] : terms_) s += c * std::pow(q, k.first) * std::pow(p, k.second);
  return s;
}

Symbol PhasePolynomial::evaluate(const PhaseSpaceGrid& grid) const {
  return Symbol::sample(grid, [this](double q, double p) { return (*this)(q, p); });
}

PhasePolynomial& PhasePolynomial::operator+=(const PhasePolynomial& o) {
  for (const auto& [k, c] : o.terms_) terms_[k] += c;
  prune();
  return *this;
}

PhasePolynomial& PhasePolynomial::operator-=(const PhasePolynomial& o) {
  for (const auto& [k, c] : o.terms_) terms_[k] -= c;
  prune();
  return *this;
}

PhasePolynomial& PhasePolynomial::operator*=(cplx c) {
  for (auto& [k, v] : terms_) v *= c;
  prune();
  return *this;
}

PhasePolynomial operator*(const PhasePolynomial& a, const PhasePolynomial& b) {
  PhasePolynomial r;
  for (const auto& [ka, ca] : a.terms_)
    for (const auto& [kb, cb] : b.terms_) r.terms_[{ka.first + kb.first, ka.second + kb.second}] += ca * cb;
  r.prune();
  return r;
}

double PhasePolynomial::distance(const PhasePolynomial& other) const {
  PhasePolynomial d = *this;
  d -= other;
  double m = 0.0;
  for (const auto& [k, c] : d.terms_) m = std::max(m, std::abs(c));
  return m;
}

void PhasePolynomial::prune() {
  std::erase_if(terms_, [](const auto& kv) { return kv.second == cplx(0.0); });
}

PhasePolynomial star(const PhasePolynomial& f, const PhasePolynomial& g, double hbar, int order) {
  const int kmax = order < 0 ? std::max(f.degree(), g.degree()) : order;
  PhasePolynomial acc = f * g;
  cplx pref = 1.0;
  for (int n = 1; n <= kmax; ++n) {
    pref *= cplx(0.0, hbar / 2.0);
    PhasePolynomial term;
    for (int k = 0; k <= n; ++k) {
      const double c = binomial(n, k) * ((k % 2) ? -1.0 : 1.0);
      term += c * (f.derivative(n - k, k) * g.derivative(k, n - k));
    }
    acc += (pref / factorial(n)) * term;
  }
  return acc;
}

PhasePolynomial moyal_bracket(const PhasePolynomial& f, const PhasePolynomial& g, double hbar) {
  return (1.0 / cplx(0.0, hbar)) * (star(f, g, hbar) - star(g, f, hbar));
}

PhasePolynomial poisson_bracket(const PhasePolynomial& f, const PhasePolynomial& g) {
  return f.derivative(1, 0) * g.derivative(0, 1) - f.derivative(0, 1) * g.derivative(1, 0);
}

}  // namespace wmlab
