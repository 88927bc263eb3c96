#pragma once

#include <complex>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "wmlab/phase_space.hpp"

namespace wmlab {

// Quadrature nodes on [t1, t2]; node order is time order.
class TimeGrid {
 public:
  TimeGrid(double t1, double t2, std::vector<double> nodes, std::vector<double> weights);

  // Composite midpoint rule with m cells.
  static TimeGrid midpoint(double t1, double t2, int m);
  // Composite Simpson rule with m nodes (m odd, m >= 3); endpoints included.
  static TimeGrid simpson(double t1, double t2, int m);

  double t1() const { return t1_; }
  double t2() const { return t2_; }
  int size() const { return static_cast<int>(nodes_.size()); }
  double node(int i) const { return nodes_[i]; }
  double weight(int i) const { return weights_[i]; }
  const std::vector<double>& nodes() const { return nodes_; }
  const std::vector<double>& weights() const { return weights_; }
  // Envelope sampled at the nodes.
  std::vector<double> sample(const std::function<double(double)>& f) const;

  friend bool operator==(const TimeGrid&, const TimeGrid&) = default;

 private:
  double t1_, t2_;
  std::vector<double> nodes_, weights_;
};

// One monomial: coefficient * hbar^hbar_power * g^g_order j^j_order * prod q(t_i).
// g_order and j_order are the formal orders in the couplings; the node
// multiset is kept sorted.
struct TermKey {
  int hbar_power = 0;
  int g_order = 0;
  int j_order = 0;
  std::vector<int> nodes;
  auto operator<=>(const TermKey&) const = default;
};

// Element of the algebra of functionals of the free solution
// q(t) = q0 cos m(t - t1) + p0 sin m(t - t1) / m, with a degree bound.
class FunctionalPolynomial {
 public:
  explicit FunctionalPolynomial(int degree_bound = 16) : bound_(degree_bound) {}

  static FunctionalPolynomial constant(cplx c, int degree_bound = 16);
  // q(t_node)
  static FunctionalPolynomial insertion(int node, int degree_bound = 16);

  int degree_bound() const { return bound_; }
  const std::map<TermKey, cplx>& terms() const { return terms_; }
  std::size_t size() const { return terms_.size(); }
  cplx coefficient(const TermKey& k) const;
  // Throws DegreeOverflow if the multiset exceeds the bound.
  void add(TermKey key, cplx c);
  int degree() const;

  // Part with the given formal orders.
  FunctionalPolynomial order(int g_order, int j_order) const;
  // Drop terms with g_order > ng or j_order > nj.
  FunctionalPolynomial truncated(int ng, int nj) const;

  FunctionalPolynomial& operator+=(const FunctionalPolynomial& o);
  FunctionalPolynomial& operator-=(const FunctionalPolynomial& o);
  FunctionalPolynomial& operator*=(cplx c);
  friend FunctionalPolynomial operator+(FunctionalPolynomial a, const FunctionalPolynomial& b) { return a += b; }
  friend FunctionalPolynomial operator-(FunctionalPolynomial a, const FunctionalPolynomial& b) { return a -= b; }
  friend FunctionalPolynomial operator*(cplx c, FunctionalPolynomial a) { return a *= c; }
  // Commutative (ordinary) product.
  friend FunctionalPolynomial operator*(const FunctionalPolynomial& a, const FunctionalPolynomial& b);

  // Largest coefficient magnitude of this minus other.
  double distance(const FunctionalPolynomial& other) const;
  void prune(double threshold = 0.0);

  // Value at (q0, p0) with hbar substituted, as a phase-space symbol.
  Symbol evaluate(const PhaseSpaceGrid& grid, const TimeGrid& time, double m) const;

 private:
  int bound_;
  std::map<TermKey, cplx> terms_;
};

enum class KernelKind { PauliJordan, PvTimeOrdered, Feynman, SymmetricPart, Custom };

// Two-point kernel on the nodes of a time grid. value(a, b) is the kernel
// with its hbar stripped: the contraction contributes hbar * value.
//   pauli-jordan   D(t1, t2) = sin(m (t2 - t1)) / m      ({q(t1), q(t2)})
//   pv-timeordered -(i / 2m) sin(m |t1 - t2|)            (Weyl time ordering)
//   feynman        (1 / 2m) exp(-i m |t1 - t2|)
//   symmetric-part (1 / 2m) cos(m (t1 - t2))
class ContractionKernel {
 public:
  ContractionKernel(KernelKind kind, double m, const TimeGrid& grid);
  // Arbitrary sampled kernel with no closed form.
  static ContractionKernel custom(const TimeGrid& grid, CMatrix values);

  KernelKind kind() const { return kind_; }
  std::string name() const;
  double mass() const { return m_; }
  const TimeGrid& grid() const { return grid_; }
  const CMatrix& values() const { return values_; }
  cplx operator()(int a, int b) const { return values_(a, b); }
  bool has_closed_form() const { return kind_ != KernelKind::Custom; }
  // Closed form in the time difference tau = t1 - t2.
  cplx closed_form(double tau) const;

 private:
  ContractionKernel(KernelKind kind, double m, const TimeGrid& grid, CMatrix values);
  KernelKind kind_;
  double m_;
  TimeGrid grid_;
  CMatrix values_;
};

ContractionKernel pauli_jordan_kernel(double m, const TimeGrid& grid);

// Moyal product of functionals with the bracket kernel `bracket`
// ({q(t_a), q(t_b)} = bracket(a, b)): sum over partial matchings between
// insertions of the left and right factor, each pair weighted by
// (i hbar / 2) bracket(a, b).
FunctionalPolynomial star_functionals(const FunctionalPolynomial& left, const FunctionalPolynomial& right,
                                      const ContractionKernel& bracket);

struct DysonOrders {
  int g = 0;
  int j = 0;
};

// Time-ordered star exponential of (1/(i hbar)) sum_i w_i (g_i q_i^4 / 4! + j_i q_i),
// computed as E_M * ... * E_1 (later nodes to the left) with E_i the
// single-node exponential, truncated at the given formal orders.
FunctionalPolynomial star_dyson(const std::vector<double>& g, const std::vector<double>& j, double m,
                                const TimeGrid& grid, DysonOrders orders, int degree_bound);

// Same series built from the ordinary product and the contraction operator
// exp(1/2 sum_ab K_ab d_a d_b) with a time-ordered kernel K (pairs at one
// node included, so a kernel with K(t, t) != 0 produces tadpoles).
FunctionalPolynomial wick_expand(const std::vector<double>& g, const std::vector<double>& j,
                                 const ContractionKernel& kernel, DysonOrders orders, int degree_bound);

// SmoothCompact: w(tau) = s(1 - |tau| / half_length) with s the C-infinity
// step, so w is flat to all orders at 0 and vanishes beyond half_length.
// A quicker ramp behind a wide flat top leaks more near the mass shell.
enum class TransformWindow { SmoothCompact, Exponential };

struct EnergyTransformOptions {
  TransformWindow window = TransformWindow::SmoothCompact;
  double half_length = 0.0;   // smooth window half-length, default 100/m
  double damping = 0.0;       // exponential: e^{-damping |tau|}, default 0.02 m
  double step = 0.0;          // quadrature step in tau, default 0.01/m
  bool exclude_singular = false;
  double exclusion = 0.5;     // |E -+ m| below this is skipped when excluding
};

struct EnergyTransform {
  std::vector<double> energies;
  std::vector<cplx> values;         // windowed transform at each kept energy
  std::vector<double> reference;    // PV 1/(E^2 - m^2)
  std::vector<bool> excluded;
  cplx constant = 0.0;              // fitted c in values ~ c * reference
  double max_relative_error = 0.0;  // of values against c * reference, kept points
};

// Windowed Fourier transform int e^{i E tau} K(tau) w(tau) dtau of a kernel
// with a closed form. Throws InvalidArgument if an energy sits on +-m and
// exclusion is off.
EnergyTransform kernel_energy_transform(const ContractionKernel& kernel, const std::vector<double>& energies,
                                        EnergyTransformOptions options = {});

// Sorted JSON text, one object per term.
std::string to_json(const FunctionalPolynomial& p);
FunctionalPolynomial functional_from_json(const std::string& text);

}  // namespace wmlab
