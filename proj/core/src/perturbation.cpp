#include "wmlab/perturbation.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "wmlab/errors.hpp"
#include "wmlab/parallel.hpp"

namespace wmlab {
namespace {

constexpr int kMaxGOrder = 2;
constexpr int kMaxJOrder = 4;
constexpr cplx kI{0.0, 1.0};

// Distinct nodes with multiplicities, from a sorted multiset.
struct Factor {
  int node;
  int power;
};

std::vector<Factor> group(const std::vector<int>& nodes) {
  std::vector<Factor> out;
  for (int n : nodes) {
    if (!out.empty() && out.back().node == n)
      ++out.back().power;
    else
      out.push_back({n, 1});
  }
  return out;
}

double falling(int n, int k) {
  double r = 1.0;
  for (int i = 0; i < k; ++i) r *= n - i;
  return r;
}

double factorial(int n) { return falling(n, n); }

void append_remaining(std::vector<int>& out, const std::vector<Factor>& f, const std::vector<int>& used) {
  for (std::size_t i = 0; i < f.size(); ++i)
    for (int k = used[i]; k < f[i].power; ++k) out.push_back(f[i].node);
}

// All contraction patterns between a left and a right monomial: counts
// k(i, j) on the cells of the distinct-node table, each pair weighted by
// (i/2) bracket(a_i, b_j) and one power of hbar.
void pair_terms(const TermKey& lk, cplx lc, const TermKey& rk, cplx rc, const ContractionKernel& bracket,
                const std::function<bool(const TermKey&)>& keep, FunctionalPolynomial& out) {
  const auto left = group(lk.nodes);
  const auto right = group(rk.nodes);
  const std::size_t nl = left.size(), nr = right.size();
  std::vector<int> used_l(nl, 0), used_r(nr, 0);
  TermKey base{lk.hbar_power + rk.hbar_power, lk.g_order + rk.g_order, lk.j_order + rk.j_order, {}};
  if (!keep(base)) return;

  std::vector<cplx> weight(nl * nr);
  for (std::size_t i = 0; i < nl; ++i)
    for (std::size_t j = 0; j < nr; ++j) weight[i * nr + j] = 0.5 * kI * bracket(left[i].node, right[j].node);

  const auto emit = [&](cplx c, int pairs) {
    double multiplicity = 1.0;
    for (std::size_t i = 0; i < nl; ++i) multiplicity *= falling(left[i].power, used_l[i]);
    for (std::size_t j = 0; j < nr; ++j) multiplicity *= falling(right[j].power, used_r[j]);
    TermKey key = base;
    key.hbar_power += pairs;
    append_remaining(key.nodes, left, used_l);
    append_remaining(key.nodes, right, used_r);
    out.add(std::move(key), c * multiplicity);
  };

  // Depth-first over cells in row-major order.
  const std::function<void(std::size_t, cplx, int)> walk = [&](std::size_t cell, cplx c, int pairs) {
    if (cell == nl * nr) {
      emit(c, pairs);
      return;
    }
    const std::size_t i = cell / nr, j = cell % nr;
    const cplx w = weight[cell];
    const int room = std::min(left[i].power - used_l[i], right[j].power - used_r[j]);
    cplx ck = c;
    for (int k = 0;; ++k) {
      walk(cell + 1, ck, pairs + k);
      if (k == room || w == 0.0) break;
      used_l[i]++;
      used_r[j]++;
      ck *= w / double(k + 1);
    }
    const int taken = w == 0.0 ? 0 : room;
    used_l[i] -= taken;
    used_r[j] -= taken;
  };
  walk(0, lc * rc, 0);
}

// Contraction of a single monomial with itself: exp(1/2 sum K_ab d_a d_b).
void self_contract(const TermKey& key, cplx c0, const ContractionKernel& kernel, FunctionalPolynomial& out) {
  const auto f = group(key.nodes);
  const std::size_t n = f.size();
  std::vector<std::pair<std::size_t, std::size_t>> cells;
  std::vector<cplx> weight;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i; j < n; ++j) {
      cells.emplace_back(i, j);
      const cplx k = kernel(f[i].node, f[j].node);
      weight.push_back(i == j ? 0.5 * k : k);
    }
  std::vector<int> used(n, 0);

  const std::function<void(std::size_t, cplx, int)> walk = [&](std::size_t cell, cplx c, int pairs) {
    if (cell == cells.size()) {
      double multiplicity = 1.0;
      for (std::size_t i = 0; i < n; ++i) multiplicity *= falling(f[i].power, used[i]);
      TermKey k{key.hbar_power + pairs, key.g_order, key.j_order, {}};
      append_remaining(k.nodes, f, used);
      out.add(std::move(k), c * multiplicity);
      return;
    }
    const auto [i, j] = cells[cell];
    const cplx w = weight[cell];
    const int per = i == j ? 2 : 1;
    int count = 0;
    cplx ck = c;
    for (;;) {
      walk(cell + 1, ck, pairs + count);
      const bool room = i == j ? f[i].power - used[i] >= 2
                               : f[i].power - used[i] >= 1 && f[j].power - used[j] >= 1;
      if (!room || w == 0.0) break;
      used[i] += per == 2 ? 2 : 1;
      if (i != j) used[j]++;
      ++count;
      ck *= w / double(count);
    }
    used[i] -= per * count;
    if (i != j) used[j] -= count;
  };
  walk(0, c0, 0);
}

void check_orders(DysonOrders orders, int degree_bound) {
  if (orders.g < 0 || orders.j < 0) throw InvalidArgument("perturbation orders must be non-negative");
  if (orders.g > kMaxGOrder || orders.j > kMaxJOrder)
    throw InvalidArgument("perturbation orders above (2, 4) are not supported");
  if (degree_bound < 4 * orders.g + orders.j)
    throw DegreeOverflow("degree bound " + std::to_string(degree_bound) + " is below 4 n_g + n_j");
}

// Ordinary exponential of (w / (i hbar)) (g q^4/24 + j q) at one node, truncated.
FunctionalPolynomial node_exponential(int node, double wg, double wj, DysonOrders orders, int bound) {
  FunctionalPolynomial e(bound);
  const cplx ag = wg / 24.0 / kI, aj = wj / kI;
  for (int a = 0; a <= orders.g; ++a) {
    if (a > 0 && wg == 0.0) break;
    for (int b = 0; b <= orders.j; ++b) {
      if (b > 0 && wj == 0.0) break;
      TermKey k{-(a + b), a, b, std::vector<int>(4 * a + b, node)};
      e.add(std::move(k), std::pow(ag, a) * std::pow(aj, b) / (factorial(a) * factorial(b)));
    }
  }
  return e;
}

void check_envelopes(const std::vector<double>& g, const std::vector<double>& j, const TimeGrid& grid) {
  if (static_cast<int>(g.size()) != grid.size() || static_cast<int>(j.size()) != grid.size())
    throw InvalidArgument("envelope samples do not match the time grid");
}

double smooth_step(double x) {
  if (x <= 0.0) return 0.0;
  if (x >= 1.0) return 1.0;
  const double a = std::exp(-1.0 / x), b = std::exp(-1.0 / (1.0 - x));
  return a / (a + b);
}

}  // namespace

// ---------------------------------------------------------------- TimeGrid

TimeGrid::TimeGrid(double t1, double t2, std::vector<double> nodes, std::vector<double> weights)
    : t1_(t1), t2_(t2), nodes_(std::move(nodes)), weights_(std::move(weights)) {
  if (!(t2_ > t1_)) throw InvalidArgument("time grid: t2 must exceed t1");
  if (nodes_.empty() || nodes_.size() != weights_.size())
    throw InvalidArgument("time grid: nodes and weights must be non-empty and of equal length");
  for (std::size_t i = 0; i < nodes_.size(); ++i) {
    if (nodes_[i] < t1_ || nodes_[i] > t2_) throw InvalidArgument("time grid: node outside the window");
    if (i > 0 && !(nodes_[i] > nodes_[i - 1])) throw InvalidArgument("time grid: nodes must increase strictly");
    if (!(weights_[i] > 0.0)) throw InvalidArgument("time grid: weights must be positive");
  }
}

TimeGrid TimeGrid::midpoint(double t1, double t2, int m) {
  if (m < 1) throw InvalidArgument("time grid: need at least one cell");
  const double h = (t2 - t1) / m;
  std::vector<double> x(m), w(m, h);
  for (int i = 0; i < m; ++i) x[i] = t1 + (i + 0.5) * h;
  return {t1, t2, std::move(x), std::move(w)};
}

TimeGrid TimeGrid::simpson(double t1, double t2, int m) {
  if (m < 3 || m % 2 == 0) throw InvalidArgument("time grid: Simpson needs an odd node count >= 3");
  const double h = (t2 - t1) / (m - 1);
  std::vector<double> x(m), w(m);
  for (int i = 0; i < m; ++i) {
    x[i] = t1 + i * h;
    w[i] = h / 3.0 * (i == 0 || i == m - 1 ? 1.0 : (i % 2 ? 4.0 : 2.0));
  }
  x.back() = t2;
  return {t1, t2, std::move(x), std::move(w)};
}

std::vector<double> TimeGrid::sample(const std::function<double(double)>& f) const {
  std::vector<double> out(nodes_.size());
  std::transform(nodes_.begin(), nodes_.end(), out.begin(), f);
  return out;
}

// ---------------------------------------------------- FunctionalPolynomial

FunctionalPolynomial FunctionalPolynomial::constant(cplx c, int degree_bound) {
  FunctionalPolynomial p(degree_bound);
  p.add({}, c);
  return p;
}

FunctionalPolynomial FunctionalPolynomial::insertion(int node, int degree_bound) {
  FunctionalPolynomial p(degree_bound);
  p.add({0, 0, 0, {node}}, 1.0);
  return p;
}

cplx FunctionalPolynomial::coefficient(const TermKey& k) const {
  const auto it = terms_.find(k);
  return it == terms_.end() ? cplx{} : it->second;
}

void FunctionalPolynomial::add(TermKey key, cplx c) {
  if (static_cast<int>(key.nodes.size()) > bound_)
    throw DegreeOverflow("term of degree " + std::to_string(key.nodes.size()) + " exceeds the bound " +
                         std::to_string(bound_));
  if (!std::isfinite(c.real()) || !std::isfinite(c.imag()))
    throw InvalidArgument("functional polynomial: non-finite coefficient");
  if (c == 0.0) return;
  std::sort(key.nodes.begin(), key.nodes.end());
  auto [it, fresh] = terms_.try_emplace(std::move(key), c);
  if (!fresh) {
    it->second += c;
    if (it->second == 0.0) terms_.erase(it);
  }
}

int FunctionalPolynomial::degree() const {
  int d = 0;
  for (const auto& [k, c] : terms_) d = std::max(d, static_cast<int>(k.nodes.size()));
  return d;
}

FunctionalPolynomial FunctionalPolynomial::order(int g_order, int j_order) const {
  FunctionalPolynomial out(bound_);
  for (const auto& [k, c] : terms_)
    if (k.g_order == g_order && k.j_order == j_order) out.terms_.emplace(k, c);
  return out;
}

FunctionalPolynomial FunctionalPolynomial::truncated(int ng, int nj) const {
  FunctionalPolynomial out(bound_);
  for (const auto& [k, c] : terms_)
    if (k.g_order <= ng && k.j_order <= nj) out.terms_.emplace(k, c);
  return out;
}

FunctionalPolynomial& FunctionalPolynomial::operator+=(const FunctionalPolynomial& o) {
  for (const auto& [k, c] : o.terms_) add(k, c);
  return *this;
}

FunctionalPolynomial& FunctionalPolynomial::operator-=(const FunctionalPolynomial& o) {
  for (const auto& [k, c] : o.terms_) add(k, -c);
  return *this;
}

FunctionalPolynomial& FunctionalPolynomial::operator*=(cplx s) {
  if (s == 0.0) {
    terms_.clear();
    return *this;
  }
  for (auto& [k, c] : terms_) c *= s;
  return *this;
}

FunctionalPolynomial operator*(const FunctionalPolynomial& a, const FunctionalPolynomial& b) {
  FunctionalPolynomial out(std::min(a.bound_, b.bound_));
  for (const auto& [ka, ca] : a.terms_)
    for (const auto& [kb, cb] : b.terms_) {
      TermKey k{ka.hbar_power + kb.hbar_power, ka.g_order + kb.g_order, ka.j_order + kb.j_order, ka.nodes};
      k.nodes.insert(k.nodes.end(), kb.nodes.begin(), kb.nodes.end());
      out.add(std::move(k), ca * cb);
    }
  return out;
}

double FunctionalPolynomial::distance(const FunctionalPolynomial& other) const {
  double d = 0.0;
  for (const auto& [k, c] : terms_) d = std::max(d, std::abs(c - other.coefficient(k)));
  for (const auto& [k, c] : other.terms_)
    if (!terms_.contains(k)) d = std::max(d, std::abs(c));
  return d;
}

void FunctionalPolynomial::prune(double threshold) {
  std::erase_if(terms_, [&](const auto& kv) { return std::abs(kv.second) <= threshold; });
}

Symbol FunctionalPolynomial::evaluate(const PhaseSpaceGrid& grid, const TimeGrid& time, double m) const {
  if (!(m > 0.0)) throw InvalidArgument("evaluate: mass must be positive");
  const int n = grid.points();
  std::map<int, CMatrix> q;
  for (const auto& [k, c] : terms_)
    for (int node : k.nodes) {
      if (node < 0 || node >= time.size()) throw InvalidArgument("evaluate: node index outside the time grid");
      if (q.contains(node)) continue;
      const double s = m * (time.node(node) - time.t1());
      q.emplace(node, Symbol::sample(grid, [&](double x, double p) {
                        return x * std::cos(s) + p * std::sin(s) / m;
                      }).values());
    }
  CMatrix total = CMatrix::Zero(n, n);
  CMatrix term(n, n);
  for (const auto& [k, c] : terms_) {
    term.setConstant(c * std::pow(grid.hbar(), k.hbar_power));
    for (int node : k.nodes) term.array() *= q.at(node).array();
    total += term;
  }
  return Symbol(grid, std::move(total));
}

// ------------------------------------------------------- ContractionKernel

ContractionKernel::ContractionKernel(KernelKind kind, double m, const TimeGrid& grid, CMatrix values)
    : kind_(kind), m_(m), grid_(grid), values_(std::move(values)) {}

ContractionKernel::ContractionKernel(KernelKind kind, double m, const TimeGrid& grid)
    : kind_(kind), m_(m), grid_(grid) {
  if (kind == KernelKind::Custom) throw InvalidArgument("custom kernels are built with ContractionKernel::custom");
  if (!(m > 0.0)) throw InvalidArgument("kernel mass must be positive");
  const int n = grid.size();
  values_.resize(n, n);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) values_(a, b) = closed_form(grid.node(a) - grid.node(b));
}

ContractionKernel ContractionKernel::custom(const TimeGrid& grid, CMatrix values) {
  if (values.rows() != grid.size() || values.cols() != grid.size())
    throw InvalidArgument("custom kernel: matrix does not match the time grid");
  return ContractionKernel(KernelKind::Custom, 0.0, grid, std::move(values));
}

std::string ContractionKernel::name() const {
  switch (kind_) {
    case KernelKind::PauliJordan: return "pauli-jordan";
    case KernelKind::PvTimeOrdered: return "pv-timeordered";
    case KernelKind::Feynman: return "feynman";
    case KernelKind::SymmetricPart: return "symmetric-part";
    case KernelKind::Custom: return "custom";
  }
  return "custom";
}

cplx ContractionKernel::closed_form(double tau) const {
  const double m = m_;
  switch (kind_) {
    case KernelKind::PauliJordan: return -std::sin(m * tau) / m;
    case KernelKind::PvTimeOrdered: return -kI * std::sin(m * std::abs(tau)) / (2.0 * m);
    case KernelKind::Feynman: return std::exp(-kI * m * std::abs(tau)) / (2.0 * m);
    case KernelKind::SymmetricPart: return std::cos(m * tau) / (2.0 * m);
    case KernelKind::Custom: break;
  }
  throw InvalidArgument("custom kernel has no closed form");
}

ContractionKernel pauli_jordan_kernel(double m, const TimeGrid& grid) {
  return ContractionKernel(KernelKind::PauliJordan, m, grid);
}

// ----------------------------------------------------------------- products

FunctionalPolynomial star_functionals(const FunctionalPolynomial& left, const FunctionalPolynomial& right,
                                      const ContractionKernel& bracket) {
  const int bound = std::min(left.degree_bound(), right.degree_bound());
  std::vector<std::pair<const TermKey*, cplx>> lt;
  for (const auto& [k, c] : left.terms()) lt.emplace_back(&k, c);
  const auto keep = [](const TermKey&) { return true; };

  // Each left term expands independently; merging runs in term order.
  std::vector<FunctionalPolynomial> parts(lt.size(), FunctionalPolynomial(bound));
  parallel_for(lt.size(), [&](std::size_t i) {
    for (const auto& [rk, rc] : right.terms()) pair_terms(*lt[i].first, lt[i].second, rk, rc, bracket, keep, parts[i]);
  });
  FunctionalPolynomial out(bound);
  for (const auto& p : parts) out += p;
  return out;
}

FunctionalPolynomial star_dyson(const std::vector<double>& g, const std::vector<double>& j, double m,
                                const TimeGrid& grid, DysonOrders orders, int degree_bound) {
  check_orders(orders, degree_bound);
  check_envelopes(g, j, grid);
  const ContractionKernel bracket = pauli_jordan_kernel(m, grid);
  const auto keep = [orders](const TermKey& k) { return k.g_order <= orders.g && k.j_order <= orders.j; };

  FunctionalPolynomial s = FunctionalPolynomial::constant(1.0, degree_bound);
  for (int i = 0; i < grid.size(); ++i) {
    const double w = grid.weight(i);
    if (g[i] == 0.0 && j[i] == 0.0) continue;
    const FunctionalPolynomial e = node_exponential(i, w * g[i], w * j[i], orders, degree_bound);
    // Later node on the left.
    std::vector<std::pair<const TermKey*, cplx>> rt;
    for (const auto& [k, c] : s.terms()) rt.emplace_back(&k, c);
    const std::size_t chunks = std::min<std::size_t>(rt.size(), 64);
    std::vector<FunctionalPolynomial> parts(chunks, FunctionalPolynomial(degree_bound));
    parallel_for(chunks, [&](std::size_t c) {
      for (std::size_t r = c; r < rt.size(); r += chunks)
        for (const auto& [ek, ec] : e.terms()) pair_terms(ek, ec, *rt[r].first, rt[r].second, bracket, keep, parts[c]);
    });
    FunctionalPolynomial next(degree_bound);
    for (const auto& p : parts) next += p;
    s = std::move(next);
  }
  return s;
}

FunctionalPolynomial wick_expand(const std::vector<double>& g, const std::vector<double>& j,
                                 const ContractionKernel& kernel, DysonOrders orders, int degree_bound) {
  check_orders(orders, degree_bound);
  const TimeGrid& grid = kernel.grid();
  check_envelopes(g, j, grid);

  FunctionalPolynomial product = FunctionalPolynomial::constant(1.0, degree_bound);
  for (int i = 0; i < grid.size(); ++i) {
    if (g[i] == 0.0 && j[i] == 0.0) continue;
    const double w = grid.weight(i);
    const FunctionalPolynomial e = node_exponential(i, w * g[i], w * j[i], orders, degree_bound);
    FunctionalPolynomial next(degree_bound);
    for (const auto& [ka, ca] : product.terms())
      for (const auto& [kb, cb] : e.terms()) {
        if (ka.g_order + kb.g_order > orders.g || ka.j_order + kb.j_order > orders.j) continue;
        TermKey k{ka.hbar_power + kb.hbar_power, ka.g_order + kb.g_order, ka.j_order + kb.j_order, ka.nodes};
        k.nodes.insert(k.nodes.end(), kb.nodes.begin(), kb.nodes.end());
        next.add(std::move(k), ca * cb);
      }
    product = std::move(next);
  }

  std::vector<std::pair<const TermKey*, cplx>> terms;
  for (const auto& [k, c] : product.terms()) terms.emplace_back(&k, c);
  const std::size_t chunks = std::min<std::size_t>(terms.size(), 64);
  std::vector<FunctionalPolynomial> parts(chunks, FunctionalPolynomial(degree_bound));
  parallel_for(chunks, [&](std::size_t c) {
    for (std::size_t r = c; r < terms.size(); r += chunks) self_contract(*terms[r].first, terms[r].second, kernel, parts[c]);
  });
  FunctionalPolynomial out(degree_bound);
  for (const auto& p : parts) out += p;
  return out;
}

// ----------------------------------------------------------- energy domain

EnergyTransform kernel_energy_transform(const ContractionKernel& kernel, const std::vector<double>& energies,
                                        EnergyTransformOptions opt) {
  if (!kernel.has_closed_form()) throw InvalidArgument("energy transform needs a kernel with a closed form");
  const double m = kernel.mass();
  if (opt.half_length <= 0.0) opt.half_length = 100.0 / m;
  if (opt.damping <= 0.0) opt.damping = 0.02 * m;
  if (opt.step <= 0.0) opt.step = 0.01 / m;

  EnergyTransform out;
  out.energies = energies;
  out.values.assign(energies.size(), 0.0);
  out.reference.assign(energies.size(), 0.0);
  out.excluded.assign(energies.size(), false);
  for (std::size_t i = 0; i < energies.size(); ++i) {
    const double gap = std::abs(std::abs(energies[i]) - m);
    if (opt.exclude_singular) {
      out.excluded[i] = gap < opt.exclusion;
    } else if (gap < 1e-9 * m) {
      std::ostringstream msg;
      msg << "energy " << energies[i] << " sits on the mass shell; enable exclusion";
      throw InvalidArgument(msg.str());
    }
    if (!out.excluded[i]) out.reference[i] = 1.0 / (energies[i] * energies[i] - m * m);
  }

  // Simpson on [0, Lambda] of e^{iE tau} K(tau) + e^{-iE tau} K(-tau), so the
  // kink of |tau| kernels sits on a panel boundary.
  const bool compact = opt.window == TransformWindow::SmoothCompact;
  const double extent = compact ? opt.half_length : 40.0 / opt.damping;
  int panels = static_cast<int>(std::ceil(extent / opt.step));
  panels += panels % 2;
  const double h = extent / panels;
  std::vector<double> tau(panels + 1), w(panels + 1);
  std::vector<cplx> kp(panels + 1), km(panels + 1);
  for (int k = 0; k <= panels; ++k) {
    tau[k] = k * h;
    const double window = compact ? smooth_step(1.0 - tau[k] / extent) : std::exp(-opt.damping * tau[k]);
    w[k] = window * h / 3.0 * (k == 0 || k == panels ? 1.0 : (k % 2 ? 4.0 : 2.0));
    kp[k] = kernel.closed_form(tau[k]);
    km[k] = kernel.closed_form(-tau[k]);
  }
  parallel_for(energies.size(), [&](std::size_t i) {
    if (out.excluded[i]) return;
    const double e = energies[i];
    cplx acc = 0.0;
    for (int k = 0; k <= panels; ++k) {
      const cplx ph = std::polar(1.0, e * tau[k]);
      acc += w[k] * (ph * kp[k] + std::conj(ph) * km[k]);
    }
    out.values[i] = acc;
  });

  std::size_t kept = 0;
  cplx c = 0.0;
  for (std::size_t i = 0; i < energies.size(); ++i)
    if (!out.excluded[i]) {
      c += out.values[i] / out.reference[i];
      ++kept;
    }
  if (kept == 0) return out;
  out.constant = c / double(kept);
  if (std::abs(out.constant) == 0.0) {
    out.max_relative_error = std::numeric_limits<double>::infinity();
    return out;
  }
  for (std::size_t i = 0; i < energies.size(); ++i)
    if (!out.excluded[i]) {
      const cplx model = out.constant * out.reference[i];
      out.max_relative_error = std::max(out.max_relative_error, std::abs(out.values[i] - model) / std::abs(model));
    }
  return out;
}

// --------------------------------------------------------------------- JSON

std::string to_json(const FunctionalPolynomial& p) {
  nlohmann::json terms = nlohmann::json::array();
  for (const auto& [k, c] : p.terms())
    terms.push_back({{"hbar_power", k.hbar_power},
                     {"g_order", k.g_order},
                     {"j_order", k.j_order},
                     {"nodes", k.nodes},
                     {"re", c.real()},
                     {"im", c.imag()}});
  nlohmann::json doc = {{"degree_bound", p.degree_bound()}, {"terms", std::move(terms)}};
  return doc.dump(1);
}

FunctionalPolynomial functional_from_json(const std::string& text) {
  try {
    const auto doc = nlohmann::json::parse(text);
    FunctionalPolynomial p(doc.at("degree_bound").get<int>());
    for (const auto& t : doc.at("terms"))
      p.add({t.at("hbar_power").get<int>(), t.at("g_order").get<int>(), t.at("j_order").get<int>(),
             t.at("nodes").get<std::vector<int>>()},
            {t.at("re").get<double>(), t.at("im").get<double>()});
    return p;
  } catch (const nlohmann::json::exception& e) {
    throw InvalidArgument(std::string("functional polynomial JSON: ") + e.what());
  }
}

}  // namespace wmlab
