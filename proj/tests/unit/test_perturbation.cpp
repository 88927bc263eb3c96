#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "wmlab/dynamics.hpp"
#include "wmlab/errors.hpp"
#include "wmlab/perturbation.hpp"

using namespace wmlab;

namespace {

constexpr cplx I{0.0, 1.0};

double max_coefficient(const FunctionalPolynomial& p) {
  double m = 0.0;
  for (const auto& [k, c] : p.terms()) m = std::max(m, std::abs(c));
  return m;
}

// Every pairing lowers the degree by two and raises the hbar power by one;
// every vertex carries 1/(i hbar).
void expect_hbar_grading(const FunctionalPolynomial& p) {
  for (const auto& [k, c] : p.terms()) {
    const int vertices = k.g_order + k.j_order;
    const int legs = 4 * k.g_order + k.j_order;
    const int degree = static_cast<int>(k.nodes.size());
    ASSERT_EQ((legs - degree) % 2, 0);
    EXPECT_EQ(k.hbar_power, -vertices + (legs - degree) / 2);
  }
}

// Random polynomial with dyadic coefficients so products are exact.
FunctionalPolynomial random_polynomial(std::mt19937& rng, int nodes, int max_degree, int terms) {
  std::uniform_int_distribution<int> node(0, nodes - 1), deg(0, max_degree), num(-8, 8);
  FunctionalPolynomial p(12);
  for (int t = 0; t < terms; ++t) {
    TermKey k;
    k.hbar_power = 0;
    const int d = deg(rng);
    for (int i = 0; i < d; ++i) k.nodes.push_back(node(rng));
    p.add(k, cplx(num(rng) / 4.0, num(rng) / 8.0));
  }
  return p;
}

std::vector<double> bump(const TimeGrid& grid, double center, double width, double peak) {
  return grid.sample([=](double t) { return peak * std::exp(-0.5 * std::pow((t - center) / width, 2)); });
}

}  // namespace

TEST(TimeGrid, QuadratureRules) {
  const auto mid = TimeGrid::midpoint(-1.0, 2.0, 300);
  const auto simp = TimeGrid::simpson(-1.0, 2.0, 7);
  double a = 0.0, b = 0.0;
  for (int i = 0; i < mid.size(); ++i) a += mid.weight(i) * mid.node(i) * mid.node(i);
  for (int i = 0; i < simp.size(); ++i) b += simp.weight(i) * std::pow(simp.node(i), 3);
  EXPECT_NEAR(a, 3.0, 1e-4);
  EXPECT_NEAR(b, (16.0 - 1.0) / 4.0, 1e-13);
  EXPECT_DOUBLE_EQ(simp.node(0), -1.0);
  EXPECT_DOUBLE_EQ(simp.node(6), 2.0);
}

TEST(TimeGrid, RejectsBadNodes) {
  EXPECT_THROW(TimeGrid(0.0, 1.0, {0.5, 0.5}, {0.5, 0.5}), InvalidArgument);
  EXPECT_THROW(TimeGrid(0.0, 1.0, {0.2, 0.5}, {0.5, 0.0}), InvalidArgument);
  EXPECT_THROW(TimeGrid(0.0, 1.0, {0.2, 1.5}, {0.5, 0.5}), InvalidArgument);
  EXPECT_THROW(TimeGrid::simpson(0.0, 1.0, 4), InvalidArgument);
}

TEST(Kernel, PauliJordanIsThePoissonBracketOfTheModeExpansion) {
  const double m = 1.3;
  const auto grid = TimeGrid::midpoint(-2.0, 3.0, 9);
  const auto d = pauli_jordan_kernel(m, grid);
  for (int a = 0; a < grid.size(); ++a) {
    EXPECT_EQ(d(a, a), 0.0);
    for (int b = 0; b < grid.size(); ++b) {
      const double ta = grid.node(a), tb = grid.node(b);
      // q(t) = q0 cos mt + p0 sin(mt)/m; {q0, p0} = 1.
      const double bracket = std::cos(m * ta) * std::sin(m * tb) / m - std::sin(m * ta) / m * std::cos(m * tb);
      EXPECT_NEAR(d(a, b).real(), bracket, 1e-14);
      EXPECT_EQ(d(a, b).imag(), 0.0);
      EXPECT_EQ(d(a, b), -d(b, a));
    }
  }
}

TEST(Kernel, EqualTimeVelocityBracketIsOne) {
  const auto grid = TimeGrid::midpoint(0.0, 1.0, 1);
  for (double m : {0.5, 1.0, 3.0}) {
    const ContractionKernel d(KernelKind::PauliJordan, m, grid);
    const double h = 1e-5;
    // D(t, t + h) = closed_form(-h)
    const double slope = (d.closed_form(-h) - d.closed_form(h)).real() / (2 * h);
    EXPECT_NEAR(slope, 1.0, 1e-9);
  }
}

TEST(Kernel, SymmetriesOfTheTimeOrderedKernels) {
  const double m = 0.8;
  const auto grid = TimeGrid::midpoint(-3.0, 3.0, 11);
  const ContractionKernel pv(KernelKind::PvTimeOrdered, m, grid), f(KernelKind::Feynman, m, grid),
      s(KernelKind::SymmetricPart, m, grid);
  for (int a = 0; a < grid.size(); ++a)
    for (int b = 0; b < grid.size(); ++b) {
      EXPECT_EQ(f(a, b), f(b, a));
      EXPECT_EQ(s(a, b).imag(), 0.0);
      EXPECT_NEAR(std::abs(f(a, b) - pv(a, b) - s(a, b)), 0.0, 1e-15);
    }
  EXPECT_EQ(pv.name(), "pv-timeordered");
  EXPECT_FALSE(ContractionKernel::custom(grid, CMatrix::Zero(11, 11)).has_closed_form());
}

TEST(StarFunctionals, TwoInsertions) {
  const auto grid = TimeGrid::midpoint(0.0, 2.0, 4);
  const auto d = pauli_jordan_kernel(1.0, grid);
  const auto q1 = FunctionalPolynomial::insertion(1), q3 = FunctionalPolynomial::insertion(3);
  const auto p = star_functionals(q1, q3, d);
  EXPECT_EQ(p.size(), 2u);
  EXPECT_EQ(p.coefficient({0, 0, 0, {1, 3}}), cplx(1.0));
  EXPECT_NEAR(std::abs(p.coefficient({1, 0, 0, {}}) - 0.5 * I * d(1, 3)), 0.0, 1e-16);

  const auto comm = star_functionals(q1, q3, d) - star_functionals(q3, q1, d);
  ASSERT_EQ(comm.size(), 1u);
  EXPECT_NEAR(std::abs(comm.coefficient({1, 0, 0, {}}) - I * d(1, 3)), 0.0, 1e-16);
}

TEST(StarFunctionals, UnitAndScalars) {
  std::mt19937 rng(3);
  const auto grid = TimeGrid::midpoint(0.0, 1.0, 5);
  const auto d = pauli_jordan_kernel(1.0, grid);
  const auto p = random_polynomial(rng, 5, 3, 10);
  EXPECT_EQ(star_functionals(FunctionalPolynomial::constant(1.0), p, d).distance(p), 0.0);
  EXPECT_EQ(star_functionals(p, FunctionalPolynomial::constant(1.0), d).distance(p), 0.0);
  const auto s = star_functionals(FunctionalPolynomial::constant(2.0), FunctionalPolynomial::constant(I), d);
  EXPECT_EQ(s.coefficient({}), 2.0 * I);
}

TEST(StarFunctionals, HigherPairings) {
  // q(a)^2 * q(b)^2 = q^2 q^2 + 4 c q q + 2 c^2, c = (i hbar / 2) D(a, b).
  const auto grid = TimeGrid::midpoint(0.0, 3.0, 2);
  const auto d = pauli_jordan_kernel(1.0, grid);
  const auto qa = FunctionalPolynomial::insertion(0), qb = FunctionalPolynomial::insertion(1);
  const auto p = star_functionals(qa * qa, qb * qb, d);
  const cplx c = 0.5 * I * d(0, 1);
  EXPECT_EQ(p.size(), 3u);
  EXPECT_NEAR(std::abs(p.coefficient({1, 0, 0, {0, 1}}) - 4.0 * c), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(p.coefficient({2, 0, 0, {}}) - 2.0 * c * c), 0.0, 1e-15);
}

TEST(StarFunctionals, AssociativityIsExactWithDyadicKernel) {
  std::mt19937 rng(11);
  const auto grid = TimeGrid::midpoint(0.0, 1.0, 4);
  CMatrix k(4, 4);
  std::uniform_int_distribution<int> num(-8, 8);
  for (int a = 0; a < 4; ++a) {
    k(a, a) = 0.0;
    for (int b = a + 1; b < 4; ++b) {
      k(a, b) = num(rng) / 8.0;
      k(b, a) = -k(a, b);
    }
  }
  const auto kernel = ContractionKernel::custom(grid, k);
  for (int trial = 0; trial < 5; ++trial) {
    const auto a = random_polynomial(rng, 4, 3, 6), b = random_polynomial(rng, 4, 3, 6),
               c = random_polynomial(rng, 4, 3, 6);
    const auto left = star_functionals(star_functionals(a, b, kernel), c, kernel);
    const auto right = star_functionals(a, star_functionals(b, c, kernel), kernel);
    EXPECT_EQ(left.distance(right), 0.0) << "trial " << trial;
    EXPECT_GT(left.size(), 0u);
  }
}

TEST(StarFunctionals, AssociativityWithPauliJordan) {
  std::mt19937 rng(5);
  const auto grid = TimeGrid::simpson(-1.0, 2.0, 5);
  const auto d = pauli_jordan_kernel(1.7, grid);
  const auto a = random_polynomial(rng, 5, 3, 8), b = random_polynomial(rng, 5, 3, 8),
             c = random_polynomial(rng, 5, 3, 8);
  const auto left = star_functionals(star_functionals(a, b, d), c, d);
  const auto right = star_functionals(a, star_functionals(b, c, d), d);
  EXPECT_LT(left.distance(right), 1e-13 * max_coefficient(left));
}

TEST(StarFunctionals, DegreeOverflow) {
  const auto grid = TimeGrid::midpoint(0.0, 1.0, 2);
  const auto d = pauli_jordan_kernel(1.0, grid);
  const auto q = FunctionalPolynomial::insertion(0, 4);
  const auto cube = q * q * q;
  EXPECT_THROW(star_functionals(cube, cube, d), DegreeOverflow);
  EXPECT_THROW(FunctionalPolynomial(2).add({0, 0, 0, {0, 0, 1}}, 1.0), DegreeOverflow);
}

TEST(StarFunctionals, MatchesGridMoyalProductOfLinearSymbols) {
  // q(t_a) * q(t_b) evaluated on phase space against the symbol of the
  // product of the corresponding grid operators.
  const auto g = make_grid(8.0, 64, 0.7);
  const auto time = TimeGrid::midpoint(-1.0, 1.0, 3);
  const double m = 1.0;
  const auto d = pauli_jordan_kernel(m, time);
  const auto p = star_functionals(FunctionalPolynomial::insertion(0), FunctionalPolynomial::insertion(2), d);
  const auto Q = OperatorMatrix::position(g), P = OperatorMatrix::momentum(g);
  const auto op = [&](int node) {
    const double s = m * (time.node(node) - time.t1());
    return cplx(std::cos(s)) * Q + cplx(std::sin(s) / m) * P;
  };
  const Symbol grid_product = weyl_symbol_of(op(0) * op(2));
  EXPECT_LT(weak_distance(p.evaluate(g, time, m), grid_product, probe_centers(1.5, 3)), 1e-8);
}

TEST(StarDyson, LowOrders) {
  const auto grid = TimeGrid::simpson(-3.0, 3.0, 9);
  const auto g = bump(grid, 0.2, 0.8, 0.3), j = bump(grid, -0.4, 0.7, 0.5);
  const auto one = star_dyson(g, j, 1.0, grid, {0, 0}, 4);
  EXPECT_EQ(one.size(), 1u);
  EXPECT_EQ(one.coefficient({}), cplx(1.0));

  const auto s = star_dyson(g, j, 1.0, grid, {1, 2}, 6);
  // (1/i hbar) sum w g q^4 / 4!
  const auto o10 = s.order(1, 0);
  EXPECT_EQ(o10.size(), static_cast<std::size_t>(grid.size()));
  for (int i = 0; i < grid.size(); ++i) {
    const cplx expect = grid.weight(i) * g[i] / 24.0 / I;
    EXPECT_NEAR(std::abs(s.coefficient({-1, 1, 0, {i, i, i, i}}) - expect), 0.0, 1e-15);
    EXPECT_NEAR(std::abs(s.coefficient({-1, 0, 1, {i}}) - grid.weight(i) * j[i] / I), 0.0, 1e-15);
  }
}

TEST(StarDyson, SecondOrderSourceContraction) {
  // Degree-0 part of order (0, 2): (1/i hbar)^2 hbar sum_{a<b} w_a j_a w_b j_b K_pv(a, b).
  const double m = 1.4;
  const auto grid = TimeGrid::midpoint(-2.0, 2.0, 7);
  const auto j = bump(grid, 0.1, 0.9, 1.0);
  const std::vector<double> g(grid.size(), 0.0);
  const auto s = star_dyson(g, j, m, grid, {0, 2}, 2);
  cplx expect = 0.0;
  for (int a = 0; a < grid.size(); ++a)
    for (int b = a + 1; b < grid.size(); ++b) {
      const double tau = grid.node(a) - grid.node(b);
      expect += -grid.weight(a) * j[a] * grid.weight(b) * j[b] * (-I * std::sin(m * std::abs(tau)) / (2 * m));
    }
  EXPECT_NEAR(std::abs(s.coefficient({-1, 0, 2, {}}) - expect), 0.0, 1e-14);
  expect_hbar_grading(s);
}

TEST(StarDyson, OrderCapsAndDegreeBound) {
  const auto grid = TimeGrid::midpoint(0.0, 1.0, 3);
  const std::vector<double> z(3, 0.1);
  EXPECT_THROW(star_dyson(z, z, 1.0, grid, {1, 2}, 5), DegreeOverflow);
  EXPECT_THROW(star_dyson(z, z, 1.0, grid, {3, 0}, 12), InvalidArgument);
  EXPECT_THROW(star_dyson(z, {0.1}, 1.0, grid, {1, 0}, 4), InvalidArgument);
}

TEST(Wick, PvKernelReproducesStarDysonAtAllOrders) {
  const double m = 1.1;
  const auto grid = TimeGrid::simpson(-2.5, 2.5, 7);
  const auto g = bump(grid, 0.3, 0.9, 0.4), j = bump(grid, -0.2, 1.0, 0.7);
  const ContractionKernel pv(KernelKind::PvTimeOrdered, m, grid);
  const auto star = star_dyson(g, j, m, grid, {2, 4}, 12);
  const auto wick = wick_expand(g, j, pv, {2, 4}, 12);
  EXPECT_GT(star.size(), 1000u);
  EXPECT_EQ(star.size(), wick.size());
  for (const auto& [k, c] : star.terms())
    ASSERT_LE(std::abs(c - wick.coefficient(k)), 1e-12 * std::max(1.0, std::abs(c))) << to_json(star.order(0, 0));
  expect_hbar_grading(star);
  expect_hbar_grading(wick);
}

TEST(Wick, FeynmanMinusPvIsTheSymmetricPart) {
  const double m = 0.9;
  const auto grid = TimeGrid::midpoint(-2.0, 2.0, 8);
  const auto j = bump(grid, 0.0, 0.8, 1.0);
  const std::vector<double> g(grid.size(), 0.0);
  const DysonOrders o{0, 2};
  const auto f = wick_expand(g, j, ContractionKernel(KernelKind::Feynman, m, grid), o, 2);
  const auto pv = wick_expand(g, j, ContractionKernel(KernelKind::PvTimeOrdered, m, grid), o, 2);
  const auto sym = wick_expand(g, j, ContractionKernel(KernelKind::SymmetricPart, m, grid), o, 2);
  const auto none = wick_expand(g, j, ContractionKernel::custom(grid, CMatrix::Zero(8, 8)), o, 2);
  EXPECT_LT(((f - pv) - (sym - none)).distance(FunctionalPolynomial(2)), 1e-15);
  // The symmetric part contributes tadpoles (pairs at one node): K(t, t) = 1/(2m).
  EXPECT_GT(std::abs((sym - none).coefficient({-1, 0, 2, {}})), 0.1);
}

TEST(Wick, ZeroOrderIsOne) {
  const auto grid = TimeGrid::midpoint(0.0, 1.0, 3);
  const std::vector<double> z(3, 0.2);
  const auto w = wick_expand(z, z, ContractionKernel(KernelKind::Feynman, 1.0, grid), {0, 0}, 0);
  EXPECT_EQ(w.distance(FunctionalPolynomial::constant(1.0)), 0.0);
}

TEST(Wick, StarDysonAgreesWithTheStarRoute) {
  const auto g = make_grid(8.0, 64, 1.0);
  const FreeEvolution free(g, QuadraticHamiltonian::oscillator());
  PotentialSpec v;
  v.g.pulses.push_back({0.0, 0.5, 0.05});
  v.j.pulses.push_back({0.2, 0.45, 0.05});
  const Symbol s = scattering_operator_star(free, v, 800);
  const auto time = TimeGrid::simpson(v.t1, v.t2, 41);
  const auto dyson = star_dyson(time.sample([&](double t) { return v.g(t); }),
                                time.sample([&](double t) { return v.j(t); }), 1.0, time, {1, 2}, 6);
  const auto centers = probe_centers(1.0, 3);
  const double d = weak_distance(s, dyson.evaluate(g, time, 1.0), centers);
  EXPECT_LT(d, 5e-3);
  // The series carries real information: far from the trivial guess.
  EXPECT_GT(weak_distance(s, Symbol::constant(g, 1.0), centers), 10 * d);
}

TEST(EnergyTransform, PrincipalValueWithSmoothWindow) {
  const double m = 1.0;
  const auto grid = TimeGrid::midpoint(0.0, 1.0, 1);
  const ContractionKernel pv(KernelKind::PvTimeOrdered, m, grid);
  std::vector<double> e;
  for (int i = 0; i <= 120; ++i) e.push_back((i - 60) * 0.05);
  EnergyTransformOptions opt;
  opt.exclude_singular = true;
  const auto t = kernel_energy_transform(pv, e, opt);
  EXPECT_LT(t.max_relative_error, 1e-2);
  EXPECT_NEAR(std::abs(t.constant - I), 0.0, 1e-2);
  const auto zero = std::find(e.begin(), e.end(), 0.0) - e.begin();
  ASSERT_LT(zero, static_cast<long>(e.size()));
  EXPECT_NEAR(std::abs(t.values[zero] - (-t.constant / (m * m))), 0.0, 0.02 * std::abs(t.constant));
  int excluded = 0;
  for (bool x : t.excluded) excluded += x;
  EXPECT_GE(excluded, 36);
  EXPECT_LE(excluded, 40);
}

TEST(EnergyTransform, PauliJordanIsOddAndImaginary) {
  const auto grid = TimeGrid::midpoint(0.0, 1.0, 1);
  const ContractionKernel d(KernelKind::PauliJordan, 1.0, grid);
  const std::vector<double> e{-2.5, -0.3, 0.3, 2.5};
  const auto t = kernel_energy_transform(d, e);
  for (std::size_t i = 0; i < e.size(); ++i) EXPECT_LT(std::abs(t.values[i].real()), 1e-12);
  EXPECT_NEAR(std::abs(t.values[0] + t.values[3]), 0.0, 1e-12);
  EXPECT_NEAR(std::abs(t.values[1] + t.values[2]), 0.0, 1e-12);
}

TEST(EnergyTransform, FeynmanHasResolvedWidth) {
  const double m = 1.0;
  const auto grid = TimeGrid::midpoint(0.0, 1.0, 1);
  const ContractionKernel f(KernelKind::Feynman, m, grid);
  EnergyTransformOptions opt;
  opt.window = TransformWindow::Exponential;
  opt.damping = 0.05;
  const std::vector<double> e{0.0, 0.6, 0.97, 1.0, 1.4, 2.5};
  // Exact transform of (1/2m) e^{-(i m + eps)|tau|}.
  const auto exact = [&](double en) {
    const cplx a = I * m + opt.damping;
    return a / (m * (a * a + en * en));
  };
  EXPECT_THROW(kernel_energy_transform(f, e, opt), InvalidArgument);
  std::vector<double> safe{0.0, 0.6, 0.97, 1.0 + 1e-3, 1.4, 2.5};
  const auto t = kernel_energy_transform(f, safe, opt);
  for (std::size_t i = 0; i < safe.size(); ++i)
    EXPECT_NEAR(std::abs(t.values[i] - exact(safe[i])), 0.0, 1e-6 * std::abs(exact(safe[i])));
  // Near the shell the value stays finite with a large real part,
  // where the principal value blows up.
  EXPECT_LT(std::abs(t.values[3]), 20.0);
  EXPECT_GT(std::abs(t.values[3].real()), 5.0);
  EXPECT_GT(std::abs(t.reference[3]), 400.0);
}

TEST(EnergyTransform, NeedsClosedForm) {
  const auto grid = TimeGrid::midpoint(0.0, 1.0, 2);
  EXPECT_THROW(kernel_energy_transform(ContractionKernel::custom(grid, CMatrix::Zero(2, 2)), {0.0}),
               InvalidArgument);
}

TEST(Serialization, JsonRoundTripAndOrder) {
  const auto grid = TimeGrid::simpson(-1.0, 1.0, 5);
  const auto g = bump(grid, 0.0, 0.5, 0.2), j = bump(grid, 0.1, 0.5, 0.3);
  const auto s = star_dyson(g, j, 1.0, grid, {1, 2}, 6);
  const std::string text = to_json(s);
  const auto back = functional_from_json(text);
  EXPECT_EQ(back.distance(s), 0.0);
  EXPECT_EQ(to_json(back), text);
  EXPECT_LT(text.find("\"hbar_power\": -3"), text.find("\"hbar_power\": -2"));
  EXPECT_THROW(functional_from_json("{\"terms\": []}"), InvalidArgument);
}
