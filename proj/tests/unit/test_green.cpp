#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

#include "oracles.hpp"
#include "wmlab/errors.hpp"
#include "wmlab/green.hpp"

using namespace wmlab;

namespace {

constexpr cplx I{0.0, 1.0};

struct Setup {
  PhaseSpaceGrid grid = make_grid(8.0, 64, 1.0);
  FreeEvolution free{grid, QuadraticHamiltonian::oscillator()};
  PotentialSpec base() const {
    PotentialSpec v;
    v.t1 = -5.0;
    v.t2 = 5.0;
    return v;
  }
};

const Setup& setup() {
  static const Setup s;
  return s;
}

// q_I(t) / (i hbar) with q_I(t) = q cos(t - t1) + p sin(t - t1).
Symbol insertion_oracle(const PhaseSpaceGrid& g, double t, double t1) {
  const double s = t - t1;
  return Symbol::sample(g, [&](double q, double p) { return (q * std::cos(s) + p * std::sin(s)) / (I * g.hbar()); });
}

}  // namespace

TEST(SourcePulse, TailMassAndValidation) {
  const SourcePulse p{0.0, 0.5, 1.0};
  EXPECT_NEAR(p.tail_mass(-1.0, 1.0), std::erfc(2.0 / std::sqrt(2.0)), 1e-15);
  EXPECT_NO_THROW(p.validate(-4.0, 4.0));
  EXPECT_THROW(p.validate(-2.0, 2.0), SupportError);
  EXPECT_THROW((SourcePulse{0.0, 0.0, 1.0}.validate(-4.0, 4.0)), InvalidArgument);
  // Unit mass.
  const auto env = p.envelope();
  double mass = 0.0;
  for (int i = -4000; i <= 4000; ++i) mass += env(i * 1e-3) * 1e-3;
  EXPECT_NEAR(mass, 1.0, 1e-12);
}

TEST(GreenRequest, Validation) {
  GreenRequest r;
  r.base = setup().base();
  r.times = {};
  EXPECT_THROW(r.validate(), InvalidArgument);
  r.times = {0.0, 0.5, 1.0};
  EXPECT_THROW(r.validate(), InvalidArgument);
  r.times = {0.5, 0.5};
  EXPECT_THROW(r.validate(), InvalidArgument);
  r.times = {6.0};
  EXPECT_THROW(r.validate(), InvalidArgument);
  r.times = {4.0};
  EXPECT_THROW(r.validate(), SupportError);
  r.times = {0.0};
  r.epsilons = {0.1, 0.2};
  EXPECT_THROW(r.validate(), InvalidArgument);
  r.epsilons = {0.1, 0.0};
  EXPECT_THROW(r.validate(), InvalidArgument);
  r.extrapolate = false;
  EXPECT_NO_THROW(r.validate());
}

TEST(Green, ZeroAmplitudeIsDegenerate) {
  GreenRequest r;
  r.base = setup().base();
  r.times = {0.0};
  r.epsilons = {0.0};
  r.sigmas = {0.2};
  r.extrapolate = false;
  const auto res = green_function(setup().free, r);
  EXPECT_EQ(res.runs, 0);
  EXPECT_EQ(res.value.max_abs(), 0.0);
}

TEST(Green, FirstOrderIsTheInsertedField) {
  GreenRequest r;
  r.base = setup().base();
  r.times = {0.3};
  r.steps = 1000;
  const auto res = green_function(setup().free, r);
  EXPECT_EQ(res.runs, 18);
  const auto centers = probe_centers(1.0, 3);
  EXPECT_LT(weak_distance(res.value, insertion_oracle(setup().grid, 0.3, r.base.t1), centers), 1e-5);
  EXPECT_LT(res.cauchy_residual, 1e-3);

  // Report layout and the epsilon^2 law of the raw differences.
  ASSERT_EQ(res.report.size(), 9u + 3u + 1u);
  std::vector<double> eps, err;
  for (int k = 0; k < 3; ++k) {
    eps.push_back(res.report[6 + k].epsilon);
    err.push_back(res.report[6 + k].residual);
  }
  EXPECT_NEAR(oracle::loglog_slope(eps, err), 2.0, 0.3);
  std::istringstream csv(green_report_csv(res));
  std::string line;
  std::getline(csv, line);
  EXPECT_EQ(line, "epsilon,sigma,estimate_norm,residual");
  int rows = 0;
  while (std::getline(csv, line)) ++rows;
  EXPECT_EQ(rows, 13);
}

TEST(Green, FirstOrderTransportsWithTheFreeFlow) {
  // Moving the insertion by a whole number of steps is the free transport.
  GreenRequest r;
  r.base = setup().base();
  r.steps = 1000;
  r.times = {-0.5};
  const auto early = green_function(setup().free, r);
  r.times = {0.3};
  const auto late = green_function(setup().free, r);
  const Symbol moved = setup().free.transport(early.value, 0.8);
  EXPECT_LT(weak_distance(moved, late.value, probe_centers(2.0, 3)), 1e-6);
}

TEST(Green, UnresolvedSigmaLadderFailsToConverge) {
  GreenRequest r;
  r.base = setup().base();
  r.times = {0.0};
  r.steps = 500;
  r.epsilons = {0.1};
  r.sigmas = {0.4, 0.35};
  EXPECT_THROW(green_function(setup().free, r), ConvergenceError);
}

TEST(Green, SecondOrderIsSymmetric) {
  GreenRequest r;
  r.base = setup().base();
  r.steps = 500;
  r.epsilons = {0.1};
  r.sigmas = {0.2};
  r.extrapolate = false;
  r.times = {0.3, -1.7};
  const auto a = green_function(setup().free, r);
  r.times = {-1.7, 0.3};
  const auto b = green_function(setup().free, r);
  EXPECT_EQ(a.runs, 4);
  EXPECT_LT(sup_norm(a.value - b.value), 1e-10 * sup_norm(a.value));
}

TEST(Green, MomentCheck) {
  PotentialSpec v0 = setup().base();
  v0.g.pulses.push_back({0.0, 0.5, 0.05});
  MomentCheckOptions opt;
  opt.steps = 1000;
  const auto rep = feynman_moment_check(setup().free, 0.3, -1.7, v0, opt);
  EXPECT_FALSE(rep.quadratic);
  EXPECT_LT(rep.symmetry_defect, 1e-10);
  EXPECT_LT(rep.oracle_residual, 1e-4);
  EXPECT_LT(rep.ordering_residual, 1e-4);
  EXPECT_LT(rep.contraction_residual, 1e-4);
  EXPECT_LT(rep.first_order_residual, 5e-3);
  EXPECT_GT(rep.first_order_shift, 10 * rep.first_order_residual);
}

TEST(Green, MomentCheckRejectsOtherHamiltonians) {
  const FreeEvolution particle(setup().grid, QuadraticHamiltonian::free_particle());
  EXPECT_THROW(feynman_moment_check(particle, 0.3, -1.7, setup().base()), InvalidArgument);
}
