#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <cstring>
#include <sstream>

#include "oracles.hpp"
#include "wmlab/errors.hpp"
#include "wmlab/phase_space.hpp"
#include "wmlab/serialize.hpp"

using namespace wmlab;
using std::numbers::pi;

namespace {

double max_abs(const CMatrix& m) { return m.cwiseAbs().maxCoeff(); }

Symbol gaussian_symbol(const PhaseSpaceGrid& g, double q0, double p0, double s) {
  return Symbol::sample(g, [&](double q, double p) {
    return std::exp(-((q - q0) * (q - q0) + (p - p0) * (p - p0)) / (2 * s * s));
  });
}

}  // namespace

TEST(Grid, StepsFromDefinitions) {
  const auto g = make_grid(10.0, 128, 1.0);
  EXPECT_DOUBLE_EQ(g.dq(), 0.15625);
  EXPECT_NEAR(g.dp(), pi / 10.0, 1e-15);
  EXPECT_NEAR(g.momentum_extent(), 64 * pi / 10.0, 1e-12);
  EXPECT_DOUBLE_EQ(g.q(0), -10.0);
}

TEST(Grid, ExactnessIdentity) {
  const auto g = make_grid(pi, 16, 0.5);
  EXPECT_NEAR(g.dq() * g.dp() * g.points(), 2 * pi * 0.5, 1e-13);
}

TEST(Grid, RejectsBadParameters) {
  EXPECT_THROW(make_grid(10.0, 7, 1.0), InvalidArgument);
  EXPECT_THROW(make_grid(10.0, 6, 1.0), InvalidArgument);
  EXPECT_THROW(make_grid(0.0, 16, 1.0), InvalidArgument);
  EXPECT_THROW(make_grid(1.0, 16, -1.0), InvalidArgument);
}

TEST(Weyl, IdentityAndConstant) {
  const auto g = make_grid(10.0, 64, 1.0);
  const auto one = weyl_symbol_of(OperatorMatrix::identity(g));
  EXPECT_LT(max_abs(one.values() - CMatrix::Ones(64, 64)), 1e-12);
  const auto id = weyl_quantize(Symbol::constant(g, 1.0));
  EXPECT_LT(max_abs(id.entries() - CMatrix::Identity(64, 64)), 1e-12);
}

TEST(Weyl, PositionMultiplicationHasSymbolQ) {
  const auto g = make_grid(10.0, 128, 1.0);
  const auto s = weyl_symbol_of(OperatorMatrix::position(g));
  EXPECT_LT(sup_norm(s - Symbol::position(g)), 1e-10);
}

TEST(Weyl, MomentumSymbolQuantizesToSpectralMomentum) {
  const auto g = make_grid(10.0, 128, 1.0);
  const auto m = weyl_quantize(Symbol::momentum(g));
  EXPECT_LT(max_abs(m.entries() - OperatorMatrix::momentum(g).entries()), 1e-10);
}

TEST(Weyl, GroundStateProjectorSymbol) {
  const auto g = make_grid(10.0, 128, 1.0);
  const auto psi = oracle::ground_state(g);
  const CVector v = psi.amplitudes();
  const OperatorMatrix proj(g, v * v.adjoint() * g.dq());
  const auto s = weyl_symbol_of(proj);
  const auto expected =
      Symbol::sample(g, [](double q, double p) { return 2.0 * std::exp(-(q * q + p * p)); });
  EXPECT_LT(sup_norm(s - expected), 1e-6);
}

TEST(Weyl, MatchesDirectBasisSum) {
  for (int n : {8, 10, 12, 16}) {
    const auto g = make_grid(3.0, n, 0.7);
    const auto a = oracle::random_band_limited(g, 7u + n, false);
    // full-band random symbol, including Nyquist content
    CMatrix v = CMatrix::Random(n, n);
    const Symbol full(g, v);
    EXPECT_LT(max_abs(weyl_quantize(a).entries() - oracle::naive_quantize(a)), 1e-11) << n;
    EXPECT_LT(max_abs(weyl_quantize(full).entries() - oracle::naive_quantize(full)), 1e-11) << n;
  }
}

TEST(Weyl, RoundTripRandomBandLimited) {
  const auto g = make_grid(10.0, 128, 1.0);
  double worst = 0.0;
  for (unsigned s = 0; s < 50; ++s) {
    const auto a = oracle::random_band_limited(g, 100 + s, s % 2 == 0);
    worst = std::max(worst, sup_norm(weyl_symbol_of(weyl_quantize(a)) - a));
  }
  EXPECT_LT(worst, 1e-10);
}

TEST(Weyl, RoundTripArbitraryMatrix) {
  const auto g = make_grid(4.0, 32, 1.0);
  const OperatorMatrix m(g, CMatrix::Random(32, 32));
  EXPECT_LT(max_abs(weyl_quantize(weyl_symbol_of(m)).entries() - m.entries()), 1e-12);
}

TEST(Weyl, HermiticityCorrespondenceBothDirections) {
  for (int n : {10, 16, 18, 64}) {
    const auto g = make_grid(5.0, n, 1.0);
    // real symbol -> Hermitian, including non-band-limited real data
    const Symbol real_sym(g, CMatrix::Random(n, n).real().cast<cplx>());
    EXPECT_LT(weyl_quantize(real_sym).hermiticity_defect(), 1e-10) << n;
    // Hermitian -> real symbol
    CMatrix r = CMatrix::Random(n, n);
    const OperatorMatrix h(g, r + r.adjoint());
    EXPECT_LT(weyl_symbol_of(h).max_imag(), 1e-10) << n;
    // a non-Hermitian matrix has a non-real symbol
    const OperatorMatrix nh(g, r);
    EXPECT_GT(weyl_symbol_of(nh).max_imag(), 1e-3) << n;
  }
}

TEST(Weyl, TraceIdentity) {
  const auto g = make_grid(10.0, 128, 1.0);
  for (unsigned s = 0; s < 5; ++s) {
    const auto a = oracle::random_band_limited(g, 300 + s, false);
    const cplx lhs = weyl_quantize(a).entries().trace();
    EXPECT_LT(std::abs(lhs - trace_of(a)), 1e-8);
  }
}

TEST(Weyl, TracePairingEqualsOperatorTrace) {
  const auto g = make_grid(6.0, 32, 0.5);
  const Symbol a(g, CMatrix::Random(32, 32));
  const Symbol b(g, CMatrix::Random(32, 32));
  const cplx ops = (weyl_quantize(a) * weyl_quantize(b)).entries().trace();
  EXPECT_LT(std::abs(ops - trace_pairing(a, b)), 1e-10);
}

// The symmetrized product (QP + PQ)/2 is reproduced by the symbol qp once
// the symbol is cut off smoothly inside the box; tested on localized states.
TEST(Weyl, SymmetrizedProductOnLocalizedStates) {
  const auto g = make_grid(10.0, 128, 1.0);
  const double P = g.momentum_extent();
  auto cut = [](double x, double r) { return 0.5 * std::erfc((std::abs(x) - r) / 0.6); };
  const auto qp = Symbol::sample(g, [&](double q, double p) {
    return q * p * cut(q, 0.7 * 10.0) * cut(p, 0.7 * P);
  });
  const auto Q = OperatorMatrix::position(g);
  const auto Pm = OperatorMatrix::momentum(g);
  const CMatrix sym = 0.5 * (Q * Pm + Pm * Q).entries();
  const CMatrix wq = weyl_quantize(qp).entries();
  double worst = 0.0;
  for (double q0 : {-1.0, 0.0, 1.5})
    for (double p0 : {-1.0, 0.5}) {
      const auto a = WaveFunction::gaussian(g, q0, p0).amplitudes();
      const auto b = WaveFunction::gaussian(g, -q0 * 0.5, p0 + 0.5).amplitudes();
      worst = std::max(worst, std::abs(a.dot((wq - sym) * b)) * g.dq());
    }
  EXPECT_LT(worst, 1e-8);
}

TEST(Wigner, GroundStateGaussian) {
  const auto g = make_grid(10.0, 128, 1.0);
  const auto w = wigner_of_state(oracle::ground_state(g));
  const auto expected =
      Symbol::sample(g, [](double q, double p) { return std::exp(-(q * q + p * p)) / pi; });
  EXPECT_LT(sup_norm(w - expected), 1e-8);
  EXPECT_LT(w.max_imag(), 1e-12);
  EXPECT_NEAR(w.values().sum().real() * g.cell(), 1.0, 1e-8);
}

TEST(Wigner, GridAlignedShiftTranslates) {
  const auto g = make_grid(10.0, 128, 1.0);
  const int m = 9;
  const auto psi = WaveFunction::gaussian(g, -1.0, 0.7, 0.8);
  CVector shifted(g.points());
  for (int j = 0; j < g.points(); ++j) shifted((j + m) % g.points()) = psi.amplitudes()(j);
  const auto w0 = wigner_of_state(psi);
  const auto w1 = wigner_of_state(WaveFunction(g, shifted));
  double worst = 0.0;
  for (int j = 0; j < g.points(); ++j)
    for (int k = 0; k < g.points(); ++k)
      worst = std::max(worst, std::abs(w1((j + m) % g.points(), k) - w0(j, k)));
  EXPECT_LT(worst, 1e-12);
}

TEST(Wigner, MarginalIsDensity) {
  const auto g = make_grid(8.0, 64, 0.8);
  CVector v = CVector::Random(64);
  const WaveFunction psi = WaveFunction(g, v).normalized();
  const auto w = wigner_of_state(psi);
  for (int j = 0; j < 64; ++j) {
    const cplx marg = w.values().row(j).sum() * g.dp();
    EXPECT_NEAR(marg.real(), std::norm(psi.amplitudes()(j)), 1e-8);
    EXPECT_NEAR(marg.imag(), 0.0, 1e-10);
  }
}

TEST(Wigner, RejectsUnnormalizedWhenStrict) {
  const auto g = make_grid(8.0, 32, 1.0);
  const WaveFunction psi(g, CVector::Ones(32));
  EXPECT_THROW(wigner_of_state(psi), InvalidArgument);
  EXPECT_NO_THROW(wigner_of_state(psi, false));
}

TEST(Wigner, ExpectationMatchesHilbertSpace) {
  const auto g = make_grid(8.0, 64, 1.0);
  const auto psi = WaveFunction::gaussian(g, 0.5, -1.0);
  const Symbol a(g, CMatrix::Random(64, 64));
  const cplx direct = psi.amplitudes().dot(weyl_quantize(a).entries() * psi.amplitudes()) * g.dq();
  EXPECT_LT(std::abs(expectation(a, psi) - direct), 1e-10);
}

TEST(Diagnostics, BandLimitAndBoundaryMass) {
  const auto g = make_grid(10.0, 128, 1.0);
  const auto blob = gaussian_symbol(g, 0.0, 0.0, 1.0);
  EXPECT_LT(band_limit_excess(blob), 1e-10);
  EXPECT_LT(boundary_mass(blob), 1e-12);
  EXPECT_GT(band_limit_excess(Symbol::position(g)), 1e-3);
  EXPECT_GT(boundary_mass(Symbol::position(g)), 0.1);
  EXPECT_LT(boundary_mass(WaveFunction::gaussian(g, 0.0, 0.0)), 1e-12);
}

TEST(Diagnostics, SpectralDerivative) {
  const auto g = make_grid(10.0, 128, 1.0);
  const auto f = gaussian_symbol(g, 0.3, -0.2, 1.1);
  const auto dq = spectral_derivative(f, 1, 0);
  const auto expected = Symbol::sample(g, [](double q, double p) {
    return -(q - 0.3) / (1.21) * std::exp(-((q - 0.3) * (q - 0.3) + (p + 0.2) * (p + 0.2)) / 2.42);
  });
  EXPECT_LT(sup_norm(dq - expected), 1e-10);
}

TEST(Serialize, BinaryRoundTripAndLayout) {
  const auto g = make_grid(2.5, 8, 0.25);
  const Symbol s(g, CMatrix::Random(8, 8));
  std::stringstream buf;
  write_binary(buf, s);
  const std::string bytes = buf.str();
  ASSERT_EQ(bytes.size(), 4u + 4 + 8 + 8 + 64 * 16);
  EXPECT_EQ(bytes.substr(0, 4), "WMSY");
  EXPECT_EQ(static_cast<unsigned char>(bytes[4]), 8u);
  double re01;
  std::memcpy(&re01, bytes.data() + 24 + 16, 8);  // row 0, column 1
  EXPECT_EQ(re01, s(0, 1).real());
  const auto back = read_symbol_binary(buf);
  EXPECT_EQ(back.grid(), g);
  EXPECT_EQ(max_abs(back.values() - s.values()), 0.0);
}

TEST(Serialize, OperatorMagicChecked) {
  const auto g = make_grid(2.5, 8, 0.25);
  std::stringstream buf;
  write_binary(buf, OperatorMatrix::identity(g));
  EXPECT_THROW(read_symbol_binary(buf), InvalidArgument);
}

TEST(Serialize, CsvHeaderAndRows) {
  const auto g = make_grid(2.5, 8, 0.25);
  std::stringstream out;
  write_csv(out, Symbol::constant(g, cplx(1.0, -2.0)));
  std::string line;
  std::getline(out, line);
  EXPECT_EQ(line, "q,p,re,im");
  int rows = 0;
  while (std::getline(out, line)) ++rows;
  EXPECT_EQ(rows, 64);
}
