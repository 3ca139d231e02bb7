#include "bo/hardy_ops.hpp"

#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "bo/error.hpp"
#include "bo/inverse.hpp"

namespace bo {
namespace {

RealPotential smooth_potential(std::uint64_t seed, int K, double norm) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> U(-1.0, 1.0);
  RealPotential u(K);
  for (int n = 1; n <= K; ++n) u.set(n, cplx{U(rng), U(rng)} * std::exp(-0.5 * n));
  return (norm / sobolev_norm(u, 0.0)) * u;
}

HardyFunction random_hardy(std::mt19937_64& rng, int M, int band) {
  std::uniform_real_distribution<double> U(-1.0, 1.0);
  HardyFunction f(M);
  for (int n = 0; n <= std::min(M, band); ++n) f.set(n, {U(rng), U(rng)});
  return f;
}

double lower_half_error(const HardyFunction& a, const HardyFunction& b) {
  double acc = 0.0;
  for (int n = 0; n <= a.cutoff() / 2; ++n) acc += std::norm(a.coeff(n) - b.coeff(n));
  return std::sqrt(acc);
}

RealPotential two_cos() {
  RealPotential u(1);
  u.set(1, 1.0);
  return u;
}

TEST(MakeSymbols, ZeroPotential) {
  const SymbolPair g = make_symbols(RealPotential(1), 8);
  EXPECT_NEAR(std::abs(g.g_plus[0] - 1.0), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(g.g_minus[0] - 1.0), 0.0, 1e-15);
  EXPECT_NEAR(sobolev_norm(g.g_plus, 0.0), 1.0, 1e-15);
  EXPECT_NEAR(sobolev_norm(g.g_minus, 0.0), 1.0, 1e-15);
}

TEST(MakeSymbols, TaylorCoefficients) {
  const SymbolPair g = make_symbols(two_cos(), 12);
  double fact = 1.0;
  for (int k = 0; k <= 12; ++k) {
    if (k > 0) fact *= k;
    EXPECT_NEAR(std::abs(g.g_plus[k] - 1.0 / fact), 0.0, 1e-14) << k;
    EXPECT_NEAR(std::abs(g.g_minus[-k] - (k % 2 ? -1.0 : 1.0) / fact), 0.0, 1e-14) << k;
  }
}

TEST(MakeSymbols, Factorization) {
  const RealPotential u = smooth_potential(50, 8, 0.6);
  const int K = 64;
  const SymbolPair g = make_symbols(u, K);
  EXPECT_NEAR(std::abs(g.g_minus[0] - 1.0), 0.0, 1e-10);
  const ModeArray prod = mult(g.g_plus, g.g_minus, -K / 2, K / 2);
  const ModeArray ginf = g_infinity(u, K).coeffs;
  for (int n = -K / 2; n <= K / 2; ++n) EXPECT_NEAR(std::abs(prod[n] - ginf[n]), 0.0, 1e-10) << n;
  // g_- = 1/conj(g_+): the product g_- conj(g_+) is 1
  ModeArray gpc(-K, 0);
  for (int n = 0; n <= K; ++n) gpc.at(-n) = std::conj(g.g_plus[n]);
  const ModeArray one = mult(g.g_minus, gpc, -K / 2, 0);
  for (int n = -K / 2; n <= 0; ++n) EXPECT_NEAR(std::abs(one[n] - (n == 0 ? 1.0 : 0.0)), 0.0, 1e-10) << n;
}

TEST(ToeplitzApply, ZeroPotentialIsIdentity) {
  std::mt19937_64 rng(51);
  const HardyFunction f = random_hardy(rng, 16, 16);
  const HardyFunction Tf = toeplitz_apply(RealPotential(1), f);
  EXPECT_LE(sobolev_norm(Tf.modes() - f.modes(), 0.0), 1e-15);
}

TEST(ToeplitzApply, MapsGPlusToOne) {
  const RealPotential u = smooth_potential(52, 6, 0.5);
  const int M = 64;
  const SymbolPair g = make_symbols(u, M);
  HardyFunction gp(M);
  for (int n = 0; n <= M; ++n) gp.set(n, g.g_plus[n]);
  const HardyFunction t = toeplitz_apply(u, gp);
  EXPECT_LE(sobolev_norm(t.modes() - HardyFunction::one(M).modes(), 0.0), 1e-8);
}

TEST(ToeplitzApply, Linear) {
  std::mt19937_64 rng(53);
  const RealPotential u = smooth_potential(54, 6, 0.5);
  const HardyFunction f = random_hardy(rng, 32, 32), h = random_hardy(rng, 32, 32);
  const cplx a{0.3, -1.2};
  HardyFunction comb(32);
  for (int n = 0; n <= 32; ++n) comb.set(n, f.coeff(n) + a * h.coeff(n));
  const ModeArray lhs = toeplitz_apply(u, comb).modes();
  const ModeArray rhs = toeplitz_apply(u, f).modes() + a * toeplitz_apply(u, h).modes();
  EXPECT_LE(sobolev_norm(lhs - rhs, 0.0), 1e-13);
}

TEST(ToeplitzInverse, ZeroPotential) {
  std::mt19937_64 rng(55);
  const HardyFunction f = random_hardy(rng, 16, 16);
  EXPECT_LE(sobolev_norm(toeplitz_inverse(RealPotential(1), f).modes() - f.modes(), 0.0), 1e-14);
}

TEST(ToeplitzInverse, OneMapsToGPlus) {
  const RealPotential u = smooth_potential(56, 6, 0.5);
  const int M = 64;
  const HardyFunction h = toeplitz_inverse(u, HardyFunction::one(M));
  const ModeArray gp = make_symbols(u, M).g_plus;
  for (int n = 0; n <= M; ++n) EXPECT_NEAR(std::abs(h.coeff(n) - gp[n]), 0.0, 1e-12);
}

TEST(ToeplitzInverse, RoundtripOnLowerHalf) {
  std::mt19937_64 rng(57);
  for (std::uint64_t seed = 58; seed < 61; ++seed) {
    const RealPotential u = smooth_potential(seed, 8, 0.5);
    const HardyFunction f0 = random_hardy(rng, 64, 10);
    const HardyFunction back = toeplitz_apply(u, toeplitz_inverse(u, f0));
    EXPECT_LE(lower_half_error(back, f0), 1e-6);
  }
}

TEST(ToeplitzInverse, AgreesWithDenseSolve) {
  std::mt19937_64 rng(61);
  const RealPotential u = smooth_potential(62, 8, 0.5);
  const int M = 64;
  const HardyFunction f0 = random_hardy(rng, M, 10);
  const Eigen::MatrixXcd T = toeplitz_matrix(conj_g_infinity(u, M), M);
  const HardyFunction dense = as_hardy(T.partialPivLu().solve(as_vector(f0)));
  EXPECT_LE(lower_half_error(dense, toeplitz_inverse(u, f0)), 1e-6);
}

TEST(HankelApply, ZeroPotentialKillsNegativeModes) {
  ModeArray f(-1, 0);
  f.at(-1) = 1.0;
  EXPECT_EQ(sobolev_norm(hankel_apply(RealPotential(1), f, 8), 0.0), 0.0);
}

TEST(HankelApply, MatchesProjectedProduct) {
  std::mt19937_64 rng(63);
  std::uniform_real_distribution<double> U(-1.0, 1.0);
  const RealPotential u = smooth_potential(64, 6, 0.5);
  const int M = 16, J = 8;
  ModeArray f(-J, 0);
  for (int n = -J; n <= 0; ++n) f.at(n) = {U(rng), U(rng)};
  const HardyFunction H = hankel_apply(u, f, M);
  const ModeArray direct = mult(conj_g_infinity(u, M + J), f, 0, M);
  for (int m = 0; m <= M; ++m) EXPECT_NEAR(std::abs(H.coeff(m) - direct[m]), 0.0, 1e-13) << m;
}

TEST(HankelApply, RejectsPositiveModes) {
  ModeArray f(0, 1);
  EXPECT_THROW(hankel_apply(RealPotential(1), f, 4), InvalidArgument);
}

TEST(HankelApply, AdjointConsistency) {
  std::mt19937_64 rng(65);
  std::normal_distribution<double> N(0.0, 1.0);
  const RealPotential u = smooth_potential(66, 6, 0.5);
  const int M = 12, J = 6;
  const Eigen::MatrixXcd H = hankel_matrix(conj_g_infinity(u, M + J), M, J);
  Eigen::VectorXcd f(J + 1), g(M + 1);
  for (int j = 0; j <= J; ++j) f(j) = {N(rng), N(rng)};
  for (int m = 0; m <= M; ++m) g(m) = {N(rng), N(rng)};
  EXPECT_NEAR(std::abs(g.dot(H * f) - (H.adjoint() * g).dot(f)), 0.0, 1e-12);
}

TEST(HankelApply, FiniteRankTruncationsConverge) {
  const RealPotential u = smooth_potential(67, 6, 0.5);
  const int M = 32, J = 32;
  const Eigen::MatrixXcd H = hankel_matrix(conj_g_infinity(u, M + J), M, J);
  double prev = H.norm();
  for (int j = 2; j <= 16; j += 2) {
    const double tail = H.rightCols(J - j).jacobiSvd().singularValues()(0);
    EXPECT_LT(tail, prev) << j;
    prev = tail;
  }
  EXPECT_LE(prev, 1e-6);
}

TEST(GApply, ZeroPotential) {
  const RealPotential v = smooth_potential(68, 6, 1.0);
  const SequenceState g = G_apply(RealPotential(1), v, 6);
  for (int n = 1; n <= 6; ++n) EXPECT_NEAR(std::abs(g(n) - v.coeff(n) / std::sqrt(n)), 0.0, 1e-15);
}

TEST(GApply, IsMinusLinearizationAtZero) {
  const RealPotential v = smooth_potential(69, 6, 1.0);
  const SequenceState g = G_apply(RealPotential(1), v, 6);
  const BirkhoffState d = linearized_coords(v, 6);
  for (int n = 1; n <= 6; ++n) EXPECT_NEAR(std::abs(g(n) + d(n)), 0.0, 1e-15);
}

TEST(GApply, Linear) {
  const RealPotential u = smooth_potential(70, 6, 0.5);
  const RealPotential v = smooth_potential(71, 6, 1.0), w = smooth_potential(72, 6, 1.0);
  const SequenceState a = G_apply(u, v + 2.5 * w, 8);
  const SequenceState b = G_apply(u, v, 8), c = G_apply(u, w, 8);
  for (int n = 1; n <= 8; ++n) EXPECT_NEAR(std::abs(a(n) - b(n) - 2.5 * c(n)), 0.0, 1e-14);
}

TEST(CompactPart, SingularValuesDecayOnTwoGapPotential) {
  RealPotential w(2);
  w.set(1, 0.2);
  w.set(2, 0.1);
  NewtonConfig cfg;
  cfg.M = 64;
  const RealPotential u = finite_gap(w, 2, cfg).u;
  const int K = 20;
  const CompactnessReport rep = compact_part(u, K);
  const Eigen::VectorXd& s = rep.singular_values;
  for (int k = 1; k < s.size(); ++k) EXPECT_LE(s(k), s(k - 1) * (1.0 + 1e-12));
  // complex singular values come in real pairs; k sigma_k stays bounded (one order of smoothing)
  for (int k = 1; k <= K - 2; ++k) EXPECT_LE(k * s(2 * (k - 1)), 1.5 * s(0)) << k;
  EXPECT_LE(s(2 * 15) / s(0), 0.1);
  // rows n > N decay like 1/n
  for (int n = 6; n <= K; ++n) {
    const double nA = n * rep.A.middleRows(2 * (n - 1), 2).norm();
    EXPECT_GT(nA, 0.2);
    EXPECT_LT(nA, 0.5);
  }
  // A(0) = 0
  EXPECT_LE(compact_part(RealPotential(1), 6).A.norm(), 1e-8);
}

}  // namespace
}  // namespace bo
