#include "bo/inverse.hpp"

#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "bo/error.hpp"

namespace bo {
namespace {

// a (2cos x) + b (2 sin kx)
RealPotential cos_sin(double a, int k, double b) {
  RealPotential u(k);
  u.set(1, a);
  u.set(k, u.coeff(k) - kI * b);
  return u;
}

RealPotential smooth_potential(std::uint64_t seed, int K, double norm) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> U(-1.0, 1.0);
  RealPotential u(K);
  for (int n = 1; n <= K; ++n) u.set(n, cplx{U(rng), U(rng)} * std::exp(-0.5 * n));
  return (norm / sobolev_norm(u, 0.0)) * u;
}

double distance(const RealPotential& a, const RealPotential& b) {
  const int K = std::max(a.cutoff(), b.cutoff());
  return sobolev_norm(a.truncated(K) - b.truncated(K), 0.0);
}

NewtonConfig config(int M) {
  NewtonConfig c;
  c.M = M;
  return c;
}

TEST(LinearGuess, Examples) {
  EXPECT_EQ(sobolev_norm(linear_guess(BirkhoffState(5)), 0.0), 0.0);
  BirkhoffState z(1);
  z.at(1) = -0.1;
  EXPECT_NEAR(std::abs(linear_guess(z).coeff(1) - 0.1), 0.0, 1e-16);
  BirkhoffState w(4);
  w.at(4) = cplx(0.0, 1.0);
  EXPECT_NEAR(std::abs(linear_guess(w).coeff(4) - cplx(0.0, -2.0)), 0.0, 1e-15);
}

TEST(LinearGuess, QuadraticDefect) {
  const BirkhoffState dir = birkhoff_transform(smooth_potential(90, 4, 1.0), 64).resized(8);
  const BirkhoffMap phi = make_birkhoff_map(64, 8);
  std::vector<double> err;
  for (double eps : {1e-2, 1e-3}) {
    BirkhoffState z = dir;
    for (auto& v : z.zeta) v *= eps;
    err.push_back(sequence_distance(phi(linear_guess(z)), z, 0.5));
  }
  EXPECT_NEAR(std::log10(err[0] / err[1]), 2.0, 0.1);
}

TEST(NewtonInvert, ZeroTargetNeedsNoIterations) {
  const InversionResult r = newton_invert(BirkhoffState(10), config(64));
  EXPECT_EQ(r.iterations, 0);
  EXPECT_EQ(sobolev_norm(r.u, 0.0), 0.0);
  EXPECT_TRUE(r.log.empty());
}

TEST(NewtonInvert, Roundtrip) {
  const RealPotential u0 = cos_sin(0.2, 3, 0.05);
  const BirkhoffState z = birkhoff_transform(u0, 64);
  int calls = 0;
  const InversionResult r = newton_invert(z, config(std::max(64, 2 * z.cutoff())), std::nullopt,
                                          [&](const NewtonIterate&) { ++calls; });
  EXPECT_LE(distance(r.u, u0), 1e-8);
  EXPECT_LE(r.residual, 1e-10);
  EXPECT_EQ(calls, static_cast<int>(r.log.size()));
  EXPECT_EQ(r.iterations, static_cast<int>(r.log.size()));
}

TEST(NewtonInvert, QuadraticConvergence) {
  const RealPotential u0 = smooth_potential(91, 6, 0.4);
  const BirkhoffState z = birkhoff_transform(u0, 64).resized(16);
  const InversionResult r = newton_invert(z, config(64));
  ASSERT_GE(r.log.size(), 2u);
  for (std::size_t k = 0; k + 1 < r.log.size(); ++k) {
    EXPECT_EQ(r.log[k].step_length, 1.0);
    const double ratio = r.log[k + 1].residual / std::pow(r.log[k].residual, 2);
    EXPECT_LE(ratio, 100.0) << k;
  }
}

TEST(NewtonInvert, WarmStart) {
  const RealPotential u0 = smooth_potential(92, 6, 0.3);
  const BirkhoffState z = birkhoff_transform(u0, 64).resized(12);
  const InversionResult cold = newton_invert(z, config(64));
  const InversionResult warm = newton_invert(z, config(64), cold.u);
  EXPECT_EQ(warm.iterations, 0);
  EXPECT_LE(distance(cold.u, warm.u), 1e-15);
}

TEST(NewtonInvert, SingleCoordinateTarget) {
  BirkhoffState z(16);
  z.at(1) = -0.89598;
  const InversionResult r = newton_invert(z, config(64));
  const BirkhoffState back = make_birkhoff_map(64, 16)(r.u);
  EXPECT_NEAR(std::abs(back(1)), 0.89598, 1e-10);
  for (int n = 2; n <= 16; ++n) EXPECT_LE(std::abs(back(n)), 1e-10);
}

TEST(NewtonInvert, Errors) {
  BirkhoffState z(40);
  z.at(1) = 0.1;
  EXPECT_THROW(newton_invert(z, config(64)), InvalidArgument);

  NewtonConfig bad = config(64);
  bad.contraction = 1.5;
  EXPECT_THROW(newton_invert(z.resized(8), bad), InvalidArgument);

  NewtonConfig few = config(64);
  few.max_iter = 1;
  few.resid_tol = 1e-300;
  BirkhoffState y = birkhoff_transform(smooth_potential(93, 4, 0.4), 64).resized(8);
  EXPECT_THROW(newton_invert(y, few), NonConvergenceError);
}

TEST(FiniteGap, IsProjection) {
  const RealPotential w = smooth_potential(94, 6, 0.4);
  const NewtonConfig cfg = config(64);
  const RealPotential w2 = finite_gap(w, 2, cfg).u;
  const RealPotential w22 = finite_gap(w2, 2, cfg).u;
  EXPECT_LE(distance(w2, w22), 1e-8);
  const BirkhoffState z = birkhoff_transform(w2, 64);
  const BirkhoffState zw = birkhoff_transform(w, 64);
  for (int n = 1; n <= 2; ++n) EXPECT_NEAR(std::abs(z(n) - zw(n)), 0.0, 1e-9);
  for (int n = 3; n <= std::min(z.cutoff(), 20); ++n) EXPECT_LE(std::abs(z(n)), 1e-9);
}

TEST(FiniteGap, ApproximationImprovesWithN) {
  const RealPotential w = smooth_potential(95, 6, 0.4);
  const NewtonConfig cfg = config(64);
  double prev = sobolev_norm(w, 0.0);
  for (int N : {1, 2, 4, 6}) {
    const double d = distance(finite_gap(w, N, cfg).u, w);
    EXPECT_LT(d, prev) << N;
    prev = d;
  }
}

TEST(FiniteGap, Errors) {
  RealPotential w(1);
  w.set(1, 0.2);
  EXPECT_THROW(finite_gap(w, 0, config(64)), InvalidArgument);
  EXPECT_THROW(finite_gap(RealPotential(1), 2, config(64)), InvalidArgument);
}

TEST(VerifyFiniteGap, ZeroPotential) {
  const FiniteGapReport rep = verify_finite_gap(RealPotential(1), 0, 32);
  EXPECT_LE(rep.max_lambda_defect, 1e-14);
  EXPECT_LE(rep.max_one_product, 1e-14);
  EXPECT_LE(rep.max_eigfn_defect, 1e-14);
  EXPECT_LE(rep.expansion_of_one, 1e-14);
}

TEST(VerifyFiniteGap, ConstructedThreeGapPotential) {
  const RealPotential w = cos_sin(0.2, 3, 0.05);
  const RealPotential w3 = finite_gap(w, 3, config(128)).u;
  const FiniteGapReport rep = verify_finite_gap(w3, 3, 128);
  EXPECT_LE(rep.max_lambda_defect, 1e-6);
  EXPECT_LE(rep.max_one_product, 1e-6);
  EXPECT_LE(rep.max_eigfn_defect, 1e-6);
  EXPECT_LE(rep.expansion_of_one, 1e-6);
}

TEST(VerifyFiniteGap, DetectsGenericPotential) {
  const FiniteGapReport rep = verify_finite_gap(smooth_potential(96, 6, 0.4), 2, 64);
  EXPECT_GT(rep.max_one_product, 1e-6);
}

}  // namespace
}  // namespace bo
