#include "bo/fourier.hpp"

#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "bo/error.hpp"

namespace bo {
namespace {

RealPotential random_real(std::mt19937_64& rng, int M) {
  std::normal_distribution<double> N(0.0, 1.0);
  RealPotential u(M);
  for (int n = 1; n <= M; ++n) u.set(n, cplx{N(rng), N(rng)} / static_cast<double>(n));
  return u;
}

ModeArray random_modes(std::mt19937_64& rng, int lo, int hi) {
  std::normal_distribution<double> N(0.0, 1.0);
  ModeArray f(lo, hi);
  for (int n = lo; n <= hi; ++n) f.at(n) = {N(rng), N(rng)};
  return f;
}

double max_diff(const ModeArray& a, const ModeArray& b) {
  double d = 0.0;
  for (int n = std::min(a.lo(), b.lo()); n <= std::max(a.hi(), b.hi()); ++n) d = std::max(d, std::abs(a[n] - b[n]));
  return d;
}

RealPotential cos_mode(int k, double amp) {
  RealPotential u(k);
  u.set(k, amp / 2.0);
  return u;
}

TEST(RealPotential, NegativeModesAreConjugates) {
  RealPotential u(3);
  u.set(2, {1.0, -2.0});
  EXPECT_EQ(u.coeff(-2), cplx(1.0, 2.0));
  EXPECT_EQ(u.coeff(0), cplx{});
  EXPECT_EQ(u.coeff(7), cplx{});
}

TEST(RealPotential, GridValuesAreReal) {
  std::mt19937_64 rng(1);
  const RealPotential u = random_real(rng, 16);
  double imag = 1.0;
  const auto vals = to_grid(u, 64, &imag);
  EXPECT_EQ(vals.size(), 64u);
  EXPECT_LE(imag, 1e-14);
}

TEST(SobolevNorm, Examples) {
  EXPECT_EQ(sobolev_norm(RealPotential(4), 0.0), 0.0);
  EXPECT_NEAR(sobolev_norm(cos_mode(1, 2.0), 0.0), std::sqrt(2.0), 1e-15);
  HardyFunction f(3);
  f.set(2, 1.0);
  EXPECT_NEAR(sobolev_norm(f, 1.0), 2.0, 1e-15);
}

TEST(SobolevNorm, ParsevalAgainstQuadrature) {
  std::mt19937_64 rng(2);
  const RealPotential u = random_real(rng, 20);
  const int P = 128;
  const auto vals = to_grid(u, P);
  double quad = 0.0;
  for (double v : vals) quad += v * v;
  quad /= P;
  const double s = sobolev_norm(u, 0.0);
  EXPECT_NEAR(s * s, quad, 1e-12 * quad);
}

TEST(HilbertTransform, Examples) {
  EXPECT_EQ(sobolev_norm(hilbert_transform(RealPotential(3)), 0.0), 0.0);
  // cos x -> sin x
  const RealPotential h1 = hilbert_transform(cos_mode(1, 1.0));
  EXPECT_NEAR(std::abs(h1.coeff(1) - cplx(0.0, -0.5)), 0.0, 1e-16);
  // sin 3x -> -cos 3x
  RealPotential s3(3);
  s3.set(3, cplx(0.0, -0.5));
  const RealPotential h3 = hilbert_transform(s3);
  EXPECT_NEAR(std::abs(h3.coeff(3) - cplx(-0.5, 0.0)), 0.0, 1e-16);
}

TEST(HilbertTransform, SquaresToMinusIdentity) {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 5; ++trial) {
    const RealPotential u = random_real(rng, 24);
    const RealPotential hh = hilbert_transform(hilbert_transform(u));
    EXPECT_LE(sobolev_norm(hh + u, 0.0), 1e-14 * sobolev_norm(u, 0.0));
  }
}

TEST(SzegoProject, Examples) {
  const HardyFunction p = szego_project(cos_mode(1, 1.0).modes());
  EXPECT_EQ(p.coeff(0), cplx{});
  EXPECT_NEAR(std::abs(p.coeff(1) - 0.5), 0.0, 1e-16);
  RealPotential s1(1);
  s1.set(1, 1.0 / (2.0 * kI));
  EXPECT_NEAR(std::abs(szego_project(s1.modes()).coeff(1) - 1.0 / (2.0 * kI)), 0.0, 1e-16);
}

TEST(SzegoProject, Idempotent) {
  std::mt19937_64 rng(4);
  const ModeArray f = random_modes(rng, -6, 6);
  const HardyFunction p = szego_project(f);
  const HardyFunction pp = szego_project(p.modes());
  EXPECT_EQ(max_diff(p.modes(), pp.modes()), 0.0);
}

TEST(Antiderivative, Examples) {
  EXPECT_EQ(sobolev_norm(antiderivative(RealPotential(2)), 0.0), 0.0);
  // cos x -> sin x
  const ModeArray a = antiderivative(cos_mode(1, 1.0));
  EXPECT_NEAR(std::abs(a[1] - cplx(0.0, -0.5)), 0.0, 1e-16);
  EXPECT_NEAR(std::abs(a[-1] - cplx(0.0, 0.5)), 0.0, 1e-16);
  // 2cos 2x -> sin 2x
  const ModeArray b = antiderivative(cos_mode(2, 2.0));
  EXPECT_NEAR(std::abs(b[2] - cplx(0.0, -0.5)), 0.0, 1e-16);
  EXPECT_EQ(b[0], cplx{});
}

TEST(Antiderivative, RejectsNonzeroMean) {
  ModeArray f(-1, 1);
  f.at(0) = 0.3;
  EXPECT_THROW(antiderivative(f), InvalidArgument);
}

TEST(Mult, Examples) {
  std::mt19937_64 rng(5);
  const ModeArray f = random_modes(rng, -4, 4);
  ModeArray one(0, 0);
  one.at(0) = 1.0;
  EXPECT_LE(max_diff(mult(f, one), f), 1e-14);

  ModeArray e1(1, 1);
  e1.at(1) = 1.0;
  const ModeArray e2 = mult(e1, e1);
  EXPECT_NEAR(std::abs(e2[2] - 1.0), 0.0, 1e-15);

  const ModeArray c = cos_mode(1, 2.0).modes();
  const ModeArray sq = mult(c, c);
  EXPECT_NEAR(std::abs(sq[0] - 2.0), 0.0, 1e-14);
  EXPECT_NEAR(std::abs(sq[2] - 1.0), 0.0, 1e-14);
  EXPECT_NEAR(std::abs(sq[-2] - 1.0), 0.0, 1e-14);
  EXPECT_NEAR(std::abs(sq[1]), 0.0, 1e-14);
}

TEST(Mult, CommutativeAndMatchesConvolution) {
  std::mt19937_64 rng(6);
  const ModeArray f = random_modes(rng, -7, 9);
  const ModeArray g = random_modes(rng, -5, 3);
  const ModeArray fg = mult(f, g), gf = mult(g, f);
  ModeArray direct(f.lo() + g.lo(), f.hi() + g.hi());
  for (int a = f.lo(); a <= f.hi(); ++a)
    for (int b = g.lo(); b <= g.hi(); ++b) direct.at(a + b) += f[a] * g[b];
  double scale = 0.0;
  for (auto v : direct.values()) scale = std::max(scale, std::abs(v));
  EXPECT_LE(max_diff(fg, gf), 1e-12 * scale);
  EXPECT_LE(max_diff(fg, direct), 1e-12 * scale);
}

TEST(Mult, WindowRestriction) {
  std::mt19937_64 rng(7);
  const ModeArray f = random_modes(rng, -5, 5);
  const ModeArray full = mult(f, f);
  const ModeArray part = mult(f, f, 2, 6);
  EXPECT_EQ(part.lo(), 2);
  EXPECT_EQ(part.hi(), 6);
  for (int n = 2; n <= 6; ++n) EXPECT_NEAR(std::abs(part[n] - full[n]), 0.0, 1e-13);
}

TEST(InnerAndPair, Examples) {
  ModeArray e1(1, 1), e2(2, 2);
  e1.at(1) = 1.0;
  e2.at(2) = 1.0;
  EXPECT_EQ(inner(e1, e1), cplx(1.0));
  EXPECT_EQ(inner(e1, e2), cplx{});
  const ModeArray c = cos_mode(1, 2.0).modes();
  EXPECT_NEAR(std::abs(pair(c, c) - 2.0), 0.0, 1e-15);
}

TEST(InnerAndPair, ConjugateSymmetry) {
  std::mt19937_64 rng(8);
  const ModeArray f = random_modes(rng, -3, 5), g = random_modes(rng, -4, 2);
  EXPECT_NEAR(std::abs(inner(f, g) - std::conj(inner(g, f))), 0.0, 1e-14);
  EXPECT_NEAR(std::abs(pair(f, g) - pair(g, f)), 0.0, 1e-14);
}

TEST(Shift, Examples) {
  const HardyFunction s1 = shift(HardyFunction::one(3));
  EXPECT_EQ(s1.coeff(0), cplx{});
  EXPECT_EQ(s1.coeff(1), cplx(1.0));

  HardyFunction top(3);
  top.set(3, 1.0);
  EXPECT_EQ(sobolev_norm(shift(top), 0.0), 0.0);

  HardyFunction f(3);
  f.set(0, 2.0);
  f.set(1, cplx(0.0, 3.0));
  const HardyFunction sf = shift(f);
  EXPECT_EQ(sf.coeff(1), cplx(2.0));
  EXPECT_EQ(sf.coeff(2), cplx(0.0, 3.0));
  EXPECT_EQ(sf.coeff(0), cplx{});
}

TEST(TranslateReflect, Consistency) {
  std::mt19937_64 rng(9);
  const RealPotential u = random_real(rng, 10);
  const RealPotential back = translate(translate(u, 0.7), -0.7);
  EXPECT_LE(sobolev_norm(back - u, 0.0), 1e-14);
  const RealPotential rr = reflect(reflect(u));
  EXPECT_LE(sobolev_norm(rr - u, 0.0), 1e-15);
  EXPECT_NEAR(sobolev_norm(translate(u, 1.3), 0.0), sobolev_norm(u, 0.0), 1e-14);
}

TEST(FftSize, SmoothSizes) {
  for (int n : {1, 7, 97, 257, 1000}) {
    int m = fft_size(n);
    EXPECT_GE(m, n);
    for (int p : {2, 3, 5})
      while (m % p == 0) m /= p;
    EXPECT_EQ(m, 1);
  }
}

}  // namespace
}  // namespace bo
