//==============================================================================
// lax.hpp
// Truncated Lax operator L_u = D - T_u on the Hardy space, restricted to the
// monomials e^{inx}, 0 <= n <= M, and the normalized spectral data built
// from it: eigenvalues, gaps, phase-fixed eigenfunctions and the scaling
// factors kappa_n, mu_n.
//
// Only indices n <= trust_cutoff (M_B) carry phase-fixed eigenvectors and
// scaling factors: the top of the Galerkin window is never converged.
//==============================================================================
#pragma once

#include <cmath>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "bo/error.hpp"
#include "bo/fourier.hpp"

namespace bo {

struct LaxMatrix {
  int M = 0;
  Eigen::MatrixXcd A;     // A(j,k) = j delta_jk - u^(j-k), 0 <= j,k <= M
  int dropped_modes = 0;  // modes of u above M that cannot enter the matrix
};

inline LaxMatrix assemble_lax(const RealPotential& u, int M) {
  if (M < 0) throw InvalidArgument("assemble_lax: negative cutoff");
  LaxMatrix L;
  L.M = M;
  L.A = Eigen::MatrixXcd::Zero(M + 1, M + 1);
  for (int j = 0; j <= M; ++j) {
    L.A(j, j) = static_cast<double>(j);
    for (int k = 0; k <= M; ++k)
      if (j != k) L.A(j, k) = -u.coeff(j - k);
  }
  for (int n = M + 1; n <= u.cutoff(); ++n)
    if (u.coeff(n) != cplx{}) ++L.dropped_modes;
  return L;
}

struct Eigenpairs {
  Eigen::VectorXd values;   // ascending
  Eigen::MatrixXcd vectors;  // column n pairs with values(n)
};

// Dense Hermitian eigensolver; every pair must satisfy |Av - lv| <= 1e-10 |A|.
inline Eigenpairs eigen_decompose(const Eigen::MatrixXcd& A) {
  if (A.rows() != A.cols()) throw InvalidArgument("eigen_decompose: matrix not square");
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(A);
  if (solver.info() != Eigen::Success) throw EigenSolverError("eigen_decompose: solver did not converge", 0);
  Eigenpairs out{solver.eigenvalues(), solver.eigenvectors()};
  const double scale = std::max(1.0, out.values.cwiseAbs().maxCoeff());
  for (Eigen::Index n = 0; n < out.values.size(); ++n) {
    const double r = (A * out.vectors.col(n) - out.values(n) * out.vectors.col(n)).norm();
    if (!(r <= 1e-10 * scale))
      throw EigenSolverError("eigen_decompose: residual " + std::to_string(r) + " at index " + std::to_string(n),
                             static_cast<int>(n));
    if (n > 0 && out.values(n) - out.values(n - 1) <= 1e-10 * scale)
      throw DegenerateSpectrumError(
          "eigen_decompose: eigenvalues " + std::to_string(n - 1) + " and " + std::to_string(n) + " collide",
          static_cast<int>(n - 1), static_cast<int>(n));
  }
  return out;
}
inline Eigenpairs eigen_decompose(const LaxMatrix& L) { return eigen_decompose(L.A); }

// gamma_n = lambda_n - lambda_{n-1} - 1. Index 0 is unused and zero.
inline std::vector<double> gaps(const std::vector<double>& lambdas) {
  std::vector<double> g(lambdas.size(), 0.0);
  for (std::size_t n = 1; n < lambdas.size(); ++n) g[n] = lambdas[n] - lambdas[n - 1] - 1.0;
  return g;
}

// <S f_{n-1} | f_n> with S = multiplication by e^{ix} inside the window.
inline cplx shifted_overlap(const Eigen::MatrixXcd& V, int n) {
  cplx acc{};
  for (Eigen::Index m = 1; m < V.rows(); ++m) acc += V(m - 1, n - 1) * std::conj(V(m, n));
  return acc;
}

// Rotates f_0 so that f_0^(0) > 0, then each f_n (n <= upto) so that
// <S f_{n-1}|f_n> > 0. Columns above `upto` are left untouched.
inline Eigen::MatrixXcd phase_fix(Eigen::MatrixXcd V, int upto, double phase_tol = 1e-12) {
  upto = std::min<int>(upto, static_cast<int>(V.cols()) - 1);
  if (upto < 0) return V;
  const cplx c0 = V(0, 0);
  if (std::abs(c0) < phase_tol)
    throw PhaseChainError("phase_fix: |<f_0|1>| below phase tolerance (truncation failure)", 0);
  V.col(0) *= std::conj(c0) / std::abs(c0);
  for (int n = 1; n <= upto; ++n) {
    const cplx p = shifted_overlap(V, n);
    if (std::abs(p) < phase_tol)
      throw PhaseChainError("phase_fix: |<S f_" + std::to_string(n - 1) + "|f_" + std::to_string(n) +
                                ">| below phase tolerance; raise M or lower M_B",
                            n);
    V.col(n) *= p / std::abs(p);
  }
  return V;
}

// kappa_n from the spectrum alone:
//   kappa_n = 1/(lambda_n - lambda_0) * prod_{1<=p<=P, p != n} (1 - gamma_p/(lambda_p - lambda_n)),
//   kappa_0 = prod_{1<=p<=P} (1 - gamma_p/(lambda_p - lambda_0)).
// For a finite-gap spectrum and n > N this reduces to
//   n kappa_n = n/(n - lambda_0) prod_{p<=N} (1 + gamma_p/(n - lambda_p)).
inline double kappa_product(const std::vector<double>& lambdas, const std::vector<double>& gap, int n, int P) {
  double prod = n == 0 ? 1.0 : 1.0 / (lambdas[static_cast<std::size_t>(n)] - lambdas[0]);
  for (int p = 1; p <= P; ++p) {
    if (p == n) continue;
    const auto up = static_cast<std::size_t>(p);
    prod *= 1.0 - gap[up] / (lambdas[up] - lambdas[static_cast<std::size_t>(n)]);
  }
  return prod;
}

struct SpectralOptions {
  double gap_tol = 1e-10;    // gamma_n <= gap_tol counts as a closed gap
  double ratio_gap_min = 1e-6;  // below this, kappa_n comes from the product formula
  double conv_tol = 1e-9;    // convergence screen on lambda_n(M) vs lambda_n(M/2)
  double phase_tol = 1e-12;  // normalization chain
  int trust_cutoff = -1;     // >= 0: use this M_B and skip the screen
  int max_trust = -1;        // >= 0: cap on the screened M_B
};

// Windows smaller than this are toy truncations: the screen has no M/2
// window worth comparing against, so every index is trusted.
inline constexpr int kMinScreenedCutoff = 8;

struct LaxSpectrum {
  int M = 0;
  int trust_cutoff = 0;              // M_B
  int dropped_modes = 0;             // modes of u above M ignored by the matrix
  std::vector<double> lambdas;       // 0..M
  std::vector<double> gaps;          // 1..M, index 0 unused
  Eigen::MatrixXcd eigvecs;          // column n = f_n; phase-fixed for n <= M_B
  std::vector<cplx> one_products;    // <1|f_n> = conj f_n^(0), n = 0..M_B
  std::vector<double> kappas;        // 0..M_B
  std::vector<double> mus;           // 1..M_B, index 0 unused
  std::vector<bool> kappa_from_product;  // closed gaps use the product formula

  HardyFunction eigenfunction(int n) const {
    HardyFunction f(M);
    for (int m = 0; m <= M; ++m) f.set(m, eigvecs(m, n));
    return f;
  }
};

// Largest n such that |lambda_k(M) - lambda_k(M/2)| <= tol for every k <= n.
inline int convergence_screen(const std::vector<double>& fine, const Eigen::VectorXd& coarse, double tol) {
  int n = -1;
  for (Eigen::Index k = 0; k < coarse.size() && k < static_cast<Eigen::Index>(fine.size()); ++k) {
    if (std::abs(fine[static_cast<std::size_t>(k)] - coarse(k)) > tol) break;
    n = static_cast<int>(k);
  }
  return std::max(n, 0);
}

// Fills one_products, kappas, mus for n <= M_B of an already phase-fixed spectrum.
// kappa_n = |<1|f_n>|^2 / gamma_n loses ~eps/gamma_n relative accuracy, so
// small gaps take kappa_n from the product formula over p <= max(M_B, M/2).
inline void scaling_factors(LaxSpectrum& sp, double gap_tol = 1e-10, double ratio_gap_min = 1e-6) {
  const int MB = sp.trust_cutoff;
  const int P = std::max(MB, sp.M / 2);
  const auto size = static_cast<std::size_t>(MB + 1);
  sp.one_products.assign(size, cplx{});
  sp.kappas.assign(size, 0.0);
  sp.mus.assign(size, 0.0);
  sp.kappa_from_product.assign(size, false);
  for (int n = 0; n <= MB; ++n) sp.one_products[static_cast<std::size_t>(n)] = std::conj(sp.eigvecs(0, n));
  sp.kappas[0] = std::norm(sp.eigvecs(0, 0));
  for (int n = 1; n <= MB; ++n) {
    const auto un = static_cast<std::size_t>(n);
    sp.mus[un] = std::pow(shifted_overlap(sp.eigvecs, n).real(), 2);
    const double b2 = std::norm(sp.one_products[un]);
    if (sp.gaps[un] <= gap_tol && b2 > gap_tol)
      throw SpectralCorruptionError("scaling_factors: closed gap " + std::to_string(n) +
                                        " with |<1|f_n>| above sqrt(gap_tol) (truncation corruption)",
                                    n);
    if (sp.gaps[un] > ratio_gap_min) {
      sp.kappas[un] = b2 / sp.gaps[un];
    } else {
      sp.kappas[un] = kappa_product(sp.lambdas, sp.gaps, n, P);
      sp.kappa_from_product[un] = true;
    }
  }
}

inline LaxSpectrum compute_spectrum(const RealPotential& u, int M, const SpectralOptions& opt = {}) {
  const LaxMatrix L = assemble_lax(u, M);
  const Eigenpairs eig = eigen_decompose(L);

  LaxSpectrum sp;
  sp.M = M;
  sp.dropped_modes = L.dropped_modes;
  sp.lambdas.assign(eig.values.data(), eig.values.data() + eig.values.size());
  sp.gaps = gaps(sp.lambdas);

  if (opt.trust_cutoff >= 0) {
    sp.trust_cutoff = std::min(opt.trust_cutoff, M);
  } else if (M < kMinScreenedCutoff) {
    sp.trust_cutoff = M;
  } else {
    const LaxMatrix half = assemble_lax(u, M / 2);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> coarse(half.A, Eigen::EigenvaluesOnly);
    if (coarse.info() != Eigen::Success) throw EigenSolverError("compute_spectrum: screen solve failed", 0);
    sp.trust_cutoff = convergence_screen(sp.lambdas, coarse.eigenvalues(), opt.conv_tol);
  }
  if (opt.max_trust >= 0) sp.trust_cutoff = std::min(sp.trust_cutoff, opt.max_trust);

  sp.eigvecs = phase_fix(eig.vectors, sp.trust_cutoff, opt.phase_tol);
  scaling_factors(sp, opt.gap_tol, opt.ratio_gap_min);
  return sp;
}

// |L f_n - lambda_n f_n| inside the Galerkin window.
inline double eigen_residual(const RealPotential& u, const LaxSpectrum& sp, int n) {
  const LaxMatrix L = assemble_lax(u, sp.M);
  return (L.A * sp.eigvecs.col(n) - sp.lambdas[static_cast<std::size_t>(n)] * sp.eigvecs.col(n)).norm();
}

// First-order eigenvalue variation along v: -<T_v f_n | f_n>.
inline double eigenvalue_variation(const LaxSpectrum& sp, const RealPotential& v, int n) {
  cplx acc{};
  for (int j = 0; j <= sp.M; ++j)
    for (int k = 0; k <= sp.M; ++k) acc += v.coeff(j - k) * sp.eigvecs(k, n) * std::conj(sp.eigvecs(j, n));
  return -acc.real();
}

// g_n = f_n e^{-inx}, carried on modes -n..M-n.
inline ModeArray g_function(const LaxSpectrum& sp, int n) {
  ModeArray g(-n, sp.M - n);
  for (int m = 0; m <= sp.M; ++m) g.at(m - n) = sp.eigvecs(m, n);
  return g;
}

// |D g_n - (lambda_n - n) g_n - Pi_{>= -n}(u g_n)|_0, including the leakage of
// u g_n above the window.
inline double g_residual(const RealPotential& u, const LaxSpectrum& sp, int n) {
  const ModeArray g = g_function(sp, n);
  const ModeArray ug = mult(u.modes(), g, -n, sp.M - n + u.cutoff());
  const double shiftl = sp.lambdas[static_cast<std::size_t>(n)] - n;
  double acc = 0.0;
  for (int m = -n; m <= ug.hi(); ++m) acc += std::norm(static_cast<double>(m) * g[m] - shiftl * g[m] - ug[m]);
  return std::sqrt(acc);
}

struct GInfinity {
  ModeArray coeffs;            // modes -K..K
  double max_modulus_error = 0.0;  // max_j ||g(x_j)| - 1| of the truncated series
  double residual = 0.0;       // |D g - u g|_0 on the window
};

// g_inf = exp(i d_x^{-1} u), exponentiated on a fine grid and truncated to |n| <= K.
inline GInfinity g_infinity(const RealPotential& u, int K) {
  const int P = fft_size(4 * std::max(K, u.cutoff()) + 2);
  const auto phase = synthesize(antiderivative(u), P);
  std::vector<cplx> vals(phase.size());
  for (std::size_t j = 0; j < vals.size(); ++j) vals[j] = std::exp(kI * phase[j].real());
  GInfinity out;
  out.coeffs = analyze(vals, -K, K);
  for (const auto& v : synthesize(out.coeffs, P)) out.max_modulus_error = std::max(out.max_modulus_error, std::abs(std::abs(v) - 1.0));
  const ModeArray ug = mult(u.modes(), out.coeffs, -K, K);
  double acc = 0.0;
  for (int m = -K; m <= K; ++m) acc += std::norm(static_cast<double>(m) * out.coeffs[m] - ug[m]);
  out.residual = std::sqrt(acc);
  return out;
}

}  // namespace bo
