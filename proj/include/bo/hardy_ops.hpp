//==============================================================================
// hardy_ops.hpp
// Toeplitz and Hankel operators with symbol conj(g_inf), g_inf = e^{i d^{-1} u},
// the explicit Toeplitz inverse f0 -> g_+ Pi(g_- f0), and the weighted
// operator G(u): v -> ( n^{-1/2} (v conj g_inf)^(n) )_{n >= 1}.
//
// Every operator is a dense matrix on the working window. Compositions of
// truncated operators are only trusted on the lower half of the window.
//==============================================================================
#pragma once

#include <cmath>
#include <vector>

#include <Eigen/Dense>

#include "bo/birkhoff.hpp"
#include "bo/fourier.hpp"
#include "bo/lax.hpp"

namespace bo {

// g_+ = exp(i d^{-1} Pi u) on modes 0..K and g_- = exp(i d^{-1} (Id - Pi) u)
// on modes -K..0. For real u, g_- = 1/conj(g_+) and g_+ g_- = g_inf has
// unit modulus; g_+ and g_- individually do not.
struct SymbolPair {
  ModeArray g_plus;
  ModeArray g_minus;
};

namespace detail {

// exp of the trigonometric polynomial `exponent`, sampled on P points.
inline std::vector<cplx> exp_on_grid(const ModeArray& exponent, int P) {
  auto vals = synthesize(exponent, P);
  for (auto& v : vals) v = std::exp(v);
  return vals;
}

inline int symbol_grid(int K, int M) { return fft_size(4 * std::max(K, M) + 2); }

}  // namespace detail

inline SymbolPair make_symbols(const RealPotential& u, int K) {
  const int M = u.cutoff();
  ModeArray plus(0, std::max(M, 1));
  ModeArray minus(-std::max(M, 1), 0);
  for (int n = 1; n <= M; ++n) {
    plus.at(n) = u.coeff(n) / static_cast<double>(n);      // i * u^(n)/(in)
    minus.at(-n) = u.coeff(-n) / static_cast<double>(-n);
  }
  const int P = detail::symbol_grid(K, M);
  return SymbolPair{analyze(detail::exp_on_grid(plus, P), 0, K), analyze(detail::exp_on_grid(minus, P), -K, 0)};
}

// conj(g_inf) on modes -K..K.
inline ModeArray conj_g_infinity(const RealPotential& u, int K) {
  ModeArray e = antiderivative(u);
  e *= -kI;
  return analyze(detail::exp_on_grid(e, detail::symbol_grid(K, u.cutoff())), -K, K);
}

// T(m,k) = c^(m-k), 0 <= m,k <= M.
inline Eigen::MatrixXcd toeplitz_matrix(const ModeArray& symbol, int M) {
  Eigen::MatrixXcd T(M + 1, M + 1);
  for (int m = 0; m <= M; ++m)
    for (int k = 0; k <= M; ++k) T(m, k) = symbol[m - k];
  return T;
}

// H(m,j) = c^(m+j): input mode -j (0 <= j <= J) to output mode m (0 <= m <= M).
inline Eigen::MatrixXcd hankel_matrix(const ModeArray& symbol, int M, int J) {
  Eigen::MatrixXcd H(M + 1, J + 1);
  for (int m = 0; m <= M; ++m)
    for (int j = 0; j <= J; ++j) H(m, j) = symbol[m + j];
  return H;
}

inline Eigen::VectorXcd as_vector(const HardyFunction& f) {
  Eigen::VectorXcd v(f.cutoff() + 1);
  for (int n = 0; n <= f.cutoff(); ++n) v(n) = f.coeff(n);
  return v;
}
inline HardyFunction as_hardy(const Eigen::VectorXcd& v) {
  HardyFunction f(static_cast<int>(v.size()) - 1);
  for (int n = 0; n < v.size(); ++n) f.set(n, v(n));
  return f;
}

// Pi(conj(g_inf) f) on the window of f.
inline HardyFunction toeplitz_apply(const RealPotential& u, const HardyFunction& f) {
  const int M = f.cutoff();
  return as_hardy(toeplitz_matrix(conj_g_infinity(u, M), M) * as_vector(f));
}

// g_+ Pi(g_- f0). Exact on the window of f0: only g_- modes >= -M and g_+
// modes <= M reach it.
inline HardyFunction toeplitz_inverse(const RealPotential& u, const HardyFunction& f0) {
  const int M = f0.cutoff();
  const SymbolPair g = make_symbols(u, M);
  const ModeArray h = mult(g.g_minus, f0.modes(), 0, M);
  return szego_project(mult(g.g_plus, h, 0, M));
}

// Pi(conj(g_inf) f) for f on modes <= 0, reported on 0..M.
inline HardyFunction hankel_apply(const RealPotential& u, const ModeArray& f, int M) {
  if (f.hi() > 0) throw InvalidArgument("hankel_apply: input has positive modes");
  const int J = -f.lo();
  Eigen::VectorXcd x(J + 1);
  for (int j = 0; j <= J; ++j) x(j) = f[-j];
  return as_hardy(hankel_matrix(conj_g_infinity(u, M + J), M, J) * x);
}

// G(u)v = ( n^{-1/2} (v conj g_inf)^(n) )_{n = 1..MB}
inline SequenceState G_apply(const RealPotential& u, const RealPotential& v, int MB) {
  const ModeArray prod = mult(v.modes(), conj_g_infinity(u, MB + v.cutoff()), 1, MB);
  SequenceState out{std::vector<cplx>(static_cast<std::size_t>(MB)), 0.5};
  for (int n = 1; n <= MB; ++n) out.z[static_cast<std::size_t>(n - 1)] = prod[n] / std::sqrt(static_cast<double>(n));
  return out;
}

struct CompactnessReport {
  Eigen::MatrixXd G;          // weighted real matrix of G(u), same layout as JacobianReport::weighted
  Eigen::MatrixXd A;          // weighted d_u Phi + G(u)
  Eigen::VectorXd singular_values;  // of A, descending
};

// A(u) = pi d_u Phi + G(u) on modes 1..K, weighted H^s -> h^{s+1/2}.
inline CompactnessReport compact_part(const RealPotential& u, int K, const JacobianOptions& opt = {}) {
  const JacobianReport J = jacobian(u, K, opt);
  CompactnessReport rep;
  rep.G.resize(2 * K, 2 * K);
  for (int k = 1; k <= K; ++k)
    for (int part = 0; part < 2; ++part) {
      RealPotential dir(k);
      dir.set(k, part == 0 ? cplx{1.0} : kI);
      const SequenceState g = G_apply(u, dir, K);
      for (int n = 1; n <= K; ++n) {
        const double w = std::pow(n, opt.s + 0.5) * std::pow(k, -opt.s);
        rep.G(2 * (n - 1), 2 * (k - 1) + part) = w * g(n).real();
        rep.G(2 * (n - 1) + 1, 2 * (k - 1) + part) = w * g(n).imag();
      }
    }
  rep.A = J.weighted + rep.G;
  rep.singular_values = Eigen::JacobiSVD<Eigen::MatrixXd>(rep.A).singularValues();
  return rep;
}

}  // namespace bo
