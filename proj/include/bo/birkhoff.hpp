//==============================================================================
// birkhoff.hpp
// Birkhoff coordinates zeta_n = <1|f_n> / sqrt(kappa_n), n = 1..M_B, and the
// diagnostics that certify them: finite-difference gradients, the Gardner
// bracket, canonical relations, the trace identity and the Jacobian.
//==============================================================================
#pragma once

#include <cmath>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "bo/error.hpp"
#include "bo/fourier.hpp"
#include "bo/lax.hpp"

namespace bo {

struct SourceMeta {
  std::string potential_hash;
  int M = 0;
  double gap_tol = 0.0;
  double conv_tol = 0.0;
};

struct BirkhoffState {
  std::vector<cplx> zeta;  // zeta[n-1] = zeta_n
  std::optional<SourceMeta> meta;

  BirkhoffState() = default;
  explicit BirkhoffState(int MB) : zeta(static_cast<std::size_t>(MB)) {}
  explicit BirkhoffState(std::vector<cplx> z) : zeta(std::move(z)) {}

  int cutoff() const { return static_cast<int>(zeta.size()); }
  cplx operator()(int n) const { return (n >= 1 && n <= cutoff()) ? zeta[static_cast<std::size_t>(n - 1)] : cplx{}; }
  cplx& at(int n) {
    if (n < 1 || n > cutoff()) throw InvalidArgument("BirkhoffState: index " + std::to_string(n) + " not in 1..M_B");
    return zeta[static_cast<std::size_t>(n - 1)];
  }
  // Zero-padded (or truncated) copy on 1..MB.
  BirkhoffState resized(int MB) const {
    BirkhoffState out(MB);
    for (int n = 1; n <= MB; ++n) out.at(n) = (*this)(n);
    out.meta = meta;
    return out;
  }
  SequenceState as_sequence(double beta) const { return SequenceState{zeta, beta}; }
};

// sum_n <n>^{2 beta} |a_n - b_n|^2, over the longer of the two cutoffs.
inline double sequence_distance(const BirkhoffState& a, const BirkhoffState& b, double beta) {
  double acc = 0.0;
  for (int n = 1; n <= std::max(a.cutoff(), b.cutoff()); ++n)
    acc += std::pow(japanese(n), 2.0 * beta) * std::norm(a(n) - b(n));
  return std::sqrt(acc);
}

// Open gaps are evaluated twice, as <1|f_n>/sqrt(kappa_n) and as
// sqrt(gamma_n) <1|f_n>/|<1|f_n>|; the two must agree to `agree_tol` plus the
// rounding of sqrt(gamma_n) itself (eigenvalue roundoff ~ eps |A| over sqrt(gamma_n)).
inline BirkhoffState birkhoff_coords(const LaxSpectrum& sp, double gap_tol = 1e-10, double agree_tol = 1e-9) {
  BirkhoffState z(sp.trust_cutoff);
  double radius = 0.0;
  for (double l : sp.lambdas) radius = std::max(radius, std::abs(l));
  for (int n = 1; n <= sp.trust_cutoff; ++n) {
    const auto un = static_cast<std::size_t>(n);
    const double kappa = sp.kappas[un];
    if (!(kappa > 0.0)) throw SpectralCorruptionError("birkhoff_coords: kappa_" + std::to_string(n) + " <= 0", n);
    const cplx b = sp.one_products[un];
    z.at(n) = b / std::sqrt(kappa);
    if (sp.gaps[un] > gap_tol) {
      const cplx alt = std::sqrt(sp.gaps[un]) * b / std::abs(b);
      const double rounding = 1e-14 * (1.0 + radius) / std::sqrt(sp.gaps[un]);
      if (std::abs(alt - z(n)) > agree_tol + rounding)
        throw SpectralCorruptionError("birkhoff_coords: evaluations of zeta_" + std::to_string(n) + " disagree", n);
    }
  }
  return z;
}

// Phi restricted to a fixed Galerkin window and trust cutoff.
using BirkhoffMap = std::function<BirkhoffState(const RealPotential&)>;

inline BirkhoffMap make_birkhoff_map(int M, int MB, SpectralOptions opt = {}) {
  opt.trust_cutoff = MB;
  return [M, opt](const RealPotential& u) { return birkhoff_coords(compute_spectrum(u, M, opt), opt.gap_tol); };
}

inline BirkhoffState birkhoff_transform(const RealPotential& u, int M, const SpectralOptions& opt = {}) {
  return birkhoff_coords(compute_spectrum(u, M, opt), opt.gap_tol);
}

// (-v^(n)/sqrt n)_{n <= MB}: the differential of Phi at u = 0.
inline BirkhoffState linearized_coords(const RealPotential& v, int MB) {
  BirkhoffState z(MB);
  for (int n = 1; n <= MB; ++n) z.at(n) = -v.coeff(n) / std::sqrt(static_cast<double>(n));
  return z;
}

// --- gradients ---------------------------------------------------------------

using VectorFunctional = std::function<std::vector<cplx>(const RealPotential&)>;

// Gradients (in the pairing <f,g> = sum f^(n) g^(-n)) of each component of F,
// tabulated on |n| <= k_max. Central differences along cos kx and sin kx:
//   dF[cos kx] = (G(k) + G(-k))/2,  dF[sin kx] = (G(-k) - G(k))/(2i).
inline std::vector<ModeArray> gradient(const VectorFunctional& F, const RealPotential& u, int k_max, double h = 1e-5) {
  const int K = std::max(k_max, u.cutoff());
  const RealPotential base = u.truncated(K);
  std::vector<ModeArray> grads;
  auto diff = [&](int k, cplx coeff) {
    RealPotential dir(K);
    dir.set(k, coeff);
    const auto fp = F(base + h * dir);
    const auto fm = F(base - h * dir);
    std::vector<cplx> d(fp.size());
    for (std::size_t i = 0; i < fp.size(); ++i) {
      d[i] = (fp[i] - fm[i]) / (2.0 * h);
      if (!std::isfinite(d[i].real()) || !std::isfinite(d[i].imag()))
        throw Error("gradient: non-finite difference quotient along mode " + std::to_string(k));
    }
    return d;
  };
  for (int k = 1; k <= k_max; ++k) {
    const auto dc = diff(k, 0.5);         // cos kx
    const auto ds = diff(k, -0.5 * kI);   // sin kx
    if (grads.empty()) grads.assign(dc.size(), ModeArray::symmetric(k_max));
    for (std::size_t i = 0; i < dc.size(); ++i) {
      grads[i].at(k) = dc[i] - kI * ds[i];
      grads[i].at(-k) = dc[i] + kI * ds[i];
    }
  }
  return grads;
}

// Gradient of conj F from the gradient of F (real directions only).
inline ModeArray conjugate_gradient(const ModeArray& g) {
  ModeArray out(-g.hi(), -g.lo());
  for (int n = out.lo(); n <= out.hi(); ++n) out.at(n) = std::conj(g[-n]);
  return out;
}

enum class SpectralQuantity { RePhi, ImPhi, Lambda, Gap, Kappa };

struct FunctionalTag {
  SpectralQuantity kind;
  int n;
};

struct GradientOptions {
  int M = 64;
  double h = 1e-5;
  SpectralOptions spectral{};
};

inline double evaluate(const FunctionalTag& tag, const LaxSpectrum& sp, double gap_tol) {
  const auto un = static_cast<std::size_t>(tag.n);
  switch (tag.kind) {
    case SpectralQuantity::RePhi: return birkhoff_coords(sp, gap_tol)(tag.n).real();
    case SpectralQuantity::ImPhi: return birkhoff_coords(sp, gap_tol)(tag.n).imag();
    case SpectralQuantity::Lambda: return sp.lambdas[un];
    case SpectralQuantity::Gap: return sp.gaps[un];
    case SpectralQuantity::Kappa: return sp.kappas[un];
  }
  return 0.0;
}

inline ModeArray gradient(const FunctionalTag& tag, const RealPotential& u, int k_max, GradientOptions opt = {}) {
  if (opt.spectral.trust_cutoff < 0) opt.spectral.trust_cutoff = std::max(tag.n, 1);
  const VectorFunctional F = [&](const RealPotential& w) {
    return std::vector<cplx>{evaluate(tag, compute_spectrum(w, opt.M, opt.spectral), opt.spectral.gap_tol)};
  };
  return gradient(F, u, k_max, opt.h).front();
}

// {F, G} = (1/2pi) int d_x grad F . grad G dx = sum_n (in) F^(n) G^(-n)
inline cplx gardner_bracket(const ModeArray& gradF, const ModeArray& gradG) {
  cplx acc{};
  for (int n = gradF.lo(); n <= gradF.hi(); ++n) acc += kI * static_cast<double>(n) * gradF[n] * gradG[-n];
  return acc;
}

struct CanonicalOptions {
  int M = 64;
  double h = 1e-5;
  int k_max = 16;
  SpectralOptions spectral{};
};

struct CanonicalReport {
  int n_max = 0;
  Eigen::MatrixXcd phi_phi;       // {Phi_n, Phi_k}
  Eigen::MatrixXcd phi_conj_phi;  // {Phi_n, conj Phi_k}
  double max_dev_phi_phi = 0.0;       // against 0
  double max_dev_phi_conj_phi = 0.0;  // against -i delta_nk
};

// `phi` defaults to the standard pipeline at opt.M with trust cutoff n_max.
inline CanonicalReport canonical_check(const RealPotential& u, int n_max, const CanonicalOptions& opt = {},
                                       BirkhoffMap phi = {}) {
  if (!phi) phi = make_birkhoff_map(opt.M, n_max, opt.spectral);
  const VectorFunctional F = [&](const RealPotential& w) {
    const BirkhoffState z = phi(w);
    std::vector<cplx> out(static_cast<std::size_t>(n_max));
    for (int n = 1; n <= n_max; ++n) out[static_cast<std::size_t>(n - 1)] = z(n);
    return out;
  };
  const auto grads = gradient(F, u, opt.k_max, opt.h);
  CanonicalReport rep;
  rep.n_max = n_max;
  rep.phi_phi.resize(n_max, n_max);
  rep.phi_conj_phi.resize(n_max, n_max);
  for (int n = 0; n < n_max; ++n)
    for (int k = 0; k < n_max; ++k) {
      const auto& gn = grads[static_cast<std::size_t>(n)];
      const auto& gk = grads[static_cast<std::size_t>(k)];
      rep.phi_phi(n, k) = gardner_bracket(gn, gk);
      rep.phi_conj_phi(n, k) = gardner_bracket(gn, conjugate_gradient(gk));
      rep.max_dev_phi_phi = std::max(rep.max_dev_phi_phi, std::abs(rep.phi_phi(n, k)));
      const cplx target = n == k ? -kI : cplx{};
      rep.max_dev_phi_conj_phi = std::max(rep.max_dev_phi_conj_phi, std::abs(rep.phi_conj_phi(n, k) - target));
    }
  return rep;
}

struct TraceReport {
  double lhs = 0.0;  // sum_{k <= M_B} k gamma_k
  double rhs = 0.0;  // (1/2)|u|_0^2
  double rel_error = 0.0;
  double lambda0 = 0.0;
  bool lambda0_bounded = true;  // |lambda_0| <= rhs + tol
};

inline TraceReport trace_check(const RealPotential& u, const LaxSpectrum& sp, double tol = 1e-8) {
  TraceReport rep;
  for (int k = 1; k <= sp.trust_cutoff; ++k) rep.lhs += k * sp.gaps[static_cast<std::size_t>(k)];
  rep.rhs = 0.5 * std::pow(sobolev_norm(u, 0.0), 2);
  rep.rel_error = rep.rhs > 0.0 ? std::abs(rep.lhs - rep.rhs) / rep.rhs : std::abs(rep.lhs);
  rep.lambda0 = sp.lambdas[0];
  rep.lambda0_bounded = std::abs(rep.lambda0) <= rep.rhs + tol;
  return rep;
}
inline TraceReport trace_check(const RealPotential& u, int M, const SpectralOptions& opt = {}) {
  return trace_check(u, compute_spectrum(u, M, opt), opt.conv_tol * 10);
}

struct JacobianOptions {
  int M = 64;
  double h = 1e-5;
  double s = 0.0;  // H^s -> h^{s+1/2} weighting
  SpectralOptions spectral{};
};

struct JacobianReport {
  Eigen::MatrixXd raw;       // rows (Re z_n, Im z_n), cols (Re u^(k), Im u^(k)), n,k <= n_max
  Eigen::MatrixXd weighted;  // diag(n^{s+1/2}) raw diag(k^{-s})
  Eigen::VectorXd singular_values;
  double sigma_min = 0.0;
  double condition = 0.0;
};

// Both norms count the conjugate halves, so the factor 2 cancels and the
// weighted differential at u = 0 is -Id.
inline JacobianReport jacobian(const RealPotential& u, int n_max, JacobianOptions opt = {}) {
  if (opt.spectral.trust_cutoff < 0) opt.spectral.trust_cutoff = n_max;
  const BirkhoffMap phi = make_birkhoff_map(opt.M, opt.spectral.trust_cutoff, opt.spectral);
  const int K = std::max(n_max, u.cutoff());
  const RealPotential base = u.truncated(K);
  JacobianReport rep;
  rep.raw.resize(2 * n_max, 2 * n_max);
  for (int k = 1; k <= n_max; ++k)
    for (int part = 0; part < 2; ++part) {
      RealPotential dir(K);
      dir.set(k, part == 0 ? cplx{1.0} : kI);
      const BirkhoffState zp = phi(base + opt.h * dir);
      const BirkhoffState zm = phi(base - opt.h * dir);
      const int col = 2 * (k - 1) + part;
      for (int n = 1; n <= n_max; ++n) {
        const cplx d = (zp(n) - zm(n)) / (2.0 * opt.h);
        rep.raw(2 * (n - 1), col) = d.real();
        rep.raw(2 * (n - 1) + 1, col) = d.imag();
      }
    }
  rep.weighted = rep.raw;
  for (int n = 1; n <= n_max; ++n)
    for (int k = 1; k <= n_max; ++k) {
      const double w = std::pow(n, opt.s + 0.5) * std::pow(k, -opt.s);
      rep.weighted.block(2 * (n - 1), 2 * (k - 1), 2, 2) *= w;
    }
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(rep.weighted);
  rep.singular_values = svd.singularValues();
  rep.sigma_min = rep.singular_values.minCoeff();
  rep.condition = rep.singular_values.maxCoeff() / rep.sigma_min;
  return rep;
}

}  // namespace bo
