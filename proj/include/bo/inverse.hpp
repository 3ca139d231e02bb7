//==============================================================================
// inverse.hpp
// Numerical inverse of the Birkhoff map and finite-gap potentials.
//
// newton_invert solves Phi_n(u) = z_n, n = 1..M_B, for the coefficients
// u^(1..M_B); modes above M_B are frozen at zero so the system is square.
// Damped Newton with a forward-difference Jacobian refreshed every iteration
// and Armijo backtracking on (1/2)|Phi(u) - z|_{1/2}^2.
//==============================================================================
#pragma once

#include <cmath>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "bo/birkhoff.hpp"
#include "bo/error.hpp"
#include "bo/fourier.hpp"
#include "bo/lax.hpp"

namespace bo {

struct NewtonConfig {
  int M = 128;
  int max_iter = 30;
  double step_tol = 1e-14;
  double resid_tol = 1e-10;  // on |Phi(u) - z|_{1/2}
  double fd_step = 1e-6;
  double contraction = 0.5;
  double armijo_slope = 1e-4;
  double min_step = 1e-6;
  double sigma_min_floor = 1e-10;
  SpectralOptions spectral{};

  void validate() const {
    if (M < 1 || max_iter < 1 || !(step_tol > 0) || !(resid_tol > 0) || !(fd_step > 0) || !(contraction > 0) ||
        contraction >= 1 || !(armijo_slope > 0) || !(min_step > 0))
      throw InvalidArgument("NewtonConfig: tolerances must be positive and max_iter >= 1");
  }
};

struct NewtonIterate {
  int iteration = 0;
  double residual = 0.0;   // before the step
  double step_norm = 0.0;  // |dx| actually taken
  double step_length = 0.0;  // Armijo factor
  double sigma_min = 0.0;  // of the weighted Jacobian
};

struct InversionResult {
  RealPotential u;
  int iterations = 0;
  double residual = 0.0;
  std::vector<NewtonIterate> log;
};

// u^(n) = -sqrt(n) zeta_n: inverts the differential of Phi at 0.
inline RealPotential linear_guess(const BirkhoffState& z) {
  RealPotential u(z.cutoff());
  for (int n = 1; n <= z.cutoff(); ++n) u.set(n, -std::sqrt(static_cast<double>(n)) * z(n));
  return u;
}

namespace detail {

inline Eigen::VectorXd pack(const RealPotential& u, int MB) {
  Eigen::VectorXd x(2 * MB);
  for (int n = 1; n <= MB; ++n) {
    x(2 * (n - 1)) = u.coeff(n).real();
    x(2 * (n - 1) + 1) = u.coeff(n).imag();
  }
  return x;
}

inline RealPotential unpack(const Eigen::VectorXd& x) {
  const int MB = static_cast<int>(x.size() / 2);
  RealPotential u(MB);
  for (int n = 1; n <= MB; ++n) u.set(n, {x(2 * (n - 1)), x(2 * (n - 1) + 1)});
  return u;
}

// sqrt(n)-weighted residual, so that |r| = |Phi(u) - z|_{1/2}.
inline Eigen::VectorXd weighted_residual(const BirkhoffState& phi, const BirkhoffState& z) {
  const int MB = z.cutoff();
  Eigen::VectorXd r(2 * MB);
  for (int n = 1; n <= MB; ++n) {
    const cplx d = std::sqrt(static_cast<double>(n)) * (phi(n) - z(n));
    r(2 * (n - 1)) = d.real();
    r(2 * (n - 1) + 1) = d.imag();
  }
  return r;
}

}  // namespace detail

inline InversionResult newton_invert(const BirkhoffState& z, const NewtonConfig& cfg,
                                     const std::optional<RealPotential>& warm_start = std::nullopt,
                                     const std::function<void(const NewtonIterate&)>& on_iterate = {}) {
  cfg.validate();
  const int MB = z.cutoff();
  if (2 * MB > cfg.M) throw InvalidArgument("newton_invert: need M >= 2 M_B");
  InversionResult res;
  bool zero = true;
  for (const auto& v : z.zeta) zero = zero && v == cplx{};
  if (zero && !warm_start) {
    res.u = RealPotential(MB);
    return res;
  }

  const BirkhoffMap phi = make_birkhoff_map(cfg.M, MB, cfg.spectral);
  auto residual = [&](const Eigen::VectorXd& x) { return detail::weighted_residual(phi(detail::unpack(x)), z); };

  Eigen::VectorXd x = detail::pack(warm_start ? warm_start->truncated(MB) : linear_guess(z), MB);
  Eigen::VectorXd r = residual(x);
  for (int it = 0;; ++it) {
    const double rn = r.norm();
    if (rn <= cfg.resid_tol) {
      res.iterations = it;
      res.residual = rn;
      break;
    }
    if (it >= cfg.max_iter)
      throw NonConvergenceError("newton_invert: no convergence in " + std::to_string(cfg.max_iter) +
                                    " iterations, residual " + std::to_string(rn),
                                it, rn);

    Eigen::MatrixXd J(r.size(), x.size());
    for (Eigen::Index j = 0; j < x.size(); ++j) {
      Eigen::VectorXd xp = x;
      xp(j) += cfg.fd_step;
      J.col(j) = (residual(xp) - r) / cfg.fd_step;
    }
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(J, Eigen::ComputeFullU | Eigen::ComputeFullV);
    const double smin = svd.singularValues().minCoeff();
    if (smin < cfg.sigma_min_floor)
      throw ConditioningError("newton_invert: singular Jacobian, sigma_min " + std::to_string(smin), smin);
    const Eigen::VectorXd dx = -svd.solve(r);

    // Armijo on phi(x) = |r|^2/2 along the Newton direction (slope -|r|^2).
    double t = 1.0;
    Eigen::VectorXd r_try;
    for (;;) {
      bool ok = true;
      try {
        r_try = residual(x + t * dx);
      } catch (const Error&) {
        ok = false;  // left the domain where the spectrum normalizes
      }
      if (ok && 0.5 * r_try.squaredNorm() <= (0.5 - cfg.armijo_slope * t) * rn * rn) break;
      t *= cfg.contraction;
      if (t < cfg.min_step)
        throw NonConvergenceError("newton_invert: line search stalled, residual " + std::to_string(rn), it, rn);
    }
    x += t * dx;
    r = r_try;
    NewtonIterate rec{it, rn, t * dx.norm(), t, smin};
    res.log.push_back(rec);
    if (on_iterate) on_iterate(rec);
    if (t * dx.norm() <= cfg.step_tol && r.norm() > cfg.resid_tol)
      throw NonConvergenceError("newton_invert: step below step_tol, residual " + std::to_string(r.norm()), it + 1,
                                r.norm());
  }
  res.u = detail::unpack(x);
  return res;
}

// w_N: Phi_n(w_N) = Phi_n(w) for n <= N and 0 beyond, inverted on the M_B of w.
inline InversionResult finite_gap(const RealPotential& w, int N, const NewtonConfig& cfg) {
  const LaxSpectrum sp = compute_spectrum(w, cfg.M, cfg.spectral);
  if (N < 1 || N > sp.trust_cutoff) throw InvalidArgument("finite_gap: N outside 1..M_B");
  if (!(sp.gaps[static_cast<std::size_t>(N)] > cfg.spectral.gap_tol))
    throw InvalidArgument("finite_gap: gamma_N(w) <= gap_tol, w_N would not have N open gaps");
  const BirkhoffState z = birkhoff_coords(sp, cfg.spectral.gap_tol);
  BirkhoffState zN(z.cutoff());
  for (int n = 1; n <= N; ++n) zN.at(n) = z(n);
  return newton_invert(zN, cfg);
}

struct FiniteGapReport {
  int N = 0;
  int trust_cutoff = 0;
  double max_lambda_defect = 0.0;      // max_{N <= n <= M_B} |lambda_n - n|
  double max_one_product = 0.0;        // max_{N < n <= M_B} |<1|f_n>|
  double max_eigfn_defect = 0.0;       // max_{N <= n <= M_B} |f_n - c g_inf e^{inx}|_0, |c| = 1
  double expansion_of_one = 0.0;       // |1 - sum_{a <= N} <1|f_a> f_a|_0
};

inline FiniteGapReport verify_finite_gap(const RealPotential& u, int N, int M, const SpectralOptions& opt = {}) {
  const LaxSpectrum sp = compute_spectrum(u, M, opt);
  const int MB = sp.trust_cutoff;
  FiniteGapReport rep;
  rep.N = N;
  rep.trust_cutoff = MB;
  const ModeArray ginf = g_infinity(u, 2 * M).coeffs;
  for (int n = N; n <= MB; ++n) {
    rep.max_lambda_defect = std::max(rep.max_lambda_defect, std::abs(sp.lambdas[static_cast<std::size_t>(n)] - n));
    if (n > N) rep.max_one_product = std::max(rep.max_one_product, std::abs(sp.one_products[static_cast<std::size_t>(n)]));
    // g_inf e^{inx}: modes -n.. of g_inf land on 0..; mass below 0 counts as defect.
    cplx overlap{};
    for (int m = 0; m <= M; ++m) overlap += sp.eigvecs(m, n) * std::conj(ginf[m - n]);
    double below = 0.0;
    for (int m = ginf.lo(); m < -n; ++m) below += std::norm(ginf[m]);
    const cplx c = std::abs(overlap) > 0 ? overlap / std::abs(overlap) : cplx{1.0};
    double acc = below;
    for (int m = 0; m <= M; ++m) acc += std::norm(sp.eigvecs(m, n) - c * ginf[m - n]);
    rep.max_eigfn_defect = std::max(rep.max_eigfn_defect, std::sqrt(acc));
  }
  Eigen::VectorXcd one = Eigen::VectorXcd::Zero(M + 1);
  one(0) = 1.0;
  for (int a = 0; a <= std::min(N, MB); ++a) one -= sp.one_products[static_cast<std::size_t>(a)] * sp.eigvecs.col(a);
  rep.expansion_of_one = one.norm();
  return rep;
}

}  // namespace bo
