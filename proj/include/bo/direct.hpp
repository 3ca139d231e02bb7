//==============================================================================
// direct.hpp
// Pseudo-spectral integrator for u_t = H u_xx - (u^2)_x on modes 1..M:
//   u^_t(n) = i n|n| u^(n) - i n (u^2)^(n).
// Integrating-factor RK4 around the exact linear propagator e^{i n|n| t};
// the quadratic term is evaluated on a grid large enough for the 2/3 rule.
//==============================================================================
#pragma once

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <unsupported/Eigen/FFT>

#include "bo/birkhoff.hpp"
#include "bo/error.hpp"
#include "bo/flow.hpp"
#include "bo/fourier.hpp"
#include "bo/lax.hpp"

namespace bo {

struct IntegratorConfig {
  int M = 128;
  double dt = 1e-3;
  double t_end = 1.0;
  double dealias = 2.0 / 3.0;
  std::string scheme = "ifrk4";

  void validate() const {
    if (M < 1) throw InvalidArgument("IntegratorConfig: M must be >= 1");
    if (!(dt > 0)) throw InvalidArgument("IntegratorConfig: dt must be positive");
    if (!(dealias > 0) || dealias > 1) throw InvalidArgument("IntegratorConfig: dealias must lie in (0, 1]");
    if (scheme != "ifrk4") throw InvalidArgument("IntegratorConfig: unknown scheme '" + scheme + "'");
  }
};

// Exact right-hand side: linear part plus the unaliased quadratic term.
inline RealPotential bo_rhs(const RealPotential& u) {
  const int M = u.cutoff();
  const ModeArray sq = mult(u.modes(), u.modes(), 1, M);
  RealPotential out(M);
  for (int n = 1; n <= M; ++n) out.set(n, kI * static_cast<double>(n) * (static_cast<double>(n) * u.coeff(n) - sq[n]));
  return out;
}

class DirectSolver {
 public:
  using Vec = Eigen::VectorXcd;  // modes 1..M at index n-1

  explicit DirectSolver(const IntegratorConfig& cfg) : cfg_(cfg) {
    cfg_.validate();
    P_ = fft_size(static_cast<int>(std::floor(2.0 * cfg_.M / cfg_.dealias)) + 1);
    spec_.assign(static_cast<std::size_t>(P_), cplx{});
    fft_.SetFlag(Eigen::FFT<double>::Unscaled);
  }

  int grid() const { return P_; }
  const IntegratorConfig& config() const { return cfg_; }

  // -i n (u^2)^(n), n = 1..M.
  Vec nonlinear(const Vec& c) {
    const int M = cfg_.M;
    std::fill(spec_.begin(), spec_.end(), cplx{});
    for (int n = 1; n <= M; ++n) {
      spec_[static_cast<std::size_t>(n)] = c(n - 1);
      spec_[static_cast<std::size_t>(P_ - n)] = std::conj(c(n - 1));
    }
    fft_.inv(vals_, spec_);
    for (auto& v : vals_) v = cplx{v.real() * v.real(), 0.0};
    fft_.fwd(spec_, vals_);
    Vec out(M);
    for (int n = 1; n <= M; ++n) out(n - 1) = -kI * static_cast<double>(n) * spec_[static_cast<std::size_t>(n)] / static_cast<double>(P_);
    return out;
  }

  Vec step(const Vec& u, double h) {
    const int M = cfg_.M;
    Vec E(M);
    for (int n = 1; n <= M; ++n) E(n - 1) = std::polar(1.0, 0.5 * h * n * n);
    const Vec E2 = E.cwiseProduct(E);
    const Vec k1 = nonlinear(u);
    const Vec k2 = nonlinear(E.cwiseProduct(u + 0.5 * h * k1));
    const Vec k3 = nonlinear(E.cwiseProduct(u) + 0.5 * h * k2);
    const Vec k4 = nonlinear(E2.cwiseProduct(u) + h * E.cwiseProduct(k3));
    return E2.cwiseProduct(u) + (h / 6.0) * (E2.cwiseProduct(k1) + 2.0 * E.cwiseProduct(k2 + k3) + k4);
  }

  static Vec pack(const RealPotential& u, int M) {
    Vec c = Vec::Zero(M);
    for (int n = 1; n <= std::min(M, u.cutoff()); ++n) c(n - 1) = u.coeff(n);
    return c;
  }
  static RealPotential unpack(const Vec& c) {
    return RealPotential(std::vector<cplx>(c.data(), c.data() + c.size()));
  }

 private:
  IntegratorConfig cfg_;
  int P_ = 0;
  Eigen::FFT<double> fft_;
  std::vector<cplx> spec_, vals_;
};

inline RealPotential step(const RealPotential& u, double dt, IntegratorConfig cfg = {}) {
  cfg.M = u.cutoff();
  cfg.dt = dt;
  DirectSolver s(cfg);
  return DirectSolver::unpack(s.step(DirectSolver::pack(u, cfg.M), dt));
}

// Fixed steps of cfg.dt; a shorter final step lands exactly on each sample time.
inline Trajectory evolve(const RealPotential& u0, const IntegratorConfig& cfg, std::vector<double> sample_times) {
  DirectSolver solver(cfg);
  std::sort(sample_times.begin(), sample_times.end());
  if (!sample_times.empty() && sample_times.front() < 0) throw InvalidArgument("evolve: negative sample time");

  Trajectory tr;
  tr.method = "direct";
  tr.M = cfg.M;
  tr.times = sample_times;
  tr.means.assign(sample_times.size(), 0.0);
  tr.diagnostics.assign(sample_times.size(), {});

  DirectSolver::Vec c = DirectSolver::pack(u0, cfg.M);
  double t = 0.0;
  long steps = 0;
  for (double target : sample_times) {
    while (t < target) {
      const double remaining = target - t;
      const bool last = remaining <= cfg.dt * (1.0 + 1e-9);
      const double h = last ? remaining : cfg.dt;
      c = solver.step(c, h);
      ++steps;
      t = last ? target : cfg.dt * static_cast<double>(steps);
      if (!c.allFinite()) throw TimeStepError("evolve: non-finite coefficients at t = " + std::to_string(t), t);
    }
    tr.samples.push_back(DirectSolver::unpack(c));
  }
  return tr;
}

struct ConservedReport {
  int trust_cutoff = 0;  // M_B of the first sample, used for every sample
  std::vector<double> norm_drift;    // | |u(t)|_0^2 - |u(0)|_0^2 |
  std::vector<double> lambda_drift;  // max_{n <= M_B} |lambda_n(t) - lambda_n(0)|
  std::vector<double> action_drift;  // max_{n <= M_B} | |z_n(t)| - |z_n(0)| |
  std::vector<double> trace_defect;  // |sum k gamma_k - |u|_0^2/2| / (|u|_0^2/2)
  double max_norm_drift = 0.0;
  double max_lambda_drift = 0.0;
  double max_action_drift = 0.0;
  double max_trace_defect = 0.0;
};

inline ConservedReport conserved_report(const Trajectory& tr, int M, SpectralOptions opt = {}) {
  ConservedReport rep;
  if (tr.samples.empty()) return rep;
  const LaxSpectrum sp0 = compute_spectrum(tr.samples.front(), M, opt);
  rep.trust_cutoff = sp0.trust_cutoff;
  opt.trust_cutoff = sp0.trust_cutoff;
  const BirkhoffState z0 = birkhoff_coords(sp0, opt.gap_tol);
  const double n0 = std::pow(sobolev_norm(tr.samples.front(), 0.0), 2);
  for (const auto& u : tr.samples) {
    const LaxSpectrum sp = compute_spectrum(u, M, opt);
    const BirkhoffState z = birkhoff_coords(sp, opt.gap_tol);
    double dl = 0.0, da = 0.0;
    for (int n = 0; n <= rep.trust_cutoff; ++n)
      dl = std::max(dl, std::abs(sp.lambdas[static_cast<std::size_t>(n)] - sp0.lambdas[static_cast<std::size_t>(n)]));
    for (int n = 1; n <= rep.trust_cutoff; ++n) da = std::max(da, std::abs(std::abs(z(n)) - std::abs(z0(n))));
    rep.norm_drift.push_back(std::abs(std::pow(sobolev_norm(u, 0.0), 2) - n0));
    rep.lambda_drift.push_back(dl);
    rep.action_drift.push_back(da);
    rep.trace_defect.push_back(trace_check(u, sp).rel_error);
  }
  rep.max_norm_drift = *std::max_element(rep.norm_drift.begin(), rep.norm_drift.end());
  rep.max_lambda_drift = *std::max_element(rep.lambda_drift.begin(), rep.lambda_drift.end());
  rep.max_action_drift = *std::max_element(rep.action_drift.begin(), rep.action_drift.end());
  rep.max_trace_defect = *std::max_element(rep.trace_defect.begin(), rep.trace_defect.end());
  return rep;
}

}  // namespace bo
