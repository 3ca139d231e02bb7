//==============================================================================
// flow.hpp
// BO flow by quadrature in Birkhoff coordinates:
//   omega_n = n^2 - 2 sum_{k<=n} k|z_k|^2 - 2n sum_{k>n} |z_k|^2,
//   z_n(t) = z_n(0) e^{i t omega_n(z(0))},
// and the pipeline u0 -> Phi -> rotate -> Phi^{-1}.
//==============================================================================
#pragma once

#include <cmath>
#include <future>
#include <optional>
#include <string>
#include <vector>

#include "bo/birkhoff.hpp"
#include "bo/error.hpp"
#include "bo/fourier.hpp"
#include "bo/inverse.hpp"
#include "bo/lax.hpp"

namespace bo {

struct FrequencyVector {
  std::vector<double> omega;  // omega[n-1] = omega_n

  double operator()(int n) const { return omega[static_cast<std::size_t>(n - 1)]; }
  int cutoff() const { return static_cast<int>(omega.size()); }
};

inline FrequencyVector frequencies(const BirkhoffState& z) {
  const int MB = z.cutoff();
  FrequencyVector w{std::vector<double>(static_cast<std::size_t>(MB))};
  double tail = 0.0;
  for (int k = 1; k <= MB; ++k) tail += std::norm(z(k));
  double head = 0.0;
  for (int n = 1; n <= MB; ++n) {
    const double a = std::norm(z(n));
    head += n * a;
    tail -= a;
    w.omega[static_cast<std::size_t>(n - 1)] = static_cast<double>(n) * n - 2.0 * head - 2.0 * n * tail;
  }
  return w;
}

inline BirkhoffState evolve_birkhoff(const BirkhoffState& z0, const FrequencyVector& w, double t) {
  BirkhoffState z = z0;
  for (int n = 1; n <= z0.cutoff(); ++n) z.at(n) = z0(n) * std::polar(1.0, t * w(n));
  return z;
}

inline BirkhoffState evolve_birkhoff(const BirkhoffState& z0, double t) {
  return evolve_birkhoff(z0, frequencies(z0), t);
}

struct SampleDiagnostics {
  int iterations = 0;
  double residual = 0.0;
};

// Samples are mean-zero potentials; the mean of u(t) is means[i].
struct Trajectory {
  std::string method;
  int M = 0;
  int trust_cutoff = 0;
  std::vector<double> times;
  std::vector<RealPotential> samples;
  std::vector<double> means;
  std::vector<SampleDiagnostics> diagnostics;
};

struct FlowConfig {
  NewtonConfig newton{};
  bool sequential = true;  // warm-start chain; otherwise independent inversions
};

inline Trajectory solve_bo(const RealPotential& u0, const std::vector<double>& times, const FlowConfig& cfg = {}) {
  const LaxSpectrum sp = compute_spectrum(u0, cfg.newton.M, cfg.newton.spectral);
  const BirkhoffState z0 = birkhoff_coords(sp, cfg.newton.spectral.gap_tol);
  const FrequencyVector w = frequencies(z0);
  NewtonConfig ncfg = cfg.newton;
  ncfg.M = std::max(ncfg.M, 2 * z0.cutoff());

  Trajectory tr;
  tr.method = "birkhoff";
  tr.M = cfg.newton.M;
  tr.trust_cutoff = z0.cutoff();
  tr.times = times;
  tr.means.assign(times.size(), 0.0);
  tr.samples.resize(times.size());
  tr.diagnostics.resize(times.size());

  auto invert = [&](double t, const std::optional<RealPotential>& warm) {
    try {
      return newton_invert(evolve_birkhoff(z0, w, t), ncfg, warm);
    } catch (const Error& e) {
      throw TimeStepError("solve_bo: inversion failed at t = " + std::to_string(t) + ": " + e.what(), t);
    }
  };
  auto store = [&](std::size_t i, const InversionResult& r) {
    tr.samples[i] = r.u;
    tr.diagnostics[i] = {r.iterations, r.residual};
  };

  if (cfg.sequential) {
    std::optional<RealPotential> warm = u0.truncated(z0.cutoff());
    for (std::size_t i = 0; i < times.size(); ++i) {
      const InversionResult r = invert(times[i], warm);
      store(i, r);
      warm = r.u;
    }
  } else {
    std::vector<std::future<InversionResult>> jobs;
    jobs.reserve(times.size());
    for (double t : times) jobs.push_back(std::async(std::launch::async, invert, t, std::nullopt));
    for (std::size_t i = 0; i < jobs.size(); ++i) store(i, jobs[i].get());
  }
  return tr;
}

// u(t, x) -> u(t, x - 2ct) + c.
inline Trajectory galilean_shift(Trajectory tr, double c) {
  for (std::size_t i = 0; i < tr.samples.size(); ++i) {
    tr.samples[i] = translate(tr.samples[i], -2.0 * c * tr.times[i]);
    tr.means[i] += c;
  }
  return tr;
}

}  // namespace bo
