//==============================================================================
// experiments.hpp
// Packaged experiments: seeded smooth test potentials, the ill-posedness
// separation demo, convergence studies, and the named invariant checks shared
// by `verify` and the acceptance runner.
//==============================================================================
#pragma once

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <cmath>
#include <cstdint>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "bo/birkhoff.hpp"
#include "bo/direct.hpp"
#include "bo/error.hpp"
#include "bo/flow.hpp"
#include "bo/fourier.hpp"
#include "bo/hardy_ops.hpp"
#include "bo/inverse.hpp"
#include "bo/io.hpp"
#include "bo/lax.hpp"

namespace bo {

// --- test potentials ---------------------------------------------------------

// u^(n) = (x_n + i y_n) e^{-decay n}, x, y uniform in [-1, 1], scaled to |u|_0 = norm.
inline RealPotential random_potential(std::mt19937_64& rng, int modes, double norm, double decay = 0.4) {
  std::uniform_real_distribution<double> U(-1.0, 1.0);
  RealPotential u(modes);
  for (int n = 1; n <= modes; ++n) {
    const double x = U(rng), y = U(rng);
    u.set(n, cplx{x, y} * std::exp(-decay * n));
  }
  const double s = sobolev_norm(u, 0.0);
  return s > 0.0 ? (norm / s) * u : u;
}

struct SuiteOptions {
  int samples = 20;
  int modes = 12;
  double min_norm = 0.05;
  double max_norm = 0.5;
  double decay = 0.4;
  std::uint64_t seed = 20240601;
};

inline std::vector<RealPotential> random_suite(const SuiteOptions& opt = {}) {
  std::mt19937_64 rng(opt.seed);
  std::uniform_real_distribution<double> N(opt.min_norm, opt.max_norm);
  std::vector<RealPotential> out;
  out.reserve(static_cast<std::size_t>(opt.samples));
  for (int k = 0; k < opt.samples; ++k) {
    const double norm = N(rng);
    out.push_back(random_potential(rng, opt.modes, norm, opt.decay));
  }
  return out;
}

// a (2cos x) + b (2 sin kx)
inline RealPotential cos_sin_potential(double a, int k, double b) {
  RealPotential u(std::max(1, k));
  u.set(1, a);
  if (k >= 1) u.set(k, u.coeff(k) - kI * b);
  return u;
}

// u^(n) = c r^n e^{0.3 i n} on 1..K with |u|_0 = norm: smooth but broad band,
// so the Birkhoff side carries a truncation error that shrinks with M.
inline RealPotential geometric_potential(double r, int K, double norm) {
  RealPotential u(K);
  for (int n = 1; n <= K; ++n) u.set(n, std::polar(std::pow(r, n), 0.3 * n));
  return (norm / sobolev_norm(u, 0.0)) * u;
}

// --- ill-posedness demo ------------------------------------------------------

struct IllposedRow {
  int N = 0;
  double initial_distance = 0.0;  // h^{s+1/2}
  double final_distance = 0.0;
  double ratio = 0.0;
  double delta_omega = 0.0;       // omega_N(z') - omega_N(z)
  double phase_separation = 0.0;  // t delta_omega mod 2pi, in (-pi, pi]
};

struct IllposedOptions {
  double s = -0.25;
  std::vector<int> N_list{8, 32, 128, 512};
  double amplitude = 0.5;  // h^{s+1/2} size of both states
  double eps = 0.1;
  double t = 1.0;
};

// Single-mode pairs at mode N:
//   z_N = a N^{-(s+1/2)},  z'_N = (a + eps N^{2s}) N^{-(s+1/2)},
// so both have h^{s+1/2} size ~a and start eps N^{2s} apart, while
// delta_omega = 2N(|z'_N|^2 - |z_N|^2) ~ 4 a eps stays of order one. After
// time t the distance is ~a|1 - e^{i t delta_omega}|, a factor ~N^{-2s}
// larger than the initial one. At s = 0 the ratio does not depend on N.
inline std::vector<IllposedRow> illposed(const IllposedOptions& opt) {
  if (!(opt.s > -0.5 && opt.s <= 0.0)) throw InvalidArgument("illposed: need -1/2 < s <= 0");
  if (!(opt.eps > 0) || !(opt.amplitude > 0)) throw InvalidArgument("illposed: eps and amplitude must be positive");
  const double beta = opt.s + 0.5;
  std::vector<IllposedRow> rows;
  for (int N : opt.N_list) {
    if (N < 1) throw InvalidArgument("illposed: N must be >= 1");
    const double w = std::pow(N, -beta);
    BirkhoffState a(N), b(N);
    a.at(N) = opt.amplitude * w;
    b.at(N) = (opt.amplitude + opt.eps * std::pow(N, 2.0 * opt.s)) * w;
    const FrequencyVector wa = frequencies(a), wb = frequencies(b);
    IllposedRow r;
    r.N = N;
    r.initial_distance = sequence_distance(a, b, beta);
    r.final_distance = sequence_distance(evolve_birkhoff(a, wa, opt.t), evolve_birkhoff(b, wb, opt.t), beta);
    r.ratio = r.final_distance / r.initial_distance;
    r.delta_omega = wb(N) - wa(N);
    r.phase_separation = std::remainder(opt.t * r.delta_omega, 2.0 * kPi);
    rows.push_back(r);
  }
  return rows;
}

// --- convergence studies -----------------------------------------------------

struct SpectralConvergenceRow {
  int M = 0;
  int trust_cutoff = 0;
  double max_lambda_change = 0.0;  // max_{n <= n_max} |lambda_n(M) - lambda_n(M_finest)|
};

inline std::vector<SpectralConvergenceRow> spectral_convergence(const RealPotential& u, std::vector<int> Ms, int n_max = 8,
                                                                const SpectralOptions& opt = {}) {
  if (Ms.empty()) return {};
  std::sort(Ms.begin(), Ms.end());
  if (Ms.front() < n_max) throw InvalidArgument("spectral_convergence: every M must be >= n_max");
  const LaxSpectrum ref = compute_spectrum(u, Ms.back(), opt);
  std::vector<SpectralConvergenceRow> rows;
  for (int M : Ms) {
    const LaxSpectrum sp = compute_spectrum(u, M, opt);
    SpectralConvergenceRow r{M, sp.trust_cutoff, 0.0};
    for (int n = 0; n <= n_max; ++n)
      r.max_lambda_change = std::max(r.max_lambda_change, std::abs(sp.lambdas[static_cast<std::size_t>(n)] - ref.lambdas[static_cast<std::size_t>(n)]));
    rows.push_back(r);
  }
  return rows;
}

struct Resolution {
  int M = 128;
  double dt = 1e-3;
};

struct CrossValidationRow {
  int M = 0;
  double dt = 0.0;
  int trust_cutoff = 0;
  double error = 0.0;  // |u_birkhoff(t) - u_direct(t)|_0
  int newton_iterations = 0;
  double seconds = 0.0;
};

inline std::vector<CrossValidationRow> flow_crossval(const RealPotential& u0, double t, const std::vector<Resolution>& levels,
                                                     const NewtonConfig& newton = {}) {
  std::vector<CrossValidationRow> rows;
  for (const auto& lv : levels) {
    const auto t0 = std::chrono::steady_clock::now();
    FlowConfig fc;
    fc.newton = newton;
    fc.newton.M = lv.M;
    const Trajectory tb = solve_bo(u0, {t}, fc);
    IntegratorConfig ic;
    ic.M = lv.M;
    ic.dt = lv.dt;
    const Trajectory td = evolve(u0, ic, {t});
    CrossValidationRow r;
    r.M = lv.M;
    r.dt = lv.dt;
    r.trust_cutoff = tb.trust_cutoff;
    r.error = sobolev_norm(td.samples[0] - tb.samples[0], 0.0);
    r.newton_iterations = tb.diagnostics[0].iterations;
    r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    rows.push_back(r);
  }
  return rows;
}

// max_{n <= n_max, t} |arg z_n(u_direct(t)) - arg z_n(0) - t omega_n(z(0))| (mod 2pi).
inline double phase_law_error(const RealPotential& u0, const std::vector<double>& times, int n_max,
                              const IntegratorConfig& ic = {}, SpectralOptions opt = {}) {
  const LaxSpectrum sp0 = compute_spectrum(u0, ic.M, opt);
  opt.trust_cutoff = sp0.trust_cutoff;
  if (n_max > sp0.trust_cutoff) throw InvalidArgument("phase_law_error: n_max above the trust cutoff");
  const BirkhoffState z0 = birkhoff_coords(sp0, opt.gap_tol);
  const FrequencyVector w = frequencies(z0);
  const Trajectory tr = evolve(u0, ic, times);
  double worst = 0.0;
  for (std::size_t i = 0; i < tr.times.size(); ++i) {
    const BirkhoffState z = birkhoff_transform(tr.samples[i], ic.M, opt);
    for (int n = 1; n <= n_max; ++n) {
      if (std::abs(z0(n)) == 0.0) continue;
      worst = std::max(worst, std::abs(std::arg(z(n) / z0(n) * std::polar(1.0, -tr.times[i] * w(n)))));
    }
  }
  return worst;
}

// --- named checks ------------------------------------------------------------

struct CheckResult {
  std::string name;
  bool pass = false;
  std::string summary;  // measured values against tolerances
  json details = json::object();
  double seconds = 0.0;
};

struct Check {
  int criterion = 0;
  std::string name;
  std::string title;
  std::function<CheckResult()> run;
};

namespace detail {

inline std::string sci(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3e", v);
  return buf;
}

// Runs `body`; a run longer than `max_seconds` fails the check.
inline CheckResult timed(const std::string& name, double max_seconds, const std::function<void(CheckResult&)>& body) {
  CheckResult r;
  r.name = name;
  const auto t0 = std::chrono::steady_clock::now();
  try {
    body(r);
  } catch (const std::exception& e) {
    r.pass = false;
    r.summary = std::string("exception: ") + e.what();
  }
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  r.details["seconds"] = r.seconds;
  r.details["max_seconds"] = max_seconds;
  if (r.seconds > max_seconds) {
    r.pass = false;
    r.summary += "; runtime " + sci(r.seconds) + " s over the " + sci(max_seconds) + " s limit";
  }
  return r;
}

inline SuiteOptions trace_suite() {
  SuiteOptions o;
  o.samples = 10;
  o.max_norm = 0.3;
  o.seed = 20240602;
  return o;
}

}  // namespace detail

// literal_kappa: compare kappa_n itself with 1; otherwise <n> kappa_n, the
// normalization under which kappa_n is continuous at u = 0.
inline CheckResult check_zero_baseline(bool literal_kappa = true) {
  return detail::timed("zero_baseline", 1.0, [=](CheckResult& r) {
    const int M = 64;
    const LaxSpectrum sp = compute_spectrum(RealPotential(0), M);
    const BirkhoffState z = birkhoff_coords(sp);
    double dl = 0.0, dk = 0.0, dnk = 0.0;
    bool zero = true;
    for (int n = 0; n <= M; ++n) dl = std::max(dl, std::abs(sp.lambdas[static_cast<std::size_t>(n)] - n));
    for (int n = 0; n <= sp.trust_cutoff; ++n) {
      const double k = sp.kappas[static_cast<std::size_t>(n)];
      dk = std::max(dk, std::abs(k - 1.0));
      dnk = std::max(dnk, std::abs(japanese(n) * k - 1.0));
    }
    for (const auto& v : z.zeta) zero = zero && v == cplx{};
    r.pass = dl <= 1e-12 && (literal_kappa ? dk : dnk) <= 1e-12 && zero;
    r.details = {{"M", M}, {"M_B", sp.trust_cutoff}, {"max_lambda_defect", dl}, {"max_kappa_minus_one", dk},
                 {"max_n_kappa_minus_one", dnk}, {"zeta_exactly_zero", zero}};
    r.summary = "max|lambda_n-n|=" + detail::sci(dl) + " (<=1e-12), max|kappa_n-1|=" + detail::sci(dk) +
                (literal_kappa ? " (<=1e-12)" : "") + ", max|<n>kappa_n-1|=" + detail::sci(dnk) +
                (literal_kappa ? "" : " (<=1e-12)") + ", zeta==0: " + (zero ? "yes" : "no");
  });
}

inline CheckResult check_spectral_structure(const std::vector<RealPotential>& suite, int M = 128) {
  return detail::timed("spectral_structure", 60.0, [&](CheckResult& r) {
    double min_spacing = 1e300, min_gap = 1e300, min_spacing_window = 1e300;
    for (const auto& u : suite) {
      const LaxSpectrum sp = compute_spectrum(u, M);
      for (int n = 1; n <= sp.trust_cutoff; ++n) {
        min_spacing = std::min(min_spacing, sp.lambdas[static_cast<std::size_t>(n)] - sp.lambdas[static_cast<std::size_t>(n - 1)]);
        min_gap = std::min(min_gap, sp.gaps[static_cast<std::size_t>(n)]);
      }
      for (int n = 1; n <= M; ++n)
        min_spacing_window = std::min(min_spacing_window, sp.lambdas[static_cast<std::size_t>(n)] - sp.lambdas[static_cast<std::size_t>(n - 1)]);
    }
    r.pass = min_spacing >= 1.0 - 1e-8 && min_gap >= -1e-8;
    r.details = {{"samples", suite.size()}, {"M", M}, {"min_spacing_trusted", min_spacing}, {"min_gap_trusted", min_gap},
                 {"min_spacing_window", min_spacing_window}};
    r.summary = "min(lambda_n-lambda_{n-1})=" + detail::sci(min_spacing) + " (>=1-1e-8), min gamma_n=" + detail::sci(min_gap) +
                " (>=-1e-8) over n<=M_B, " + std::to_string(suite.size()) + " samples";
  });
}

inline CheckResult check_action_identity(const std::vector<RealPotential>& suite, int M = 128) {
  return detail::timed("action_identity", 60.0, [&](CheckResult& r) {
    double worst = 0.0;
    for (const auto& u : suite) {
      const LaxSpectrum sp = compute_spectrum(u, M);
      const BirkhoffState z = birkhoff_coords(sp);
      for (int n = 1; n <= sp.trust_cutoff; ++n)
        worst = std::max(worst, std::abs(std::norm(z(n)) - sp.gaps[static_cast<std::size_t>(n)]));
    }
    r.pass = worst <= 1e-9;
    r.details = {{"max_action_defect", worst}};
    r.summary = "max||zeta_n|^2-gamma_n|=" + detail::sci(worst) + " (<=1e-9)";
  });
}

inline CheckResult check_trace(const std::vector<RealPotential>& suite, int M = 128) {
  return detail::timed("trace", 60.0, [&](CheckResult& r) {
    double worst = 0.0, l0_excess = -1e300;
    for (const auto& u : suite) {
      const TraceReport t = trace_check(u, compute_spectrum(u, M));
      worst = std::max(worst, t.rel_error);
      l0_excess = std::max(l0_excess, std::abs(t.lambda0) - t.rhs);
    }
    r.pass = worst <= 1e-4 && l0_excess <= 1e-8;
    r.details = {{"max_rel_error", worst}, {"max_lambda0_excess", l0_excess}};
    r.summary = "max rel|sum k gamma_k - |u|^2/2|=" + detail::sci(worst) + " (<=1e-4), max(|lambda_0|-|u|^2/2)=" +
                detail::sci(l0_excess) + " (<=1e-8)";
  });
}

inline CheckResult check_linearization(const RealPotential& v, int M = 64, int MB = 16) {
  return detail::timed("linearization", 60.0, [&](CheckResult& r) {
    SpectralOptions opt;
    opt.trust_cutoff = MB;
    std::vector<double> eps{1e-2, 1e-3, 1e-4}, ratio;
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (double e : eps) {
      const RealPotential w = e * v;
      const double err = sequence_distance(birkhoff_transform(w, M, opt), linearized_coords(w, MB), 0.0);
      ratio.push_back(err / (e * e));
      const double x = std::log(e), y = std::log(err);
      sx += x, sy += y, sxx += x * x, sxy += x * y;
    }
    const double n = static_cast<double>(eps.size());
    const double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    const double spread = *std::max_element(ratio.begin(), ratio.end()) / *std::min_element(ratio.begin(), ratio.end());
    r.pass = std::abs(slope - 2.0) <= 0.1;
    r.details = {{"eps", eps}, {"err_over_eps2", ratio}, {"slope", slope}, {"ratio_spread", spread}};
    r.summary = "log-log slope=" + detail::sci(slope) + " (2+-0.1), err/eps^2 in [" +
                detail::sci(*std::min_element(ratio.begin(), ratio.end())) + ", " +
                detail::sci(*std::max_element(ratio.begin(), ratio.end())) + "]";
  });
}

inline CheckResult check_canonical(const RealPotential& u, const BirkhoffMap& phi = {}) {
  return detail::timed("canonical", 300.0, [&](CheckResult& r) {
    CanonicalOptions opt;  // M = 64, h = 1e-5, k_max = 16
    const CanonicalReport c = canonical_check(u, 3, opt, phi);
    const double worst = std::max(c.max_dev_phi_phi, c.max_dev_phi_conj_phi);
    r.pass = worst <= 1e-3;
    r.details = {{"max_dev_phi_phi", c.max_dev_phi_phi}, {"max_dev_phi_conj_phi", c.max_dev_phi_conj_phi}};
    r.summary = "max|{Phi_n,Phi_k}|=" + detail::sci(c.max_dev_phi_phi) + ", max|{Phi_n,conj Phi_k}+i delta|=" +
                detail::sci(c.max_dev_phi_conj_phi) + " (<=1e-3), n,k<=3";
  });
}

inline CheckResult check_asymptotics(const std::vector<RealPotential>& suite, int M = 128) {
  return detail::timed("asymptotics", 60.0, [&](CheckResult& r) {
    const double bound = 7.0 / 12.0 * std::exp(1.0 / 3.0);
    int n2_max = 0;
    bool ok = true;
    std::vector<int> n2s;
    for (const auto& u : suite) {
      const LaxSpectrum sp = compute_spectrum(u, M);
      // smallest n2 such that both bounds hold for every trusted n >= n2
      int n2 = sp.trust_cutoff + 1;
      for (int n = sp.trust_cutoff; n >= 1; --n) {
        const auto un = static_cast<std::size_t>(n);
        if (std::abs(n * sp.kappas[un] - 1.0) > bound || std::abs(sp.mus[un] - 1.0) > bound) break;
        n2 = n;
      }
      n2s.push_back(n2);
      n2_max = std::max(n2_max, n2);
      ok = ok && n2 <= sp.trust_cutoff;
    }
    r.pass = ok;
    r.details = {{"bound", bound}, {"n2", n2s}, {"max_n2", n2_max}};
    r.summary = "|n kappa_n-1|, |mu_n-1| <= " + detail::sci(bound) + " for all trusted n >= n2; max n2 = " + std::to_string(n2_max);
  });
}

inline CheckResult check_flow_crossval() {
  return detail::timed("flow_crossval", 600.0, [](CheckResult& r) {
    const RealPotential u0 = geometric_potential(0.7, 256, 0.2);
    const auto rows = flow_crossval(u0, 1.0, {{128, 1e-3}, {256, 5e-4}});
    IntegratorConfig ic;  // M = 128, dt = 1e-3
    const Trajectory td = evolve(u0, ic, {0.0, 0.25, 0.5, 0.75, 1.0});
    const ConservedReport cr = conserved_report(td, ic.M);
    const double reduction = rows[0].error / rows[1].error;
    r.pass = rows[0].error <= 1e-4 && reduction >= 10.0 && cr.max_lambda_drift <= 1e-6 && cr.max_action_drift <= 1e-6;
    json lv = json::array();
    for (const auto& x : rows)
      lv.push_back({{"M", x.M}, {"dt", x.dt}, {"M_B", x.trust_cutoff}, {"error", x.error}, {"seconds", x.seconds}});
    r.details = {{"levels", lv}, {"reduction", reduction}, {"lambda_drift", cr.max_lambda_drift},
                 {"action_drift", cr.max_action_drift}, {"norm_drift", cr.max_norm_drift}};
    r.summary = "err(M=128,dt=1e-3)=" + detail::sci(rows[0].error) + " (<=1e-4), refined " + detail::sci(rows[1].error) +
                " (reduction " + detail::sci(reduction) + ", >=10), drift lambda " + detail::sci(cr.max_lambda_drift) +
                " |zeta| " + detail::sci(cr.max_action_drift) + " (<=1e-6)";
  });
}

inline CheckResult check_phase_law() {
  return detail::timed("phase_law", 120.0, [](CheckResult& r) {
    RealPotential u0(4);
    u0.set(1, {0.05, 0.02});
    u0.set(2, {-0.03, 0.04});
    u0.set(3, {0.02, -0.01});
    u0.set(4, {0.0, 0.015});
    const double err = phase_law_error(u0, {0.25, 0.5, 1.0}, 4);
    r.pass = err <= 1e-3;
    r.details = {{"max_phase_error", err}};
    r.summary = "max phase error n<=4, t in {0.25,0.5,1}: " + detail::sci(err) + " (<=1e-3)";
  });
}

inline CheckResult check_inverse(const std::vector<RealPotential>& suite, int M = 128) {
  return detail::timed("inverse", 900.0, [&](CheckResult& r) {
    NewtonConfig cfg;
    cfg.M = M;
    double worst = 0.0;
    int max_it = 0;
    for (const auto& u : suite) {
      const BirkhoffState z = birkhoff_transform(u, M, cfg.spectral);
      const InversionResult inv = newton_invert(z, cfg);
      worst = std::max(worst, sobolev_norm(inv.u - u, 0.0));
      max_it = std::max(max_it, inv.iterations);
    }
    const RealPotential w = cos_sin_potential(0.2, 3, 0.05);
    const InversionResult wN = finite_gap(w, 3, cfg);
    const FiniteGapReport fg = verify_finite_gap(wN.u, 3, M);
    const double fg_worst = std::max({fg.max_lambda_defect, fg.max_one_product, fg.max_eigfn_defect, fg.expansion_of_one});
    r.pass = worst <= 1e-7 && fg_worst <= 1e-6;
    r.details = {{"max_roundtrip_error", worst}, {"max_iterations", max_it}, {"finite_gap_N", 3},
                 {"max_lambda_defect", fg.max_lambda_defect}, {"max_one_product", fg.max_one_product},
                 {"max_eigfn_defect", fg.max_eigfn_defect}, {"expansion_of_one", fg.expansion_of_one}};
    r.summary = "max|newton(Phi(u))-u|_0=" + detail::sci(worst) + " (<=1e-7); finite gap N=3: lambda " +
                detail::sci(fg.max_lambda_defect) + ", <1|f_n> " + detail::sci(fg.max_one_product) + ", f_n-g_inf e^{inx} " +
                detail::sci(fg.max_eigfn_defect) + ", expansion of 1 " + detail::sci(fg.expansion_of_one) + " (<=1e-6)";
  });
}

inline CheckResult check_toeplitz(const std::vector<RealPotential>& suite, int M = 64) {
  return detail::timed("toeplitz", 60.0, [&](CheckResult& r) {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> U(-1.0, 1.0);
    double worst_roundtrip = 0.0, worst_one = 0.0;
    for (const auto& u : suite) {
      HardyFunction f0(M);
      for (int n = 0; n <= M; ++n) {
        const double x = U(rng), y = U(rng);
        f0.set(n, {x, y});
      }
      const HardyFunction back = toeplitz_apply(u, toeplitz_inverse(u, f0));
      double acc = 0.0;
      for (int n = 0; n <= M / 2; ++n) acc += std::norm(back.coeff(n) - f0.coeff(n));
      worst_roundtrip = std::max(worst_roundtrip, std::sqrt(acc));
      const HardyFunction one = toeplitz_inverse(u, HardyFunction::one(M));
      const ModeArray gp = make_symbols(u, M).g_plus;
      double a1 = 0.0;
      for (int n = 0; n <= M; ++n) a1 += std::norm(one.coeff(n) - gp[n]);
      worst_one = std::max(worst_one, std::sqrt(a1));
    }
    r.pass = worst_roundtrip <= 1e-6 && worst_one <= 1e-8;
    r.details = {{"max_roundtrip_lower_half", worst_roundtrip}, {"max_inverse_of_one_error", worst_one}};
    r.summary = "|T(T^-1 f0)-f0| on n<=M/2: " + detail::sci(worst_roundtrip) + " (<=1e-6), |T^-1 1 - g_+|: " +
                detail::sci(worst_one) + " (<=1e-8)";
  });
}

inline CheckResult check_illposed() {
  return detail::timed("illposed", 60.0, [](CheckResult& r) {
    IllposedOptions opt;  // s = -1/4, t = 1, eps = 0.1, N in {8, 32, 128, 512}
    const auto rows = illposed(opt);
    bool monotone = true;
    for (std::size_t i = 1; i < rows.size(); ++i) monotone = monotone && rows[i].ratio > rows[i - 1].ratio;
    IllposedOptions ctl = opt;
    ctl.s = 0.0;
    const auto c = illposed(ctl);
    double cmin = 1e300, cmax = 0.0;
    for (const auto& x : c) cmin = std::min(cmin, x.ratio), cmax = std::max(cmax, x.ratio);
    const double cap = (2.0 * ctl.amplitude + ctl.eps) / ctl.eps;  // |z - z'| <= |z| + |z'|
    r.pass = monotone && rows.back().ratio > 10.0 && cmax <= cap;
    json ratios = json::array(), control = json::array();
    for (const auto& x : rows) ratios.push_back({{"N", x.N}, {"ratio", x.ratio}});
    for (const auto& x : c) control.push_back({{"N", x.N}, {"ratio", x.ratio}});
    r.details = {{"ratios", ratios}, {"control", control}, {"control_cap", cap}};
    std::string list;
    for (const auto& x : rows) list += (list.empty() ? "" : ", ") + detail::sci(x.ratio);
    r.summary = "s=-1/4 ratios [" + list + "] monotone: " + (monotone ? "yes" : "no") + ", last > 10; s=0 control in [" +
                detail::sci(cmin) + ", " + detail::sci(cmax) + "] (<= " + detail::sci(cap) + ")";
  });
}

// The twelve acceptance criteria, in order.
inline std::vector<Check> acceptance_checks() {
  auto suite = [] { return random_suite(); };
  return {
      {1, "zero_baseline", "zero-potential baseline", [] { return check_zero_baseline(); }},
      {2, "spectral_structure", "spectral structure", [=] { return check_spectral_structure(suite()); }},
      {3, "action_identity", "action identity", [=] { return check_action_identity(suite()); }},
      {4, "trace", "trace formula", [] { return check_trace(random_suite(detail::trace_suite())); }},
      {5, "linearization", "linearization at zero", [=] { return check_linearization((1.0 / sobolev_norm(suite()[0], 0.0)) * suite()[0]); }},
      {6, "canonical", "canonical relations", [] { return check_canonical(cos_sin_potential(0.2, 3, 0.05)); }},
      {7, "asymptotics", "scaling-factor asymptotics", [=] { return check_asymptotics(suite()); }},
      {8, "flow_crossval", "flow cross-validation", [] { return check_flow_crossval(); }},
      {9, "phase_law", "phase law", [] { return check_phase_law(); }},
      {10, "inverse", "inverse roundtrips and finite gap", [=] { return check_inverse(suite()); }},
      {11, "toeplitz", "Toeplitz inverse formula", [=] { return check_toeplitz(suite()); }},
      {12, "illposed", "ill-posedness separation", [] { return check_illposed(); }},
  };
}

// The `verify` suite: the acceptance checks, with the zero baseline in the
// <n> kappa_n normalization.
inline std::vector<Check> verification_checks() {
  auto checks = acceptance_checks();
  checks.front().run = [] { return check_zero_baseline(false); };
  return checks;
}

}  // namespace bo
