// bo_cli: command-line front end of the toolkit.
//
//   bo_cli spectrum   --cos 1 0.75 --M 1
//   bo_cli birkhoff   --random --seed 7
//   bo_cli evolve     --input u0.json --method both --times 0.25 0.5 1
//   bo_cli invert     --state out/result.json
//   bo_cli finitegap  --cos 1 0.2 --sin 3 0.05 --N 3
//   bo_cli verify     --only trace
//   bo_cli illposed   --s -0.25 --Ns 8 32 128 512
//   bo_cli converge   --input u0.json --Ms 32 64 128
//
// Every command writes config.json, result.json and, where a series exists,
// series.csv under --out DIR (BO_OUT_DIR overrides the configured default).

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <optional>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "CLI11.hpp"

#include "bo/bo.hpp"

namespace fs = std::filesystem;
using namespace bo;

namespace {

struct PotentialSource {
  std::string input;
  bool zero = false;
  bool random = false;
  std::vector<std::pair<int, double>> cos_terms;  // (k, a): + 2a cos kx
  std::vector<std::pair<int, double>> sin_terms;  // (k, a): + 2a sin kx
  int modes = 12;
  double norm = 0.2;
};

struct Globals {
  std::string config_file;
  std::optional<std::string> out;
  std::optional<int> M, MB;
  std::optional<double> gap_tol, conv_tol, fd_step, dt;
  std::optional<std::uint64_t> seed;
};

void add_globals(CLI::App& app, Globals& g) {
  app.add_option("--config", g.config_file, "JSON run configuration")->check(CLI::ExistingFile);
  app.add_option("--out", g.out, "Output directory");
  app.add_option("--M", g.M, "Galerkin cutoff");
  app.add_option("--MB", g.MB, "Trust cutoff (0: screened)");
  app.add_option("--gap-tol", g.gap_tol, "Closed-gap threshold");
  app.add_option("--conv-tol", g.conv_tol, "Convergence screen tolerance");
  app.add_option("--fd-step", g.fd_step, "Newton finite-difference step");
  app.add_option("--dt", g.dt, "Direct solver time step");
  app.add_option("--seed", g.seed, "Random seed");
}

void add_source(CLI::App& sub, PotentialSource& src) {
  auto* in = sub.add_option("--input", src.input, "RealPotential JSON file");
  auto* zero = sub.add_flag("--zero", src.zero, "u = 0");
  auto* rnd = sub.add_flag("--random", src.random, "Seeded random smooth potential");
  sub.add_option("--cos", src.cos_terms, "K A: add 2A cos(Kx)");
  sub.add_option("--sin", src.sin_terms, "K A: add 2A sin(Kx)");
  sub.add_option("--modes", src.modes, "Modes of --random")->check(CLI::PositiveNumber);
  sub.add_option("--norm", src.norm, "L2 norm of --random")->check(CLI::NonNegativeNumber);
  in->excludes(zero)->excludes(rnd);
  zero->excludes(rnd);
}

RealPotential load_potential(const PotentialSource& src, std::uint64_t seed) {
  if (!src.input.empty()) return potential_from_json(read_json(src.input));
  if (src.zero) return RealPotential(0);
  RealPotential u(0);
  if (src.random) {
    std::mt19937_64 rng(seed);
    u = random_potential(rng, src.modes, src.norm);
  }
  auto add = [&](int k, cplx c) {
    if (k < 1) throw InvalidArgument("--cos/--sin: mode must be >= 1");
    RealPotential term(k);
    term.set(k, c);
    u += term;
  };
  for (auto [k, a] : src.cos_terms) add(k, a);
  for (auto [k, a] : src.sin_terms) add(k, -kI * a);
  if (!src.random && src.cos_terms.empty() && src.sin_terms.empty())
    throw InvalidArgument("no potential given: use --input, --zero, --random, --cos or --sin");
  return u;
}

RunConfig resolve_config(const Globals& g) {
  RunConfig c;
  if (const char* env = std::getenv("BO_OUT_DIR")) c.out = env;
  if (!g.config_file.empty()) merge_json(c, read_json(g.config_file));
  if (g.out) c.out = *g.out;
  if (g.M) c.M = *g.M;
  if (g.MB) c.M_B = *g.MB;
  if (g.gap_tol) c.gap_tol = *g.gap_tol;
  if (g.conv_tol) c.conv_tol = *g.conv_tol;
  if (g.fd_step) c.fd_step = *g.fd_step;
  if (g.dt) c.integrator.dt = *g.dt;
  if (g.seed) c.seed = *g.seed;
  c.validate();
  return c;
}

void write_outputs(const RunConfig& cfg, const json& result, const CsvTable* series = nullptr) {
  const fs::path dir(cfg.out);
  write_json(dir / "config.json", stamp(to_json(cfg), cfg));
  write_json(dir / "result.json", stamp(result, cfg));
  if (series) series->write(dir / "series.csv");
}

// Drop wall-clock fields so artifacts are byte-identical across runs.
json without_timing(json j) {
  if (j.is_object()) {
    j.erase("seconds");
    j.erase("max_seconds");
    for (auto& [k, v] : j.items()) v = without_timing(v);
  } else if (j.is_array()) {
    for (auto& v : j) v = without_timing(v);
  }
  return j;
}

// --- commands ----------------------------------------------------------------

int cmd_spectrum(const RunConfig& cfg, const RealPotential& u, bool eigenvectors) {
  const LaxSpectrum sp = compute_spectrum(u, cfg.M, cfg.spectral());
  CsvTable csv({"n", "lambda", "gamma", "kappa", "mu", "re_one_product", "im_one_product"});
  for (int n = 0; n <= sp.trust_cutoff; ++n) {
    const auto un = static_cast<std::size_t>(n);
    csv.add({static_cast<double>(n), sp.lambdas[un], n ? sp.gaps[un] : 0.0, sp.kappas[un], n ? sp.mus[un] : 0.0,
             sp.one_products[un].real(), sp.one_products[un].imag()});
  }
  json res = to_json(sp, eigenvectors);
  res["potential_hash"] = potential_hash(u);
  write_outputs(cfg, res, &csv);
  std::cout << "M = " << sp.M << ", M_B = " << sp.trust_cutoff << ", lambda_0 = " << sp.lambdas[0] << "\n";
  return 0;
}

int cmd_birkhoff(const RunConfig& cfg, const RealPotential& u) {
  const SpectralOptions opt = cfg.spectral();
  const LaxSpectrum sp = compute_spectrum(u, cfg.M, opt);
  BirkhoffState z = birkhoff_coords(sp, opt.gap_tol);
  z.meta = SourceMeta{potential_hash(u), cfg.M, cfg.gap_tol, cfg.conv_tol};
  CsvTable csv({"n", "re_zeta", "im_zeta", "abs_zeta", "gamma"});
  for (int n = 1; n <= z.cutoff(); ++n)
    csv.add({static_cast<double>(n), z(n).real(), z(n).imag(), std::abs(z(n)), sp.gaps[static_cast<std::size_t>(n)]});
  write_outputs(cfg, to_json(z), &csv);
  std::cout << "M_B = " << z.cutoff() << "\n";
  return 0;
}

int cmd_evolve(const RunConfig& cfg, const RealPotential& u0, const std::string& method, std::vector<double> times,
               bool independent) {
  if (times.empty()) times = {cfg.integrator.t_end};
  std::sort(times.begin(), times.end());
  const bool run_b = method == "birkhoff" || method == "both";
  const bool run_d = method == "direct" || method == "both";
  json res = json::object();
  std::optional<Trajectory> tb, td;
  if (run_b) {
    FlowConfig fc;
    fc.newton = cfg.newton_config();
    fc.sequential = !independent;
    tb = solve_bo(u0, times, fc);
    res["birkhoff"] = to_json(*tb);
  }
  if (run_d) {
    td = evolve(u0, cfg.integrator_config(), times);
    res["direct"] = to_json(*td);
  }
  CsvTable csv(run_b && run_d ? std::vector<std::string>{"t", "l2_discrepancy", "norm_birkhoff", "norm_direct"}
                              : std::vector<std::string>{"t", "norm"});
  for (std::size_t i = 0; i < times.size(); ++i) {
    if (run_b && run_d) {
      const double d = sobolev_norm(td->samples[i] - tb->samples[i], 0.0);
      csv.add({times[i], d, sobolev_norm(tb->samples[i], 0.0), sobolev_norm(td->samples[i], 0.0)});
      std::cout << "t = " << times[i] << "  |u_birkhoff - u_direct|_0 = " << d << "\n";
    } else {
      const Trajectory& tr = run_b ? *tb : *td;
      csv.add({times[i], sobolev_norm(tr.samples[i], 0.0)});
    }
  }
  res["potential_hash"] = potential_hash(u0);
  write_outputs(cfg, res, &csv);
  return 0;
}

int cmd_invert(const RunConfig& cfg, const std::string& state_file, const std::string& source_file) {
  json doc = read_json(state_file);
  if (doc.contains("type") && doc["type"] != "BirkhoffState") throw IoError(state_file + " is not a BirkhoffState");
  const BirkhoffState z = birkhoff_from_json(doc);
  NewtonConfig nc = cfg.newton_config();
  if (z.meta) nc.M = std::max(nc.M, z.meta->M);
  std::string log;
  const InversionResult inv = newton_invert(z, nc, std::nullopt, [&](const NewtonIterate& it) { log += to_json(it).dump() + "\n"; });
  write_text(fs::path(cfg.out) / "newton_log.jsonl", log);
  json res = to_json(inv.u);
  res["iterations"] = inv.iterations;
  res["residual"] = inv.residual;
  res["potential_hash"] = potential_hash(inv.u);
  int rc = 0;
  if (!source_file.empty()) {
    const RealPotential src = potential_from_json(read_json(source_file));
    const double err = sobolev_norm(inv.u - src, 0.0);
    const bool hash_ok = !z.meta || z.meta->potential_hash == potential_hash(src);
    res["source_hash_match"] = hash_ok;
    res["roundtrip_error"] = err;
    std::cout << "source hash " << (hash_ok ? "matches" : "DOES NOT match") << ", |u - source|_0 = " << err << "\n";
    if (!hash_ok) rc = 1;
  }
  CsvTable csv({"iteration", "residual", "step_norm", "step_length", "sigma_min"});
  for (const auto& it : inv.log) csv.add({static_cast<double>(it.iteration), it.residual, it.step_norm, it.step_length, it.sigma_min});
  write_outputs(cfg, res, &csv);
  std::cout << "iterations = " << inv.iterations << ", residual = " << inv.residual << "\n";
  return rc;
}

int cmd_finitegap(const RunConfig& cfg, const RealPotential& w, int N) {
  const InversionResult wN = finite_gap(w, N, cfg.newton_config());
  const FiniteGapReport rep = verify_finite_gap(wN.u, N, cfg.M, cfg.spectral());
  json res{{"potential", to_json(wN.u)},
           {"N", N},
           {"iterations", wN.iterations},
           {"residual", wN.residual},
           {"distance_to_source", sobolev_norm(wN.u - w, 0.0)},
           {"verification",
            {{"M_B", rep.trust_cutoff},
             {"max_lambda_defect", rep.max_lambda_defect},
             {"max_one_product", rep.max_one_product},
             {"max_eigfn_defect", rep.max_eigfn_defect},
             {"expansion_of_one", rep.expansion_of_one}}}};
  write_outputs(cfg, res);
  std::cout << "w_N: |lambda_n - n| " << rep.max_lambda_defect << ", |<1|f_n>| " << rep.max_one_product
            << ", |f_n - g_inf e^{inx}| " << rep.max_eigfn_defect << ", expansion of 1 " << rep.expansion_of_one << "\n";
  return 0;
}

int cmd_verify(const RunConfig& cfg, const std::vector<std::string>& only, bool mutate) {
  auto checks = verification_checks();
  if (mutate)
    for (auto& c : checks)
      if (c.name == "canonical")
        c.run = [] {
          // x -> -x inside the Lax matrix: the index sign of T_u flipped.
          const BirkhoffMap good = make_birkhoff_map(64, 16);
          return check_canonical(cos_sin_potential(0.2, 3, 0.05), [good](const RealPotential& u) { return good(reflect(u)); });
        };
  for (const auto& name : only) {
    bool known = false;
    for (const auto& c : checks) known = known || c.name == name;
    if (!known) throw InvalidArgument("verify: unknown check '" + name + "'");
  }
  json arr = json::array();
  bool all = true;
  std::vector<std::string> failed;
  for (const auto& c : checks) {
    if (!only.empty() && std::find(only.begin(), only.end(), c.name) == only.end()) continue;
    const CheckResult r = c.run();
    std::cout << (r.pass ? "PASS " : "FAIL ") << c.name << ": " << r.summary << " [" << r.seconds << " s]\n";
    arr.push_back({{"name", c.name}, {"pass", r.pass}, {"summary", r.summary}, {"details", without_timing(r.details)}});
    if (!r.pass) failed.push_back(c.name);
    all = all && r.pass;
  }
  write_outputs(cfg, {{"checks", arr}, {"all_pass", all}, {"failed", failed}});
  if (!all) {
    std::cerr << "verify: failing checks:";
    for (const auto& f : failed) std::cerr << ' ' << f;
    std::cerr << "\n";
  }
  return all ? 0 : 1;
}

int cmd_illposed(const RunConfig& cfg, const IllposedOptions& opt) {
  const auto rows = illposed(opt);
  CsvTable csv({"N", "initial_distance", "final_distance", "ratio", "delta_omega", "phase_separation"});
  json arr = json::array();
  for (const auto& r : rows) {
    csv.add({static_cast<double>(r.N), r.initial_distance, r.final_distance, r.ratio, r.delta_omega, r.phase_separation});
    arr.push_back({{"N", r.N},
                   {"initial_distance", r.initial_distance},
                   {"final_distance", r.final_distance},
                   {"ratio", r.ratio},
                   {"delta_omega", r.delta_omega},
                   {"phase_separation", r.phase_separation}});
    std::cout << "N = " << r.N << "  ratio = " << r.ratio << "\n";
  }
  write_outputs(cfg, {{"s", opt.s}, {"eps", opt.eps}, {"amplitude", opt.amplitude}, {"t", opt.t}, {"rows", arr}}, &csv);
  return 0;
}

int cmd_converge(const RunConfig& cfg, const RealPotential& u, const std::vector<int>& Ms, bool flow, double t) {
  json res = json::object();
  CsvTable csv({"M", "M_B", "max_lambda_change"});
  json spec = json::array();
  for (const auto& r : spectral_convergence(u, Ms, 8, cfg.spectral())) {
    csv.add({static_cast<double>(r.M), static_cast<double>(r.trust_cutoff), r.max_lambda_change});
    spec.push_back({{"M", r.M}, {"M_B", r.trust_cutoff}, {"max_lambda_change", r.max_lambda_change}});
    std::cout << "M = " << r.M << "  M_B = " << r.trust_cutoff << "  max|lambda_n(M) - lambda_n(M_max)| = " << r.max_lambda_change << "\n";
  }
  res["spectral"] = spec;
  if (flow) {
    std::vector<Resolution> levels;
    double dt = cfg.integrator.dt;
    for (int M : Ms) {
      levels.push_back({M, dt});
      dt /= 2;
    }
    json rows = json::array();
    for (const auto& r : flow_crossval(u, t, levels, cfg.newton_config())) {
      rows.push_back({{"M", r.M}, {"dt", r.dt}, {"M_B", r.trust_cutoff}, {"error", r.error}, {"newton_iterations", r.newton_iterations}});
      std::cout << "M = " << r.M << "  dt = " << r.dt << "  |u_birkhoff - u_direct|_0 = " << r.error << "\n";
    }
    res["flow"] = rows;
  }
  write_outputs(cfg, res, &csv);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Birkhoff coordinates for the Benjamin-Ono equation on the torus"};
  app.require_subcommand(1);
  app.fallthrough();
  Globals g;
  add_globals(app, g);
  app.set_version_flag("--version", kToolkitVersion);

  PotentialSource src;
  bool eigenvectors = false;
  auto* spectrum = app.add_subcommand("spectrum", "Lax spectrum of a potential");
  add_source(*spectrum, src);
  spectrum->add_flag("--eigenvectors", eigenvectors, "Include trusted eigenvectors");

  auto* birkhoff = app.add_subcommand("birkhoff", "Birkhoff coordinates of a potential");
  add_source(*birkhoff, src);

  std::string method = "birkhoff";
  std::vector<double> times;
  bool independent = false;
  auto* evolve_cmd = app.add_subcommand("evolve", "Evolve a potential by the BO flow");
  add_source(*evolve_cmd, src);
  evolve_cmd->add_option("--method", method, "birkhoff | direct | both")->check(CLI::IsMember({"birkhoff", "direct", "both"}));
  evolve_cmd->add_option("--times", times, "Sample times (default: t_end)");
  evolve_cmd->add_flag("--independent", independent, "Invert sample times independently, in parallel");

  std::string state_file, source_file;
  auto* invert = app.add_subcommand("invert", "Invert a Birkhoff state by Newton's method");
  invert->add_option("--state", state_file, "BirkhoffState JSON (e.g. a birkhoff result.json)")->required()->check(CLI::ExistingFile);
  invert->add_option("--source", source_file, "Source potential, to check its hash and the roundtrip")->check(CLI::ExistingFile);

  int N = 1;
  auto* finitegap = app.add_subcommand("finitegap", "Finite-gap potential w_N and its verification");
  add_source(*finitegap, src);
  finitegap->add_option("--N", N, "Number of open gaps")->required()->check(CLI::PositiveNumber);

  std::vector<std::string> only;
  bool mutate = false;
  auto* verify = app.add_subcommand("verify", "Run the invariant suite");
  verify->add_option("--only", only, "Run only the named checks")->delimiter(',');
  verify->add_flag("--mutate", mutate, "Flip the index sign of T_u inside the canonical check (must fail)");

  IllposedOptions ill;
  auto* illposed_cmd = app.add_subcommand("illposed", "Flow separation of single-mode states");
  illposed_cmd->add_option("--s", ill.s, "Sobolev exponent, -1/2 < s <= 0");
  illposed_cmd->add_option("--Ns", ill.N_list, "Modes N");
  illposed_cmd->add_option("--eps", ill.eps, "Distance scale");
  illposed_cmd->add_option("--amplitude", ill.amplitude, "h^{s+1/2} size of the states");
  illposed_cmd->add_option("--t", ill.t, "Flow time");

  std::vector<int> Ms{32, 64, 128};
  bool flow = false;
  double t_flow = 1.0;
  auto* converge = app.add_subcommand("converge", "Convergence study under refinement");
  add_source(*converge, src);
  converge->add_option("--Ms", Ms, "Galerkin cutoffs");
  converge->add_flag("--flow", flow, "Also cross-validate the flows, halving dt at each level");
  converge->add_option("--t", t_flow, "Flow time for --flow");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  try {
    const RunConfig cfg = resolve_config(g);
    if (*spectrum) return cmd_spectrum(cfg, load_potential(src, cfg.seed), eigenvectors);
    if (*birkhoff) return cmd_birkhoff(cfg, load_potential(src, cfg.seed));
    if (*evolve_cmd) return cmd_evolve(cfg, load_potential(src, cfg.seed), method, times, independent);
    if (*invert) return cmd_invert(cfg, state_file, source_file);
    if (*finitegap) return cmd_finitegap(cfg, load_potential(src, cfg.seed), N);
    if (*verify) return cmd_verify(cfg, only, mutate);
    if (*illposed_cmd) return cmd_illposed(cfg, ill);
    if (*converge) return cmd_converge(cfg, load_potential(src, cfg.seed), Ms, flow, t_flow);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
