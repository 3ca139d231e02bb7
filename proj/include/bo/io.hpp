//==============================================================================
// io.hpp
// JSON documents for potentials, spectra, Birkhoff states and trajectories;
// the run configuration; content hashes; CSV series.
//
// Complex numbers are [re, im] pairs. Objects are dumped with sorted keys and
// round-trip double formatting, so equal inputs give byte-identical files.
//==============================================================================
#pragma once

#include <algorithm>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"

#include "bo/birkhoff.hpp"
#include "bo/direct.hpp"
#include "bo/error.hpp"
#include "bo/flow.hpp"
#include "bo/fourier.hpp"
#include "bo/inverse.hpp"
#include "bo/lax.hpp"

namespace bo {

using json = nlohmann::json;

inline constexpr const char* kToolkitVersion = "1.0.0";

// --- hashing -----------------------------------------------------------------

// 64-bit FNV-1a, hex encoded.
inline std::string fnv1a_hex(const std::string& bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

inline std::string content_hash(const json& j) { return fnv1a_hex(j.dump()); }

// --- scalars and containers --------------------------------------------------

inline json cplx_json(cplx z) { return json::array({z.real(), z.imag()}); }

inline cplx json_cplx(const json& j) {
  if (!j.is_array() || j.size() != 2) throw IoError("expected a complex number as [re, im]");
  return {j[0].get<double>(), j[1].get<double>()};
}

inline json cplx_array(const std::vector<cplx>& v) {
  json a = json::array();
  for (cplx z : v) a.push_back(cplx_json(z));
  return a;
}

inline std::vector<cplx> json_cplx_array(const json& a) {
  if (!a.is_array()) throw IoError("expected an array of complex numbers");
  std::vector<cplx> v;
  v.reserve(a.size());
  for (const auto& e : a) v.push_back(json_cplx(e));
  return v;
}

namespace detail {

// The "type" tag is optional on input; when present it must match.
inline void expect_type(const json& j, const char* type) {
  if (!j.is_object() || (j.contains("type") && j["type"] != type))
    throw IoError(std::string("expected a document of type ") + type);
}

}  // namespace detail

// {"type":"RealPotential","M":M,"coeffs":[u^(1), ..., u^(M)]}
inline json to_json(const RealPotential& u) {
  const auto p = u.positive();
  return {{"type", "RealPotential"}, {"M", u.cutoff()}, {"coeffs", cplx_array({p.begin(), p.end()})}};
}

inline RealPotential potential_from_json(const json& j) {
  detail::expect_type(j, "RealPotential");
  auto c = json_cplx_array(j.at("coeffs"));
  if (j.contains("M") && j["M"].get<int>() != static_cast<int>(c.size()))
    throw IoError("RealPotential: M does not match the coefficient count");
  return RealPotential(std::move(c));
}

inline std::string potential_hash(const RealPotential& u) { return content_hash(to_json(u)); }

// {"type":"HardyFunction","M":M,"coeffs":[f^(0), ..., f^(M)]}
inline json to_json(const HardyFunction& f) {
  const auto v = f.values();
  return {{"type", "HardyFunction"}, {"M", f.cutoff()}, {"coeffs", cplx_array({v.begin(), v.end()})}};
}

inline HardyFunction hardy_from_json(const json& j) {
  detail::expect_type(j, "HardyFunction");
  return HardyFunction(json_cplx_array(j.at("coeffs")));
}

inline json to_json(const LaxSpectrum& sp, bool with_eigenvectors = false) {
  json j{{"type", "LaxSpectrum"},
         {"M", sp.M},
         {"M_B", sp.trust_cutoff},
         {"dropped_modes", sp.dropped_modes},
         {"lambdas", sp.lambdas},
         {"gaps", std::vector<double>(sp.gaps.begin() + 1, sp.gaps.end())},
         {"one_products", cplx_array(sp.one_products)},
         {"kappas", sp.kappas},
         {"mus", std::vector<double>(sp.mus.begin() + std::min<std::ptrdiff_t>(1, std::ssize(sp.mus)), sp.mus.end())}};
  if (with_eigenvectors) {
    json vecs = json::array();
    for (int n = 0; n <= sp.trust_cutoff; ++n) {
      const auto f = sp.eigenfunction(n).values();
      vecs.push_back(cplx_array({f.begin(), f.end()}));
    }
    j["eigenvectors"] = std::move(vecs);
  }
  return j;
}

inline json to_json(const SourceMeta& m) {
  return {{"potential_hash", m.potential_hash}, {"M", m.M}, {"gap_tol", m.gap_tol}, {"conv_tol", m.conv_tol}};
}

// {"type":"BirkhoffState","M_B":M_B,"zeta":[z_1, ..., z_MB],"source":{...}}
inline json to_json(const BirkhoffState& z) {
  json j{{"type", "BirkhoffState"}, {"M_B", z.cutoff()}, {"zeta", cplx_array(z.zeta)}};
  if (z.meta) j["source"] = to_json(*z.meta);
  return j;
}

inline BirkhoffState birkhoff_from_json(const json& j) {
  detail::expect_type(j, "BirkhoffState");
  BirkhoffState z;
  z.zeta = json_cplx_array(j.at("zeta"));
  if (j.contains("source")) {
    const json& s = j["source"];
    z.meta = SourceMeta{s.at("potential_hash").get<std::string>(), s.at("M").get<int>(),
                        s.at("gap_tol").get<double>(), s.at("conv_tol").get<double>()};
  }
  return z;
}

// {"times":[...],"samples":[RealPotential...],"meta":{...}}
inline json to_json(const Trajectory& tr) {
  json samples = json::array();
  for (const auto& u : tr.samples) samples.push_back(to_json(u));
  json diag = json::array();
  for (const auto& d : tr.diagnostics) diag.push_back({{"iterations", d.iterations}, {"residual", d.residual}});
  return {{"type", "Trajectory"},
          {"times", tr.times},
          {"samples", std::move(samples)},
          {"meta",
           {{"method", tr.method}, {"M", tr.M}, {"M_B", tr.trust_cutoff}, {"means", tr.means}, {"diagnostics", diag}}}};
}

inline Trajectory trajectory_from_json(const json& j) {
  detail::expect_type(j, "Trajectory");
  Trajectory tr;
  tr.times = j.at("times").get<std::vector<double>>();
  for (const auto& s : j.at("samples")) tr.samples.push_back(potential_from_json(s));
  if (tr.samples.size() != tr.times.size()) throw IoError("Trajectory: times and samples differ in length");
  const json& m = j.value("meta", json::object());
  tr.method = m.value("method", "");
  tr.M = m.value("M", 0);
  tr.trust_cutoff = m.value("M_B", 0);
  tr.means = m.value("means", std::vector<double>(tr.times.size(), 0.0));
  if (m.contains("diagnostics"))
    for (const auto& d : m["diagnostics"]) tr.diagnostics.push_back({d.at("iterations").get<int>(), d.at("residual").get<double>()});
  return tr;
}

inline json to_json(const NewtonIterate& it) {
  return {{"iteration", it.iteration},
          {"residual", it.residual},
          {"step_norm", it.step_norm},
          {"step_length", it.step_length},
          {"sigma_min", it.sigma_min}};
}

// --- run configuration -------------------------------------------------------

struct RunConfig {
  int M = 128;
  int M_B = 0;  // 0: take the screened cutoff
  double gap_tol = 1e-10;
  double conv_tol = 1e-9;
  double fd_step = 1e-6;
  struct Newton {
    int max_iter = 30;
    double step_tol = 1e-14;
    double resid_tol = 1e-10;
    double contraction = 0.5;
    double armijo_slope = 1e-4;
    double min_step = 1e-6;
  } newton;
  struct Integrator {
    double dt = 1e-3;
    double t_end = 1.0;
    double dealias = 2.0 / 3.0;
    std::string scheme = "ifrk4";
  } integrator;
  std::string out = "out";
  std::uint64_t seed = 1;

  void validate() const {
    if (M < 1) throw InvalidArgument("RunConfig: M must be >= 1");
    if (M_B < 0 || 2 * M_B > M) throw InvalidArgument("RunConfig: need 0 <= 2 M_B <= M");
    if (!(gap_tol > 0) || !(conv_tol > 0) || !(fd_step > 0))
      throw InvalidArgument("RunConfig: tolerances must be positive");
    newton_config().validate();
    integrator_config().validate();
  }

  SpectralOptions spectral() const {
    SpectralOptions o;
    o.gap_tol = gap_tol;
    o.conv_tol = conv_tol;
    if (M_B > 0) o.trust_cutoff = M_B;
    return o;
  }
  NewtonConfig newton_config() const {
    NewtonConfig c;
    c.M = M;
    c.max_iter = newton.max_iter;
    c.step_tol = newton.step_tol;
    c.resid_tol = newton.resid_tol;
    c.fd_step = fd_step;
    c.contraction = newton.contraction;
    c.armijo_slope = newton.armijo_slope;
    c.min_step = newton.min_step;
    c.spectral = spectral();
    return c;
  }
  IntegratorConfig integrator_config() const {
    IntegratorConfig c;
    c.M = M;
    c.dt = integrator.dt;
    c.t_end = integrator.t_end;
    c.dealias = integrator.dealias;
    c.scheme = integrator.scheme;
    return c;
  }
};

inline json to_json(const RunConfig& c) {
  return {{"M", c.M},
          {"M_B", c.M_B},
          {"gap_tol", c.gap_tol},
          {"conv_tol", c.conv_tol},
          {"fd_step", c.fd_step},
          {"newton",
           {{"max_iter", c.newton.max_iter},
            {"step_tol", c.newton.step_tol},
            {"resid_tol", c.newton.resid_tol},
            {"contraction", c.newton.contraction},
            {"armijo_slope", c.newton.armijo_slope},
            {"min_step", c.newton.min_step}}},
          {"integrator",
           {{"dt", c.integrator.dt},
            {"t_end", c.integrator.t_end},
            {"dealias", c.integrator.dealias},
            {"scheme", c.integrator.scheme}}},
          {"out", c.out},
          {"seed", c.seed}};
}

// Fields absent from `j` keep their current values; unknown fields are errors.
inline void merge_json(RunConfig& c, const json& j) {
  static const std::vector<std::string> top{"M", "M_B", "gap_tol", "conv_tol", "fd_step", "newton", "integrator", "out", "seed"};
  if (!j.is_object()) throw IoError("config: expected a JSON object");
  for (const auto& [k, v] : j.items())
    if (std::find(top.begin(), top.end(), k) == top.end()) throw IoError("config: unknown field '" + k + "'");
  try {
    c.M = j.value("M", c.M);
    c.M_B = j.value("M_B", c.M_B);
    c.gap_tol = j.value("gap_tol", c.gap_tol);
    c.conv_tol = j.value("conv_tol", c.conv_tol);
    c.fd_step = j.value("fd_step", c.fd_step);
    c.out = j.value("out", c.out);
    c.seed = j.value("seed", c.seed);
    if (j.contains("newton")) {
      const json& n = j["newton"];
      c.newton.max_iter = n.value("max_iter", c.newton.max_iter);
      c.newton.step_tol = n.value("step_tol", c.newton.step_tol);
      c.newton.resid_tol = n.value("resid_tol", c.newton.resid_tol);
      c.newton.contraction = n.value("contraction", c.newton.contraction);
      c.newton.armijo_slope = n.value("armijo_slope", c.newton.armijo_slope);
      c.newton.min_step = n.value("min_step", c.newton.min_step);
    }
    if (j.contains("integrator")) {
      const json& n = j["integrator"];
      c.integrator.dt = n.value("dt", c.integrator.dt);
      c.integrator.t_end = n.value("t_end", c.integrator.t_end);
      c.integrator.dealias = n.value("dealias", c.integrator.dealias);
      c.integrator.scheme = n.value("scheme", c.integrator.scheme);
    }
  } catch (const json::exception& e) {
    throw IoError(std::string("config: ") + e.what());
  }
}

inline std::string config_hash(const RunConfig& c) { return content_hash(to_json(c)); }

// Every artifact carries the config hash and toolkit version.
inline json stamp(json j, const RunConfig& c) {
  j["config_hash"] = config_hash(c);
  j["version"] = kToolkitVersion;
  return j;
}

// --- files -------------------------------------------------------------------

inline json read_json(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string());
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw IoError("parse error in " + path.string() + ": " + e.what());
  }
}

inline void write_text(const std::filesystem::path& path, const std::string& text) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path.string());
  out << text;
}

inline void write_json(const std::filesystem::path& path, const json& j) { write_text(path, j.dump(2) + "\n"); }

inline RunConfig load_config(const std::filesystem::path& path) {
  RunConfig c;
  merge_json(c, read_json(path));
  return c;
}

// Header row, comma separated, 17 significant digits.
class CsvTable {
 public:
  explicit CsvTable(std::vector<std::string> header) : header_(std::move(header)) {}

  void add(const std::vector<double>& row) {
    if (row.size() != header_.size()) throw InvalidArgument("CsvTable: row width does not match the header");
    rows_.push_back(row);
  }
  std::size_t size() const { return rows_.size(); }

  std::string str() const {
    std::ostringstream os;
    for (std::size_t k = 0; k < header_.size(); ++k) os << (k ? "," : "") << header_[k];
    os << '\n';
    char buf[40];
    for (const auto& r : rows_) {
      for (std::size_t k = 0; k < r.size(); ++k) {
        std::snprintf(buf, sizeof buf, "%.17g", r[k]);
        os << (k ? "," : "") << buf;
      }
      os << '\n';
    }
    return os.str();
  }
  void write(const std::filesystem::path& path) const { write_text(path, str()); }

 private:
  std::vector<std::string> header_;
  std::vector<std::vector<double>> rows_;
};

}  // namespace bo
