//==============================================================================
// fourier.hpp
// Coefficient containers and spectral primitives on the torus T = R/2piZ.
//
// Convention: u(x) = sum_n u^(n) e^{inx}, u^(n) = (1/2pi) int u e^{-inx} dx,
// so that ||u||_0^2 = sum_n |u^(n)|^2 (Parseval with the 1/2pi measure).
//
// Grid transforms go through Eigen's FFT module. Grid sizes are rounded up to
// 2^a 3^b 5^c so the radix kernels are always used.
//==============================================================================
#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include <unsupported/Eigen/FFT>

#include "bo/error.hpp"

namespace bo {

using cplx = std::complex<double>;
inline constexpr cplx kI{0.0, 1.0};
inline constexpr double kPi = 3.14159265358979323846;

// <n> = max(1, |n|)
inline double japanese(int n) { return std::max(1.0, std::abs(static_cast<double>(n))); }

inline int sign(int n) { return (n > 0) - (n < 0); }

// Complex coefficients on the contiguous mode window lo..hi. Reads outside the
// window return 0, so arrays on different windows compose naturally.
class ModeArray {
 public:
  ModeArray() = default;
  ModeArray(int lo, int hi) : lo_(lo), c_(static_cast<std::size_t>(std::max(0, hi - lo + 1))) {
    if (hi < lo) throw InvalidArgument("ModeArray: empty window");
  }
  static ModeArray symmetric(int K) { return ModeArray(-K, K); }

  int lo() const { return lo_; }
  int hi() const { return lo_ + static_cast<int>(c_.size()) - 1; }
  std::size_t size() const { return c_.size(); }
  bool contains(int n) const { return n >= lo_ && n <= hi(); }

  cplx operator[](int n) const { return contains(n) ? c_[static_cast<std::size_t>(n - lo_)] : cplx{}; }
  cplx& at(int n) {
    if (!contains(n)) throw InvalidArgument("ModeArray: mode " + std::to_string(n) + " outside window");
    return c_[static_cast<std::size_t>(n - lo_)];
  }

  std::span<const cplx> values() const { return c_; }
  std::span<cplx> values() { return c_; }

  // Same coefficients on a new window (truncating or zero-padding).
  ModeArray window(int lo, int hi) const {
    ModeArray out(lo, hi);
    for (int n = lo; n <= hi; ++n) out.at(n) = (*this)[n];
    return out;
  }

  ModeArray& operator+=(const ModeArray& o) { return axpy(1.0, o); }
  ModeArray& operator-=(const ModeArray& o) { return axpy(-1.0, o); }
  ModeArray& operator*=(cplx a) {
    for (auto& v : c_) v *= a;
    return *this;
  }

 private:
  ModeArray& axpy(double a, const ModeArray& o) {
    if (c_.empty()) {
      *this = o;
      return *this *= a;
    }
    const int lo = std::min(lo_, o.lo());
    const int hi = std::max(this->hi(), o.hi());
    if (lo != lo_ || hi != this->hi()) *this = window(lo, hi);
    for (int n = o.lo(); n <= o.hi(); ++n) at(n) += a * o[n];
    return *this;
  }

  int lo_ = 0;
  std::vector<cplx> c_;
};

inline ModeArray operator+(ModeArray a, const ModeArray& b) { return a += b; }
inline ModeArray operator-(ModeArray a, const ModeArray& b) { return a -= b; }
inline ModeArray operator*(cplx s, ModeArray a) { return a *= s; }

// A real, zero-mean potential. Stores u^(1..M); u^(-n) = conj u^(n), u^(0) = 0.
class RealPotential {
 public:
  RealPotential() = default;
  explicit RealPotential(int M) : c_(static_cast<std::size_t>(M)) {
    if (M < 0) throw InvalidArgument("RealPotential: negative cutoff");
  }
  explicit RealPotential(std::vector<cplx> positive_modes) : c_(std::move(positive_modes)) {}

  int cutoff() const { return static_cast<int>(c_.size()); }

  cplx coeff(int n) const {
    if (n == 0 || std::abs(n) > cutoff()) return {};
    return n > 0 ? c_[static_cast<std::size_t>(n - 1)] : std::conj(c_[static_cast<std::size_t>(-n - 1)]);
  }
  void set(int n, cplx v) {
    if (n < 1 || n > cutoff()) throw InvalidArgument("RealPotential: mode " + std::to_string(n) + " not in 1..M");
    c_[static_cast<std::size_t>(n - 1)] = v;
  }
  std::span<const cplx> positive() const { return c_; }

  ModeArray modes() const {
    ModeArray out = ModeArray::symmetric(cutoff());
    for (int n = -cutoff(); n <= cutoff(); ++n) out.at(n) = coeff(n);
    return out;
  }
  // Positive half of `f` on modes 1..M; the negative half is implied.
  static RealPotential from_modes(const ModeArray& f, int M) {
    RealPotential u(M);
    for (int n = 1; n <= M; ++n) u.c_[static_cast<std::size_t>(n - 1)] = f[n];
    return u;
  }
  RealPotential truncated(int M) const { return from_modes(modes(), M); }

  RealPotential& operator+=(const RealPotential& o) {
    if (o.cutoff() > cutoff()) c_.resize(o.c_.size());
    for (std::size_t k = 0; k < o.c_.size(); ++k) c_[k] += o.c_[k];
    return *this;
  }
  RealPotential& operator*=(double a) {
    for (auto& v : c_) v *= a;
    return *this;
  }
  friend RealPotential operator+(RealPotential a, const RealPotential& b) { return a += b; }
  friend RealPotential operator-(RealPotential a, RealPotential b) { return a += (b *= -1.0); }
  friend RealPotential operator*(double s, RealPotential a) { return a *= s; }

 private:
  std::vector<cplx> c_;
};

// Element of the truncated Hardy space: f^(0..M), negative modes identically 0.
class HardyFunction {
 public:
  HardyFunction() : c_(1) {}
  explicit HardyFunction(int M) : c_(static_cast<std::size_t>(M + 1)) {
    if (M < 0) throw InvalidArgument("HardyFunction: negative cutoff");
  }
  explicit HardyFunction(std::vector<cplx> coeffs) : c_(std::move(coeffs)) {
    if (c_.empty()) c_.resize(1);
  }
  static HardyFunction one(int M) {
    HardyFunction f(M);
    f.c_[0] = 1.0;
    return f;
  }

  int cutoff() const { return static_cast<int>(c_.size()) - 1; }
  cplx coeff(int n) const { return (n < 0 || n > cutoff()) ? cplx{} : c_[static_cast<std::size_t>(n)]; }
  void set(int n, cplx v) {
    if (n < 0 || n > cutoff()) throw InvalidArgument("HardyFunction: mode " + std::to_string(n) + " not in 0..M");
    c_[static_cast<std::size_t>(n)] = v;
  }
  std::span<const cplx> values() const { return c_; }

  ModeArray modes() const {
    ModeArray out(0, cutoff());
    for (int n = 0; n <= cutoff(); ++n) out.at(n) = c_[static_cast<std::size_t>(n)];
    return out;
  }

 private:
  std::vector<cplx> c_;
};

// Truncated element z_1..z_{M_B} of the weighted sequence space h^beta_+.
struct SequenceState {
  std::vector<cplx> z;  // z[n-1] = z_n
  double beta = 0.0;

  int cutoff() const { return static_cast<int>(z.size()); }
  cplx operator()(int n) const { return (n >= 1 && n <= cutoff()) ? z[static_cast<std::size_t>(n - 1)] : cplx{}; }
  double norm() const {
    double s = 0.0;
    for (int n = 1; n <= cutoff(); ++n) s += std::pow(japanese(n), 2.0 * beta) * std::norm((*this)(n));
    return std::sqrt(s);
  }
};

// --- norms -------------------------------------------------------------------

inline double sobolev_norm(const ModeArray& f, double s) {
  double acc = 0.0;
  for (int n = f.lo(); n <= f.hi(); ++n) acc += std::pow(japanese(n), 2.0 * s) * std::norm(f[n]);
  return std::sqrt(acc);
}
// Sums over the stored modes and their conjugate partners.
inline double sobolev_norm(const RealPotential& u, double s) {
  double acc = 0.0;
  for (int n = 1; n <= u.cutoff(); ++n) acc += 2.0 * std::pow(japanese(n), 2.0 * s) * std::norm(u.coeff(n));
  return std::sqrt(acc);
}
inline double sobolev_norm(const HardyFunction& f, double s) { return sobolev_norm(f.modes(), s); }

// --- Fourier multipliers and projections ---------------------------------------

inline RealPotential hilbert_transform(const RealPotential& u) {
  RealPotential out(u.cutoff());
  for (int n = 1; n <= u.cutoff(); ++n) out.set(n, -kI * u.coeff(n));
  return out;
}

// Pi: keep the modes n >= 0.
inline HardyFunction szego_project(const ModeArray& f) {
  HardyFunction out(std::max(f.hi(), 0));
  for (int n = std::max(0, f.lo()); n <= f.hi(); ++n) out.set(n, f[n]);
  return out;
}

// d_x^{-1}: u^(n) / (in) for n != 0, zero mean. Rejects a mean above `mean_tol`.
inline ModeArray antiderivative(const ModeArray& u, double mean_tol = 1e-12) {
  if (std::abs(u[0]) > mean_tol)
    throw InvalidArgument("antiderivative: input mean " + std::to_string(std::abs(u[0])) + " exceeds tolerance");
  ModeArray out(std::min(u.lo(), 0), std::max(u.hi(), 0));
  for (int n = u.lo(); n <= u.hi(); ++n)
    if (n != 0) out.at(n) = u[n] / (kI * static_cast<double>(n));
  return out;
}
inline ModeArray antiderivative(const RealPotential& u) { return antiderivative(u.modes()); }

// Multiplication by e^{ix} within the window; the top mode drops out.
inline HardyFunction shift(const HardyFunction& f) {
  HardyFunction out(f.cutoff());
  for (int n = f.cutoff(); n >= 1; --n) out.set(n, f.coeff(n - 1));
  return out;
}

// <f|g> = sum f^(n) conj g^(n)
inline cplx inner(const ModeArray& f, const ModeArray& g) {
  cplx acc{};
  for (int n = std::max(f.lo(), g.lo()); n <= std::min(f.hi(), g.hi()); ++n) acc += f[n] * std::conj(g[n]);
  return acc;
}
inline cplx inner(const HardyFunction& f, const HardyFunction& g) { return inner(f.modes(), g.modes()); }

// <f, g> = sum f^(n) g^(-n)
inline cplx pair(const ModeArray& f, const ModeArray& g) {
  cplx acc{};
  for (int n = f.lo(); n <= f.hi(); ++n) acc += f[n] * g[-n];
  return acc;
}

// --- grid transforms ---------------------------------------------------------

// Smallest 2^a 3^b 5^c that is >= n.
inline int fft_size(int n) {
  n = std::max(n, 1);
  for (int m = n;; ++m) {
    int r = m;
    for (int p : {2, 3, 5})
      while (r % p == 0) r /= p;
    if (r == 1) return m;
  }
}

// Values at x_j = 2 pi j / P of the trigonometric polynomial with coefficients f.
inline std::vector<cplx> synthesize(const ModeArray& f, int P) {
  std::vector<cplx> spec(static_cast<std::size_t>(P));
  for (int n = f.lo(); n <= f.hi(); ++n) spec[static_cast<std::size_t>(((n % P) + P) % P)] += f[n];
  std::vector<cplx> vals;
  Eigen::FFT<double> fft;
  fft.SetFlag(Eigen::FFT<double>::Unscaled);
  fft.inv(vals, spec);
  return vals;
}

// Discrete coefficients on lo..hi of grid values (mode n read from n mod P).
inline ModeArray analyze(const std::vector<cplx>& vals, int lo, int hi) {
  const int P = static_cast<int>(vals.size());
  std::vector<cplx> spec;
  Eigen::FFT<double> fft;
  fft.fwd(spec, vals);
  ModeArray out(lo, hi);
  for (int n = lo; n <= hi; ++n) out.at(n) = spec[static_cast<std::size_t>(((n % P) + P) % P)] / static_cast<double>(P);
  return out;
}

// Exact product of two truncated series, reported on lo..hi. The grid is
// large enough that no retained mode receives an aliased contribution.
inline ModeArray mult(const ModeArray& f, const ModeArray& g, int lo, int hi) {
  // A product mode m aliases onto a retained n iff m = n + kP, k != 0.
  const int pmin = f.lo() + g.lo();
  const int pmax = f.hi() + g.hi();
  const int P = fft_size(std::max({std::abs(pmax - lo), std::abs(hi - pmin), 1}) + 1);
  auto a = synthesize(f, P);
  const auto b = synthesize(g, P);
  for (std::size_t j = 0; j < a.size(); ++j) a[j] *= b[j];
  return analyze(a, lo, hi);
}
inline ModeArray mult(const ModeArray& f, const ModeArray& g) { return mult(f, g, f.lo() + g.lo(), f.hi() + g.hi()); }

// Reconstruct a real potential on P grid points; returns the max |Im| seen.
inline std::vector<double> to_grid(const RealPotential& u, int P, double* max_imag = nullptr) {
  const auto vals = synthesize(u.modes(), P);
  std::vector<double> out(vals.size());
  double worst = 0.0;
  for (std::size_t j = 0; j < vals.size(); ++j) {
    out[j] = vals[j].real();
    worst = std::max(worst, std::abs(vals[j].imag()));
  }
  if (max_imag) *max_imag = worst;
  return out;
}

// Translation x -> x + theta: u^(n) -> e^{in theta} u^(n).
inline RealPotential translate(const RealPotential& u, double theta) {
  RealPotential out(u.cutoff());
  for (int n = 1; n <= u.cutoff(); ++n) out.set(n, std::polar(1.0, n * theta) * u.coeff(n));
  return out;
}

// Reflection x -> -x: u^(n) -> u^(-n) = conj u^(n).
inline RealPotential reflect(const RealPotential& u) {
  RealPotential out(u.cutoff());
  for (int n = 1; n <= u.cutoff(); ++n) out.set(n, std::conj(u.coeff(n)));
  return out;
}

}  // namespace bo
