#pragma once

#include <stdexcept>
#include <string>

namespace bo {

// Base of every failure the toolkit reports.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InvalidArgument : public Error {
 public:
  using Error::Error;
};

// Dense eigensolver failed, or a pair violated the residual bound.
class EigenSolverError : public Error {
 public:
  EigenSolverError(const std::string& what, int index) : Error(what), index_(index) {}
  int index() const { return index_; }

 private:
  int index_;
};

// Two eigenvalues collided; only possible as a truncation artifact for real u.
class DegenerateSpectrumError : public Error {
 public:
  DegenerateSpectrumError(const std::string& what, int lower, int upper)
      : Error(what), lower_(lower), upper_(upper) {}
  int lower() const { return lower_; }
  int upper() const { return upper_; }

 private:
  int lower_;
  int upper_;
};

// The normalization chain <f_0|1> > 0, <S f_{n-1}|f_n> > 0 broke at `index`.
class PhaseChainError : public Error {
 public:
  PhaseChainError(const std::string& what, int index) : Error(what), index_(index) {}
  int index() const { return index_; }

 private:
  int index_;
};

// Spectral data that cannot belong to a real potential (closed gap with a
// large <1|f_n>, non-positive kappa, disagreeing evaluations of zeta_n).
class SpectralCorruptionError : public Error {
 public:
  SpectralCorruptionError(const std::string& what, int index) : Error(what), index_(index) {}
  int index() const { return index_; }

 private:
  int index_;
};

class NonConvergenceError : public Error {
 public:
  NonConvergenceError(const std::string& what, int iterations, double residual)
      : Error(what), iterations_(iterations), residual_(residual) {}
  int iterations() const { return iterations_; }
  double residual() const { return residual_; }

 private:
  int iterations_;
  double residual_;
};

class ConditioningError : public Error {
 public:
  ConditioningError(const std::string& what, double sigma_min) : Error(what), sigma_min_(sigma_min) {}
  double sigma_min() const { return sigma_min_; }

 private:
  double sigma_min_;
};

// Non-finite state in a time integrator, or an inversion failure at a sample.
class TimeStepError : public Error {
 public:
  TimeStepError(const std::string& what, double time) : Error(what), time_(time) {}
  double time() const { return time_; }

 private:
  double time_;
};

// Missing file, unreadable input, or a document that does not match its schema.
class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace bo
