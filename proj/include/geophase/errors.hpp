#pragma once

#include <stdexcept>
#include <string>

namespace geophase {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An argument lies outside the operation's domain (non-unit axis, bad angle, ...).
class InputDomainError : public Error {
 public:
  using Error::Error;
};

/// A loop cannot be triangulated or otherwise has invalid geometry.
class GeometryError : public Error {
 public:
  using Error::Error;
};

/// Fixed-step integration lost too much norm; retry with more steps.
class NumericalFailure : public Error {
 public:
  NumericalFailure(const std::string& what, double norm_drift)
      : Error(what), norm_drift_(norm_drift) {}
  double norm_drift() const noexcept { return norm_drift_; }

 private:
  double norm_drift_;
};

/// The evolved state did not return to its starting ray closely enough.
class NotAdiabaticError : public Error {
 public:
  NotAdiabaticError(const std::string& what, double overlap)
      : Error(what), overlap_(overlap) {}
  double overlap() const noexcept { return overlap_; }

 private:
  double overlap_;
};

/// Two consecutive eigenstates along a loop are (nearly) orthogonal.
class LoopTooCoarseError : public Error {
 public:
  using Error::Error;
};

/// Inconsistent run or media configuration.
class ConfigurationError : public Error {
 public:
  using Error::Error;
};

/// The pair state left the degenerate subspace.
class ProtocolViolation : public Error {
 public:
  ProtocolViolation(const std::string& what, double leakage)
      : Error(what), leakage_(leakage) {}
  double leakage() const noexcept { return leakage_; }

 private:
  double leakage_;
};

}  // namespace geophase
