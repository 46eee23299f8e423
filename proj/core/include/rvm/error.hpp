// Exception types. Every failure the library reports derives from rvm::Error.
#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace rvm {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Argument outside the domain of a map (e.g. |q| >= 1 for the relativistic inverse velocity).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// A configuration or data-shape precondition failed. `key` names the offending
/// config path (e.g. "[time].dt") when one applies.
class ValidationError : public Error {
 public:
  ValidationError(std::string key, const std::string& what)
      : Error(key.empty() ? what : key + ": " + what), key_(std::move(key)) {}
  const std::string& key() const noexcept { return key_; }

 private:
  std::string key_;
};

/// Initial charge density is not globally neutral.
class NeutralityError : public Error {
 public:
  NeutralityError(double net_charge, const std::string& what) : Error(what), net_charge_(net_charge) {}
  double net_charge() const noexcept { return net_charge_; }

 private:
  double net_charge_;
};

/// A particle left the computational grid or the support cone.
class ConeEscapeError : public Error {
 public:
  using Error::Error;
};

/// Iterative solver or quadrature did not reach its tolerance.
class ConvergenceError : public Error {
 public:
  ConvergenceError(const std::string& what, std::vector<double> history)
      : Error(what), history_(std::move(history)) {}
  const std::vector<double>& history() const noexcept { return history_; }

 private:
  std::vector<double> history_;
};

/// Missing or malformed on-disk artifact.
class ArtifactError : public Error {
 public:
  using Error::Error;
};

}  // namespace rvm
