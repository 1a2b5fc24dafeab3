#pragma once

#include <stdexcept>
#include <string>

namespace qpg {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InvalidTruncation : public Error {
 public:
  using Error::Error;
};

class HermiticityError : public Error {
 public:
  using Error::Error;
};

class SpaceMismatch : public Error {
 public:
  using Error::Error;
};

class NotAProjector : public Error {
 public:
  using Error::Error;
};

class InvalidState : public Error {
 public:
  using Error::Error;
};

/// A parameter violates its documented range; `key()` names it.
class InvalidParameter : public Error {
 public:
  InvalidParameter(std::string key, const std::string& what)
      : Error(key + ": " + what), key_(std::move(key)) {}
  const std::string& key() const noexcept { return key_; }

 private:
  std::string key_;
};

class PreconditionError : public Error {
 public:
  using Error::Error;
};

/// Time stepping did not settle under repeated step halving.
class ConvergenceError : public Error {
 public:
  ConvergenceError(const std::string& what, double last_dt, double last_change)
      : Error(what), last_dt_(last_dt), last_change_(last_change) {}
  double last_dt() const noexcept { return last_dt_; }
  double last_change() const noexcept { return last_change_; }

 private:
  double last_dt_;
  double last_change_;
};

/// The QPG -> CNOT recipe could not be matched by local phases.
class RecipeMismatch : public Error {
 public:
  RecipeMismatch(const std::string& what, double best_distance)
      : Error(what), best_distance_(best_distance) {}
  double best_distance() const noexcept { return best_distance_; }

 private:
  double best_distance_;
};

}  // namespace qpg
