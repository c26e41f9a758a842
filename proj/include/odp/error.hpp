#pragma once

#include <stdexcept>
#include <string>

namespace odp {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An input violates a documented precondition.
class InvalidParameter : public Error {
 public:
  using Error::Error;
};

/// The adaptive integrator could not advance (step underflow or step budget).
class IntegrationError : public Error {
 public:
  IntegrationError(const std::string& what, double at_time)
      : Error(what), time_(at_time) {}
  double time() const noexcept { return time_; }

 private:
  double time_;
};

/// The drive sits too close to an exchange of stability for the requested quantity.
class DegenerateError : public Error {
 public:
  using Error::Error;
};

/// A truncated or iterative computation could not reach its target accuracy.
class AccuracyError : public Error {
 public:
  AccuracyError(const std::string& what, double achieved)
      : Error(what), achieved_(achieved) {}
  double achieved() const noexcept { return achieved_; }

 private:
  double achieved_;
};

/// The closed-form path does not apply to this turning-point structure.
class TopologyError : public Error {
 public:
  using Error::Error;
};

/// Two independent routes to the same quantity disagree.
class ConsistencyError : public Error {
 public:
  using Error::Error;
};

/// A series evaluation landed on (or next to) a pole.
class PoleProximityError : public Error {
 public:
  using Error::Error;
};

}  // namespace odp
