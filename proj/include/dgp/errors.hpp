#pragma once

#include <stdexcept>
#include <string>

namespace dgp {

// Invalid model definition or inputs violating an operation's contract.
class ModelError : public std::runtime_error {
 public:
  explicit ModelError(const std::string& what) : std::runtime_error(what) {}
};

// A numerical procedure failed to converge or the requested quantity
// does not exist (e.g. an infinite mean first passage time).
class NumericalError : public std::runtime_error {
 public:
  explicit NumericalError(const std::string& what) : std::runtime_error(what) {}
};

// State-space truncation hit its hard cap before the tail criterion was met.
class TruncationError : public NumericalError {
 public:
  TruncationError(const std::string& what, double achieved_tail_mass)
      : NumericalError(what), achieved_tail_mass(achieved_tail_mass) {}
  double achieved_tail_mass;
};

}  // namespace dgp
