#pragma once

#include <stdexcept>
#include <string>

namespace mtsp {

/// Raised when an iterative solver exceeds its iteration budget without
/// reaching a verdict. Distinct from an infeasible or unbounded outcome.
class SolverStall : public std::runtime_error {
 public:
  explicit SolverStall(const std::string& what) : std::runtime_error(what) {}
};

/// Raised when a caller asks for work outside a method's supported range
/// (oracle size cap, decomposition without a matching condition, ...).
class Refusal : public std::runtime_error {
 public:
  explicit Refusal(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace mtsp
