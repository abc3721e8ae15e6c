// Error types shared by all pipeplan modules. The CLI maps each family onto
// a distinct process exit code.

#ifndef PIPEPLAN_ERRORS_H_
#define PIPEPLAN_ERRORS_H_

#include <stdexcept>
#include <string>

namespace pipeplan {

// Input data or configuration violates a documented invariant.
class ValidationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A layer produced a non-finite or non-positive cell multiplier.
class InvalidLayerError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

// Function argument outside its mathematical domain (e.g. negative flow).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// Bad call parameters (tolerances, missing B_s, incompatible warm start).
class ParameterError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// No raster route exists between two cells.
class NoRouteError : public std::runtime_error {
 public:
  NoRouteError(const std::string& what, std::string from_id, std::string to_id)
      : std::runtime_error(what),
        from_id_(std::move(from_id)),
        to_id_(std::move(to_id)) {}

  const std::string& from_id() const { return from_id_; }
  const std::string& to_id() const { return to_id_; }

 private:
  std::string from_id_;
  std::string to_id_;
};

// A model has no feasible solution; carries the scenario that caused it.
class InfeasibleError : public std::runtime_error {
 public:
  InfeasibleError(const std::string& what, std::string scenario)
      : std::runtime_error(what), scenario_(std::move(scenario)) {}

  const std::string& scenario() const { return scenario_; }

 private:
  std::string scenario_;
};

// Solver stopped on a time or node limit without proving optimality.
class SolverLimitError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// File could not be read or written.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace pipeplan

#endif  // PIPEPLAN_ERRORS_H_
