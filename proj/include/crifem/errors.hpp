#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace crifem {

// Exception taxonomy. Drivers map these onto process exit codes:
// config errors -> 2, assembly/geometry errors -> 3, solver errors -> 4, io -> 5.

struct InvalidInputError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct DegenerateCutError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Mesh too coarse for the interface (more than one crossing per edge, or
// more than two cut edges per element).
struct AssumptionViolationError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ConstructionError : std::runtime_error {
  int element = -1;
  ConstructionError(const std::string& msg, int elem)
      : std::runtime_error(msg + " (element " + std::to_string(elem) + ")"), element(elem) {}
};

struct SingularMatrixError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ConvergenceError : std::runtime_error {
  std::vector<double> residual_history;
  ConvergenceError(const std::string& msg, std::vector<double> history)
      : std::runtime_error(msg), residual_history(std::move(history)) {}
};

struct NotSpdError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct IoError : std::runtime_error {
  std::string path;
  IoError(const std::string& msg, std::string p)
      : std::runtime_error(msg + ": " + p), path(std::move(p)) {}
};

}  // namespace crifem
