#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace divcurl {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed or inconsistent user input (maps to CLI exit code 4).
class InputError : public Error {
 public:
  using Error::Error;
};

class ParseError : public InputError {
 public:
  using InputError::InputError;
};

class TopologyError : public InputError {
 public:
  using InputError::InputError;
};

class TagError : public InputError {
 public:
  using InputError::InputError;
};

class CohomologyMismatch : public InputError {
 public:
  using InputError::InputError;
};

class CoefficientError : public InputError {
 public:
  using InputError::InputError;
};

class DimensionError : public Error {
 public:
  using Error::Error;
};

// A linear solve (or a constrained solve) failed; `stage` names the pipeline step.
class SolverError : public Error {
 public:
  SolverError(std::string stage, const std::string& what, int iterations = 0, double residual = 0.0)
      : Error(stage + ": " + what), stage_(std::move(stage)), iterations_(iterations), residual_(residual) {}
  const std::string& stage() const { return stage_; }
  int iterations() const { return iterations_; }
  double residual() const { return residual_; }

 private:
  std::string stage_;
  int iterations_;
  double residual_;
};

class IncompatibleConstraint : public SolverError {
 public:
  using SolverError::SolverError;
};

// Data failed a compatibility condition (maps to CLI exit code 2).
class CompatibilityError : public Error {
 public:
  explicit CompatibilityError(std::vector<std::string> failing)
      : Error("incompatible data: " + join(failing)), failing_(std::move(failing)) {}
  const std::vector<std::string>& failing() const { return failing_; }

 private:
  static std::string join(const std::vector<std::string>& names) {
    std::string out;
    for (const auto& n : names) out += (out.empty() ? "" : ", ") + n;
    return out;
  }
  std::vector<std::string> failing_;
};

}  // namespace divcurl
