#pragma once

#include <stdexcept>
#include <string>

namespace friedrichs {

enum class ErrorKind {
  InvalidInput,
  Schema,
  Validation,
  NonRationalProduct,
  SingularOrigin,
  BranchBoundary,
  PoleCollision,
  NonIntegrable,
  InconclusiveOrder,
  DegenerateCoupling,
  Domain,
  EigenvalueProximity,
  EmbeddedEigenvalue,
  BorderlineClassification,
  ClassificationMismatch,
  NonNormalizableMode,
  UndefinedSurvival,
  BudgetExceeded,
  Numerical
};

const char* to_string(ErrorKind k);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& msg)
      : std::runtime_error(std::string(to_string(kind)) + ": " + msg), kind_(kind) {}
  ErrorKind kind() const { return kind_; }

 private:
  ErrorKind kind_;
};

// process exit status for the command-line tool
int exit_code(ErrorKind k);

}  // namespace friedrichs
