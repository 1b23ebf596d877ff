#pragma once

#include <stdexcept>
#include <string>

namespace sensemake {

enum class ErrorKind {
  // network construction
  CycleDetected,
  MissingCpt,
  DuplicateVariable,
  UnknownParent,
  RowNotNormalized,
  // inference
  UnknownVariable,
  UnknownState,
  ImpossibleEvidence,
  // frames
  UnknownElement,
  SelfRelation,
  MissingCptAssignment,
  ParentMismatch,
  // memory network
  DuplicateMemory,
  SelfIncompatibility,
  EmptyMemory,
  UnknownUnit,
  // loop
  ConflictingEvidence,
  VariableMismatch,
  // oracle
  TooLarge,
  // scenario files
  Malformed,
  SchemaViolation,
  UnknownReference,
};

const char* to_string(ErrorKind kind);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const { return kind_; }

  /// True for errors that indicate bad input rather than a failed run.
  /// The CLI maps these to exit code 1; the rest exit 2.
  bool is_validation() const {
    return kind_ != ErrorKind::ImpossibleEvidence && kind_ != ErrorKind::TooLarge;
  }

 private:
  ErrorKind kind_;
};

}  // namespace sensemake
