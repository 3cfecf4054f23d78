#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace breptok {

// Library-level failure categories. Parse errors from the token decoder are
// reported as values (see token_codec.hpp); everything else throws BrepError.
enum class ErrorKind {
  MalformedGeometry,   // non-finite coordinates, wrong dimensions
  DegenerateGeometry,  // zero extent on every axis
  ContractViolation,   // caller broke a precondition (sizes, modes)
  InvalidCode,         // codebook index out of range
  UnreachableFaces,    // graph not connected from the start set
  WindowCapacity,      // more than 200 faces in a reference window
  DanglingReference,   // tag points outside the active window
  ModeViolation,       // unassigned references outside autocomplete mode
  GeneratorError,      // invalid synthetic-shape parameters
  FormatError,         // unreadable token or document file
};

class BrepError : public std::runtime_error {
 public:
  BrepError(ErrorKind kind, const std::string& message, std::vector<int> ids = {})
      : std::runtime_error(message), kind_(kind), ids_(std::move(ids)) {}

  ErrorKind kind() const { return kind_; }
  // Offending primitive ids, when the error concerns specific faces or edges.
  const std::vector<int>& ids() const { return ids_; }

 private:
  ErrorKind kind_;
  std::vector<int> ids_;
};

const char* error_kind_name(ErrorKind kind);

}  // namespace breptok
