#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace datlc {

/// Lattice document is structurally malformed (missing/ill-typed field).
class SchemaError : public std::runtime_error {
 public:
  SchemaError(std::string field, const std::string& what)
      : std::runtime_error("schema error at \"" + field + "\": " + what),
        field_(std::move(field)) {}
  const std::string& field() const { return field_; }

 private:
  std::string field_;
};

/// Requested output length cannot fit into the lattice under the active
/// termination mode.
class InfeasibleLengthError : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Every candidate path scored probability zero.
class NoValidPathError : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Every beam candidate was pruned to probability zero.
class NoValidSequenceError : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Brute-force enumeration refused: the requested instance is too large.
class EnumerationCapError : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace datlc
