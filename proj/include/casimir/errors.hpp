#pragma once

#include <stdexcept>
#include <string>

namespace casimir {

/// Malformed input text (mesh files, geometry files). Carries the 1-based line number.
class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& what, long line)
      : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}
  long line() const { return line_; }

 private:
  long line_;
};

/// A mesh that violates the closed, consistently oriented surface invariants.
class ValidationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Overlapping or touching objects, bad transforms, unknown labels.
class GeometryError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Quadrature breakdown, failed factorizations, unphysical determinant signs.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace casimir
