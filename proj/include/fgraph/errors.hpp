#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace fgraph {

// Base for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A manifold/group/factor operation received vectors of the wrong length or
// values of the wrong type.
class ContractViolation : public Error {
 public:
  using Error::Error;
};

class MissingKeyError : public Error {
 public:
  explicit MissingKeyError(const std::string& key)
      : Error("missing variable for key " + key), key_(key) {}
  const std::string& key() const { return key_; }

 private:
  std::string key_;
};

// A factor returned an error or Jacobian inconsistent with its declared shape.
class DimensionMismatch : public Error {
 public:
  DimensionMismatch(std::size_t factor_index, const std::string& what)
      : Error("factor " + std::to_string(factor_index) + ": " + what),
        factor_index_(factor_index) {}
  std::size_t factor_index() const { return factor_index_; }

 private:
  std::size_t factor_index_;
};

// Non-positive (or numerically vanishing) pivot during Cholesky.
// `column` is the column of the unpermuted matrix.
class IndefiniteMatrixError : public Error {
 public:
  IndefiniteMatrixError(std::size_t column, double pivot)
      : Error("matrix is not positive definite: pivot " + std::to_string(pivot) +
              " at column " + std::to_string(column)),
        column_(column),
        pivot_(pivot) {}
  std::size_t column() const { return column_; }
  double pivot() const { return pivot_; }

 private:
  std::size_t column_;
  double pivot_;
};

class ParseError : public Error {
 public:
  ParseError(std::size_t line, const std::string& what)
      : Error("line " + std::to_string(line) + ": " + what), line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

// A record names a vertex id that never appears in the file.
class ReferenceError : public ParseError {
 public:
  using ParseError::ParseError;
};

// Unreadable or unwritable file.
class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace fgraph
