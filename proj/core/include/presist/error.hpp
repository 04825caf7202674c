#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace presist {

enum class ErrorKind {
  DuplicateEdge,
  SelfLoop,
  NonPositiveWeight,
  Disconnected,
  InvalidParams,
  DimensionMismatch,
  SingularShift,
  NonFinite,
  FingerprintMismatch,
  NotConverged,
  InvalidP,
  InvalidK,
  EigenFailure,
  LengthMismatch,
  ParseError,
  RaggedRows,
  NonNumericFeature,
  DegenerateKernel,
  Io,
};

std::string_view to_string(ErrorKind kind) noexcept;

/// Every failure raised by the library. `kind()` is the machine-readable tag.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(std::string(to_string(kind)) + ": " + message), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

/// Raised when a graph has more than one connected component.
class DisconnectedError : public Error {
 public:
  explicit DisconnectedError(std::vector<std::vector<std::size_t>> components);

  const std::vector<std::vector<std::size_t>>& components() const noexcept { return components_; }

 private:
  std::vector<std::vector<std::size_t>> components_;
};

/// Raised by the feature loader; row and column are 1-based, 0 when unknown.
class ParseError : public Error {
 public:
  ParseError(ErrorKind kind, std::size_t row, std::size_t column, const std::string& message);

  std::size_t row() const noexcept { return row_; }
  std::size_t column() const noexcept { return column_; }

 private:
  std::size_t row_;
  std::size_t column_;
};

}  // namespace presist
