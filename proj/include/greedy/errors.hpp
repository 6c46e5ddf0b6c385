#pragma once

#include <stdexcept>
#include <string>

namespace greedy {

/// Base class for every error thrown by this library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A regressor column has (near-)zero empirical norm after optional
/// centering, so it cannot be standardized. Carries the column index.
class DegenerateColumn : public Error {
 public:
  explicit DegenerateColumn(int column_index)
      : Error("degenerate column " + std::to_string(column_index) +
              ": empirical norm below 1e-12"),
        column(column_index) {}
  int column;
};

class DimensionMismatch : public Error {
 public:
  using Error::Error;
};

/// Subset enumeration for the restricted eigenvalue would exceed the cap;
/// that oracle is desk-scale only.
class CombinatorialBlowup : public Error {
 public:
  using Error::Error;
};

/// Every candidate regressor is excluded from selection.
class AllExcluded : public Error {
 public:
  using Error::Error;
};

/// Corrected AIC is undefined: (df + 2)/n >= 1.
class AiccUndefined : public Error {
 public:
  using Error::Error;
};

/// An iterative solver hit its iteration cap before reaching tolerance.
class NoConvergence : public Error {
 public:
  using Error::Error;
};

/// A Gram submatrix is numerically singular.
class Singular : public Error {
 public:
  using Error::Error;
};

/// A cross-validation fold has no rows.
class EmptyFold : public Error {
 public:
  using Error::Error;
};

/// CSV input could not be parsed; carries the 1-based line number.
class CsvError : public Error {
 public:
  CsvError(long line_number, const std::string& what)
      : Error("line " + std::to_string(line_number) + ": " + what),
        line(line_number) {}
  long line;
};

}  // namespace greedy
