#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace curvefit {

enum class ErrorKind {
  missing_column,
  parse,
  empty_file,
  all_missing,
  domain,
  non_finite,
  invalid_bounds,
  invalid_config,
  too_short,
  no_observed_values,
  insufficient_data,
  shape_mismatch,
  empty_data,
  write_error,
  invalid_data,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(message), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

// Cell that could not be read as a real number. Row indices are 1-based data
// rows (the header is row 0).
class ParseError : public Error {
 public:
  ParseError(std::size_t row, std::string column, std::string token)
      : Error(ErrorKind::parse, "row " + std::to_string(row) + ", column '" +
                                    column + "': cannot parse '" + token + "'"),
        row_(row),
        column_(std::move(column)),
        token_(std::move(token)) {}

  std::size_t row() const noexcept { return row_; }
  const std::string& column() const noexcept { return column_; }
  const std::string& token() const noexcept { return token_; }

 private:
  std::size_t row_;
  std::string column_;
  std::string token_;
};

// Abscissa outside a model family's domain (log of a non-positive value,
// power of a non-positive base). Carries the offending element index.
class DomainError : public Error {
 public:
  DomainError(std::size_t index, const std::string& message)
      : Error(ErrorKind::domain, message), index_(index) {}

  std::size_t index() const noexcept { return index_; }

 private:
  std::size_t index_;
};

}  // namespace curvefit
