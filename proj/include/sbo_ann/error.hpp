#pragma once

#include <stdexcept>
#include <string>

namespace sbo_ann {

// All library failures derive from Error so callers can catch one type.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

class SchemaError : public Error {
public:
  using Error::Error;
};

class ParseError : public Error {
public:
  ParseError(std::size_t row, std::string column, const std::string &what)
      : Error("row " + std::to_string(row) + ", column " + column + ": " + what),
        row_(row), column_(std::move(column)) {}

  std::size_t row() const noexcept { return row_; }
  const std::string &column() const noexcept { return column_; }

private:
  std::size_t row_;
  std::string column_;
};

class ValidationError : public Error {
public:
  using Error::Error;
};

class DimensionError : public Error {
public:
  using Error::Error;
};

class InsufficientDataError : public Error {
public:
  using Error::Error;
};

class UndefinedMetricError : public Error {
public:
  using Error::Error;
};

class OptimizationError : public Error {
public:
  using Error::Error;
};

} // namespace sbo_ann
