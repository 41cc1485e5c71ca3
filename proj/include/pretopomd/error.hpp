#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>

namespace pretopomd {

enum class Errc {
  // ingestion
  IoError,
  EmptyFile,
  MissingColumn,
  MissingValue,
  UnparseableNumeric,
  UnknownCategoryLevel,
  TooManyLevels,
  InvalidSchema,
  UnknownFeature,
  IncompatibleKinds,
  // distances
  IncompatibleMetric,
  NonFiniteValue,
  EmptyTable,
  // rules
  EmptyInput,
  SyntaxError,
  NegationUnsupported,
  UnboundVariable,
  // space / hierarchy
  SingletonMatrix,
  InvalidArgument,
  IsolatedStart,
  EmptySetInFamily,
  UnknownPrenetworkInRule,
  // metrics
  UndefinedIndex,
  LengthMismatch,
  // cli
  ConfigError,
  UnknownElement,
  UnknownSetId,
};

std::string_view to_string(Errc code) noexcept;

/// Base exception for every failure raised by the library.
class Error : public std::runtime_error {
public:
  Error(Errc code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  [[nodiscard]] Errc code() const noexcept { return code_; }

private:
  Errc code_;
};

/// A data cell failed to parse or validate. Row and column are 0-based,
/// the row counting data lines only (the header is not row 0).
class CellError : public Error {
public:
  CellError(Errc code, std::size_t row, std::size_t col, std::string value);

  [[nodiscard]] std::size_t row() const noexcept { return row_; }
  [[nodiscard]] std::size_t col() const noexcept { return col_; }
  [[nodiscard]] const std::string& value() const noexcept { return value_; }

private:
  std::size_t row_;
  std::size_t col_;
  std::string value_;
};

/// Malformed rule text. `position` is a byte offset into the input.
class RuleSyntaxError : public Error {
public:
  RuleSyntaxError(std::size_t position, std::string expected);

  [[nodiscard]] std::size_t position() const noexcept { return position_; }
  [[nodiscard]] const std::string& expected() const noexcept {
    return expected_;
  }

private:
  std::size_t position_;
  std::string expected_;
};

/// Invalid or missing configuration value; `key` is the dotted key path,
/// e.g. "generator.k".
class ConfigError : public Error {
public:
  ConfigError(std::string key, const std::string& problem);

  [[nodiscard]] const std::string& key() const noexcept { return key_; }

private:
  std::string key_;
};

}  // namespace pretopomd
