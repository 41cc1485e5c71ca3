#include "pretopomd/error.hpp"

#include <fmt/format.h>

namespace pretopomd {

std::string_view to_string(Errc code) noexcept {
  switch (code) {
    case Errc::IoError: return "IoError";
    case Errc::EmptyFile: return "EmptyFile";
    case Errc::MissingColumn: return "MissingColumn";
    case Errc::MissingValue: return "MissingValue";
    case Errc::UnparseableNumeric: return "UnparseableNumeric";
    case Errc::UnknownCategoryLevel: return "UnknownCategoryLevel";
    case Errc::TooManyLevels: return "TooManyLevels";
    case Errc::InvalidSchema: return "InvalidSchema";
    case Errc::UnknownFeature: return "UnknownFeature";
    case Errc::IncompatibleKinds: return "IncompatibleKinds";
    case Errc::IncompatibleMetric: return "IncompatibleMetric";
    case Errc::NonFiniteValue: return "NonFiniteValue";
    case Errc::EmptyTable: return "EmptyTable";
    case Errc::EmptyInput: return "EmptyInput";
    case Errc::SyntaxError: return "SyntaxError";
    case Errc::NegationUnsupported: return "NegationUnsupported";
    case Errc::UnboundVariable: return "UnboundVariable";
    case Errc::SingletonMatrix: return "SingletonMatrix";
    case Errc::InvalidArgument: return "InvalidArgument";
    case Errc::IsolatedStart: return "IsolatedStart";
    case Errc::EmptySetInFamily: return "EmptySetInFamily";
    case Errc::UnknownPrenetworkInRule: return "UnknownPrenetworkInRule";
    case Errc::UndefinedIndex: return "UndefinedIndex";
    case Errc::LengthMismatch: return "LengthMismatch";
    case Errc::ConfigError: return "ConfigError";
    case Errc::UnknownElement: return "UnknownElement";
    case Errc::UnknownSetId: return "UnknownSetId";
  }
  return "Unknown";
}

CellError::CellError(Errc code, std::size_t row, std::size_t col,
                     std::string value)
    : Error(code, fmt::format("{} at row {}, column {}: '{}'", to_string(code),
                              row, col, value)),
      row_(row),
      col_(col),
      value_(std::move(value)) {}

RuleSyntaxError::RuleSyntaxError(std::size_t position, std::string expected)
    : Error(Errc::SyntaxError,
            fmt::format("syntax error at position {}: expected {}", position,
                        expected)),
      position_(position),
      expected_(std::move(expected)) {}

ConfigError::ConfigError(std::string key, const std::string& problem)
    : Error(Errc::ConfigError, fmt::format("{}: {}", key, problem)),
      key_(std::move(key)) {}

}  // namespace pretopomd
