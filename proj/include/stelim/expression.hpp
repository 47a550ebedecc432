#ifndef STELIM_EXPRESSION_HPP
#define STELIM_EXPRESSION_HPP

#include <span>
#include <stdexcept>
#include <string>
#include <string_view>

#include "stelim/rational_function.hpp"

namespace stelim {

enum class ParseErrorKind {
  kSyntax,
  kUnknownParameter,
  kDuplicateTransition,
  kZeroTransition,
  kUnknownState,
  kDuplicateState,
  kInvalidModel,
};

const char *to_string(ParseErrorKind kind);

/// Diagnostic with a 1-based source position.
class ParseError : public std::runtime_error {
public:
  ParseError(ParseErrorKind kind, std::size_t line, std::size_t column, const std::string &message);
  ParseErrorKind kind() const { return kind_; }
  std::size_t line() const { return line_; }
  std::size_t column() const { return column_; }
  const std::string &message() const { return message_; }

private:
  ParseErrorKind kind_;
  std::size_t line_;
  std::size_t column_;
  std::string message_;
};

/// Parses `+ - * / ( ) ^` expressions over the named parameters. Integer and
/// decimal literals are exact (0.1 is 1/10); exponents must be nonnegative
/// integer literals. No operation is counted.
RationalFunction parse_expression(std::string_view text, std::span<const std::string> params);

/// Exact decimal literal value, e.g. "2.50" -> 5/2.
Rational parse_decimal(std::string_view literal);

/// Renders `value` with `digits` digits after the decimal point, rounded half away from zero.
std::string to_decimal(const Rational &value, unsigned digits);

}  // namespace stelim

#endif  // STELIM_EXPRESSION_HPP
