#include "stelim/expression.hpp"

#include <cctype>

#include "lexer.hpp"

namespace stelim {

const char *to_string(ParseErrorKind kind) {
  switch (kind) {
  case ParseErrorKind::kSyntax: return "SyntaxError";
  case ParseErrorKind::kUnknownParameter: return "UnknownParameter";
  case ParseErrorKind::kDuplicateTransition: return "DuplicateTransition";
  case ParseErrorKind::kZeroTransition: return "ZeroTransition";
  case ParseErrorKind::kUnknownState: return "UnknownState";
  case ParseErrorKind::kDuplicateState: return "DuplicateState";
  case ParseErrorKind::kInvalidModel: return "InvalidModel";
  }
  return "ParseError";
}

ParseError::ParseError(ParseErrorKind kind, std::size_t line, std::size_t column, const std::string &message)
    : std::runtime_error("line " + std::to_string(line) + ", column " + std::to_string(column) + ": " +
                         to_string(kind) + ": " + message),
      kind_(kind), line_(line), column_(column), message_(message) {}

namespace detail {

std::vector<Token> tokenize(std::string_view src) {
  std::vector<Token> out;
  std::size_t line = 1, col = 1, i = 0;
  auto advance = [&](std::size_t n) {
    for (std::size_t k = 0; k < n; ++k, ++i) {
      if (src[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
  };
  while (i < src.size()) {
    const char c = src[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      advance(1);
      continue;
    }
    if (c == '#') {
      while (i < src.size() && src[i] != '\n') advance(1);
      continue;
    }
    const std::size_t l = line, cc = col, start = i;
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t j = i;
      while (j < src.size() && (std::isalnum(static_cast<unsigned char>(src[j])) || src[j] == '_')) ++j;
      out.push_back({Tok::kIdent, std::string(src.substr(start, j - start)), l, cc});
      advance(j - i);
    } else if (std::isdigit(static_cast<unsigned char>(c))) {
      std::size_t j = i;
      while (j < src.size() && std::isdigit(static_cast<unsigned char>(src[j]))) ++j;
      if (j + 1 < src.size() && src[j] == '.' && std::isdigit(static_cast<unsigned char>(src[j + 1]))) {
        ++j;
        while (j < src.size() && std::isdigit(static_cast<unsigned char>(src[j]))) ++j;
      }
      out.push_back({Tok::kNumber, std::string(src.substr(start, j - start)), l, cc});
      advance(j - i);
    } else if (c == '-' && i + 1 < src.size() && src[i + 1] == '>') {
      out.push_back({Tok::kPunct, "->", l, cc});
      advance(2);
    } else if (std::string_view("+-*/()^;,:").find(c) != std::string_view::npos) {
      out.push_back({Tok::kPunct, std::string(1, c), l, cc});
      advance(1);
    } else {
      throw ParseError(ParseErrorKind::kSyntax, l, cc, std::string("unexpected character '") + c + "'");
    }
  }
  out.push_back({Tok::kEnd, "", line, col});
  return out;
}

std::string describe(const Token &t) {
  if (t.kind == Tok::kEnd) return "end of input";
  return "'" + t.text + "'";
}

void TokenStream::expect_punct(std::string_view p) {
  if (!is_punct(p)) fail_here("expected '" + std::string(p) + "' but found " + describe(peek()));
  next();
}

void TokenStream::fail(ParseErrorKind kind, const Token &at, const std::string &message) const {
  throw ParseError(kind, at.line, at.column, message);
}

namespace {

using ParamMap = std::unordered_map<std::string, std::size_t>;

RationalFunction parse_sum(TokenStream &ts, const ParamMap &params);

RationalFunction parse_primary(TokenStream &ts, const ParamMap &params) {
  const Token &t = ts.peek();
  if (t.kind == Tok::kNumber) {
    ts.next();
    return RationalFunction(parse_decimal(t.text));
  }
  if (t.kind == Tok::kIdent) {
    auto it = params.find(t.text);
    if (it == params.end()) ts.fail(ParseErrorKind::kUnknownParameter, t, "unknown parameter '" + t.text + "'");
    ts.next();
    return RationalFunction::variable(it->second);
  }
  if (ts.is_punct("(")) {
    ts.next();
    RationalFunction r = parse_sum(ts, params);
    ts.expect_punct(")");
    return r;
  }
  ts.fail_here("expected an expression but found " + describe(t));
}

RationalFunction parse_power(TokenStream &ts, const ParamMap &params) {
  RationalFunction base = parse_primary(ts, params);
  if (!ts.is_punct("^")) return base;
  ts.next();
  const Token &e = ts.peek();
  if (e.kind != Tok::kNumber || e.text.find('.') != std::string::npos || e.text.size() > 6)
    ts.fail_here("exponent must be a nonnegative integer literal");
  ts.next();
  return pow(base, static_cast<unsigned>(std::stoul(e.text)));
}

RationalFunction parse_unary(TokenStream &ts, const ParamMap &params) {
  if (ts.is_punct("-")) {
    ts.next();
    return -parse_unary(ts, params);
  }
  if (ts.is_punct("+")) {
    ts.next();
    return parse_unary(ts, params);
  }
  return parse_power(ts, params);
}

RationalFunction parse_product(TokenStream &ts, const ParamMap &params) {
  RationalFunction acc = parse_unary(ts, params);
  while (ts.is_punct("*") || ts.is_punct("/")) {
    const Token op = ts.next();
    RationalFunction rhs = parse_unary(ts, params);
    if (op.text == "*") {
      acc = acc * rhs;
    } else {
      if (rhs.is_zero()) ts.fail(ParseErrorKind::kSyntax, op, "division by zero");
      acc = acc / rhs;
    }
  }
  return acc;
}

RationalFunction parse_sum(TokenStream &ts, const ParamMap &params) {
  RationalFunction acc = parse_product(ts, params);
  while (ts.is_punct("+") || ts.is_punct("-")) {
    const bool plus = ts.next().text == "+";
    RationalFunction rhs = parse_product(ts, params);
    acc = plus ? acc + rhs : acc - rhs;
  }
  return acc;
}

}  // namespace

RationalFunction parse_expression(TokenStream &ts, const ParamMap &params) {
  UncountedScope quiet;
  return parse_sum(ts, params);
}

}  // namespace detail

RationalFunction parse_expression(std::string_view text, std::span<const std::string> params) {
  std::unordered_map<std::string, std::size_t> map;
  for (std::size_t i = 0; i < params.size(); ++i) map.emplace(params[i], i);
  detail::TokenStream ts(detail::tokenize(text));
  RationalFunction r = detail::parse_expression(ts, map);
  if (!ts.at_end()) ts.fail_here("unexpected " + detail::describe(ts.peek()) + " after expression");
  return r;
}

Rational parse_decimal(std::string_view literal) {
  const auto dot = literal.find('.');
  if (dot == std::string_view::npos) return Rational(Integer(std::string(literal)));
  std::string digits(literal.substr(0, dot));
  const std::string frac(literal.substr(dot + 1));
  digits += frac;
  Integer den;
  mpz_ui_pow_ui(den.get_mpz_t(), 10, frac.size());
  Rational r(Integer(digits.empty() ? "0" : digits), den);
  r.canonicalize();
  return r;
}

std::string to_decimal(const Rational &value, unsigned digits) {
  Integer scale;
  mpz_ui_pow_ui(scale.get_mpz_t(), 10, digits);
  const bool negative = value < 0;
  Rational a = abs(value) * scale;
  Integer q = a.get_num() / a.get_den();
  Rational rest = a - Rational(q);
  if (rest * 2 >= 1) ++q;
  std::string s = q.get_str();
  if (digits > 0) {
    if (s.size() <= digits) s.insert(0, digits + 1 - s.size(), '0');
    s.insert(s.size() - digits, ".");
  }
  if (negative && q != 0) s.insert(0, "-");
  return s;
}

}  // namespace stelim
