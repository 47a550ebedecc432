#ifndef STELIM_SRC_LEXER_HPP
#define STELIM_SRC_LEXER_HPP

#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "stelim/expression.hpp"

namespace stelim::detail {

enum class Tok { kIdent, kNumber, kPunct, kEnd };

struct Token {
  Tok kind;
  std::string text;
  std::size_t line;
  std::size_t column;
};

std::vector<Token> tokenize(std::string_view source);

class TokenStream {
public:
  explicit TokenStream(std::vector<Token> tokens) : tokens_(std::move(tokens)) {}

  const Token &peek(std::size_t ahead = 0) const {
    const std::size_t i = std::min(pos_ + ahead, tokens_.size() - 1);
    return tokens_[i];
  }
  const Token &next() {
    const Token &t = tokens_[pos_];
    if (pos_ + 1 < tokens_.size()) ++pos_;
    return t;
  }
  bool at_end() const { return peek().kind == Tok::kEnd; }
  bool is_punct(std::string_view p, std::size_t ahead = 0) const {
    const Token &t = peek(ahead);
    return t.kind == Tok::kPunct && t.text == p;
  }
  bool is_word(std::string_view w) const {
    return peek().kind == Tok::kIdent && peek().text == w;
  }
  void expect_punct(std::string_view p);
  [[noreturn]] void fail(ParseErrorKind kind, const Token &at, const std::string &message) const;
  [[noreturn]] void fail_here(const std::string &message) const {
    fail(ParseErrorKind::kSyntax, peek(), message);
  }

private:
  std::vector<Token> tokens_;
  std::size_t pos_ = 0;
};

std::string describe(const Token &t);

/// Parses one expression from the stream, stopping before the first token
/// that cannot continue it.
RationalFunction parse_expression(TokenStream &ts, const std::unordered_map<std::string, std::size_t> &params);

}  // namespace stelim::detail

#endif  // STELIM_SRC_LEXER_HPP
