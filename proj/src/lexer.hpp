#pragma once

// Tokenizer shared by the model and assertion parsers.

#include <complex>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "qmc/errors.hpp"

namespace qmc::detail {

enum class TokenKind { ident, number, string, punct, end };

struct Token {
  TokenKind kind;
  std::string text;  // identifier, punctuation, or unescaped string body
  double value = 0.0;
  bool imaginary = false;  // number written with an `i` suffix
  SourcePos pos;
};

/// Identifiers: [A-Za-z_][A-Za-z0-9_']*. Numbers: decimal with optional
/// exponent and an optional `i` suffix. Strings: double quoted, no escapes.
/// `#` starts a comment running to the end of the line.
std::vector<Token> tokenize(std::string_view text);

class TokenStream {
 public:
  explicit TokenStream(std::vector<Token> tokens) : tokens_(std::move(tokens)) {}

  const Token& peek(std::size_t ahead = 0) const;
  const Token& next();
  bool at_end() const { return peek().kind == TokenKind::end; }
  bool is_punct(std::string_view p, std::size_t ahead = 0) const;
  bool is_ident(std::string_view word, std::size_t ahead = 0) const;
  bool accept_punct(std::string_view p);
  bool accept_ident(std::string_view word);
  const Token& expect_punct(std::string_view p);
  const Token& expect_ident(std::string_view word);
  const Token& expect_any_ident(std::string_view what);
  double expect_real(std::string_view what);
  int expect_int(std::string_view what);
  [[noreturn]] void fail(const std::string& message) const;
  [[noreturn]] void fail_at(const Token& t, const std::string& message) const;

 private:
  std::vector<Token> tokens_;
  std::size_t at_ = 0;
};

std::string describe(const Token& t);

/// complex = ["+"|"-"] term {("+"|"-") term};  term = NUMBER ["i"] | "i"
std::complex<double> parse_complex(TokenStream& ts);
/// matrix = "[" row {"," row} "]";  row = "[" complex {"," complex} "]"
Eigen::MatrixXcd parse_matrix(TokenStream& ts);

}  // namespace qmc::detail
