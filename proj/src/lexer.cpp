#include "lexer.hpp"

#include <cctype>
#include <cmath>
#include <cstdlib>

namespace qmc::detail {

namespace {

bool ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
bool ident_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '\'';
}
bool digit(char c) { return std::isdigit(static_cast<unsigned char>(c)) != 0; }

}  // namespace

std::vector<Token> tokenize(std::string_view text) {
  std::vector<Token> out;
  int line = 1, col = 1;
  std::size_t i = 0;
  auto advance = [&](std::size_t n) {
    for (std::size_t k = 0; k < n; ++k, ++i) {
      if (text[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
  };
  while (i < text.size()) {
    const char c = text[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      advance(1);
      continue;
    }
    if (c == '#') {
      while (i < text.size() && text[i] != '\n') advance(1);
      continue;
    }
    const SourcePos pos{line, col};
    if (ident_start(c)) {
      std::size_t j = i + 1;
      while (j < text.size() && ident_char(text[j])) ++j;
      out.push_back({TokenKind::ident, std::string(text.substr(i, j - i)), 0.0, false, pos});
      advance(j - i);
      continue;
    }
    if (digit(c) || (c == '.' && i + 1 < text.size() && digit(text[i + 1]))) {
      std::size_t j = i;
      while (j < text.size() && digit(text[j])) ++j;
      if (j < text.size() && text[j] == '.') {
        ++j;
        while (j < text.size() && digit(text[j])) ++j;
      }
      if (j < text.size() && (text[j] == 'e' || text[j] == 'E')) {
        std::size_t k = j + 1;
        if (k < text.size() && (text[k] == '+' || text[k] == '-')) ++k;
        if (k < text.size() && digit(text[k])) {
          j = k;
          while (j < text.size() && digit(text[j])) ++j;
        }
      }
      const std::string literal(text.substr(i, j - i));
      Token t{TokenKind::number, literal, std::strtod(literal.c_str(), nullptr), false, pos};
      if (j < text.size() && text[j] == 'i' && (j + 1 >= text.size() || !ident_char(text[j + 1]))) {
        t.imaginary = true;
        t.text += 'i';
        ++j;
      }
      if (!std::isfinite(t.value)) throw SyntaxError("number out of range", pos);
      out.push_back(std::move(t));
      advance(j - i);
      continue;
    }
    if (c == '"') {
      std::size_t j = i + 1;
      while (j < text.size() && text[j] != '"' && text[j] != '\n') ++j;
      if (j >= text.size() || text[j] != '"') throw SyntaxError("unterminated string", pos);
      out.push_back({TokenKind::string, std::string(text.substr(i + 1, j - i - 1)), 0.0, false, pos});
      advance(j + 1 - i);
      continue;
    }
    static constexpr std::string_view two[] = {"->", "&&", "||"};
    bool matched = false;
    for (auto p : two) {
      if (text.substr(i, 2) == p) {
        out.push_back({TokenKind::punct, std::string(p), 0.0, false, pos});
        advance(2);
        matched = true;
        break;
      }
    }
    if (matched) continue;
    static constexpr std::string_view single = ":[]{}(),;=+-~&|!*/";
    if (single.find(c) != std::string_view::npos) {
      out.push_back({TokenKind::punct, std::string(1, c), 0.0, false, pos});
      advance(1);
      continue;
    }
    throw SyntaxError(std::string("unexpected character '") + c + "'", pos);
  }
  out.push_back({TokenKind::end, "", 0.0, false, SourcePos{line, col}});
  return out;
}

std::string describe(const Token& t) {
  switch (t.kind) {
    case TokenKind::end:
      return "end of input";
    case TokenKind::string:
      return "string \"" + t.text + "\"";
    default:
      return "'" + t.text + "'";
  }
}

const Token& TokenStream::peek(std::size_t ahead) const {
  const std::size_t k = std::min(at_ + ahead, tokens_.size() - 1);
  return tokens_[k];
}

const Token& TokenStream::next() {
  const Token& t = tokens_[at_];
  if (at_ + 1 < tokens_.size()) ++at_;
  return t;
}

bool TokenStream::is_punct(std::string_view p, std::size_t ahead) const {
  const auto& t = peek(ahead);
  return t.kind == TokenKind::punct && t.text == p;
}

bool TokenStream::is_ident(std::string_view word, std::size_t ahead) const {
  const auto& t = peek(ahead);
  return t.kind == TokenKind::ident && t.text == word;
}

bool TokenStream::accept_punct(std::string_view p) {
  if (!is_punct(p)) return false;
  next();
  return true;
}

bool TokenStream::accept_ident(std::string_view word) {
  if (!is_ident(word)) return false;
  next();
  return true;
}

const Token& TokenStream::expect_punct(std::string_view p) {
  if (!is_punct(p)) fail("expected '" + std::string(p) + "', found " + describe(peek()));
  return next();
}

const Token& TokenStream::expect_ident(std::string_view word) {
  if (!is_ident(word)) fail("expected '" + std::string(word) + "', found " + describe(peek()));
  return next();
}

const Token& TokenStream::expect_any_ident(std::string_view what) {
  if (peek().kind != TokenKind::ident) {
    fail("expected " + std::string(what) + ", found " + describe(peek()));
  }
  return next();
}

double TokenStream::expect_real(std::string_view what) {
  const bool negative = accept_punct("-");
  if (!negative) accept_punct("+");
  const auto& t = peek();
  if (t.kind != TokenKind::number || t.imaginary) {
    fail("expected " + std::string(what) + ", found " + describe(t));
  }
  next();
  return negative ? -t.value : t.value;
}

int TokenStream::expect_int(std::string_view what) {
  const auto& t = peek();
  if (t.kind != TokenKind::number || t.imaginary || t.value != std::floor(t.value) ||
      t.text.find_first_of(".eE") != std::string::npos || t.value > 1e9) {
    fail("expected " + std::string(what) + ", found " + describe(t));
  }
  next();
  return static_cast<int>(t.value);
}

std::complex<double> parse_complex(TokenStream& ts) {
  std::complex<double> value = 0.0;
  bool first = true;
  for (;;) {
    double sign = 1.0;
    if (ts.accept_punct("-")) {
      sign = -1.0;
    } else if (!ts.accept_punct("+") && !first) {
      break;
    }
    const Token& t = ts.peek();
    if (t.kind == TokenKind::number) {
      ts.next();
      value += t.imaginary ? std::complex<double>(0.0, sign * t.value) : sign * t.value;
    } else if (t.kind == TokenKind::ident && t.text == "i") {
      ts.next();
      value += std::complex<double>(0.0, sign);
    } else {
      ts.fail("expected a complex number, found " + describe(t));
    }
    first = false;
  }
  return value;
}

Eigen::MatrixXcd parse_matrix(TokenStream& ts) {
  const Token& open = ts.expect_punct("[");
  std::vector<std::vector<std::complex<double>>> rows;
  do {
    ts.expect_punct("[");
    std::vector<std::complex<double>> row;
    do {
      row.push_back(parse_complex(ts));
    } while (ts.accept_punct(","));
    ts.expect_punct("]");
    if (!rows.empty() && row.size() != rows.front().size()) {
      ts.fail_at(open, "matrix rows have different lengths");
    }
    rows.push_back(std::move(row));
  } while (ts.accept_punct(","));
  ts.expect_punct("]");
  Eigen::MatrixXcd m(static_cast<Eigen::Index>(rows.size()),
                     static_cast<Eigen::Index>(rows.front().size()));
  for (std::size_t r = 0; r < rows.size(); ++r)
    for (std::size_t c = 0; c < rows[r].size(); ++c)
      m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = rows[r][c];
  return m;
}

void TokenStream::fail(const std::string& message) const { throw SyntaxError(message, peek().pos); }

void TokenStream::fail_at(const Token& t, const std::string& message) const {
  throw SyntaxError(message, t.pos);
}

}  // namespace qmc::detail
