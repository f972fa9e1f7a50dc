#include "qmc/ket.hpp"

#include <cctype>
#include <cmath>
#include <cstdlib>
#include <optional>
#include <string>

#include "qmc/errors.hpp"

namespace qmc {

namespace {

// Either a scalar or a vector; the arithmetic below enforces the types.
struct Value {
  std::optional<CVector> vec;
  Complex scalar = 1.0;
};

class KetParser {
 public:
  KetParser(std::string_view text, int n) : text_(text), n_(n) {}

  CVector run() {
    Value v = expr();
    skip();
    if (at_ < text_.size()) fail("unexpected '" + std::string(1, text_[at_]) + "'");
    if (!v.vec) fail("expression is a scalar, not a state", 0);
    return *v.vec;
  }

 private:
  std::string_view text_;
  int n_;
  std::size_t at_ = 0;

  [[noreturn]] void fail(const std::string& msg) const { fail(msg, at_); }
  [[noreturn]] void fail(const std::string& msg, std::size_t where) const {
    throw SyntaxError("in state '" + std::string(text_) + "': " + msg,
                      SourcePos{1, static_cast<int>(where) + 1});
  }

  void skip() {
    while (at_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[at_]))) ++at_;
  }
  bool peek(char c) {
    skip();
    return at_ < text_.size() && text_[at_] == c;
  }
  bool accept(char c) {
    if (!peek(c)) return false;
    ++at_;
    return true;
  }

  bool starts_factor() {
    skip();
    if (at_ >= text_.size()) return false;
    const char c = text_[at_];
    return std::isdigit(static_cast<unsigned char>(c)) || c == '.' || c == '(' || c == '|' ||
           c == 'i' || c == 's';
  }

  Value add(Value a, const Value& b, double sign, std::size_t where) {
    if (a.vec.has_value() != b.vec.has_value()) fail("cannot add a scalar and a state", where);
    if (a.vec) {
      *a.vec += sign * *b.vec;
    } else {
      a.scalar += sign * b.scalar;
    }
    return a;
  }

  Value expr() {
    Value v = term();
    for (;;) {
      const std::size_t where = (skip(), at_);
      if (accept('+')) {
        v = add(std::move(v), term(), 1.0, where);
      } else if (accept('-')) {
        v = add(std::move(v), term(), -1.0, where);
      } else {
        return v;
      }
    }
  }

  Value term() {
    Value v = factor();
    for (;;) {
      const std::size_t where = (skip(), at_);
      bool divide = false;
      if (accept('*')) {
      } else if (accept('/')) {
        divide = true;
      } else if (!starts_factor()) {
        return v;
      }
      Value w = factor();
      if (divide) {
        if (w.vec) fail("cannot divide by a state", where);
        if (std::abs(w.scalar) == 0.0) fail("division by zero", where);
        w.scalar = 1.0 / w.scalar;
      }
      if (v.vec && w.vec) fail("cannot multiply two states", where);
      Value r;
      r.scalar = v.scalar * w.scalar;
      if (v.vec) r.vec = *v.vec * w.scalar;
      if (w.vec) r.vec = *w.vec * v.scalar;
      v = std::move(r);
    }
  }

  double number() {
    const char* begin = text_.data() + at_;
    std::size_t len = 0;
    while (at_ + len < text_.size() &&
           (std::isdigit(static_cast<unsigned char>(text_[at_ + len])) || text_[at_ + len] == '.')) {
      ++len;
    }
    const std::string lit(begin, len);
    char* end = nullptr;
    const double x = std::strtod(lit.c_str(), &end);
    if (len == 0 || end != lit.c_str() + lit.size()) fail("malformed number");
    at_ += len;
    return x;
  }

  Value factor() {
    skip();
    if (at_ >= text_.size()) fail("unexpected end of state");
    const std::size_t start = at_;
    const char c = text_[at_];
    if (c == '-' || c == '+') {
      ++at_;
      Value v = factor();
      if (c == '-') {
        v.scalar = -v.scalar;
        if (v.vec) *v.vec = -*v.vec;
      }
      return v;
    }
    if (c == '(') {
      ++at_;
      Value v = expr();
      if (!accept(')')) fail("expected ')'");
      return v;
    }
    if (c == '|') return ket();
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
      Value v;
      v.scalar = number();
      return v;
    }
    if (text_.substr(at_, 4) == "sqrt") {
      at_ += 4;
      skip();
      double x;
      if (at_ < text_.size() && (std::isdigit(static_cast<unsigned char>(text_[at_])) || text_[at_] == '.')) {
        x = number();
      } else if (accept('(')) {
        Value v = expr();
        if (!accept(')')) fail("expected ')'");
        if (v.vec || v.scalar.imag() != 0.0 || v.scalar.real() < 0.0) {
          fail("sqrt needs a non-negative real argument", start);
        }
        x = v.scalar.real();
      } else {
        fail("expected a number or '(' after sqrt");
      }
      Value v;
      v.scalar = std::sqrt(x);
      return v;
    }
    if (c == 'i') {
      ++at_;
      Value v;
      v.scalar = Complex(0.0, 1.0);
      return v;
    }
    fail("unexpected '" + std::string(1, c) + "'");
  }

  Value ket() {
    const std::size_t start = at_;
    ++at_;  // '|'
    std::string label;
    while (at_ < text_.size() && text_[at_] != '>') label += text_[at_++];
    if (at_ >= text_.size()) fail("unterminated ket", start);
    ++at_;  // '>'
    if (static_cast<int>(label.size()) != n_) {
      fail("ket |" + label + "> has " + std::to_string(label.size()) + " qubits, expected " +
               std::to_string(n_),
           start);
    }
    // Product state; qubit q (1-based) has bit weight 2^(q-1).
    CVector v = CVector::Ones(1);
    const double h = 1.0 / std::sqrt(2.0);
    for (int q = n_ - 1; q >= 0; --q) {
      CVector single(2);
      switch (label[static_cast<std::size_t>(q)]) {
        case '0': single << 1.0, 0.0; break;
        case '1': single << 0.0, 1.0; break;
        case '+': single << h, h; break;
        case '-': single << h, -h; break;
        default:
          fail("ket characters must be 0, 1, + or -", start + 1 + static_cast<std::size_t>(q));
      }
      // Higher qubits are the more significant factor.
      CVector next(v.size() * 2);
      for (Eigen::Index hi = 0; hi < v.size(); ++hi)
        for (Eigen::Index lo = 0; lo < 2; ++lo) next(hi * 2 + lo) = v(hi) * single(lo);
      v = std::move(next);
    }
    Value out;
    out.vec = std::move(v);
    return out;
  }
};

}  // namespace

CVector parse_ket(std::string_view text, int n_qubits) {
  if (n_qubits < 1) throw BadParameter("a state needs at least one qubit");
  return KetParser(text, n_qubits).run();
}

CVector parse_state_vector(std::string_view text, int n_qubits) {
  CVector v = parse_ket(text, n_qubits);
  const double norm = v.norm();
  if (!(norm > tol().norm)) {
    throw InvalidDensityMatrix("state '" + std::string(text) + "' is the zero vector");
  }
  return v / norm;
}

}  // namespace qmc
