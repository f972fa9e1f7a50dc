#include "qmc/assertion_format.hpp"

#include <set>
#include <sstream>

#include "lexer.hpp"
#include "qmc/channel.hpp"
#include "qmc/ket.hpp"
#include "qmc/model_format.hpp"

namespace qmc {

using detail::Token;
using detail::TokenKind;
using detail::TokenStream;

bool SubspaceSpec::operator==(const SubspaceSpec& other) const {
  return kind == other.kind && kets == other.kets && on == other.on &&
         matrix.rows() == other.matrix.rows() && matrix.cols() == other.matrix.cols() &&
         matrix == other.matrix;
}

AssertionFile parse_assertions(std::string_view text) {
  TokenStream ts(detail::tokenize(text));
  AssertionFile file;
  std::set<std::string> names;
  while (!ts.at_end()) {
    if (ts.is_ident("let")) {
      const SourcePos pos = ts.next().pos;
      const Token& name = ts.expect_any_ident("an atom name");
      if (name.text == "true" || name.text == "false") ts.fail_at(name, "'" + name.text + "' is reserved");
      if (!names.insert(name.text).second) ts.fail_at(name, "atom '" + name.text + "' bound twice");
      ts.expect_punct("=");
      SubspaceSpec spec;
      if (ts.accept_ident("span")) {
        ts.expect_punct("{");
        do {
          const Token& s = ts.peek();
          if (s.kind != TokenKind::string) ts.fail("expected a quoted state, found " + detail::describe(s));
          spec.kets.push_back(ts.next().text);
        } while (ts.accept_punct(","));
        ts.expect_punct("}");
      } else if (ts.accept_ident("range")) {
        spec.kind = SubspaceSpec::Kind::range;
        spec.matrix = detail::parse_matrix(ts);
      } else {
        ts.fail("expected 'span' or 'range', found " + detail::describe(ts.peek()));
      }
      if (ts.accept_ident("on")) {
        ts.expect_punct("[");
        do {
          spec.on.push_back(ts.expect_int("a qubit index"));
        } while (ts.accept_punct(","));
        ts.expect_punct("]");
      }
      file.bindings.push_back({name.text, std::move(spec), pos});
    } else if (ts.is_ident("assert")) {
      const SourcePos pos = ts.next().pos;
      const Token& label = ts.peek();
      if (label.kind != TokenKind::string) ts.fail("expected a quoted label, found " + detail::describe(label));
      ts.next();
      ts.expect_punct(":");
      file.assertions.push_back({label.text, detail::parse_state(ts), pos});
    } else {
      ts.fail("expected 'let' or 'assert', found " + detail::describe(ts.peek()));
    }
  }
  return file;
}

std::string serialize_assertions(const AssertionFile& file) {
  std::ostringstream os;
  for (const auto& b : file.bindings) {
    os << "let " << b.name << " = ";
    if (b.spec.kind == SubspaceSpec::Kind::span) {
      os << "span { ";
      for (std::size_t k = 0; k < b.spec.kets.size(); ++k) os << (k ? ", " : "") << '"' << b.spec.kets[k] << '"';
      os << " }";
    } else {
      os << "range " << format_matrix(b.spec.matrix);
    }
    if (!b.spec.on.empty()) {
      os << " on [";
      for (std::size_t k = 0; k < b.spec.on.size(); ++k) os << (k ? "," : "") << b.spec.on[k];
      os << "]";
    }
    os << "\n";
  }
  for (const auto& a : file.assertions) os << "assert \"" << a.label << "\" : " << print(*a.formula) << "\n";
  return os.str();
}

Subspace evaluate(const SubspaceSpec& spec, int n_qubits) {
  const int k = spec.on.empty() ? n_qubits : static_cast<int>(spec.on.size());
  const Eigen::Index local_dim = Eigen::Index{1} << k;
  Subspace local(local_dim);
  if (spec.kind == SubspaceSpec::Kind::span) {
    std::vector<CVector> vs;
    for (const auto& ket : spec.kets) vs.push_back(parse_ket(ket, k));
    local = Subspace::span(vs, local_dim);
  } else {
    if (spec.matrix.rows() != local_dim) {
      throw DimensionMismatch("range matrix has " + std::to_string(spec.matrix.rows()) + " rows, expected " +
                              std::to_string(local_dim));
    }
    local = Subspace::span(spec.matrix);
  }
  if (spec.on.empty()) return local;
  // P_V on the targets, identity elsewhere: the projector onto V (x) H_rest.
  return support(embed_matrix(projector(local), spec.on, n_qubits));
}

Bindings bind(const AssertionFile& file, int n_qubits) {
  Bindings out;
  out.dim = Eigen::Index{1} << n_qubits;
  for (const auto& b : file.bindings) {
    try {
      out.bind(b.name, evaluate(b.spec, n_qubits));
    } catch (const Error& e) {
      throw SyntaxError("atom '" + b.name + "': " + e.what(), b.pos);
    }
  }
  return out;
}

}  // namespace qmc
