#include "qmc/model_format.hpp"

#include <cstdio>
#include <cstdlib>
#include <map>
#include <set>
#include <sstream>

#include "lexer.hpp"
#include "qmc/errors.hpp"

namespace qmc {

using detail::Token;
using detail::TokenKind;
using detail::TokenStream;

namespace {

const std::set<std::string> kKeywords = {"qubits", "locations", "initial", "transitions",
                                         "gate",   "kraus",     "measure"};

struct ParsedTransition {
  QuantumTransitionSystem::TransitionSpec spec;
  SourcePos pos;     // start of the line
  SourcePos op_pos;  // start of the operation
};

std::vector<int> parse_targets(TokenStream& ts) {
  ts.expect_punct("[");
  std::vector<int> targets;
  do {
    targets.push_back(ts.expect_int("a qubit index"));
  } while (ts.accept_punct(","));
  ts.expect_punct("]");
  return targets;
}

OpSpec parse_op(TokenStream& ts) {
  if (ts.accept_ident("gate")) {
    GateOp g{ts.expect_any_ident("a gate name").text, {}};
    if (ts.accept_punct("(")) {
      do {
        g.params.push_back(ts.expect_real("a gate parameter"));
      } while (ts.accept_punct(","));
      ts.expect_punct(")");
    }
    return OpSpec{std::move(g), parse_targets(ts)};
  }
  if (ts.accept_ident("kraus")) {
    ts.expect_punct("{");
    KrausOp k;
    do {
      k.matrices.push_back(detail::parse_matrix(ts));
    } while (ts.accept_punct(";"));
    ts.expect_punct("}");
    return OpSpec{std::move(k), parse_targets(ts)};
  }
  if (ts.accept_ident("measure")) {
    MeasureOp m{ts.expect_any_ident("a measurement name").text, 0};
    auto targets = parse_targets(ts);
    ts.expect_punct("=");
    m.outcome = ts.expect_int("a measurement outcome");
    return OpSpec{std::move(m), std::move(targets)};
  }
  ts.fail("expected 'gate', 'kraus' or 'measure', found " + detail::describe(ts.peek()));
}

}  // namespace

QuantumTransitionSystem parse_model(std::string_view text) {
  TokenStream ts(detail::tokenize(text));
  ts.expect_ident("qubits");
  const Token& qubits_tok = ts.peek();
  const int n = ts.expect_int("the qubit count");
  if (n < 1 || n > 12) ts.fail_at(qubits_tok, "qubit count must lie in 1..12");

  ts.expect_ident("locations");
  std::vector<std::string> locations;
  std::map<std::string, SourcePos> declared;
  while (ts.peek().kind == TokenKind::ident && !kKeywords.count(ts.peek().text)) {
    const Token& t = ts.next();
    if (!declared.emplace(t.text, t.pos).second) {
      ts.fail_at(t, "location '" + t.text + "' declared twice");
    }
    locations.push_back(t.text);
  }
  if (locations.empty()) ts.fail("expected at least one location name");

  ts.expect_ident("initial");
  const Token& init = ts.expect_any_ident("the initial location");
  if (!declared.count(init.text)) ts.fail_at(init, "undeclared location '" + init.text + "'");

  ts.expect_ident("transitions");
  std::vector<ParsedTransition> parsed;
  while (!ts.at_end()) {
    const Token& from = ts.expect_any_ident("a location");
    if (!declared.count(from.text)) ts.fail_at(from, "undeclared location '" + from.text + "'");
    ts.expect_punct("->");
    const Token& to = ts.expect_any_ident("a location");
    if (!declared.count(to.text)) ts.fail_at(to, "undeclared location '" + to.text + "'");
    ts.expect_punct(":");
    const SourcePos op_pos = ts.peek().pos;
    const Token& op_name = ts.peek(1);
    OpSpec spec = parse_op(ts);
    // Resolve eagerly so that problems are reported where they occur.
    if (const auto* g = std::get_if<GateOp>(&spec.op);
        g && !is_known_gate(g->name) && !is_known_noise(g->name)) {
      throw SyntaxError("unknown gate '" + g->name + "'", op_name.pos);
    }
    if (const auto* m = std::get_if<MeasureOp>(&spec.op); m && !is_known_measurement(m->name)) {
      throw SyntaxError("unknown measurement '" + m->name + "'", op_name.pos);
    }
    try {
      resolve(spec, n);
    } catch (const Error& e) {
      throw SyntaxError(std::string("invalid operation: ") + e.what(), op_pos);
    }
    parsed.push_back({{from.text, to.text, std::move(spec)}, from.pos, op_pos});
  }

  // Normalisation, reported at the first outgoing transition of the location.
  std::map<std::string, int> index;
  for (std::size_t k = 0; k < locations.size(); ++k) index[locations[k]] = static_cast<int>(k);
  std::vector<Transition> resolved;
  std::map<int, SourcePos> first_out;
  for (const auto& p : parsed) {
    const int from = index[p.spec.from];
    first_out.emplace(from, p.pos);
    resolved.push_back({from, index[p.spec.to], p.spec.spec, resolve(p.spec.spec, n)});
  }
  const auto defects = QuantumTransitionSystem::normalisation_defects(
      n, static_cast<int>(locations.size()), resolved);
  if (!defects.empty()) {
    const auto& d = defects.front();
    throw NormalisationViolation(locations[static_cast<std::size_t>(d.location)], d.defect,
                                 first_out[d.location]);
  }

  std::vector<QuantumTransitionSystem::TransitionSpec> specs;
  for (auto& p : parsed) specs.push_back(std::move(p.spec));
  return QuantumTransitionSystem(n, std::move(locations), init.text, std::move(specs));
}

std::string format_real(double x) {
  char buf[40];
  for (int precision = 1; precision <= 17; ++precision) {
    std::snprintf(buf, sizeof buf, "%.*g", precision, x);
    if (std::strtod(buf, nullptr) == x) break;
  }
  return buf;
}

std::string format_complex(Complex z) {
  if (z.imag() == 0.0) return format_real(z.real());
  const std::string im = format_real(std::abs(z.imag())) + "i";
  if (z.real() == 0.0) return (z.imag() < 0 ? "-" : "") + im;
  return format_real(z.real()) + (z.imag() < 0 ? "-" : "+") + im;
}

std::string format_matrix(const CMatrix& m) {
  std::string out = "[";
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    out += r ? ", [" : "[";
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
      if (c) out += ", ";
      out += format_complex(m(r, c));
    }
    out += "]";
  }
  return out + "]";
}

CMatrix parse_matrix_literal(std::string_view text) {
  TokenStream ts(detail::tokenize(text));
  CMatrix m = detail::parse_matrix(ts);
  if (!ts.at_end()) ts.fail("unexpected " + detail::describe(ts.peek()) + " after matrix");
  return m;
}

std::string serialize_model(const QuantumTransitionSystem& sys) {
  std::ostringstream os;
  os << "qubits " << sys.n_qubits() << "\n";
  os << "locations";
  for (const auto& l : sys.locations()) os << " " << l;
  os << "\ninitial " << sys.locations()[static_cast<std::size_t>(sys.initial())] << "\n";
  os << "transitions\n";
  auto targets = [](const std::vector<int>& ts) {
    std::string s = "[";
    for (std::size_t k = 0; k < ts.size(); ++k) s += (k ? "," : "") + std::to_string(ts[k]);
    return s + "]";
  };
  for (const auto& t : sys.transitions()) {
    os << "  " << sys.locations()[static_cast<std::size_t>(t.from)] << " -> "
       << sys.locations()[static_cast<std::size_t>(t.to)] << " : ";
    if (const auto* g = std::get_if<GateOp>(&t.spec.op)) {
      os << "gate " << g->name;
      if (!g->params.empty()) {
        os << "(";
        for (std::size_t k = 0; k < g->params.size(); ++k) os << (k ? ", " : "") << format_real(g->params[k]);
        os << ")";
      }
    } else if (const auto* k = std::get_if<KrausOp>(&t.spec.op)) {
      os << "kraus { ";
      for (std::size_t j = 0; j < k->matrices.size(); ++j) {
        os << (j ? " ; " : "") << format_matrix(k->matrices[j]);
      }
      os << " }";
    } else {
      os << "measure " << std::get<MeasureOp>(t.spec.op).name;
    }
    os << targets(t.spec.targets);
    if (const auto* m = std::get_if<MeasureOp>(&t.spec.op)) os << " = " << m->outcome;
    os << "\n";
  }
  return os.str();
}

}  // namespace qmc
